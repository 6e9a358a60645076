#include <catch_amalgamated.hpp>

#include "sl2/sl2.hpp"

using namespace sl2;
using catalog::Kind;
using catalog::SystemSpec;

namespace {

verify::VerifyOptions quick(std::uint64_t seed = 3) {
    verify::VerifyOptions o;
    o.seed = seed;
    o.samples = 60;
    o.rank_samples = 10;
    return o;
}

}  // namespace

TEST_CASE("sampler is deterministic and respects the domain") {
    const SystemSpec spec{Kind::poincare_higgs, 3, 1.0, 2.0, 1.0, {}};
    const auto a = verify::catalog_sampler(spec, 5).draw(50);
    const auto b = verify::catalog_sampler(spec, 5).draw(50);
    const auto c = verify::catalog_sampler(spec, 6).draw(50);
    CHECK(a.front().flat() == b.front().flat());
    CHECK(a.back().flat() == b.back().flat());
    CHECK(a.front().flat() != c.front().flat());
    for (const auto& s : a) {
        CHECK(catalog::in_domain(spec, s, 1e-3));
        for (double x : s.flat()) CHECK(std::abs(x) <= 0.9);
    }
}

TEST_CASE("sampler gives up with the constraint in the message") {
    verify::Sampler s;
    s.n = 2;
    s.accept = [](const PhaseState&) { return false; };
    s.constraint = "never";
    try {
        (void)s.draw(3);
        FAIL("no error");
    } catch (const SamplingFailure& e) {
        CHECK(std::string(e.what()).find("never") != std::string::npos);
        CHECK(std::string(e.what()).find("300") != std::string::npos);
    }
}

TEST_CASE("residual grid examples") {
    const SystemSpec osc{Kind::euclidean_osc, 3, 1.0, 0.0, 1.0, {}};
    const auto sampler = verify::catalog_sampler(osc, 1);
    const auto h = catalog::hamiltonian_observable(osc);
    CHECK(verify::residual_grid(h, observables::casimir(2, Chain::left), sampler, 100).max_rel <= 1e-12);
    const auto c2 = observables::casimir(2, Chain::left);
    const auto self = verify::residual_grid(c2, c2, sampler, 100);
    CHECK(self.max_abs == 0.0);

    // {H, q1} = -p1
    const auto samples = sampler.draw(100);
    const auto ctl = verify::residual_grid(h, observables::coordinate(0, 3), samples);
    double max_p1 = 0;
    for (const auto& s : samples) max_p1 = std::max(max_p1, std::abs(s.p()[0]));
    CHECK(ctl.max_abs == Catch::Approx(max_p1));
}

TEST_CASE("parallel evaluation gives identical statistics") {
    const SystemSpec spec{Kind::darboux3_b, 4, 1.0, 0.0, 1.0, {0.1}};
    const auto samples = verify::catalog_sampler(spec, 2).draw(97);
    const auto h = catalog::hamiltonian_observable(spec);
    const auto f = catalog::candidate_integral_observable(spec, 2);
    const auto one = verify::residual_grid(h, f, samples, 1);
    const auto four = verify::residual_grid(h, f, samples, 4);
    CHECK(one.max_rel == four.max_rel);
    CHECK(one.mean_rel == four.mean_rel);
    CHECK(one.mean_abs == four.mean_abs);
}

TEST_CASE("involution matrices") {
    const SystemSpec spec{Kind::beltrami_osc, 4, 1.0, -0.7, 1.0, {0.2}};
    const auto samples = verify::catalog_sampler(spec, 3).draw(100);
    for (Chain ch : {Chain::left, Chain::right}) {
        std::vector<Observable> set{catalog::hamiltonian_observable(spec)};
        for (auto& f : catalog::chain_integrals(4, ch)) set.push_back(f);
        const auto m = verify::involution_matrix(set, samples, 2);
        CHECK(m.max_entry() <= 1e-10);
        CHECK(m.names.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(m.max_rel[i][i] == 0.0);
            for (std::size_t j = 0; j < 4; ++j) CHECK(m.max_rel[i][j] == m.max_rel[j][i]);
        }
    }
    const std::vector<Observable> mixed{observables::casimir(2, Chain::left), observables::casimir(2, Chain::right)};
    const auto s3 = verify::catalog_sampler({Kind::euclidean_osc, 3, 1.0, 0.0, 1.0, {}}, 3).draw(50);
    CHECK(verify::involution_matrix(mixed, s3).max_entry() > 1e-4);
}

TEST_CASE("independence rank examples") {
    const SystemSpec osc{Kind::euclidean_osc, 3, 1.0, 0.0, 1.0, {}};
    const auto samples = verify::catalog_sampler(osc, 4).draw(10);
    std::vector<Observable> set{catalog::hamiltonian_observable(osc), observables::casimir(2, Chain::left),
                                observables::casimir(3, Chain::left), observables::casimir(2, Chain::right)};
    const auto r4 = verify::independence_rank(set, samples);
    CHECK(r4.rank == 4);
    CHECK(r4.singular_values.size() == 4);
    set.push_back(catalog::extra_integral_observable(osc, 1));
    CHECK(verify::independence_rank(set, samples).rank == 5);
    set.push_back(set.front());
    CHECK(verify::independence_rank(set, samples).rank == 5);
    // all N extra integrals plus the chains still cannot exceed 2N - 1
    set.pop_back();
    set.push_back(catalog::extra_integral_observable(osc, 2));
    CHECK(verify::independence_rank(set, samples).rank == 5);

    const std::vector<PhaseState> origin{PhaseState({0, 0, 0}, {0, 0, 0})};
    const std::vector<Observable> c2{observables::casimir(2, Chain::left)};
    CHECK_THROWS_AS(verify::independence_rank(c2, origin), SamplingFailure);
}

TEST_CASE("flat limit converges linearly") {
    const std::vector<double> kappas{1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
    const auto samples = verify::catalog_sampler({Kind::euclidean_osc, 3, 1.0, 0.0, 1.0, {}}, 5).draw(50);
    for (Kind k : {Kind::beltrami_osc, Kind::poincare_higgs}) {
        const auto rows = verify::flat_limit(k, 1.0, {0.3}, 3, kappas, samples);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i].max_gap < rows[i - 1].max_gap);
            CHECK(rows[i - 1].max_gap / rows[i].max_gap == Catch::Approx(100.0).epsilon(0.05));
        }
        CHECK(rows.back().max_gap <= 1e-8);
    }
}

TEST_CASE("full verdicts") {
    for (Kind k : {Kind::euclidean_osc, Kind::poincare_higgs, Kind::beltrami_osc, Kind::darboux3_a}) {
        SystemSpec spec{k, 3, 1.0, k == Kind::beltrami_osc ? -0.8 : 0.6, 1.0, {}};
        INFO(catalog::name(k));
        auto ms = verify::verify_system(spec, quick());
        CHECK(ms.verdict_qms == verify::Verdict::pass);
        CHECK(ms.verdict_ms == verify::Verdict::pass);
        CHECK(ms.negative_control_detected);

        spec.deltas = {0.1};
        auto qms = verify::verify_system(spec, quick());
        CHECK(qms.verdict_qms == verify::Verdict::pass);
        CHECK(qms.verdict_ms == verify::Verdict::not_applicable);
        CHECK(qms.rank_qms.rank == 4);

        auto opt = quick();
        opt.request_ms = true;
        auto claimed = verify::verify_system(spec, opt);
        CHECK(claimed.verdict_qms == verify::Verdict::pass);
        CHECK(claimed.verdict_ms == verify::Verdict::fail);
        REQUIRE_FALSE(claimed.notes.empty());
        CHECK(claimed.notes.back().find("candidate") != std::string::npos);
    }
}

TEST_CASE("N = 1 is reported as not applicable") {
    const auto rep = verify::verify_system({Kind::euclidean_osc, 1, 1.0, 0.0, 1.0, {}}, quick());
    CHECK(rep.verdict_qms == verify::Verdict::not_applicable);
    CHECK(rep.universal_residuals.empty());
    CHECK_FALSE(rep.notes.empty());
}

TEST_CASE("DSL Hamiltonians") {
    const expr::ParamTable params{{"omega", 1.0}, {"a", 1.0}};
    const auto e = expr::Expression::parse("(Jp + omega^2*Jm)/(a + Jm)", params);
    auto opt = quick();
    opt.request_ms = true;
    const auto rep = verify::verify_expression(e, params, 3, catalog::Family::darboux, opt);
    CHECK(rep.verdict_qms == verify::Verdict::pass);
    CHECK(rep.verdict_ms == verify::Verdict::pass);
    const auto wrong = verify::verify_expression(e, params, 3, catalog::Family::euclidean, opt);
    CHECK(wrong.verdict_ms == verify::Verdict::fail);
    const auto none = verify::verify_expression(e, params, 3, std::nullopt, quick());
    CHECK(none.verdict_ms == verify::Verdict::not_applicable);
}

TEST_CASE("JSON report has the fixed fields and is reproducible") {
    const SystemSpec spec{Kind::darboux3_b, 3, 1.0, 0.0, 1.5, {0.1, 0.01}};
    auto opt = quick(17);
    opt.workers = 3;
    const auto a = verify::to_json(verify::verify_system(spec, opt)).dump(2);
    opt.workers = 1;
    const auto b = verify::to_json(verify::verify_system(spec, opt)).dump(2);
    CHECK(a == b);
    const auto j = nlohmann::json::parse(a);
    for (const char* key : {"system", "n", "seed", "tolerances", "universal_residuals", "extra_residuals",
                            "involution_left", "involution_right", "rank", "target_rank_qms", "target_rank_ms",
                            "verdict_qms", "verdict_ms"})
        CHECK(j.contains(key));
    CHECK(j["target_rank_qms"] == 4);
    CHECK(j["verdict_qms"] == "pass");
    CHECK(j["verdict_ms"] == "not-applicable");
}
