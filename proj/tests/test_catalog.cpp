#include <catch_amalgamated.hpp>

#include <random>

#include "sl2/sl2.hpp"

using Catch::Approx;
using namespace sl2;
using catalog::Kind;
using catalog::SystemSpec;

namespace {

SystemSpec make(Kind k, std::size_t n, std::vector<double> deltas = {}) {
    SystemSpec s{k, n, 1.0, 0.6, 1.3, std::move(deltas)};
    if (catalog::is_free(k)) {
        s.omega = 0.0;
        s.deltas.clear();
    }
    if (k == Kind::beltrami_osc || k == Kind::free_beltrami) s.kappa = -0.6;
    return s;
}

std::vector<PhaseState> samples_for(const SystemSpec& s, std::uint64_t seed, std::size_t count) {
    return verify::catalog_sampler(s, seed).draw(count);
}

}  // namespace

TEST_CASE("spec validation") {
    CHECK_THROWS_AS((SystemSpec{Kind::darboux3_a, 2, 1.0, 0.0, 0.0, {}}.validate()), ContractViolation);
    CHECK_THROWS_AS((SystemSpec{Kind::darboux3_a, 2, 1.0, 0.0, -1.0, {}}.validate()), ContractViolation);
    CHECK_THROWS_AS((SystemSpec{Kind::free_poincare, 2, 1.0, 1.0, 1.0, {}}.validate()), ContractViolation);
    CHECK_THROWS_AS((SystemSpec{Kind::free_poincare, 2, 0.0, 1.0, 1.0, {0.1}}.validate()), ContractViolation);
    CHECK_THROWS_AS((SystemSpec{Kind::euclidean_osc, 0, 1.0, 0.0, 1.0, {}}.validate()), ContractViolation);
    CHECK_THROWS_AS((SystemSpec{Kind::euclidean_osc, 17, 1.0, 0.0, 1.0, {}}.validate()), ContractViolation);
    CHECK_THROWS_AS((SystemSpec{Kind::euclidean_osc, 2, -1.0, 0.0, 1.0, {}}.validate()), ContractViolation);
    CHECK_NOTHROW((SystemSpec{Kind::free_darboux, 16, 0.0, 0.0, 2.0, {}}.validate()));
}

TEST_CASE("Hamiltonian values") {
    CHECK(catalog::hamiltonian_value({Kind::euclidean_osc, 2, 1.0, 0.0, 1.0, {}}, PhaseState({1, 0}, {0, 1})) == 1.0);
    for (double k : {2.0, -3.0})
        CHECK(catalog::hamiltonian_value({Kind::poincare_higgs, 2, 1.0, k, 1.0, {0.3}}, PhaseState({0, 0}, {0, 0})) == 0.0);
    for (Kind k : {Kind::darboux3_a, Kind::darboux3_b}) {
        const PhaseState s({0, 0, 0}, {0.3, -0.4, 1.2});
        CHECK(catalog::hamiltonian_value({k, 3, 1.0, 0.0, 1.0, {}}, s) == Approx(0.09 + 0.16 + 1.44));
    }
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> q(3), p(3);
        for (auto& v : q) v = u(rng);
        for (auto& v : p) v = u(rng);
        const PhaseState s(q, p);
        CHECK(catalog::hamiltonian_value({Kind::beltrami_osc, 3, 1.4, 0.0, 1.0, {0.3, 0.02}}, s) ==
              catalog::hamiltonian_value({Kind::euclidean_osc, 3, 1.4, 0.0, 1.0, {0.3, 0.02}}, s));
    }
}

TEST_CASE("Hamiltonians outside their chart raise domain errors") {
    const SystemSpec b{Kind::beltrami_osc, 2, 1.0, -1.0, 1.0, {}};
    CHECK_THROWS_AS(catalog::hamiltonian_value(b, PhaseState({1.0, 0.5}, {0, 0})), DomainError);
    const SystemSpec p{Kind::poincare_higgs, 1, 1.0, 1.0, 1.0, {}};
    try {
        (void)catalog::hamiltonian_value(p, PhaseState({1.0}, {0.0}));
        FAIL("no error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("kappa") != std::string::npos);
    }
    CHECK_FALSE(catalog::in_domain(p, PhaseState({1.0}, {0.0}), 1e-3));
    CHECK(catalog::in_domain(p, PhaseState({0.5}, {0.0}), 1e-3));
}

TEST_CASE("extra integral values") {
    const SystemSpec e{Kind::euclidean_osc, 2, 1.0, 0.0, 1.0, {}};
    const PhaseState s({1, 0}, {0, 1});
    CHECK(catalog::extra_integral(e, 1, s, 0.0) == 1.0);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const SystemSpec b{Kind::beltrami_osc, 3, 1.2, 0.0, 1.0, {}};
    const SystemSpec e3{Kind::euclidean_osc, 3, 1.2, 0.0, 1.0, {}};
    for (int t = 0; t < 20; ++t) {
        std::vector<double> q(3), p(3);
        for (auto& v : q) v = u(rng);
        for (auto& v : p) v = u(rng);
        const PhaseState st(q, p);
        for (std::size_t i = 1; i <= 3; ++i) CHECK(catalog::extra_integral(b, i, st, 0.0) == catalog::extra_integral(e3, i, st, 0.0));
    }

    const SystemSpec d{Kind::darboux3_a, 3, 1.0, 0.0, 1.0, {}};
    const PhaseState sd({0, 0, 0}, {1, 0, 0});
    const double h = catalog::hamiltonian_value(d, sd);
    CHECK(h == 1.0);
    CHECK(catalog::extra_integral(d, 1, sd, h) == 1.0);

    CHECK_THROWS_AS(catalog::extra_integral({Kind::euclidean_osc, 2, 1.0, 0.0, 1.0, {0.1}}, 1, s, 0.0), Unsupported);
    CHECK_THROWS_AS(catalog::extra_integral(e, 3, s, 0.0), ContractViolation);
}

TEST_CASE("integral family shape") {
    for (Kind k : catalog::kAllKinds) {
        const auto fam = catalog::integral_family(make(k, 4, {0.1}));
        CHECK(fam.universal.size() == 5);
        CHECK(fam.extra.has_value() == catalog::is_free(k));
    }
    const auto e2 = catalog::integral_family(make(Kind::euclidean_osc, 2));
    REQUIRE(e2.universal.size() == 1);
    CHECK(e2.universal[0].name() == "C2");
    REQUIRE(e2.extra.has_value());
    CHECK(e2.extra->size() == 2);
    const auto d3 = catalog::integral_family(make(Kind::darboux3_a, 3));
    CHECK(d3.universal.size() == 3);
    CHECK(d3.extra->size() == 3);
    CHECK(catalog::integral_family(make(Kind::euclidean_osc, 1)).universal.empty());
}

TEST_CASE("universal integrals commute with every catalog Hamiltonian") {
    for (Kind k : catalog::kAllKinds)
        for (std::size_t n : {2u, 3u, 4u, 8u})
            for (bool perturbed : {false, true}) {
                const auto spec = make(k, n, perturbed ? std::vector<double>{0.1, 0.01} : std::vector<double>{});
                const auto h = catalog::hamiltonian_observable(spec);
                const auto samples = samples_for(spec, 7, 50);
                for (const auto& f : catalog::universal_integrals(n)) {
                    INFO(catalog::name(k) << " n=" << n << " " << f.name());
                    CHECK(verify::residual_grid(h, f, samples).max_rel <= 1e-10);
                }
            }
}

TEST_CASE("extra integrals commute with the unperturbed Hamiltonians") {
    for (Kind k : catalog::kAllKinds)
        for (std::size_t n : {2u, 3u, 4u}) {
            const auto spec = make(k, n);
            const auto h = catalog::hamiltonian_observable(spec);
            const auto samples = samples_for(spec, 8, 50);
            std::vector<Observable> extra;
            for (std::size_t i = 1; i <= n; ++i) extra.push_back(catalog::extra_integral_observable(spec, i));
            for (const auto& f : extra) {
                INFO(catalog::name(k) << " n=" << n << " " << f.name());
                CHECK(verify::residual_grid(h, f, samples).max_rel <= 1e-10);
            }
            if (catalog::family_of(k) == catalog::Family::darboux) {
                INFO(catalog::name(k) << " involution of the I_i");
                CHECK(verify::involution_matrix(extra, samples).max_entry() <= 1e-10);
            }
        }
}

TEST_CASE("perturbations break the unperturbed extra integrals") {
    for (Kind k : catalog::kAllKinds) {
        if (catalog::is_free(k)) continue;
        const auto spec = make(k, 3, {0.1});
        const auto h = catalog::hamiltonian_observable(spec);
        const auto samples = samples_for(spec, 9, 50);
        INFO(catalog::name(k));
        CHECK(verify::residual_grid(h, catalog::candidate_integral_observable(spec, 1), samples).max_rel > 1e-4);
        CHECK_THROWS_AS(catalog::extra_integral_observable(spec, 1), Unsupported);
    }
}

TEST_CASE("flat limits of the curved oscillators") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (Kind k : {Kind::poincare_higgs, Kind::beltrami_osc}) {
        const SystemSpec curved{k, 3, 1.1, 1e-10, 1.0, {0.3}};
        const SystemSpec flat{Kind::euclidean_osc, 3, 1.1, 0.0, 1.0, {0.3}};
        for (int t = 0; t < 100; ++t) {
            std::vector<double> q(3), p(3);
            for (auto& v : q) v = u(rng) / std::sqrt(3.0);
            for (auto& v : p) v = u(rng) / std::sqrt(3.0);
            const PhaseState s(q, p);
            const double hf = catalog::hamiltonian_value(flat, s);
            CHECK(std::abs(catalog::hamiltonian_value(curved, s) - hf) <= 1e-8 * (std::abs(hf) + 1));
        }
    }
}

TEST_CASE("rank of the universal set and of the extended set") {
    for (Kind k : catalog::kAllKinds)
        for (std::size_t n : {2u, 3u, 4u}) {
            const auto spec = make(k, n);
            const auto samples = samples_for(spec, 11, 10);
            std::vector<Observable> set{catalog::hamiltonian_observable(spec)};
            for (auto& f : catalog::universal_integrals(n)) set.push_back(f);
            INFO(catalog::name(k) << " n=" << n);
            CHECK(verify::independence_rank(set, samples).rank == static_cast<int>(2 * n - 2));
            set.push_back(catalog::extra_integral_observable(spec, 1));
            CHECK(verify::independence_rank(set, samples).rank == static_cast<int>(2 * n - 1));
        }
}

TEST_CASE("tags") {
    auto has = [](const std::vector<std::string>& v, const std::string& t) {
        return std::find(v.begin(), v.end(), t) != v.end();
    };
    CHECK(has(catalog::tags({Kind::euclidean_osc, 2, 1.0, 0.0, 1.0, {0.1}}), "radial Garnier"));
    CHECK(has(catalog::tags({Kind::euclidean_osc, 2, 1.0, 0.0, 1.0, {0.1}}), "QMS"));
    CHECK_FALSE(has(catalog::tags({Kind::euclidean_osc, 2, 1.0, 0.0, 1.0, {0.1, 0.2}}), "radial Garnier"));
    CHECK(has(catalog::tags({Kind::beltrami_osc, 2, 1.0, -1.0, 1.0, {0.1}}), "curved Garnier"));
    CHECK(has(catalog::tags({Kind::darboux3_a, 2, 1.0, 0.0, 1.0, {}}), "MS"));
    CHECK(catalog::parse_kind("darboux3-A") == Kind::darboux3_a);
    CHECK_FALSE(catalog::parse_kind("darboux3-a").has_value());
    CHECK(catalog::info(Kind::darboux3_a).constraints == "a > 0");
}

TEST_CASE("key-value serialization round trip") {
    const SystemSpec s{Kind::beltrami_osc, 4, 1.0, -1.0, 1.0, {0.2, 0.01}};
    const auto back = catalog::from_kv(catalog::to_kv(s));
    CHECK(back.kind == s.kind);
    CHECK(back.n == 4);
    CHECK(back.kappa == -1.0);
    CHECK(back.deltas == s.deltas);
    const auto with_extras = catalog::from_kv("# run\nkind = darboux3-B\nseed = 7\nn = 3\na = 2\n");
    CHECK(with_extras.kind == Kind::darboux3_b);
    CHECK(with_extras.a == 2.0);
    CHECK_THROWS(catalog::from_kv("kind = nonsense\n"));
}
