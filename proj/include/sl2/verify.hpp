#pragma once

/**
 * Numerical certification of (quasi-)maximal superintegrability.
 *
 * A system with N degrees of freedom is
 *   - quasi-maximally superintegrable (QMS) when 2N-3 integrals besides H
 *     Poisson-commute with H and H together with them is functionally
 *     independent (Jacobian rank 2N-2);
 *   - maximally superintegrable (MS) when one more integral raises the rank
 *     to 2N-1.
 *
 * Residuals are measured relative to |grad H| |grad F| + 1. Independence is
 * certified at generic points: the maximum rank over the sample counts, and
 * failing to reach the target is reported as "not certified" rather than as
 * dependence.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "sl2/catalog.hpp"
#include "sl2/errors.hpp"
#include "sl2/expr.hpp"
#include "sl2/geometry.hpp"
#include "sl2/phase_space.hpp"

namespace sl2::verify {

// ---------------------------------------------------------------------------
// Sampling

/// splitmix64; fixed algorithm so reports are reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53); }

private:
    std::uint64_t state_;
};

/// Uniform box sampler with rejection against a domain predicate.
struct Sampler {
    std::size_t n = 2;
    std::uint64_t seed = 1;
    double lo = -0.9;
    double hi = 0.9;
    std::function<bool(const PhaseState&)> accept;
    std::string constraint = "none";

    /// `count` accepted states; gives up after 100x oversampling.
    std::vector<PhaseState> draw(std::size_t count) const {
        Rng rng(seed);
        std::vector<PhaseState> out;
        out.reserve(count);
        const std::size_t budget = 100 * std::max<std::size_t>(count, 1);
        std::vector<double> q(n), p(n);
        for (std::size_t tries = 0; out.size() < count; ++tries) {
            if (tries >= budget)
                throw SamplingFailure("could not find " + std::to_string(count) + " in-domain states after " +
                                      std::to_string(budget) + " draws (constraint: " + constraint + ")");
            for (auto& v : q) v = rng.uniform(lo, hi);
            for (auto& v : p) v = rng.uniform(lo, hi);
            PhaseState s(q, p);
            if (!accept || accept(s)) out.push_back(std::move(s));
        }
        return out;
    }
};

inline constexpr double kDefaultGuard = 1e-3;

inline Sampler catalog_sampler(const catalog::SystemSpec& spec, std::uint64_t seed, double guard = kDefaultGuard) {
    spec.validate();
    Sampler s;
    s.n = spec.n;
    s.seed = seed;
    s.accept = [spec, guard](const PhaseState& st) { return catalog::in_domain(spec, st, guard); };
    switch (catalog::family_of(spec.kind)) {
        case catalog::Family::poincare:
            s.constraint = spec.kind == catalog::Kind::poincare_higgs
                               ? "1 + kappa q^2 > guard and (kappa <= 0 or 1 - kappa q^2 > guard)"
                               : "1 + kappa q^2 > guard";
            break;
        case catalog::Family::beltrami: s.constraint = "1 + kappa q^2 > guard"; break;
        default: s.constraint = "none"; break;
    }
    return s;
}

/// Sampler for a DSL Hamiltonian: accept where every denominator stays at least `guard` away from zero.
inline Sampler expression_sampler(const expr::Expression& e, const expr::ParamTable& params, std::size_t n,
                                  std::uint64_t seed, double guard = kDefaultGuard) {
    Sampler s;
    s.n = n;
    s.seed = seed;
    s.accept = [e, params, guard](const PhaseState& st) {
        try {
            const double v = expr::evaluate<double>(e, st.q(), st.p(), params, guard);
            return std::isfinite(v);
        } catch (const DomainError&) {
            return false;
        }
    };
    s.constraint = "all denominators of the expression at least " + format_shortest(guard) + " from zero";
    return s;
}

// ---------------------------------------------------------------------------
// Parallel evaluation over a fixed sample list

namespace detail {

/// Runs fn(i) for i in [0, count) on `workers` threads. Results must be written
/// to per-index slots so the reduction afterwards is order independent.
inline void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
    workers = std::max(1u, workers);
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace detail

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------------------
// Residuals

struct ResidualStats {
    std::string name;
    double max_abs = 0.0;
    double mean_abs = 0.0;
    double max_rel = 0.0;
    double mean_rel = 0.0;
    std::size_t samples = 0;
};

inline ResidualStats residual_grid(const Observable& h, const Observable& f, std::span<const PhaseState> samples,
                                   unsigned workers = 1) {
    expects(!samples.empty(), "residual_grid needs at least one sample");
    std::vector<BracketValue> vals(samples.size());
    detail::parallel_for(samples.size(), workers,
                         [&](std::size_t i) { vals[i] = poisson_bracket_scaled(h, f, samples[i]); });
    ResidualStats st;
    st.name = f.name();
    st.samples = samples.size();
    for (const auto& v : vals) {
        const double a = std::abs(v.value);
        st.max_abs = std::max(st.max_abs, a);
        st.max_rel = std::max(st.max_rel, v.relative);
        st.mean_abs += a;
        st.mean_rel += v.relative;
    }
    st.mean_abs /= static_cast<double>(samples.size());
    st.mean_rel /= static_cast<double>(samples.size());
    return st;
}

inline ResidualStats residual_grid(const Observable& h, const Observable& f, const Sampler& sampler,
                                   std::size_t count, unsigned workers = 1) {
    const auto samples = sampler.draw(count);
    return residual_grid(h, f, samples, workers);
}

struct InvolutionMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<double>> max_rel;  ///< symmetric, zero diagonal
    std::vector<std::vector<double>> max_abs;

    double max_entry() const {
        double m = 0.0;
        for (const auto& row : max_rel)
            for (double v : row) m = std::max(m, v);
        return m;
    }
};

inline InvolutionMatrix involution_matrix(std::span<const Observable> set, std::span<const PhaseState> samples,
                                          unsigned workers = 1) {
    expects(!set.empty(), "involution_matrix needs a nonempty set");
    expects(!samples.empty(), "involution_matrix needs at least one sample");
    const std::size_t k = set.size();
    InvolutionMatrix m;
    for (const auto& f : set) m.names.push_back(f.name());
    m.max_rel.assign(k, std::vector<double>(k, 0.0));
    m.max_abs.assign(k, std::vector<double>(k, 0.0));

    // per-sample upper triangles, reduced afterwards
    std::vector<std::vector<BracketValue>> per(samples.size());
    detail::parallel_for(samples.size(), workers, [&](std::size_t s) {
        std::vector<Jet> jets;
        jets.reserve(k);
        for (const auto& f : set) jets.push_back(f.jet(samples[s]));
        auto& out = per[s];
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) out.push_back(bracket_of(jets[i], jets[j]));
    });
    for (const auto& out : per) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j, ++idx) {
                const auto& b = out[idx];
                m.max_rel[i][j] = m.max_rel[j][i] = std::max(m.max_rel[i][j], b.relative);
                m.max_abs[i][j] = m.max_abs[j][i] = std::max(m.max_abs[i][j], std::abs(b.value));
            }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Functional independence

struct RankResult {
    int rank = 0;
    std::vector<double> singular_values;  ///< at the sample attaining the maximum rank
    std::size_t samples_used = 0;         ///< non-degenerate samples
};

/// Numerical rank of the Jacobian of `set` (rows normalised to unit length),
/// maximised over the samples.
inline RankResult independence_rank(std::span<const Observable> set, std::span<const PhaseState> samples,
                                    double svd_cutoff = 1e-8) {
    expects(!set.empty(), "independence_rank needs a nonempty set");
    expects(!samples.empty(), "independence_rank needs at least one sample");
    const std::size_t n2 = 2 * samples.front().dim();
    expects(set.size() <= n2, "independence_rank: set larger than the phase-space dimension");
    RankResult best;
    best.rank = -1;
    for (const auto& s : samples) {
        Eigen::MatrixXd jac(static_cast<Eigen::Index>(set.size()), static_cast<Eigen::Index>(n2));
        for (std::size_t r = 0; r < set.size(); ++r) {
            const Jet j = set[r].jet(s);
            for (std::size_t c = 0; c < n2; ++c) jac(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j.d(c);
            const double nr = jac.row(static_cast<Eigen::Index>(r)).norm();
            if (nr > 0.0) jac.row(static_cast<Eigen::Index>(r)) /= nr;
        }
        if (jac.norm() == 0.0) continue;
        ++best.samples_used;
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
        const Eigen::VectorXd sv = svd.singularValues();
        const double smax = sv.size() ? sv[0] : 0.0;
        int rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv[i] > svd_cutoff * smax) ++rank;
        if (rank > best.rank) {
            best.rank = rank;
            best.singular_values.assign(sv.data(), sv.data() + sv.size());
        }
    }
    if (best.samples_used == 0) throw SamplingFailure("independence_rank: every sample had an all-zero Jacobian");
    return best;
}

// ---------------------------------------------------------------------------
// Chart equivalence and flat limits

/// Largest |H_poincare(q, p) - H_beltrami(Q, P)| / (|H_poincare| + 1) over the
/// sample, where (Q, P) is the cotangent lift of the Poincare-to-Beltrami map.
///
/// `kappa` is the sectional curvature, used as the Beltrami parameter; the
/// Poincare Hamiltonian carries kappa/4 (see geometry::poincare_hamiltonian_to_beltrami).
/// With lift_momenta = false the momenta are passed through unchanged, which
/// serves as a negative control.
inline double chart_equivalence(double kappa, double omega, const std::vector<double>& deltas, std::size_t n,
                                std::uint64_t seed, std::size_t count, bool lift_momenta = true) {
    expects(kappa != 0.0, "chart_equivalence needs nonzero curvature");
    catalog::SystemSpec poincare{catalog::Kind::poincare_higgs, n, omega, kappa / 4.0, 1.0, deltas};
    catalog::SystemSpec beltrami{catalog::Kind::beltrami_osc, n, omega, kappa, 1.0, deltas};
    poincare.validate();
    beltrami.validate();

    Sampler sampler;
    sampler.n = n;
    sampler.seed = seed;
    sampler.constraint = "inside both charts with guard";
    sampler.accept = [&](const PhaseState& s) {
        if (!catalog::in_domain(poincare, s, kDefaultGuard)) return false;
        double q2 = 0.0;
        for (double v : s.q()) q2 += v * v;
        // the Beltrami image needs x0 > 0, i.e. (kappa/4) q^2 < 1
        return 1.0 - 0.25 * kappa * q2 > kDefaultGuard;
    };
    const auto samples = sampler.draw(count);

    double worst = 0.0;
    for (const auto& s : samples) {
        const double hp = catalog::hamiltonian_value(poincare, s);
        auto map = [kappa](std::span<const Jet> q) { return geometry::poincare_hamiltonian_to_beltrami<Jet>(q, kappa); };
        geometry::LiftedState lifted = geometry::cotangent_lift(s.q(), s.p(), map);
        if (!lift_momenta) lifted.p.assign(s.p().begin(), s.p().end());
        const double hb = catalog::hamiltonian_value(beltrami, PhaseState(lifted.q, lifted.p));
        worst = std::max(worst, std::abs(hp - hb) / (std::abs(hp) + 1.0));
    }
    return worst;
}

struct FlatLimitRow {
    double kappa;
    double max_gap;       ///< max |H_kappa - H_flat|
    double max_rel_gap;   ///< max |H_kappa - H_flat| / (|H_flat| + 1)
};

/// Gap between a curved oscillator at each kappa and the Euclidean one with
/// the same omega and deltas, over a fixed sample.
inline std::vector<FlatLimitRow> flat_limit(catalog::Kind kind, double omega, const std::vector<double>& deltas,
                                            std::size_t n, std::span<const double> kappas,
                                            std::span<const PhaseState> samples) {
    expects(kind == catalog::Kind::poincare_higgs || kind == catalog::Kind::beltrami_osc ||
                kind == catalog::Kind::free_poincare || kind == catalog::Kind::free_beltrami,
            "flat_limit applies to the constant-curvature kinds");
    const catalog::SystemSpec flat{catalog::Kind::euclidean_osc, n, omega, 0.0, 1.0, deltas};
    std::vector<FlatLimitRow> rows;
    for (double k : kappas) {
        const catalog::SystemSpec curved{kind, n, omega, k, 1.0, deltas};
        FlatLimitRow row{k, 0.0, 0.0};
        for (const auto& s : samples) {
            const double hf = catalog::hamiltonian_value(flat, s);
            const double gap = std::abs(catalog::hamiltonian_value(curved, s) - hf);
            row.max_gap = std::max(row.max_gap, gap);
            row.max_rel_gap = std::max(row.max_rel_gap, gap / (std::abs(hf) + 1.0));
        }
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Full report

enum class Verdict { pass, fail, not_applicable };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::not_applicable: return "not-applicable";
    }
    return "?";
}

struct Tolerances {
    double bracket_rel = 1e-10;
    double svd_cutoff = 1e-8;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    std::size_t samples = 200;
    std::size_t rank_samples = 20;
    Tolerances tol;
    bool request_ms = false;  ///< evaluate extra integrals even for perturbed systems
    unsigned workers = 1;
};

struct VerificationReport {
    nlohmann::ordered_json system;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    Tolerances tol;
    std::size_t samples = 0;
    std::vector<ResidualStats> universal_residuals;
    std::vector<ResidualStats> extra_residuals;
    std::optional<InvolutionMatrix> involution_left;
    std::optional<InvolutionMatrix> involution_right;
    std::optional<InvolutionMatrix> involution_extra;
    RankResult rank_qms;
    std::optional<RankResult> rank_ms;
    int target_rank_qms = 0;
    int target_rank_ms = 0;
    ResidualStats negative_control;
    bool negative_control_detected = false;
    Verdict verdict_qms = Verdict::not_applicable;
    Verdict verdict_ms = Verdict::not_applicable;
    std::vector<std::string> notes;
};

namespace detail {

inline VerificationReport run(const Observable& h, std::size_t n, const std::vector<Observable>& extra,
                              bool extra_is_candidate, const Sampler& sampler, const VerifyOptions& opt) {
    VerificationReport rep;
    rep.n = n;
    rep.seed = opt.seed;
    rep.tol = opt.tol;
    rep.samples = opt.samples;
    rep.target_rank_qms = static_cast<int>(2 * n) - 2;
    rep.target_rank_ms = static_cast<int>(2 * n) - 1;

    const auto samples = sampler.draw(opt.samples);
    const std::span<const PhaseState> rank_samples(samples.data(), std::min(opt.rank_samples, samples.size()));

    // negative control: a coordinate that H moves, so a broken bracket cannot pass silently
    {
        ResidualStats best;
        for (std::size_t idx : {std::size_t{0}, n}) {
            auto st = residual_grid(h, observables::coordinate(idx, n), samples, opt.workers);
            if (st.max_rel > best.max_rel || best.name.empty()) best = st;
        }
        rep.negative_control = best;
        rep.negative_control_detected = best.max_rel > opt.tol.bracket_rel;
    }

    const auto universal = catalog::universal_integrals(n);
    bool residuals_ok = true;
    for (const auto& f : universal) {
        rep.universal_residuals.push_back(residual_grid(h, f, samples, opt.workers));
        residuals_ok = residuals_ok && rep.universal_residuals.back().max_rel <= opt.tol.bracket_rel;
    }

    if (n >= 2) {
        std::vector<Observable> left{h}, right{h};
        for (auto& f : catalog::chain_integrals(n, Chain::left)) left.push_back(std::move(f));
        for (auto& f : catalog::chain_integrals(n, Chain::right)) right.push_back(std::move(f));
        rep.involution_left = involution_matrix(left, samples, opt.workers);
        rep.involution_right = involution_matrix(right, samples, opt.workers);

        std::vector<Observable> set{h};
        set.insert(set.end(), universal.begin(), universal.end());
        rep.rank_qms = independence_rank(set, rank_samples, opt.tol.svd_cutoff);
        if (!extra.empty()) {
            set.push_back(extra.front());
            rep.rank_ms = independence_rank(set, rank_samples, opt.tol.svd_cutoff);
        }
        rep.verdict_qms = residuals_ok && rep.rank_qms.rank >= rep.target_rank_qms && rep.negative_control_detected
                              ? Verdict::pass
                              : Verdict::fail;
    } else {
        rep.rank_qms = independence_rank(std::vector<Observable>{h}, rank_samples, opt.tol.svd_cutoff);
        rep.notes.emplace_back("N = 1: there are no universal integrals; QMS is not applicable");
    }
    if (!rep.negative_control_detected)
        rep.notes.emplace_back("negative control not detected: {H, " + rep.negative_control.name +
                               "} is below tolerance, bracket evaluation is suspect");

    if (!extra.empty()) {
        bool extra_ok = true;
        for (const auto& f : extra) {
            rep.extra_residuals.push_back(residual_grid(h, f, samples, opt.workers));
            extra_ok = extra_ok && rep.extra_residuals.back().max_rel <= opt.tol.bracket_rel;
        }
        rep.involution_extra = involution_matrix(extra, samples, opt.workers);
        const bool rank_ok = rep.rank_ms && rep.rank_ms->rank >= rep.target_rank_ms;
        const bool qms_ok = rep.verdict_qms == Verdict::pass || n == 1;
        rep.verdict_ms = extra_ok && rank_ok && qms_ok ? Verdict::pass : Verdict::fail;
        if (n == 1 && extra_ok) rep.verdict_ms = Verdict::pass;
        if (extra_is_candidate && !extra_ok)
            rep.notes.emplace_back(
                "the candidate quadratic integrals I_i are not conserved; this falsifies these candidates only and "
                "does not exclude other integrals");
        if (!rank_ok && extra_ok && n >= 2)
            rep.notes.emplace_back("MS rank target not certified at the sampled points");
    }
    return rep;
}

}  // namespace detail

/// Full QMS / MS check of a catalog system.
inline VerificationReport verify_system(const catalog::SystemSpec& spec, const VerifyOptions& opt) {
    spec.validate();
    const Observable h = catalog::hamiltonian_observable(spec);
    std::vector<Observable> extra;
    const bool candidate = spec.perturbed();
    if (!candidate || opt.request_ms)
        for (std::size_t i = 1; i <= spec.n; ++i) extra.push_back(catalog::candidate_integral_observable(spec, i));

    auto rep = detail::run(h, spec.n, extra, candidate, catalog_sampler(spec, opt.seed), opt);
    rep.system = nlohmann::ordered_json::object();
    rep.system["kind"] = std::string(catalog::name(spec.kind));
    rep.system["n"] = spec.n;
    rep.system["omega"] = spec.omega;
    rep.system["kappa"] = spec.kappa;
    rep.system["a"] = spec.a;
    rep.system["deltas"] = spec.deltas;
    rep.system["tags"] = catalog::tags(spec);
    return rep;
}

/// QMS / MS check of a DSL Hamiltonian. `extra_family`, if given, selects the
/// extra-integral formula; it reads `omega` and `kappa` from the parameters
/// (default 0), and the Darboux formula uses the expression's own H.
inline VerificationReport verify_expression(const expr::Expression& e, const expr::ParamTable& params, std::size_t n,
                                            std::optional<catalog::Family> extra_family, const VerifyOptions& opt) {
    expects(n >= 1 && n <= catalog::kMaxDim, "dimension out of range");
    const Observable h = expr::make_observable(e, params);
    std::vector<Observable> extra;
    if (extra_family) {
        auto get = [&](const char* k) {
            const auto it = params.find(k);
            return it == params.end() ? 0.0 : it->second;
        };
        const double omega = get("omega"), kappa = get("kappa");
        const catalog::Family fam = *extra_family;
        for (std::size_t i = 1; i <= n; ++i)
            extra.push_back(Observable::generic("I" + std::to_string(i), [=](auto q, auto p) {
                using T = std::remove_cv_t<typename decltype(q)::value_type>;
                const T hv = fam == catalog::Family::darboux ? expr::evaluate<T>(e, q, p, params)
                                                             : constant_like(0.0, q[0]);
                return catalog::extra_integral_formula<T>(fam, i, q, p, omega, kappa, hv);
            }));
    }
    auto rep = detail::run(h, n, extra, false, expression_sampler(e, params, n, opt.seed), opt);
    rep.system = nlohmann::ordered_json::object();
    rep.system["expr"] = e.source();
    nlohmann::ordered_json pj = nlohmann::ordered_json::object();
    for (const auto& [k, v] : params) pj[k] = v;
    rep.system["params"] = pj;
    rep.system["extra"] = extra_family ? std::string(catalog::name(*extra_family)) : std::string("none");
    return rep;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json to_json(const ResidualStats& s) {
    nlohmann::ordered_json j;
    j["name"] = s.name;
    j["max_abs"] = s.max_abs;
    j["mean_abs"] = s.mean_abs;
    j["max_rel"] = s.max_rel;
    j["mean_rel"] = s.mean_rel;
    j["samples"] = s.samples;
    return j;
}

inline nlohmann::ordered_json to_json(const std::optional<InvolutionMatrix>& m) {
    if (!m) return nullptr;
    nlohmann::ordered_json j;
    j["names"] = m->names;
    j["max_rel"] = m->max_rel;
    j["max_entry"] = m->max_entry();
    return j;
}

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["system"] = r.system;
    j["n"] = r.n;
    j["seed"] = r.seed;
    j["tolerances"] = {{"bracket_rel", r.tol.bracket_rel}, {"svd_cutoff", r.tol.svd_cutoff}};
    j["samples"] = r.samples;
    auto list = [](const std::vector<ResidualStats>& v) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const auto& s : v) a.push_back(to_json(s));
        return a;
    };
    j["universal_residuals"] = list(r.universal_residuals);
    j["extra_residuals"] = list(r.extra_residuals);
    j["involution_left"] = to_json(r.involution_left);
    j["involution_right"] = to_json(r.involution_right);
    j["involution_extra"] = to_json(r.involution_extra);
    nlohmann::ordered_json rank;
    rank["qms"] = r.rank_qms.rank;
    rank["qms_singular_values"] = r.rank_qms.singular_values;
    rank["ms"] = r.rank_ms ? nlohmann::ordered_json(r.rank_ms->rank) : nlohmann::ordered_json(nullptr);
    rank["ms_singular_values"] =
        r.rank_ms ? nlohmann::ordered_json(r.rank_ms->singular_values) : nlohmann::ordered_json(nullptr);
    j["rank"] = rank;
    j["target_rank_qms"] = r.target_rank_qms;
    j["target_rank_ms"] = r.target_rank_ms;
    nlohmann::ordered_json nc = to_json(r.negative_control);
    nc["detected"] = r.negative_control_detected;
    j["negative_control"] = nc;
    j["verdict_qms"] = verdict_name(r.verdict_qms);
    j["verdict_ms"] = verdict_name(r.verdict_ms);
    j["notes"] = r.notes;
    return j;
}

}  // namespace sl2::verify
