#pragma once

/**
 * The concrete coalgebra Hamiltonians: harmonic and anharmonic oscillators on
 * Euclidean space, on the sphere / hyperbolic space in Poincare and Beltrami
 * coordinates, and on the Darboux III space, together with their geodesic
 * (free) flows.
 *
 * Every Hamiltonian is a function of q^2, p^2 and q.p only, so the universal
 * integrals C2..CN, Cr2..Cr(N-1) are shared by all of them. The unperturbed
 * systems (all deltas zero) carry N further integrals I_1..I_N.
 *
 * Anharmonic series are finite: deltas[k-1] multiplies the (k+1)-th power of
 * the oscillator term, k = 1..K.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sl2/autodiff.hpp"
#include "sl2/errors.hpp"
#include "sl2/phase_space.hpp"
#include "sl2/util.hpp"

namespace sl2::catalog {

enum class Kind {
    euclidean_osc,
    poincare_higgs,
    beltrami_osc,
    darboux3_a,
    darboux3_b,
    free_poincare,
    free_beltrami,
    free_darboux,
};

inline constexpr std::array<Kind, 8> kAllKinds = {
    Kind::euclidean_osc, Kind::poincare_higgs, Kind::beltrami_osc,  Kind::darboux3_a,
    Kind::darboux3_b,    Kind::free_poincare,  Kind::free_beltrami, Kind::free_darboux,
};

inline std::string_view name(Kind k) {
    switch (k) {
        case Kind::euclidean_osc: return "euclidean-osc";
        case Kind::poincare_higgs: return "poincare-higgs";
        case Kind::beltrami_osc: return "beltrami-osc";
        case Kind::darboux3_a: return "darboux3-A";
        case Kind::darboux3_b: return "darboux3-B";
        case Kind::free_poincare: return "free-poincare";
        case Kind::free_beltrami: return "free-beltrami";
        case Kind::free_darboux: return "free-darboux";
    }
    return "?";
}

inline std::optional<Kind> parse_kind(std::string_view text) {
    for (Kind k : kAllKinds)
        if (name(k) == text) return k;
    return std::nullopt;
}

/// Which extra-integral formula applies.
enum class Family { euclidean, poincare, beltrami, darboux };

inline Family family_of(Kind k) {
    switch (k) {
        case Kind::euclidean_osc: return Family::euclidean;
        case Kind::poincare_higgs:
        case Kind::free_poincare: return Family::poincare;
        case Kind::beltrami_osc:
        case Kind::free_beltrami: return Family::beltrami;
        default: return Family::darboux;
    }
}

inline std::string_view name(Family f) {
    switch (f) {
        case Family::euclidean: return "euclidean";
        case Family::poincare: return "poincare";
        case Family::beltrami: return "beltrami";
        case Family::darboux: return "darboux";
    }
    return "?";
}

inline std::optional<Family> parse_family(std::string_view text) {
    for (Family f : {Family::euclidean, Family::poincare, Family::beltrami, Family::darboux})
        if (name(f) == text) return f;
    return std::nullopt;
}

inline bool is_free(Kind k) {
    return k == Kind::free_poincare || k == Kind::free_beltrami || k == Kind::free_darboux;
}
inline bool uses_kappa(Kind k) {
    const Family f = family_of(k);
    return f == Family::poincare || f == Family::beltrami;
}
inline bool uses_a(Kind k) { return family_of(k) == Family::darboux; }

inline constexpr std::size_t kMaxDim = kMaxJetDim / 2;

struct SystemSpec {
    Kind kind = Kind::euclidean_osc;
    std::size_t n = 2;
    double omega = 0.0;
    double kappa = 0.0;
    double a = 1.0;
    std::vector<double> deltas;

    /// True when some anharmonic coefficient is nonzero.
    bool perturbed() const {
        for (double d : deltas)
            if (d != 0.0) return true;
        return false;
    }

    void validate() const {
        if (n < 1 || n > kMaxDim) throw ContractViolation("dimension n must be in 1.." + std::to_string(kMaxDim));
        if (!std::isfinite(omega) || omega < 0.0) throw ContractViolation("omega must be finite and >= 0");
        if (!std::isfinite(kappa)) throw ContractViolation("kappa must be finite");
        for (double d : deltas)
            if (!std::isfinite(d)) throw ContractViolation("deltas must be finite");
        if (uses_a(kind) && !(a > 0.0 && std::isfinite(a)))
            throw ContractViolation("Darboux III systems require a > 0");
        if (is_free(kind) && (omega != 0.0 || !deltas.empty()))
            throw ContractViolation("free kinds take omega = 0 and no deltas");
    }
};

// ---------------------------------------------------------------------------
// Hamiltonians

namespace detail {

/// sum_k deltas[k-1] * x^(k+1)
template <PhaseScalar T>
T anharmonic_series(const std::vector<double>& deltas, const T& x) {
    T sum = constant_like(0.0, x);
    for (std::size_t k = 1; k <= deltas.size(); ++k) {
        if (deltas[k - 1] == 0.0) continue;
        sum = sum + deltas[k - 1] * pow_int(x, static_cast<int>(k + 1));
    }
    return sum;
}

inline bool has_potential(const SystemSpec& s) { return s.omega != 0.0 || s.perturbed(); }

}  // namespace detail

/// Chart-domain check. `guard` keeps a margin from the boundaries and poles.
/// Returns an empty string when inside, otherwise the violated condition.
inline std::string domain_violation(const SystemSpec& s, double q2, double guard = 0.0) {
    switch (family_of(s.kind)) {
        case Family::poincare:
            if (!(1.0 + s.kappa * q2 > guard)) return "Poincare chart requires 1 + kappa q^2 > 0";
            if (s.kind == Kind::poincare_higgs && s.kappa > 0.0 && !(1.0 - s.kappa * q2 > guard))
                return "Higgs potential requires kappa q^2 < 1 (pole at kappa q^2 = 1)";
            return {};
        case Family::beltrami:
            if (!(1.0 + s.kappa * q2 > guard)) return "Beltrami chart requires 1 + kappa q^2 > 0";
            return {};
        case Family::darboux:
        case Family::euclidean: return {};
    }
    return {};
}

inline bool in_domain(const SystemSpec& s, const PhaseState& state, double guard = 0.0) {
    double q2 = 0.0;
    for (double v : state.q()) q2 += v * v;
    return domain_violation(s, q2, guard).empty();
}

template <PhaseScalar T>
T hamiltonian(const SystemSpec& s, std::span<const T> q, std::span<const T> p) {
    expects(q.size() == s.n && p.size() == s.n, "state dimension does not match the system");
    const T q2 = dot(q, q);
    const T p2 = dot(p, p);
    if (const std::string v = domain_violation(s, value_of(q2)); !v.empty()) throw DomainError(v);
    const double w2 = s.omega * s.omega;
    switch (s.kind) {
        case Kind::euclidean_osc:
            return 0.5 * p2 + 0.5 * w2 * q2 + detail::anharmonic_series(s.deltas, q2);
        case Kind::poincare_higgs:
        case Kind::free_poincare: {
            const T conf = 1.0 + s.kappa * q2;
            T h = 0.5 * conf * conf * p2;
            if (detail::has_potential(s)) {
                const T den = 1.0 - s.kappa * q2;
                const T u = q2 / (den * den);
                h = h + 0.5 * w2 * u + detail::anharmonic_series(s.deltas, u);
            }
            return h;
        }
        case Kind::beltrami_osc:
        case Kind::free_beltrami: {
            const T qp = dot(q, p);
            return 0.5 * (1.0 + s.kappa * q2) * (p2 + s.kappa * qp * qp) + 0.5 * w2 * q2 +
                   detail::anharmonic_series(s.deltas, q2);
        }
        case Kind::darboux3_a:
        case Kind::free_darboux: {
            const T den = s.a + q2;
            const T u = q2 / den;
            return p2 / den + w2 * u + detail::anharmonic_series(s.deltas, u);
        }
        case Kind::darboux3_b:
            return (p2 + w2 * q2 + detail::anharmonic_series(s.deltas, q2)) / (s.a + q2);
    }
    throw ContractViolation("unknown system kind");
}

inline Jet hamiltonian(const SystemSpec& s, const PhaseState& state) {
    const SeededState z = seed_all(state);
    return hamiltonian<Jet>(s, z.q, z.p);
}

inline double hamiltonian_value(const SystemSpec& s, const PhaseState& state) {
    return hamiltonian<double>(s, state.q(), state.p());
}

inline Observable hamiltonian_observable(const SystemSpec& s) {
    s.validate();
    return Observable::generic("H", [s](auto q, auto p) {
        using T = std::remove_cv_t<typename decltype(q)::value_type>;
        return hamiltonian<T>(s, q, p);
    });
}

// ---------------------------------------------------------------------------
// Extra integrals of the unperturbed systems

/// The N quadratic-in-momenta integrals I_i (1-based i) of each family.
/// `h` is the Hamiltonian's value (jet); only the Darboux formula uses it.
template <PhaseScalar T>
T extra_integral_formula(Family family, std::size_t i, std::span<const T> q, std::span<const T> p, double omega,
                         double kappa, const T& h) {
    expects(1 <= i && i <= q.size(), "extra integral index needs 1 <= i <= N");
    const T& qi = q[i - 1];
    const T& pi = p[i - 1];
    const double w2 = omega * omega;
    switch (family) {
        case Family::euclidean: return pi * pi + w2 * qi * qi;
        case Family::poincare: {
            const T q2 = dot(q, q);
            const T den = 1.0 - kappa * q2;
            if (value_of(den) == 0.0) throw DomainError("Poincare integral requires kappa q^2 != 1");
            const T m = pi * den + 2.0 * kappa * dot(q, p) * qi;
            return m * m + w2 * qi * qi / (den * den);
        }
        case Family::beltrami: {
            const T m = pi + kappa * dot(q, p) * qi;
            return m * m + w2 * qi * qi;
        }
        case Family::darboux: return pi * pi - (h - w2) * qi * qi;
    }
    throw ContractViolation("unknown family");
}

/// I_i evaluated with the unperturbed formula even when deltas are present.
/// For perturbed systems this is a candidate that is expected to fail.
inline Observable candidate_integral_observable(const SystemSpec& s, std::size_t i) {
    s.validate();
    expects(1 <= i && i <= s.n, "extra integral index needs 1 <= i <= N");
    return Observable::generic("I" + std::to_string(i), [s, i](auto q, auto p) {
        using T = std::remove_cv_t<typename decltype(q)::value_type>;
        const Family f = family_of(s.kind);
        const T h = f == Family::darboux ? hamiltonian<T>(s, q, p) : constant_like(0.0, q[0]);
        return extra_integral_formula<T>(f, i, q, p, s.omega, s.kappa, h);
    });
}

inline void require_unperturbed(const SystemSpec& s) {
    if (s.perturbed())
        throw Unsupported("no extra integral is known for " + std::string(name(s.kind)) +
                          " with nonzero deltas (maximal superintegrability is lost)");
}

inline Observable extra_integral_observable(const SystemSpec& s, std::size_t i) {
    require_unperturbed(s);
    return candidate_integral_observable(s, i);
}

/// I_i at a state; h_value must be the Hamiltonian at that state (used by Darboux kinds only).
inline double extra_integral(const SystemSpec& s, std::size_t i, const PhaseState& state, double h_value) {
    s.validate();
    require_unperturbed(s);
    expects(state.dim() == s.n, "state dimension does not match the system");
    return extra_integral_formula<double>(family_of(s.kind), i, state.q(), state.p(), s.omega, s.kappa, h_value);
}

struct IntegralFamily {
    std::vector<Observable> universal;              ///< C2..CN, Cr2..Cr(N-1): 2N-3 members
    std::optional<std::vector<Observable>> extra;  ///< I_1..I_N, only for unperturbed systems
};

/// Universal integrals for dimension n: the full left chain and the right chain without its top member.
inline std::vector<Observable> universal_integrals(std::size_t n) {
    std::vector<Observable> out;
    for (std::size_t m = 2; m <= n; ++m) out.push_back(observables::casimir(m, Chain::left));
    for (std::size_t m = 2; m + 1 <= n; ++m) out.push_back(observables::casimir(m, Chain::right));
    return out;
}

/// One whole chain, C2..CN or Cr2..CrN.
inline std::vector<Observable> chain_integrals(std::size_t n, Chain chain) {
    std::vector<Observable> out;
    for (std::size_t m = 2; m <= n; ++m) out.push_back(observables::casimir(m, chain));
    return out;
}

inline IntegralFamily integral_family(const SystemSpec& s) {
    s.validate();
    IntegralFamily fam;
    fam.universal = universal_integrals(s.n);
    if (!s.perturbed()) {
        std::vector<Observable> extra;
        for (std::size_t i = 1; i <= s.n; ++i) extra.push_back(extra_integral_observable(s, i));
        fam.extra = std::move(extra);
    }
    return fam;
}

// ---------------------------------------------------------------------------
// Metadata

/// Status and identification tags: "MS" or "QMS", plus the Garnier tags for
/// the quartic perturbation of the flat and curved oscillators.
inline std::vector<std::string> tags(const SystemSpec& s) {
    std::vector<std::string> out;
    out.emplace_back(s.perturbed() ? "QMS" : "MS");
    bool only_delta1 = !s.deltas.empty() && s.deltas[0] != 0.0;
    for (std::size_t k = 1; k < s.deltas.size(); ++k)
        if (s.deltas[k] != 0.0) only_delta1 = false;
    if (only_delta1 && s.omega != 0.0) {
        if (s.kind == Kind::euclidean_osc) out.emplace_back("radial Garnier");
        if (s.kind == Kind::beltrami_osc || s.kind == Kind::poincare_higgs) out.emplace_back("curved Garnier");
    }
    return out;
}

struct KindInfo {
    std::string_view hamiltonian;
    std::string_view extra_integral;
    std::string_view parameters;
    std::string_view constraints;
};

inline KindInfo info(Kind k) {
    switch (k) {
        case Kind::euclidean_osc:
            return {"H = p^2/2 + omega^2 q^2/2 + sum_k delta_k (q^2)^(k+1)", "I_i = p_i^2 + omega^2 q_i^2",
                    "n, omega, deltas", "none"};
        case Kind::poincare_higgs:
            return {"H = (1 + kappa q^2)^2 p^2/2 + omega^2 U/2 + sum_k delta_k U^(k+1),  U = q^2/(1 - kappa q^2)^2",
                    "I_i = (p_i (1 - kappa q^2) + 2 kappa (q.p) q_i)^2 + omega^2 q_i^2/(1 - kappa q^2)^2",
                    "n, kappa, omega, deltas", "1 + kappa q^2 > 0; kappa q^2 < 1"};
        case Kind::beltrami_osc:
            return {"H = (1 + kappa q^2)(p^2 + kappa (q.p)^2)/2 + omega^2 q^2/2 + sum_k delta_k (q^2)^(k+1)",
                    "I_i = (p_i + kappa (q.p) q_i)^2 + omega^2 q_i^2", "n, kappa, omega, deltas",
                    "1 + kappa q^2 > 0"};
        case Kind::darboux3_a:
            return {"H = p^2/(a + q^2) + omega^2 V + sum_k delta_k V^(k+1),  V = q^2/(a + q^2)",
                    "I_i = p_i^2 - (H - omega^2) q_i^2", "n, a, omega, deltas", "a > 0"};
        case Kind::darboux3_b:
            return {"H = (p^2 + omega^2 q^2 + sum_k delta_k (q^2)^(k+1)) / (a + q^2)",
                    "I_i = p_i^2 - (H - omega^2) q_i^2", "n, a, omega, deltas", "a > 0"};
        case Kind::free_poincare:
            return {"H = (1 + kappa q^2)^2 p^2/2", "I_i = (p_i (1 - kappa q^2) + 2 kappa (q.p) q_i)^2", "n, kappa",
                    "1 + kappa q^2 > 0"};
        case Kind::free_beltrami:
            return {"H = (1 + kappa q^2)(p^2 + kappa (q.p)^2)/2", "I_i = (p_i + kappa (q.p) q_i)^2", "n, kappa",
                    "1 + kappa q^2 > 0"};
        case Kind::free_darboux:
            return {"H = p^2/(a + q^2)", "I_i = p_i^2 - H q_i^2", "n, a", "a > 0"};
    }
    return {};
}

// ---------------------------------------------------------------------------
// Flat key-value serialization:
//
//     kind = beltrami-osc
//     n = 4
//     omega = 1
//     kappa = -1
//     a = 1
//     deltas = 0.2,0.01

inline std::string to_kv(const SystemSpec& s) {
    std::string out;
    out += "kind = " + std::string(name(s.kind)) + "\n";
    out += "n = " + std::to_string(s.n) + "\n";
    out += "omega = " + format_shortest(s.omega) + "\n";
    out += "kappa = " + format_shortest(s.kappa) + "\n";
    out += "a = " + format_shortest(s.a) + "\n";
    out += "deltas = " + join_reals(s.deltas) + "\n";
    return out;
}

/// Parse the key-value document. Keys other than the SystemSpec fields are ignored so
/// the same file can carry run parameters.
inline SystemSpec from_kv(std::string_view text) {
    SystemSpec s;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++line_no;
        if (line.empty() || line.front() == '#' || line.front() == ';' || line.front() == '[') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key = value");
        const std::string_view key = trim(line.substr(0, eq));
        std::string_view val = trim(line.substr(eq + 1));
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
        if (key == "kind") {
            const auto k = parse_kind(val);
            if (!k) throw std::invalid_argument("unknown system kind '" + std::string(val) + "'");
            s.kind = *k;
        } else if (key == "n") {
            const double v = parse_real(val);
            if (v < 1 || v != std::floor(v)) throw std::invalid_argument("n must be a positive integer");
            s.n = static_cast<std::size_t>(v);
        } else if (key == "omega") {
            s.omega = parse_real(val);
        } else if (key == "kappa") {
            s.kappa = parse_real(val);
        } else if (key == "a") {
            s.a = parse_real(val);
        } else if (key == "deltas") {
            s.deltas = parse_real_list(val);
        }
    }
    return s;
}

}  // namespace sl2::catalog
