#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sl2/autodiff.hpp"
#include "sl2/errors.hpp"

namespace sl2 {

/// N positions and their N conjugate momenta.
class PhaseState {
public:
    PhaseState(std::vector<double> q, std::vector<double> p) : q_(std::move(q)), p_(std::move(p)) {
        expects(!q_.empty(), "phase state needs N >= 1");
        expects(q_.size() == p_.size(), "q and p must have equal length");
        expects(2 * q_.size() <= kMaxJetDim, "phase-space dimension exceeds jet capacity");
        for (std::size_t i = 0; i < q_.size(); ++i)
            expects(std::isfinite(q_[i]) && std::isfinite(p_[i]), "phase state entries must be finite");
    }

    /// Build from a flat (q_1..q_N, p_1..p_N) vector.
    static PhaseState from_flat(std::span<const double> z) {
        expects(z.size() % 2 == 0, "flat phase vector must have even length");
        const std::size_t n = z.size() / 2;
        return PhaseState({z.begin(), z.begin() + n}, {z.begin() + n, z.end()});
    }

    std::size_t dim() const noexcept { return q_.size(); }
    std::span<const double> q() const noexcept { return q_; }
    std::span<const double> p() const noexcept { return p_; }

    std::vector<double> flat() const {
        std::vector<double> z(q_);
        z.insert(z.end(), p_.begin(), p_.end());
        return z;
    }

    double coordinate(std::size_t index) const {
        expects(index < 2 * dim(), "coordinate index out of range");
        return index < dim() ? q_[index] : p_[index - dim()];
    }

private:
    std::vector<double> q_;
    std::vector<double> p_;
};

/// Jet of the coordinate at `index` (0..N-1 positions, N..2N-1 momenta).
inline Jet seed(const PhaseState& state, std::size_t index) {
    expects(index < 2 * state.dim(), "seed index out of range");
    return Jet::variable(state.coordinate(index), 2 * state.dim(), index);
}

struct SeededState {
    std::vector<Jet> q;
    std::vector<Jet> p;
};

inline SeededState seed_all(const PhaseState& state) {
    const std::size_t n = state.dim();
    SeededState s;
    s.q.reserve(n);
    s.p.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.q.push_back(seed(state, i));
    for (std::size_t i = 0; i < n; ++i) s.p.push_back(seed(state, n + i));
    return s;
}

// ---------------------------------------------------------------------------
// sl(2) realization

template <PhaseScalar T>
T dot(std::span<const T> a, std::span<const T> b) {
    expects(a.size() == b.size() && !a.empty(), "dot: size mismatch");
    T s = a[0] * b[0];
    for (std::size_t i = 1; i < a.size(); ++i) s = s + a[i] * b[i];
    return s;
}

template <PhaseScalar T>
struct SL2Functions {
    T jminus;  // q.q
    T jplus;   // p.p
    T j3;      // q.p
};

template <PhaseScalar T>
SL2Functions<T> sl2_functions(std::span<const T> q, std::span<const T> p) {
    return {dot(q, q), dot(p, p), dot(q, p)};
}

struct SL2Point {
    double jminus;
    double jplus;
    double j3;
};

inline SL2Point sl2_realize(const PhaseState& s) {
    const auto f = sl2_functions<double>(s.q(), s.p());
    return {f.jminus, f.jplus, f.j3};
}

// ---------------------------------------------------------------------------
// Observables

/// A phase-space function evaluable both as a plain value and as a jet.
///
/// Constructed from a generic callable `f(q, p)` that accepts
/// `std::span<const T>` for T in {double, Jet}, so one definition serves
/// both paths.
class Observable {
public:
    using ValueFn = std::function<double(const PhaseState&)>;
    using JetFn = std::function<Jet(const PhaseState&)>;

    Observable(std::string name, ValueFn value_fn, JetFn jet_fn)
        : name_(std::move(name)), value_fn_(std::move(value_fn)), jet_fn_(std::move(jet_fn)) {}

    template <class F>
    static Observable generic(std::string name, F f) {
        return Observable(
            std::move(name),
            [f](const PhaseState& s) -> double { return f(s.q(), s.p()); },
            [f](const PhaseState& s) -> Jet {
                const SeededState z = seed_all(s);
                return f(std::span<const Jet>(z.q), std::span<const Jet>(z.p));
            });
    }

    const std::string& name() const noexcept { return name_; }
    double value(const PhaseState& s) const { return value_fn_(s); }
    Jet jet(const PhaseState& s) const { return jet_fn_(s); }

private:
    std::string name_;
    ValueFn value_fn_;
    JetFn jet_fn_;
};

// ---------------------------------------------------------------------------
// Poisson bracket

struct BracketValue {
    double value;     ///< {f, g}
    double scale;     ///< |grad f| |grad g| + 1
    double relative;  ///< |value| / scale
};

inline double bracket_from_gradients(std::span<const double> df, std::span<const double> dg) {
    expects(df.size() == dg.size() && df.size() % 2 == 0, "bracket: gradient size mismatch");
    const std::size_t n = df.size() / 2;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += df[i] * dg[n + i] - dg[i] * df[n + i];
    return s;
}

inline double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline BracketValue bracket_of(const Jet& f, const Jet& g) {
    const double v = bracket_from_gradients(f.grad(), g.grad());
    const double scale = norm2(f.grad()) * norm2(g.grad()) + 1.0;
    return {v, scale, std::abs(v) / scale};
}

inline BracketValue poisson_bracket_scaled(const Observable& f, const Observable& g, const PhaseState& s) {
    return bracket_of(f.jet(s), g.jet(s));
}

inline double poisson_bracket(const Observable& f, const Observable& g, const PhaseState& s) {
    return poisson_bracket_scaled(f, g, s).value;
}

// ---------------------------------------------------------------------------
// Angular momentum and the universal integrals

/// L_ij = q_i p_j - q_j p_i with 1-based i < j.
template <PhaseScalar T>
T angular_momentum(std::span<const T> q, std::span<const T> p, std::size_t i, std::size_t j) {
    expects(1 <= i && i < j && j <= q.size(), "angular_momentum needs 1 <= i < j <= N");
    return q[i - 1] * p[j - 1] - q[j - 1] * p[i - 1];
}

inline double angular_momentum(const PhaseState& s, std::size_t i, std::size_t j) {
    return angular_momentum<double>(s.q(), s.p(), i, j);
}

enum class Chain { left, right };

/// Sum of L_ij^2 over the first m indices (left chain) or the last m (right chain).
template <PhaseScalar T>
T casimir_integral(std::span<const T> q, std::span<const T> p, std::size_t m, Chain chain) {
    const std::size_t n = q.size();
    expects(2 <= m && m <= n, "casimir level needs 2 <= m <= N");
    const std::size_t lo = chain == Chain::left ? 1 : n - m + 1;
    const std::size_t hi = chain == Chain::left ? m : n;
    T sum = constant_like(0.0, q[0]);
    for (std::size_t i = lo; i <= hi; ++i)
        for (std::size_t j = i + 1; j <= hi; ++j) {
            const T l = angular_momentum(q, p, i, j);
            sum = sum + l * l;
        }
    return sum;
}

inline double casimir_integral(const PhaseState& s, std::size_t m, Chain chain) {
    return casimir_integral<double>(s.q(), s.p(), m, chain);
}

namespace observables {

inline Observable coordinate(std::size_t index, std::size_t n) {
    expects(index < 2 * n, "coordinate index out of range");
    std::string name = index < n ? "q" + std::to_string(index + 1) : "p" + std::to_string(index - n + 1);
    return Observable::generic(std::move(name), [index, n](auto q, auto p) {
        expects(q.size() == n, "coordinate observable used at the wrong dimension");
        return index < n ? q[index] : p[index - n];
    });
}

inline Observable jminus() {
    return Observable::generic("Jm", [](auto q, auto) { return dot(q, q); });
}
inline Observable jplus() {
    return Observable::generic("Jp", [](auto, auto p) { return dot(p, p); });
}
inline Observable j3() {
    return Observable::generic("J3", [](auto q, auto p) { return dot(q, p); });
}

inline Observable angular(std::size_t i, std::size_t j) {
    return Observable::generic("L" + std::to_string(i) + "_" + std::to_string(j),
                               [i, j](auto q, auto p) { return angular_momentum(q, p, i, j); });
}

/// Left chain members are named C2..CN, right chain members Cr2..CrN.
inline std::string casimir_name(std::size_t m, Chain chain) {
    return (chain == Chain::left ? "C" : "Cr") + std::to_string(m);
}

inline Observable casimir(std::size_t m, Chain chain) {
    return Observable::generic(casimir_name(m, chain),
                               [m, chain](auto q, auto p) { return casimir_integral(q, p, m, chain); });
}

}  // namespace observables

}  // namespace sl2
