#pragma once

/**
 * Forward-mode differentiation over phase space.
 *
 * A Jet carries a value together with its gradient with respect to all 2N
 * canonical coordinates, ordered (q_1..q_N, p_1..p_N). Arithmetic applies the
 * chain rule, so any rational observable built from seeded coordinates comes
 * out with a gradient exact to roundoff.
 *
 * The gradient lives in fixed inline storage, which keeps jets allocation-free
 * in the inner loops of integrators and residual sweeps.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>

#include "sl2/errors.hpp"

namespace sl2 {

/// Maximum gradient length, i.e. phase-space dimension 2N for N <= 16.
inline constexpr std::size_t kMaxJetDim = 32;

class Jet {
public:
    Jet() = default;

    /// Constant jet: value v, zero gradient of length dim.
    Jet(double v, std::size_t dim) : value_(v), dim_(dim) {
        expects(dim <= kMaxJetDim, "jet dimension exceeds kMaxJetDim");
        std::fill_n(grad_.begin(), dim_, 0.0);
    }

    static Jet constant(double v, std::size_t dim) { return Jet(v, dim); }

    static Jet variable(double v, std::size_t dim, std::size_t index) {
        expects(index < dim, "jet seed index out of range");
        Jet j(v, dim);
        j.grad_[index] = 1.0;
        return j;
    }

    /// Jet of g(inner) given g's value and derivative at inner.value().
    static Jet chain(double g_value, double g_derivative, const Jet& inner) {
        Jet r(g_value, inner.dim_);
        for (std::size_t i = 0; i < r.dim_; ++i) r.grad_[i] = g_derivative * inner.grad_[i];
        return r;
    }

    double value() const noexcept { return value_; }
    std::size_t dim() const noexcept { return dim_; }
    std::span<const double> grad() const noexcept { return {grad_.data(), dim_}; }
    double d(std::size_t i) const {
        expects(i < dim_, "jet gradient index out of range");
        return grad_[i];
    }

    Jet operator-() const {
        Jet r = *this;
        r.value_ = -value_;
        for (std::size_t i = 0; i < dim_; ++i) r.grad_[i] = -grad_[i];
        return r;
    }

    Jet& operator+=(const Jet& o) {
        check_dim(o);
        value_ += o.value_;
        for (std::size_t i = 0; i < dim_; ++i) grad_[i] += o.grad_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        check_dim(o);
        value_ -= o.value_;
        for (std::size_t i = 0; i < dim_; ++i) grad_[i] -= o.grad_[i];
        return *this;
    }
    Jet& operator*=(const Jet& o) {
        check_dim(o);
        for (std::size_t i = 0; i < dim_; ++i) grad_[i] = grad_[i] * o.value_ + value_ * o.grad_[i];
        value_ *= o.value_;
        return *this;
    }
    Jet& operator/=(const Jet& o) {
        check_dim(o);
        if (o.value_ == 0.0) throw DomainError("division by zero");
        const double inv = 1.0 / o.value_;
        const double v = value_ * inv;
        for (std::size_t i = 0; i < dim_; ++i) grad_[i] = (grad_[i] - v * o.grad_[i]) * inv;
        value_ = v;
        return *this;
    }

    Jet& operator+=(double c) {
        value_ += c;
        return *this;
    }
    Jet& operator-=(double c) {
        value_ -= c;
        return *this;
    }
    Jet& operator*=(double c) {
        value_ *= c;
        for (std::size_t i = 0; i < dim_; ++i) grad_[i] *= c;
        return *this;
    }
    Jet& operator/=(double c) {
        if (c == 0.0) throw DomainError("division by zero");
        return *this *= 1.0 / c;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
    friend Jet operator/(Jet a, const Jet& b) { return a /= b; }

    friend Jet operator+(Jet a, double c) { return a += c; }
    friend Jet operator+(double c, Jet a) { return a += c; }
    friend Jet operator-(Jet a, double c) { return a -= c; }
    friend Jet operator-(double c, const Jet& a) { return -a + c; }
    friend Jet operator*(Jet a, double c) { return a *= c; }
    friend Jet operator*(double c, Jet a) { return a *= c; }
    friend Jet operator/(Jet a, double c) { return a /= c; }
    friend Jet operator/(double c, const Jet& a) { return Jet(c, a.dim_) / a; }

private:
    void check_dim(const Jet& o) const { expects(o.dim_ == dim_, "jet dimension mismatch"); }

    double value_ = 0.0;
    std::size_t dim_ = 0;
    std::array<double, kMaxJetDim> grad_;
};

/// Scalar types the templated observables are instantiated with.
template <class T>
concept PhaseScalar = std::same_as<T, double> || std::same_as<T, Jet>;

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

/// Constant of the same "shape" as `like` (a plain double, or a jet of matching dimension).
inline double constant_like(double c, double) { return c; }
inline Jet constant_like(double c, const Jet& like) { return Jet(c, like.dim()); }

/// Division that raises DomainError on an exact zero denominator for both scalar kinds.
template <PhaseScalar T>
T checked_div(const T& num, const T& den) {
    if (value_of(den) == 0.0) throw DomainError("division by zero");
    return num / den;
}

/// Integer power by binary exponentiation (never through exp/log, so negative bases stay exact).
template <PhaseScalar T>
T pow_int(const T& base, int exponent) {
    if (exponent < 0) {
        if (value_of(base) == 0.0) throw DomainError("division by zero in negative power");
        return constant_like(1.0, base) / pow_int(base, -exponent);
    }
    T result = constant_like(1.0, base);
    T factor = base;
    unsigned e = static_cast<unsigned>(exponent);
    while (e != 0) {
        if (e & 1u) result = result * factor;
        e >>= 1u;
        if (e != 0) factor = factor * factor;
    }
    return result;
}

inline Jet sqrt(const Jet& x) {
    if (!(x.value() > 0.0)) throw DomainError("square root of non-positive value");
    const double s = std::sqrt(x.value());
    return Jet::chain(s, 0.5 / s, x);
}

inline double sqrt(double x) {
    if (x < 0.0) throw DomainError("square root of negative value");
    return std::sqrt(x);
}

}  // namespace sl2
