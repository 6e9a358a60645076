#pragma once

// Charts on the constant-curvature spaces x0^2 + kappa x^2 = 1 (sphere for
// kappa > 0, hyperbolic space for kappa < 0) and on the Darboux III space
// ds^2 = (a + q^2) dq^2.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sl2/autodiff.hpp"
#include "sl2/errors.hpp"
#include "sl2/phase_space.hpp"

namespace sl2::geometry {

struct AmbientPoint {
    double x0 = 1.0;
    std::vector<double> x;
};

/// x0^2 + kappa x^2 - 1, zero on the quadric.
inline double constraint_residual(const AmbientPoint& a, double kappa) {
    double x2 = 0.0;
    for (double v : a.x) x2 += v * v;
    return a.x0 * a.x0 + kappa * x2 - 1.0;
}

inline double squared_norm(std::span<const double> q) {
    double s = 0.0;
    for (double v : q) s += v * v;
    return s;
}

/// Stereographic projection with pole (-1, 0).
inline AmbientPoint poincare_to_ambient(std::span<const double> q, double kappa) {
    const double den = 1.0 + kappa * squared_norm(q);
    if (!(den > 0.0)) throw DomainError("Poincare chart requires 1 + kappa q^2 > 0");
    AmbientPoint a;
    a.x0 = (1.0 - kappa * squared_norm(q)) / den;
    a.x.reserve(q.size());
    for (double v : q) a.x.push_back(2.0 * v / den);
    return a;
}

/// Central projection with pole at the ambient origin.
inline AmbientPoint beltrami_to_ambient(std::span<const double> q, double kappa) {
    const double den = 1.0 + kappa * squared_norm(q);
    if (!(den > 0.0)) throw DomainError("Beltrami chart requires 1 + kappa q^2 > 0");
    const double mu = 1.0 / std::sqrt(den);
    AmbientPoint a;
    a.x0 = mu;
    a.x.reserve(q.size());
    for (double v : q) a.x.push_back(mu * v);
    return a;
}

inline std::vector<double> ambient_to_poincare(const AmbientPoint& a) {
    const double den = 1.0 + a.x0;
    if (den == 0.0) throw DomainError("Poincare chart excludes the projection pole x0 = -1");
    std::vector<double> q;
    q.reserve(a.x.size());
    for (double v : a.x) q.push_back(v / den);
    return q;
}

inline std::vector<double> ambient_to_beltrami(const AmbientPoint& a) {
    if (!(a.x0 > 0.0)) throw DomainError("Beltrami chart requires x0 > 0");
    std::vector<double> q;
    q.reserve(a.x.size());
    for (double v : a.x) q.push_back(v / a.x0);
    return q;
}

enum class Chart { poincare, beltrami, darboux };

/// Change of chart on the same constant-curvature space, i.e. the composition
/// of one projection with the inverse of the other, written in closed form so
/// it can be differentiated with jets.
///   poincare -> beltrami:  Q = 2q / (1 - kappa q^2)
///   beltrami -> poincare:  q = Q / (1 + sqrt(1 + kappa Q^2))
template <PhaseScalar T>
std::vector<T> chart_transfer(std::span<const T> q, Chart from, Chart to, double kappa) {
    expects(from != Chart::darboux && to != Chart::darboux,
            "chart_transfer only relates the Poincare and Beltrami charts");
    std::vector<T> out(q.begin(), q.end());
    if (from == to || q.empty()) return out;
    const T q2 = dot(q, q);
    const double s = kappa * value_of(q2);
    if (from == Chart::poincare) {
        if (!(1.0 + s > 0.0)) throw DomainError("Poincare chart requires 1 + kappa q^2 > 0");
        if (!(1.0 - s > 0.0))
            throw DomainError("image lies outside the Beltrami chart (requires kappa q^2 < 1)");
        const T factor = 2.0 / (1.0 - kappa * q2);
        for (auto& v : out) v = factor * v;
    } else {
        if (!(1.0 + s > 0.0)) throw DomainError("Beltrami chart requires 1 + kappa q^2 > 0");
        const T factor = 1.0 / (1.0 + sqrt(1.0 + kappa * q2));
        for (auto& v : out) v = factor * v;
    }
    return out;
}

/// Map from the Poincare coordinates used by the Poincare Hamiltonians with
/// parameter kappa/4 to Beltrami coordinates on the space of curvature kappa.
///
/// The Poincare kinetic term (1 + k q^2)^2 p^2 / 2 is the geodesic flow of
/// dq^2 / (1 + k q^2)^2, a quarter of the stereographic metric, i.e. the
/// stereographic chart u = q/2 of the space with curvature 4k. The result
/// simplifies to Q = q / (1 - (kappa/4) q^2).
template <PhaseScalar T>
std::vector<T> poincare_hamiltonian_to_beltrami(std::span<const T> q, double kappa) {
    std::vector<T> u(q.begin(), q.end());
    for (auto& v : u) v = 0.5 * v;
    return chart_transfer<T>(u, Chart::poincare, Chart::beltrami, kappa);
}

struct LiftedState {
    std::vector<double> q;
    std::vector<double> p;
};

/// Canonical extension of a point map q -> Q(q): P = (dQ/dq)^{-T} p.
///
/// `map` must accept `std::span<const Jet>` and return a vector of jets; the
/// Jacobian is read from the jets.
template <class Map>
LiftedState cotangent_lift(std::span<const double> q, std::span<const double> p, Map&& map) {
    const std::size_t n = q.size();
    expects(n == p.size() && n > 0 && n <= kMaxJetDim, "cotangent_lift: bad dimensions");
    std::vector<Jet> qj;
    qj.reserve(n);
    for (std::size_t i = 0; i < n; ++i) qj.push_back(Jet::variable(q[i], n, i));
    const std::vector<Jet> image = map(std::span<const Jet>(qj));
    expects(image.size() == n, "cotangent_lift: map must preserve dimension");

    Eigen::MatrixXd jac(n, n);
    LiftedState out;
    out.q.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.q.push_back(image[i].value());
        for (std::size_t j = 0; j < n; ++j) jac(i, j) = image[i].d(j);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac.transpose());
    if (!lu.isInvertible()) throw DomainError("cotangent_lift: singular chart Jacobian");
    const Eigen::VectorXd pv = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd pp = lu.solve(pv);
    out.p.assign(pp.data(), pp.data() + n);
    return out;
}

/// Geodesic distance from the chart origin (1, 0) to an ambient point:
/// tan^2(sqrt(k) r)/k = x^2/x0^2, continued to tanh for k < 0.
inline double geodesic_distance_from_origin(const AmbientPoint& a, double kappa) {
    const double xn = std::sqrt(squared_norm(a.x));
    if (kappa > 0.0 && a.x0 <= 0.0) {
        // at or beyond the equator; atan2 keeps the branch r in [pi/(2 sqrt k), pi/sqrt k]
        const double s = std::sqrt(kappa);
        return std::atan2(s * xn, a.x0) / s;
    }
    if (a.x0 == 0.0) throw DomainError("geodesic distance undefined at x0 = 0");
    const double t = xn / std::abs(a.x0);
    const double kt2 = kappa * t * t;
    if (std::abs(kt2) < 1e-8) return t * (1.0 - kt2 / 3.0 + kt2 * kt2 / 5.0);
    if (kappa > 0.0) {
        const double s = std::sqrt(kappa);
        return std::atan(s * t) / s;
    }
    const double s = std::sqrt(-kappa);
    if (s * t >= 1.0) throw DomainError("point beyond the hyperbolic model: x^2/x0^2 >= 1/(-kappa)");
    return std::atanh(s * t) / s;
}

/// Scalar curvature of ds^2 = (a + q^2) dq^2 in N = q.size() dimensions.
inline double darboux_scalar_curvature(std::span<const double> q, double a) {
    expects(a > 0.0, "Darboux III parameter a must be positive");
    const double n = static_cast<double>(q.size());
    const double q2 = squared_norm(q);
    const double f = a + q2;
    return -(n - 1.0) * (3.0 * (n - 2.0) * q2 + 2.0 * a * n) / (f * f * f);
}

struct ChartParams {
    double kappa = 0.0;
    double a = 1.0;
};

/// Metric tensor of the chart at q, as displayed for each chart.
inline Eigen::MatrixXd metric_eval(Chart chart, std::span<const double> q, const ChartParams& params) {
    const auto n = static_cast<Eigen::Index>(q.size());
    const Eigen::Map<const Eigen::VectorXd> qv(q.data(), n);
    const double q2 = squared_norm(q);
    switch (chart) {
        case Chart::poincare: {
            const double den = 1.0 + params.kappa * q2;
            if (!(den > 0.0)) throw DomainError("Poincare chart requires 1 + kappa q^2 > 0");
            return Eigen::MatrixXd::Identity(n, n) * (4.0 / (den * den));
        }
        case Chart::beltrami: {
            const double den = 1.0 + params.kappa * q2;
            if (!(den > 0.0)) throw DomainError("Beltrami chart requires 1 + kappa q^2 > 0");
            Eigen::MatrixXd g = den * Eigen::MatrixXd::Identity(n, n) - params.kappa * qv * qv.transpose();
            return g / (den * den);
        }
        case Chart::darboux:
            expects(params.a > 0.0, "Darboux III parameter a must be positive");
            return Eigen::MatrixXd::Identity(n, n) * (params.a + q2);
    }
    throw ContractViolation("unknown chart");
}

/// Constant c with (kinetic Hamiltonian) = c * p^T g^{-1} p / 2 for each chart.
/// The Poincare and Darboux kinetic terms are normalised differently from
/// their displayed metrics.
inline double kinetic_normalization(Chart chart) {
    switch (chart) {
        case Chart::poincare: return 4.0;
        case Chart::beltrami: return 1.0;
        case Chart::darboux: return 2.0;
    }
    throw ContractViolation("unknown chart");
}

}  // namespace sl2::geometry
