#pragma once

/**
 * Time integration of Hamilton's equations
 *
 *     dq/dt =  dH/dp,     dp/dt = -dH/dq
 *
 * with the implicit midpoint rule. The curved kinetic terms couple q and p,
 * so splitting methods do not apply; the midpoint rule is symplectic for any
 * Hamiltonian and conserves quadratic invariants exactly.
 *
 * An adaptive Dormand-Prince run (Boost.Odeint) is provided as an
 * independent reference for tests.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "sl2/catalog.hpp"
#include "sl2/errors.hpp"
#include "sl2/phase_space.hpp"

namespace sl2::integrate {

/// Phase velocity (dH/dp, -dH/dq) as a flat 2N vector.
inline std::vector<double> hamilton_rhs(const Observable& hamiltonian, const PhaseState& s) {
    const Jet h = hamiltonian.jet(s);
    const std::size_t n = s.dim();
    expects(h.dim() == 2 * n, "Hamiltonian jet has the wrong dimension");
    std::vector<double> v(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = h.d(n + i);
        v[n + i] = -h.d(i);
    }
    return v;
}

inline std::vector<double> hamilton_rhs(const catalog::SystemSpec& spec, const PhaseState& s) {
    return hamilton_rhs(catalog::hamiltonian_observable(spec), s);
}

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 25;
};

namespace detail {

inline Eigen::VectorXd rhs_vec(const Observable& h, const Eigen::VectorXd& z) {
    const std::vector<double> v =
        hamilton_rhs(h, PhaseState::from_flat(std::span<const double>(z.data(), static_cast<std::size_t>(z.size()))));
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Central-difference Jacobian of the phase velocity.
inline Eigen::MatrixXd rhs_jacobian(const Observable& h, const Eigen::VectorXd& z) {
    const Eigen::Index m = z.size();
    Eigen::MatrixXd jac(m, m);
    Eigen::VectorXd zp = z, zm = z;
    for (Eigen::Index j = 0; j < m; ++j) {
        const double step = 1e-6 * std::max(1.0, std::abs(z[j]));
        zp[j] = z[j] + step;
        zm[j] = z[j] - step;
        jac.col(j) = (rhs_vec(h, zp) - rhs_vec(h, zm)) / (2.0 * step);
        zp[j] = z[j];
        zm[j] = z[j];
    }
    return jac;
}

}  // namespace detail

/// One implicit midpoint step z1 = z0 + h f((z0 + z1)/2), solved by damped
/// Newton iteration with a finite-difference Jacobian. Negative h steps
/// backwards in time.
///
/// Throws StepFailure when Newton does not converge in max_iter iterations and
/// DomainError when the iteration cannot stay inside the chart domain.
inline PhaseState implicit_midpoint_step(const Observable& hamiltonian, const PhaseState& s, double h,
                                         const NewtonOptions& opt = {}) {
    expects(h != 0.0 && std::isfinite(h), "step size must be finite and nonzero");
    const std::vector<double> flat = s.flat();
    const Eigen::Index m = static_cast<Eigen::Index>(flat.size());
    const Eigen::VectorXd z0 = Eigen::Map<const Eigen::VectorXd>(flat.data(), m);

    const Eigen::VectorXd f0 = detail::rhs_vec(hamiltonian, z0);
    if (f0.lpNorm<Eigen::Infinity>() == 0.0) return s;  // fixed point

    Eigen::VectorXd z1 = z0 + h * f0;
    auto residual = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
        if (!z.allFinite()) throw StepFailure("implicit midpoint: Newton iterate overflowed", 0.0);
        return z - z0 - h * detail::rhs_vec(hamiltonian, 0.5 * (z0 + z));
    };

    Eigen::VectorXd r;
    try {
        r = residual(z1);
    } catch (const std::runtime_error&) {
        z1 = z0;  // explicit predictor left the domain or overflowed; start from the current state
        r = residual(z1);
    }
    const Eigen::MatrixXd jac =
        Eigen::MatrixXd::Identity(m, m) - 0.5 * h * detail::rhs_jacobian(hamiltonian, 0.5 * (z0 + z1));
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);

    for (int iter = 0; iter < opt.max_iter; ++iter) {
        const Eigen::VectorXd delta = -lu.solve(r);
        const double delta_norm = delta.lpNorm<Eigen::Infinity>();
        const double r_norm = r.lpNorm<Eigen::Infinity>();
        double lambda = 1.0;
        Eigen::VectorXd trial, r_trial;
        bool accepted = false;
        for (int damp = 0; damp < 10; ++damp, lambda *= 0.5) {
            trial = z1 + lambda * delta;
            try {
                r_trial = residual(trial);
            } catch (const DomainError&) {
                continue;
            } catch (const StepFailure&) {
                continue;
            }
            const bool tiny = lambda * delta_norm <= opt.tol * (1.0 + trial.lpNorm<Eigen::Infinity>());
            if (tiny || r_trial.lpNorm<Eigen::Infinity>() <= r_norm || damp == 9) {
                accepted = true;
                break;
            }
        }
        if (!accepted) throw DomainError("Newton iteration left the chart domain");
        const double update = lambda * delta_norm;
        z1 = trial;
        r = r_trial;
        if (update <= opt.tol * (1.0 + z1.lpNorm<Eigen::Infinity>()))
            return PhaseState::from_flat(std::span<const double>(z1.data(), static_cast<std::size_t>(m)));
    }
    throw StepFailure("implicit midpoint: Newton did not converge in " + std::to_string(opt.max_iter) + " iterations",
                      0.0);
}

inline PhaseState implicit_midpoint_step(const catalog::SystemSpec& spec, const PhaseState& s, double h,
                                         const NewtonOptions& opt = {}) {
    return implicit_midpoint_step(catalog::hamiltonian_observable(spec), s, h, opt);
}

// ---------------------------------------------------------------------------
// Trajectories

enum class Status { ok, step_failure, domain_error };

struct Trajectory {
    std::vector<std::string> watch_names;
    std::vector<double> times;
    std::vector<PhaseState> states;
    std::vector<double> energy;               ///< H per stored row
    std::vector<std::vector<double>> values;  ///< [row][watch]
    std::vector<std::vector<double>> drift;   ///< [watch][row], |F(t) - F(0)| / (|F(0)| + 1)
    std::vector<double> max_drift;            ///< [watch], over every step, not only stored rows
    double max_energy_drift = 0.0;
    Status status = Status::ok;
    double failure_time = 0.0;
    std::string message;

    bool ok() const noexcept { return status == Status::ok; }
};

struct IntegrateOptions {
    double h = 1e-3;
    double t_end = 0.0;
    std::size_t stride = 1;  ///< store every stride-th step (the final state is always stored)
    NewtonOptions newton;
    int max_halvings = 5;
};

namespace detail {

inline double relative_drift(double now, double initial) { return std::abs(now - initial) / (std::abs(initial) + 1.0); }

inline PhaseState advance(const Observable& h, const PhaseState& s, double dt, const IntegrateOptions& opt,
                          int depth) {
    try {
        return implicit_midpoint_step(h, s, dt, opt.newton);
    } catch (const StepFailure&) {
        if (depth >= opt.max_halvings) throw;
    } catch (const DomainError&) {
        if (depth >= opt.max_halvings) throw;
    }
    const PhaseState half = advance(h, s, 0.5 * dt, opt, depth + 1);
    return advance(h, half, 0.5 * dt, opt, depth + 1);
}

class Recorder {
public:
    Recorder(Trajectory& traj, const Observable& h, const std::vector<Observable>& watch, const PhaseState& s0)
        : traj_(traj), h_(h), watch_(watch), h0_(h.value(s0)) {
        for (const auto& w : watch) {
            traj_.watch_names.push_back(w.name());
            f0_.push_back(w.value(s0));
        }
        traj_.drift.assign(watch.size(), {});
        traj_.max_drift.assign(watch.size(), 0.0);
    }

    /// Track drift at every step; store the row when `store` is set.
    void observe(double t, const PhaseState& s, bool store) {
        const double e = h_.value(s);
        traj_.max_energy_drift = std::max(traj_.max_energy_drift, relative_drift(e, h0_));
        std::vector<double> vals(watch_.size());
        for (std::size_t k = 0; k < watch_.size(); ++k) {
            vals[k] = watch_[k].value(s);
            traj_.max_drift[k] = std::max(traj_.max_drift[k], relative_drift(vals[k], f0_[k]));
        }
        if (!store) return;
        traj_.times.push_back(t);
        traj_.states.push_back(s);
        traj_.energy.push_back(e);
        for (std::size_t k = 0; k < watch_.size(); ++k) traj_.drift[k].push_back(relative_drift(vals[k], f0_[k]));
        traj_.values.push_back(std::move(vals));
    }

private:
    Trajectory& traj_;
    const Observable& h_;
    const std::vector<Observable>& watch_;
    double h0_;
    std::vector<double> f0_;
};

}  // namespace detail

/// Fixed-step implicit midpoint run from t = 0 to t_end, watching the given
/// integrals. A failing step is retried as two half steps, recursively up to
/// max_halvings times; after that the partial trajectory is returned with an
/// error status and the failure time.
inline Trajectory integrate(const Observable& hamiltonian, const PhaseState& s0, const std::vector<Observable>& watch,
                            const IntegrateOptions& opt) {
    expects(opt.h > 0.0 && std::isfinite(opt.h), "step size must be positive");
    expects(opt.t_end >= 0.0 && std::isfinite(opt.t_end), "t_end must be >= 0");
    expects(opt.stride >= 1, "stride must be >= 1");

    Trajectory traj;
    detail::Recorder rec(traj, hamiltonian, watch, s0);
    rec.observe(0.0, s0, true);

    const auto steps = static_cast<std::size_t>(std::ceil(opt.t_end / opt.h - 1e-9));
    PhaseState s = s0;
    double t = 0.0;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t_next = std::min(static_cast<double>(k) * opt.h, opt.t_end);
        try {
            s = detail::advance(hamiltonian, s, t_next - t, opt, 0);
        } catch (const StepFailure& e) {
            traj.status = Status::step_failure;
            traj.failure_time = t;
            traj.message = e.what();
            return traj;
        } catch (const DomainError& e) {
            traj.status = Status::domain_error;
            traj.failure_time = t;
            traj.message = e.what();
            return traj;
        }
        t = t_next;
        rec.observe(t, s, k % opt.stride == 0 || k == steps);
    }
    return traj;
}

inline Trajectory integrate(const catalog::SystemSpec& spec, const PhaseState& s0,
                            const std::vector<Observable>& watch, const IntegrateOptions& opt) {
    return integrate(catalog::hamiltonian_observable(spec), s0, watch, opt);
}

/// Adaptive Dormand-Prince 5(4) reference solution with absolute and relative
/// tolerance `tol`. With `output_times` empty every accepted step is recorded;
/// otherwise the dense output is sampled at those (increasing) times.
inline Trajectory rk_reference(const Observable& hamiltonian, const PhaseState& s0, double h0, double t_end,
                               double tol, std::span<const double> output_times = {},
                               const std::vector<Observable>& watch = {}) {
    namespace odeint = boost::numeric::odeint;
    using State = std::vector<double>;
    expects(h0 > 0.0 && t_end >= 0.0 && tol > 0.0, "rk_reference: bad step, horizon or tolerance");

    Trajectory traj;
    detail::Recorder rec(traj, hamiltonian, watch, s0);
    auto system = [&](const State& x, State& dxdt, double) {
        dxdt = hamilton_rhs(hamiltonian, PhaseState::from_flat(x));
    };
    auto observer = [&](const State& x, double t) { rec.observe(t, PhaseState::from_flat(x), true); };

    State x = s0.flat();
    double last_t = 0.0;
    auto tracking_observer = [&](const State& xs, double t) {
        last_t = t;
        observer(xs, t);
    };
    try {
        if (output_times.empty()) {
            if (t_end == 0.0) {
                rec.observe(0.0, s0, true);
                return traj;
            }
            auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>());
            odeint::integrate_adaptive(stepper, system, x, 0.0, t_end, h0, tracking_observer);
        } else {
            auto stepper = odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State>());
            std::vector<double> times(output_times.begin(), output_times.end());
            if (times.size() == 1) {
                rec.observe(times[0], s0, true);
                return traj;
            }
            odeint::integrate_times(stepper, system, x, times.begin(), times.end(), h0, tracking_observer);
        }
    } catch (const DomainError& e) {
        traj.status = Status::domain_error;
        traj.failure_time = last_t;
        traj.message = e.what();
    } catch (const std::runtime_error& e) {  // odeint step-adjustment / no-progress errors
        traj.status = Status::step_failure;
        traj.failure_time = last_t;
        traj.message = std::string("tolerance not achievable: ") + e.what();
    }
    return traj;
}

inline const char* status_name(Status s) {
    switch (s) {
        case Status::ok: return "ok";
        case Status::step_failure: return "step-failure";
        case Status::domain_error: return "domain-error";
    }
    return "?";
}

/// CSV with header t,q1..qN,p1..pN,H,<watched names>; 17 significant digits.
inline void write_csv(std::ostream& out, const Trajectory& traj) {
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().dim();
    out << "t";
    for (std::size_t i = 1; i <= n; ++i) out << ",q" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",p" << i;
    out << ",H";
    for (const auto& w : traj.watch_names) out << ',' << w;
    out << '\n';
    char buf[40];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (std::size_t r = 0; r < traj.times.size(); ++r) {
        put(traj.times[r]);
        for (double v : traj.states[r].q()) out << ',', put(v);
        for (double v : traj.states[r].p()) out << ',', put(v);
        out << ',';
        put(traj.energy[r]);
        for (double v : traj.values[r]) out << ',', put(v);
        out << '\n';
    }
}

}  // namespace sl2::integrate
