// The curved Garnier system on the hyperbolic plane (Beltrami chart):
// the quartic perturbation keeps the universal integrals but breaks I_1.

#include <iostream>

#include "sl2/sl2.hpp"

int main() {
    using namespace sl2;
    catalog::SystemSpec spec{catalog::Kind::beltrami_osc, 3, 1.0, -0.5, 1.0, {0.1}};

    verify::VerifyOptions opt;
    opt.samples = 100;
    opt.request_ms = true;
    const auto rep = verify::verify_system(spec, opt);
    std::cout << "QMS: " << verify::verdict_name(rep.verdict_qms) << "  MS: " << verify::verdict_name(rep.verdict_ms)
              << "  rank " << rep.rank_qms.rank << "/" << rep.target_rank_qms << "\n";

    const PhaseState s0({0.3, -0.2, 0.1}, {0.1, 0.4, -0.3});
    std::vector<Observable> watch = catalog::universal_integrals(spec.n);
    watch.push_back(catalog::candidate_integral_observable(spec, 1));
    integrate::IntegrateOptions iopt;
    iopt.h = 1e-2;
    iopt.t_end = 20.0;
    const auto traj = integrate::integrate(spec, s0, watch, iopt);
    std::cout << "over t in [0, 20]:\n";
    for (std::size_t w = 0; w < watch.size(); ++w)
        std::cout << "  max drift " << traj.watch_names[w] << " = " << traj.max_drift[w] << "\n";
}
