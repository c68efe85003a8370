#include "mlc/cohomology.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mlc/circle.hpp"

namespace mlc {

ObstructionError::ObstructionError(double m)
    : std::runtime_error("coboundary obstruction: mean(tau) = " + std::to_string(m) +
                         " is nonzero (constants are not coboundaries)"),
      mean(m) {}

ResonanceError::ResonanceError(int n, double d)
    : std::runtime_error("near-resonant divisor |e^{2 pi i n alpha} - 1| = " +
                         std::to_string(d) + " at mode n = " + std::to_string(n)),
      mode(n),
      divisor(d) {}

CoboundarySolution solve_rotation_coboundary(const TrigPoly& tau, double alpha) {
    if (std::fabs(tau.mean()) > 1e-12) throw ObstructionError(tau.mean());
    CoboundarySolution sol;
    sol.alpha = alpha;
    sol.smallest_divisor = std::numeric_limits<double>::infinity();
    TrigPoly w;
    for (int n = 1; n <= tau.max_mode(); ++n) {
        const std::complex<double> tn = tau.coeff(n);
        if (tn == std::complex<double>(0.0, 0.0)) continue;
        const double th = kTwoPi * n * alpha;
        const std::complex<double> div(std::cos(th) - 1.0, std::sin(th));
        const double mag = std::abs(div);
        if (mag < 1e-13) throw ResonanceError(n, mag);
        sol.smallest_divisor = std::min(sol.smallest_divisor, mag);
        w.set_coeff(n, -tn / div);
    }
    if (!std::isfinite(sol.smallest_divisor)) sol.smallest_divisor = 0.0;
    sol.w = w;
    sol.u = w.derivative();
    sol.residual = verify_coboundary(sol.w, tau, MapSpec::rotation(alpha), 4096);
    return sol;
}

double verify_coboundary(const TrigPoly& w, const TrigPoly& tau, const MapSpec& f, int M) {
    double r = 0.0;
    for (int i = 0; i < M; ++i) {
        const double z = static_cast<double>(i) / M;
        r = std::max(r, std::fabs(w(eval_map(f, z)) - w(z) + tau(z)));
    }
    return r;
}

double graph_invariance_residual(const PeriodicFunction& u, const MapSpec& f,
                                 const TrigPoly& tau, int M) {
    const TrigPoly dtau = tau.derivative();
    double r = 0.0;
    for (int i = 0; i < M; ++i) {
        const double z = static_cast<double>(i) / M;
        const double fp = map_derivative(f, z);
        if (!(fp > 0.0))
            throw std::invalid_argument("graph_invariance_residual: f' must be positive");
        r = std::max(r, std::fabs(fn_eval(u, eval_map(f, z)) -
                                  (fn_eval(u, z) - dtau(z)) / fp));
    }
    return r;
}

}  // namespace mlc
