#pragma once

#include <stdexcept>

#include "mlc/maps.hpp"
#include "mlc/periodic.hpp"

namespace mlc {

/// The mean of tau is nonzero, so no coboundary exists (constants are the
/// obstruction). Carries the offending mean.
struct ObstructionError : std::runtime_error {
    double mean;
    explicit ObstructionError(double m);
};

/// A retained Fourier mode has |e^{2 pi i n alpha} - 1| below 1e-13: the
/// solve would amplify noise unboundedly.
struct ResonanceError : std::runtime_error {
    int mode;
    double divisor;
    ResonanceError(int n, double d);
};

struct CoboundarySolution {
    TrigPoly w;               // mean-zero solution of w(z+alpha) - w(z) = -tau(z)
    TrigPoly u;               // w'
    double residual = 0.0;    // max over a 4096-grid of |w(z+alpha) - w(z) + tau(z)|
    double smallest_divisor = 0.0;
    double alpha = 0.0;
};

/// Fourier small-divisor solve over the rigid rotation: w_n = -tau_n /
/// (e^{2 pi i n alpha} - 1), w_0 = 0. Requires |mean tau| <= 1e-12.
CoboundarySolution solve_rotation_coboundary(const TrigPoly& tau, double alpha);

/// max over an M-grid of |w(f(z)) - w(z) + tau(z)|; any map family.
double verify_coboundary(const TrigPoly& w, const TrigPoly& tau, const MapSpec& f, int M);

/// max over an M-grid of |u(f(z)) - (u(z) - tau'(z)) / f'(z)|, the residual
/// of graph invariance under F(z,s) = (f(z), (s - tau'(z))/f'(z)).
/// Requires f' > 0 on the grid.
double graph_invariance_residual(const PeriodicFunction& u, const MapSpec& f,
                                 const TrigPoly& tau, int M);

}  // namespace mlc
