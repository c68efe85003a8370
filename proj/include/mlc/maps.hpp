#pragma once

#include <vector>

#include "mlc/trigpoly.hpp"

namespace mlc {

/// The three circle-map families: f(z) = 2z mod 1, the rigid rotation
/// f(z) = z + alpha mod 1, and the perturbed rotation
/// f(z) = z + alpha + eps * p(z) mod 1 (orientation-preserving diffeomorphism;
/// f' = 1 + eps p' > 0 is verified on a grid at construction).
struct MapSpec {
    enum class Kind { doubling, rotation, perturbed };
    Kind kind = Kind::doubling;
    double alpha = 0.0;
    double eps = 0.0;
    TrigPoly p;

    static MapSpec doubling();
    static MapSpec rotation(double alpha);
    static MapSpec perturbed(double alpha, double eps, TrigPoly p);
};

double eval_map(const MapSpec& m, double z);
double map_derivative(const MapSpec& m, double z);
/// Lift F: R -> R with F(t) - t periodic (F(t) = 2t for doubling).
double map_lift(const MapSpec& m, double t);
long double map_lift_l(const MapSpec& m, long double t);

/// All y in [0,1) with f(y) = x, in increasing order. Doubling returns
/// {x/2, x/2 + 1/2}; rotations invert exactly; perturbed rotations bisect the
/// monotone lift to tolerance 1e-14.
std::vector<double> preimages(const MapSpec& m, double x);

/// Birkhoff average (F^n(z0) - z0)/n of the lift; error O(1/n_iter).
/// Rejects the doubling map (not a homeomorphism-compatible query).
double rotation_number(const MapSpec& m, long n_iter, double z0 = 0.0);

}  // namespace mlc
