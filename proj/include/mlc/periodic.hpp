#pragma once

#include <variant>

#include "mlc/piecewise.hpp"
#include "mlc/trigpoly.hpp"

namespace mlc {

/// The two periodic-function representations used throughout: spectral
/// (TrigPoly) for smooth data, sampled (PiecewiseGrid) for subactions and
/// other piecewise-smooth objects.
using PeriodicFunction = std::variant<TrigPoly, PiecewiseGrid>;

double fn_eval(const PeriodicFunction& g, double z);
long double fn_eval_l(const PeriodicFunction& g, long double z);
double fn_derivative(const PeriodicFunction& g, double z);
double fn_derivative(const PeriodicFunction& g, double z, PiecewiseGrid::Side side);
double fn_antiderivative(const PeriodicFunction& g, double z);
double fn_mean(const PeriodicFunction& g);
double fn_sup_bound(const PeriodicFunction& g);

}  // namespace mlc
