#include "mlc/periodic.hpp"

namespace mlc {

double fn_eval(const PeriodicFunction& g, double z) {
    return std::visit([z](const auto& f) { return f(z); }, g);
}

long double fn_eval_l(const PeriodicFunction& g, long double z) {
    return std::visit([z](const auto& f) { return f.eval_l(z); }, g);
}

double fn_derivative(const PeriodicFunction& g, double z) {
    if (const auto* t = std::get_if<TrigPoly>(&g)) return t->derivative()(z);
    return std::get<PiecewiseGrid>(g).derivative(z);
}

double fn_derivative(const PeriodicFunction& g, double z, PiecewiseGrid::Side side) {
    if (const auto* t = std::get_if<TrigPoly>(&g)) return t->derivative()(z);
    return std::get<PiecewiseGrid>(g).derivative(z, side);
}

double fn_antiderivative(const PeriodicFunction& g, double z) {
    return std::visit([z](const auto& f) { return f.antiderivative_at(z); }, g);
}

double fn_mean(const PeriodicFunction& g) {
    return std::visit([](const auto& f) { return f.mean(); }, g);
}

double fn_sup_bound(const PeriodicFunction& g) {
    return std::visit([](const auto& f) { return f.sup_bound(); }, g);
}

}  // namespace mlc
