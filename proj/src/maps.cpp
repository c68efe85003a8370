#include "mlc/maps.hpp"

#include <cmath>
#include <stdexcept>

#include "mlc/circle.hpp"

namespace mlc {

MapSpec MapSpec::doubling() { return MapSpec{}; }

MapSpec MapSpec::rotation(double alpha) {
    MapSpec m;
    m.kind = Kind::rotation;
    m.alpha = alpha;
    return m;
}

MapSpec MapSpec::perturbed(double alpha, double eps, TrigPoly p) {
    MapSpec m;
    m.kind = Kind::perturbed;
    m.alpha = alpha;
    m.eps = eps;
    m.p = std::move(p);
    const TrigPoly dp = m.p.derivative();
    for (int j = 0; j < 4096; ++j) {
        const double z = j / 4096.0;
        if (1.0 + eps * dp(z) <= 0.0)
            throw std::invalid_argument(
                "MapSpec::perturbed: f' = 1 + eps p' vanishes; not a diffeomorphism");
    }
    return m;
}

double map_lift(const MapSpec& m, double t) {
    switch (m.kind) {
        case MapSpec::Kind::doubling: return 2.0 * t;
        case MapSpec::Kind::rotation: return t + m.alpha;
        case MapSpec::Kind::perturbed:
            return t + m.alpha + m.eps * m.p(circle_reduce(t));
    }
    return t;
}

long double map_lift_l(const MapSpec& m, long double t) {
    switch (m.kind) {
        case MapSpec::Kind::doubling: return 2.0L * t;
        case MapSpec::Kind::rotation: return t + static_cast<long double>(m.alpha);
        case MapSpec::Kind::perturbed: {
            const long double frac = t - std::floor(static_cast<double>(t));
            return t + static_cast<long double>(m.alpha) +
                   static_cast<long double>(m.eps) * m.p.eval_l(frac);
        }
    }
    return t;
}

double eval_map(const MapSpec& m, double z) { return circle_reduce(map_lift(m, z)); }

double map_derivative(const MapSpec& m, double z) {
    switch (m.kind) {
        case MapSpec::Kind::doubling: return 2.0;
        case MapSpec::Kind::rotation: return 1.0;
        case MapSpec::Kind::perturbed: return 1.0 + m.eps * m.p.derivative()(z);
    }
    return 1.0;
}

std::vector<double> preimages(const MapSpec& m, double x) {
    const double xf = circle_reduce(x);
    switch (m.kind) {
        case MapSpec::Kind::doubling: {
            return {xf / 2.0, xf / 2.0 + 0.5};
        }
        case MapSpec::Kind::rotation: {
            return {circle_reduce(xf - m.alpha)};
        }
        case MapSpec::Kind::perturbed: {
            // Bisection on the monotone lift, bracketed around x - alpha.
            const double pad = std::fabs(m.eps) * m.p.sup_bound() + 1e-12;
            double lo = xf - m.alpha - pad;
            double hi = xf - m.alpha + pad;
            // Solve lift(y) = xf + s for the integer shift s that brackets.
            const double s = std::round(map_lift(m, 0.5 * (lo + hi)) - xf);
            auto g = [&](double y) { return map_lift(m, y) - xf - s; };
            double glo = g(lo), ghi = g(hi);
            if (glo > 0.0 || ghi < 0.0)
                throw std::runtime_error("preimages: lift failed to bracket (invalid MapSpec)");
            for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (g(mid) >= 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            (void)glo;
            (void)ghi;
            return {circle_reduce(0.5 * (lo + hi))};
        }
    }
    return {};
}

double rotation_number(const MapSpec& m, long n_iter, double z0) {
    if (m.kind == MapSpec::Kind::doubling)
        throw std::invalid_argument(
            "rotation_number: doubling map is not a homeomorphism-compatible query");
    if (n_iter < 1000)
        throw std::invalid_argument("rotation_number: need n_iter >= 1000");
    long double y = z0;
    for (long i = 0; i < n_iter; ++i) y = map_lift_l(m, y);
    return static_cast<double>((y - static_cast<long double>(z0)) / n_iter);
}

}  // namespace mlc
