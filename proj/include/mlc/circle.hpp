#pragma once

#include <cmath>

namespace mlc {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Reduce a lift to its fractional part in [0,1). Handles the value==1
/// roundoff case (floor of 0.9999999999999999 + eps) explicitly.
inline double circle_reduce(double lift) {
    double v = lift - std::floor(lift);
    if (v >= 1.0) v -= 1.0;
    if (v < 0.0) v += 1.0;
    return v;
}

/// A point of the circle S^1 = [0,1), stored as the fractional part of a lift.
struct CirclePoint {
    double value = 0.0;

    CirclePoint() = default;
    explicit CirclePoint(double lift) : value(circle_reduce(lift)) {}

    /// The representative of this class nearest to the real number t.
    double lift_near(double t) const {
        return value + std::round(t - value);
    }
};

/// Wraparound distance on the circle; symmetric, at most 1/2.
inline double wrap_distance(double a, double b) {
    double d = std::fabs(circle_reduce(a) - circle_reduce(b));
    return d > 0.5 ? 1.0 - d : d;
}

/// Equality of circle points up to wraparound, default tolerance 1e-12.
inline bool circle_close(double a, double b, double tol = 1e-12) {
    return wrap_distance(a, b) <= tol;
}

}  // namespace mlc
