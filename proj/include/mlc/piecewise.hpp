#pragma once

#include <functional>
#include <vector>

namespace mlc {

/// Periodic function represented by M uniform samples at z_j = j/M together
/// with a sorted list of breakpoints where one-sided derivatives may differ.
/// Between consecutive breakpoints the function is evaluated by local Lagrange
/// interpolation of degree 4 (5 nearest samples); stencils never cross a
/// breakpoint, so the interpolation order survives at the kinks.
class PiecewiseGrid {
public:
    enum class Side { left, right };

    explicit PiecewiseGrid(std::vector<double> samples,
                           std::vector<double> breakpoints = {});

    static PiecewiseGrid sample(const std::function<double(double)>& f, int M,
                                std::vector<double> breakpoints = {});

    int size() const { return static_cast<int>(s_.size()); }
    const std::vector<double>& samples() const { return s_; }
    const std::vector<double>& breakpoints() const { return bp_; }

    /// Evaluate at z (right-limit convention when z is a breakpoint).
    double operator()(double z) const;
    long double eval_l(long double z) const;

    /// Derivative of the local interpolant. Throws std::invalid_argument when
    /// z coincides with a breakpoint (tolerance 1e-12) and no side is given.
    double derivative(double z) const;
    double derivative(double z, Side side) const;

    /// Periodic trapezoid average of the samples.
    double mean() const;
    double sup_bound() const;

    /// Lift primitive with value 0 at z = 0: integral of the interpolant from
    /// 0 to z (piecewise Gauss-Legendre, exact for the degree-4 interpolant),
    /// plus mean * floor-term so the lift is consistent across periods.
    double antiderivative_at(double z) const;

private:
    std::vector<double> s_;
    std::vector<double> bp_;    // sorted, in [0,1)
    std::vector<double> cum_;   // cumulative integral at nodes, cum_[0] = 0
    void build_cumulative();
    // Index window [lo,hi] of samples usable around z without crossing a
    // breakpoint; positions reported in the lift chart nearest z.
    void stencil(double z, Side side, int& lo, int& hi, double& base) const;
    double eval_stencil(double z, int lo, int hi, double base, bool deriv) const;
};

}  // namespace mlc
