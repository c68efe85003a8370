#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "mlc/maps.hpp"
#include "mlc/periodic.hpp"
#include "mlc/piecewise.hpp"

namespace mlc {

/// Skew product F(z,s) = (f(z), lambda s + A(z)) over a circle map f.
struct SkewSpec {
    MapSpec f = MapSpec::doubling();
    double lambda = 0.5;
    PeriodicFunction A = TrigPoly{};
};

std::pair<double, double> skew_forward(const SkewSpec& spec, double z, double s);

/// The two inverse branches for the doubling base:
/// G_i(y, r) = (tau_i(y), (r - A(tau_i(y))) / lambda). Throws for other maps.
std::array<std::pair<double, double>, 2> skew_inverse_branches(const SkewSpec& spec,
                                                               double y, double r);

/// Inverse branches of the doubling map: tau_1(x) = x/2, tau_2(x) = x/2 + 1/2.
double inverse_branch(int i, double x);
/// pi(x): the branch whose image contains x; the boundary 1/2 goes to branch 2.
int branch_index(double x);

/// Finite symbol prefix over {1,2}.
struct SymbolSequence {
    std::vector<std::uint8_t> digits;  // each 1 or 2
    static SymbolSequence constant(int digit, int length);
    bool operator<(const SymbolSequence& o) const;  // lexicographic, equal length
    bool operator==(const SymbolSequence& o) const { return digits == o.digits; }
};

struct TsujiiResult {
    double value = 0.0;       // partial sum through k = K-1
    double tail_bound = 0.0;  // lambda^K sup|A| / (1 - lambda)
};

/// s(x,a) = sum_k lambda^k A((tau_{a_k} o ... o tau_{a_0})(x)), truncated at
/// the prefix length.
TsujiiResult tsujii_series(const SkewSpec& spec, double x, const SymbolSequence& a);

/// max over all 2^K prefixes of the truncated series, by depth-K recursion
/// over the preimage tree. K <= 26.
double sup_over_sequences_tree(const SkewSpec& spec, double x, int K);
/// Same quantity through a memoized value function on an M-grid.
double sup_over_sequences_grid(const SkewSpec& spec, double x, int K, int M);

/// W(x,a) = s(x,a) - s(xbar,a) at matched depth.
double involution_kernel(const SkewSpec& spec, double x, const SymbolSequence& a, double xbar);

struct SubactionSolution {
    PiecewiseGrid b;                             // the subaction, with breakpoints
    double bellman_residual = 0.0;
    int iterations = 0;
    std::vector<std::uint8_t> maximizing_branch; // per grid node, 1 or 2
    double contraction_ratio = 0.0;              // median of update-norm ratios
    bool converged = false;
};

/// Value iteration for the Bellman fixed point
/// b(z) = max_{f(y)=z} { lambda b(y) + A(y) } on an M-grid, from b = 0, with
/// degree-4 interpolation at off-grid preimages. Ties break toward branch 1.
/// After convergence the branch-switch points are refined to sub-grid
/// accuracy (bisection of the branch-value crossing), the forward orbit of
/// each switch point is added as induced breakpoints, and the iteration is
/// re-run with breakpoint-respecting stencils.
SubactionSolution solve_subaction(const SkewSpec& spec, int M, double tol, int max_iter);

struct TwistReport {
    bool holds = false;
    double min_margin = 0.0;
    double witness_x = 0.0;
    std::size_t witness_pair = 0;
    long skipped_cells = 0;  // finite-difference straddled a breakpoint of A
};

/// Checks d/dx s(x,a) - d/dx s(x,b) > 0 over grid x pairs (a < b), by central
/// finite differences of the truncated series with step h_fd.
TwistReport twist_check(const SkewSpec& spec, const std::vector<double>& x_grid,
                        const std::vector<std::pair<SymbolSequence, SymbolSequence>>& pairs,
                        int K, double h_fd);

struct CoboundaryReport {
    double max_residual_se = 0.0;    // everywhere-residual of the coboundary equation
    double max_gap = 0.0;            // max over grid of the min-over-branches gap
    double mean_gap = 0.0;
    double max_offbranch_gap = 0.0;  // max over grid of the max-over-branches gap
};

/// For the doubling base: max over the grid of
/// |u(f(z)) - lambda u(z) + (1/2) tau'(z)| plus, per grid point, the Bellman
/// gap min_i |u(z) - (lambda u(y_i) + A(y_i))| over the preimages y_i with
/// A = -(1/2) tau'. For diffeomorphisms: max |u(z) - u(f(z)) f'(z) - tau'(z)|.
CoboundaryReport coboundary_residual(const PeriodicFunction& u, const TrigPoly& tau,
                                     const MapSpec& f, double lambda, int M);

}  // namespace mlc
