#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mlc/quadrature.hpp"

namespace mlc {

/// Phase-space scan grid: N_y uniform points in [0,1) (endpoint excluded) by
/// N_eta uniform points in [eta_min, eta_max] (endpoints included).
struct ScanGrid {
    int n_y = 64;
    int n_eta = 64;
    double eta_min = -4.0;
    double eta_max = 4.0;

    double y_node(int i) const { return static_cast<double>(i) / n_y; }
    double eta_node(int j) const {
        return n_eta < 2 ? eta_min
                         : eta_min + (eta_max - eta_min) * j / (n_eta - 1);
    }
    double y_cell() const { return 1.0 / n_y; }
    double eta_cell() const { return (eta_max - eta_min) / (n_eta - 1); }
};

/// Geometric hbar ladder h0 * r^j, j = 0..count-1, r in (0,1).
struct HbarLadder {
    double h0 = 0.01;
    double ratio = 0.5;
    int count = 7;
    std::vector<double> values() const;
    static HbarLadder standard() { return {0.01, 0.5, 7}; }
};

struct ScanOptions {
    int threads = 0;
    /// Magnitude scale of phases stored as double data inside the ket
    /// (Lagrangian S samples, tau values under semiclassical coupling).
    /// Raises the per-cell roundoff floor by eps * scale / hbar.
    double phase_data_scale = 0.0;
};

/// Magnitudes |<phi_{y,eta}, Phi_hbar>| / (norm * norm) over the scan grid
/// and ladder, fitted decay exponents, and the thresholded support mask.
///
/// A cell's magnitude is the sup of the normalized pairing over three eta
/// subsamples spanning the cell (the definition asks for smallness uniformly
/// on a neighborhood, and the bra resolves eta far finer than the grid at
/// the small end of the ladder).
///
/// Slope fitting: over the 4 smallest hbar, using only points that exceed
/// 8x the per-cell quadrature roundoff floor. Cells with fewer than two
/// observable points have decay certified below the measurement floor and
/// carry the sentinel slope 1000 (non-support).
struct MicrosupportMap {
    ScanGrid grid;
    std::vector<double> hbars;                    // ladder order as given
    std::vector<std::vector<double>> magnitudes;  // [h][y * n_eta + eta]
    std::vector<std::vector<double>> floors;      // same layout
    std::vector<double> slopes;                   // [y * n_eta + eta]
    std::vector<std::uint8_t> support_mask;
    int argmax_y = 0, argmax_eta = 0;             // smallest-hbar slice
    long failed_cells = 0;

    static constexpr double slope_threshold = 2.0;
    static constexpr double slope_sentinel = 1000.0;

    std::size_t cell(int iy, int je) const {
        return static_cast<std::size_t>(iy) * grid.n_eta + je;
    }
};

/// Least-squares slope of log(value) against log(hbar) over the 4 smallest
/// ladder values; zeros floored at 1e-300. Requires >= 4 positive entries.
double decay_slope(const std::vector<double>& values, const std::vector<double>& hbars);

/// Scan the family over grid x ladder. The family must produce a state for
/// each ladder hbar. Slices failing with NodeCapError are recorded per cell
/// and excluded; a run with more than 1% failed cells throws.
MicrosupportMap correlation_scan(const std::function<QuantumState(double)>& family,
                                 const ScanGrid& grid, const HbarLadder& ladder,
                                 const QuadPolicy& policy, const ScanOptions& opts = {});

/// Predicted micro-support: a finite point set or the graph of a function.
struct PredictedSupport {
    std::vector<std::pair<double, double>> points;   // (y, eta)
    std::optional<PeriodicFunction> graph;

    static PredictedSupport from_points(std::vector<std::pair<double, double>> pts);
    static PredictedSupport from_graph(PeriodicFunction g);
    bool is_graph() const { return graph.has_value(); }
};

/// Push a predicted support through one evolution step.
/// Point source (x, xi): the preimages y_i of x paired with
/// eta_i = f'(y_i) xi + tau'(y_i) (the inverse branches of the skew product).
/// Graph source u: the graph of y -> u(f(y)) f'(y) + tau'(y), which equals u
/// exactly when the cohomological equation holds.
PredictedSupport predict_support(const EvolutionSpec& spec, const PredictedSupport& source,
                                 double lambda);

struct SupportMatch {
    double pred_to_mask_cells = 0.0;  // max over predicted of distance to nearest mask cell
    double mask_to_pred_cells = 0.0;  // max over mask cells of distance to predicted set
    double hausdorff_cells = 0.0;
    bool hit = false;                 // both directions <= 1.5 cells
};

/// Distances are Euclidean in grid-cell units with periodic y.
SupportMatch support_match(const MicrosupportMap& map, const PredictedSupport& predicted,
                           const ScanGrid& grid);

}  // namespace mlc
