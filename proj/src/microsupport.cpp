#include "mlc/microsupport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mlc/circle.hpp"
#include "mlc/threading.hpp"

namespace mlc {

namespace {
constexpr long double kExpCut = 46.0L;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFloorKappa = 64.0;   // machine-noise multiplier
constexpr double kObservable = 8.0;    // observability factor over the floor
}  // namespace

std::vector<double> HbarLadder::values() const {
    if (count < 5) throw std::invalid_argument("HbarLadder: need at least 5 rungs (J >= 4)");
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("HbarLadder: ratio must lie in (0,1)");
    std::vector<double> v(count);
    double h = h0;
    for (int j = 0; j < count; ++j, h *= ratio) v[j] = h;
    return v;
}

double decay_slope(const std::vector<double>& values, const std::vector<double>& hbars) {
    if (values.size() != hbars.size() || values.size() < 4)
        throw std::invalid_argument("decay_slope: need >= 4 ladder points");
    // Smallest-4 subset; transient behavior at large hbar contaminates fits.
    std::vector<std::size_t> idx(hbars.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return hbars[a] < hbars[b]; });
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < 4; ++k) {
        const double x = std::log(hbars[idx[k]]);
        const double y = std::log(std::max(values[idx[k]], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (4.0 * sxy - sx * sy) / (4.0 * sxx - sx * sx);
}

namespace {

// Closed-form wavepacket bra evaluated at precomputed nodes; Gaussian-dead
// k-copies are skipped before any transcendental is touched.
struct BraAccum {
    std::complex<long double> dot{0.0L, 0.0L};
    long double bra_norm2 = 0.0L;
    long double env = 0.0L;
};

void accumulate_cell(double y, double eta, double hbar, double radius,
                     const std::vector<std::complex<long double>>& ket,
                     const std::vector<long double>& ket_abs, long n, BraAccum& out) {
    const long double inv_h = 1.0L / static_cast<long double>(hbar);
    const long double quarter = 0.25L * inv_h;
    const long double yl = y;
    const long double etal = eta;
    for (long j = 0; j < n; ++j) {
        const double z = static_cast<double>(j) / static_cast<double>(n);
        const int kmin = static_cast<int>(std::ceil(z - y - radius));
        const int kmax = static_cast<int>(std::floor(z - y + radius));
        std::complex<long double> bra(0.0L, 0.0L);
        for (int k = kmin; k <= kmax; ++k) {
            const long double t = static_cast<long double>(z) - k;
            const long double d = t - yl;
            const long double g = d * d * quarter;
            if (g > kExpCut) continue;
            const long double theta = etal * t * inv_h;
            const long double amp = std::exp(-g);
            bra += std::complex<long double>(amp * std::cos(theta), amp * std::sin(theta));
        }
        const long double mb = std::abs(bra);
        if (mb == 0.0L) continue;
        out.dot += std::conj(bra) * ket[j];
        out.bra_norm2 += mb * mb;
        out.env += mb * ket_abs[j];
    }
}

// The bra resolves eta to ~sqrt(hbar), far finer than the grid spacing at
// the small end of the ladder, while the micro-support definition asks for
// smallness uniformly on a neighborhood. Each cell therefore reports the
// sup of the pairing over eta-subsamples spanning its eta-interval; a
// support point anywhere in the cell stays within 1/6 cell of a subsample.
constexpr double kEtaSub[3] = {-1.0 / 3.0, 0.0, 1.0 / 3.0};

}  // namespace

MicrosupportMap correlation_scan(const std::function<QuantumState(double)>& family,
                                 const ScanGrid& grid, const HbarLadder& ladder,
                                 const QuadPolicy& policy, const ScanOptions& opts) {
    if (grid.n_y < 16 || grid.n_eta < 16)
        throw std::invalid_argument("correlation_scan: grid must be at least 16x16");
    const std::vector<double> hbars = ladder.values();
    const std::size_t cells = static_cast<std::size_t>(grid.n_y) * grid.n_eta;

    MicrosupportMap map;
    map.grid = grid;
    map.hbars = hbars;
    map.magnitudes.assign(hbars.size(), std::vector<double>(cells, 0.0));
    map.floors.assign(hbars.size(), std::vector<double>(cells, 0.0));
    map.slopes.assign(cells, 0.0);
    map.support_mask.assign(cells, 0);

    const double eta_bound = std::max(std::fabs(grid.eta_min), std::fabs(grid.eta_max));
    std::vector<std::uint8_t> failed(cells, 0);
    const int threads = resolve_threads(opts.threads);

    for (std::size_t ih = 0; ih < hbars.size(); ++ih) {
        const double hbar = hbars[ih];
        const QuantumState ket = family(hbar);
        if (ket.hbar() != hbar)
            throw std::invalid_argument("correlation_scan: family returned mismatched hbar");
        QuadPolicy slice = policy;
        slice.phase_scale_bound = policy.phase_scale_bound + eta_bound;
        long n = 0;
        try {
            n = node_count_periodic(slice, hbar);
        } catch (const NodeCapError&) {
            for (std::size_t c = 0; c < cells; ++c) failed[c] = 1;
            map.failed_cells += static_cast<long>(cells);
            continue;
        }
        std::vector<std::complex<long double>> ketv(n);
        std::vector<long double> keta(n);
        parallel_for(n, threads, [&](long j) {
            const std::complex<double> v = ket(static_cast<double>(j) / static_cast<double>(n));
            ketv[j] = std::complex<long double>(v.real(), v.imag());
            keta[j] = std::abs(ketv[j]);
        });
        long double knorm2 = 0.0L;
        for (long j = 0; j < n; ++j) knorm2 += keta[j] * keta[j];
        const long double h = 1.0L / static_cast<long double>(n);
        const long double ket_norm = std::sqrt(knorm2 * h);
        const double radius = truncation_radius(hbar);
        const double data_noise =
            kEps * (kFloorKappa + kObservable * opts.phase_data_scale / hbar);

        auto& mags = map.magnitudes[ih];
        auto& flrs = map.floors[ih];
        parallel_for(static_cast<long>(cells), threads, [&](long c) {
            const int iy = static_cast<int>(c) / grid.n_eta;
            const int je = static_cast<int>(c) % grid.n_eta;
            double best_mag = 0.0, best_flr = 0.0;
            for (double sub : kEtaSub) {
                BraAccum acc;
                accumulate_cell(grid.y_node(iy), grid.eta_node(je) + sub * grid.eta_cell(),
                                hbar, radius, ketv, keta, n, acc);
                const long double bra_norm = std::sqrt(acc.bra_norm2 * h);
                const long double scale = bra_norm * ket_norm;
                if (scale == 0.0L) continue;
                const double m = static_cast<double>(std::abs(acc.dot) * h / scale);
                const double fl = static_cast<double>(acc.env * h / scale) * data_noise;
                if (m > best_mag) best_mag = m;
                best_flr = std::max(best_flr, fl);
            }
            mags[c] = best_mag;
            flrs[c] = best_flr;
        });
    }

    // Regression over the 4 smallest ladder rungs, floor-aware.
    std::vector<std::size_t> order(hbars.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return hbars[a] < hbars[b]; });
    for (std::size_t c = 0; c < cells; ++c) {
        if (failed[c]) {
            map.slopes[c] = MicrosupportMap::slope_sentinel;
            continue;
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int npts = 0;
        for (int k = 0; k < 4 && k < static_cast<int>(order.size()); ++k) {
            const std::size_t ih = order[k];
            const double m = map.magnitudes[ih][c];
            const double fl = map.floors[ih][c];
            if (m <= kObservable * fl || m <= 0.0) continue;
            const double x = std::log(hbars[ih]);
            const double y = std::log(m);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++npts;
        }
        if (npts < 2) {
            // Correlations sit below the certification floor of the
            // quadrature on (nearly) the whole regression window: the decay
            // exceeds anything measurable, certified non-support.
            map.slopes[c] = MicrosupportMap::slope_sentinel;
        } else {
            map.slopes[c] = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
        }
        map.support_mask[c] = map.slopes[c] < MicrosupportMap::slope_threshold ? 1 : 0;
    }
    for (std::size_t c = 0; c < cells; ++c)
        if (failed[c]) map.support_mask[c] = 0;

    if (map.failed_cells > static_cast<long>(cells * hbars.size() / 100))
        throw std::runtime_error("correlation_scan: more than 1% of cells failed");

    const auto& last = map.magnitudes[order[0]];
    std::size_t best = 0;
    for (std::size_t c = 1; c < cells; ++c)
        if (last[c] > last[best]) best = c;
    map.argmax_y = static_cast<int>(best) / grid.n_eta;
    map.argmax_eta = static_cast<int>(best) % grid.n_eta;
    return map;
}

PredictedSupport PredictedSupport::from_points(std::vector<std::pair<double, double>> pts) {
    if (pts.empty()) throw std::invalid_argument("PredictedSupport: empty point set");
    PredictedSupport p;
    p.points = std::move(pts);
    return p;
}

PredictedSupport PredictedSupport::from_graph(PeriodicFunction g) {
    PredictedSupport p;
    p.graph = std::move(g);
    return p;
}

PredictedSupport predict_support(const EvolutionSpec& spec, const PredictedSupport& source,
                                 double lambda) {
    const TrigPoly dtau = spec.tau.derivative();
    if (!source.is_graph()) {
        std::vector<std::pair<double, double>> out;
        for (const auto& [x, xi] : source.points) {
            for (double y : preimages(spec.f, x))
                out.emplace_back(y, map_derivative(spec.f, y) * xi + dtau(y));
        }
        std::sort(out.begin(), out.end());
        return PredictedSupport::from_points(std::move(out));
    }
    const PeriodicFunction& u = *source.graph;
    (void)lambda;  // the quantum prediction eta = f' xi + tau' already encodes it
    if (const auto* ut = std::get_if<TrigPoly>(&u)) {
        if (spec.f.kind == MapSpec::Kind::rotation) {
            // Exact spectral composition for rigid rotations.
            return PredictedSupport::from_graph(ut->shifted(spec.f.alpha) + dtau);
        }
    }
    std::vector<double> bps;
    if (const auto* ug = std::get_if<PiecewiseGrid>(&u)) {
        for (double b : ug->breakpoints())
            for (double y : preimages(spec.f, b)) bps.push_back(y);
    }
    const int M = 2048;
    auto v = [&](double y) {
        return fn_eval(u, eval_map(spec.f, y)) * map_derivative(spec.f, y) + dtau(y);
    };
    return PredictedSupport::from_graph(PiecewiseGrid::sample(v, M, std::move(bps)));
}

SupportMatch support_match(const MicrosupportMap& map, const PredictedSupport& predicted,
                           const ScanGrid& grid) {
    std::vector<std::pair<double, double>> mask_cells;  // (iy, je) as continuous coords
    for (int iy = 0; iy < grid.n_y; ++iy)
        for (int je = 0; je < grid.n_eta; ++je)
            if (map.support_mask[map.cell(iy, je)])
                mask_cells.emplace_back(static_cast<double>(iy), static_cast<double>(je));
    if (mask_cells.empty()) throw std::runtime_error("support_match: empty support mask");

    std::vector<std::pair<double, double>> pred_cells;
    if (predicted.is_graph()) {
        for (int iy = 0; iy < grid.n_y; ++iy) {
            const double eta = fn_eval(*predicted.graph, grid.y_node(iy));
            pred_cells.emplace_back(static_cast<double>(iy),
                                    (eta - grid.eta_min) / grid.eta_cell());
        }
    } else {
        for (const auto& [y, eta] : predicted.points)
            pred_cells.emplace_back(circle_reduce(y) / grid.y_cell(),
                                    (eta - grid.eta_min) / grid.eta_cell());
    }

    auto dist = [&](const std::pair<double, double>& a, const std::pair<double, double>& b) {
        double dy = std::fabs(a.first - b.first);
        dy = std::min(dy, grid.n_y - dy);  // periodic y
        const double de = a.second - b.second;
        return std::sqrt(dy * dy + de * de);
    };
    auto one_sided = [&](const auto& from, const auto& to) {
        double worst = 0.0;
        for (const auto& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to) best = std::min(best, dist(p, q));
            worst = std::max(worst, best);
        }
        return worst;
    };

    SupportMatch m;
    m.pred_to_mask_cells = one_sided(pred_cells, mask_cells);
    m.mask_to_pred_cells = one_sided(mask_cells, pred_cells);
    m.hausdorff_cells = std::max(m.pred_to_mask_cells, m.mask_to_pred_cells);
    m.hit = m.hausdorff_cells <= 1.5;
    return m;
}

}  // namespace mlc
