// Acceptance suite: one checkable criterion per --criterion index, each
// printing a single [PASS]/[FAIL] line plus supporting measurements. The
// process exit status is the number of failed criteria, so the ctest entries
// stay red for exactly the criteria that do not hold.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mlc/circle.hpp"
#include "mlc/cohomology.hpp"
#include "mlc/diophantine.hpp"
#include "mlc/ergodic.hpp"
#include "mlc/microsupport.hpp"
#include "mlc/oracles.hpp"
#include "mlc/pipeline.hpp"
#include "mlc/quadrature.hpp"
#include "mlc/threading.hpp"

using namespace mlc;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) {
        detail += (detail.empty() ? "" : "; ") + what;
    }
};

const TrigPoly kTau = TrigPoly::sine(1, 1.0 / kTwoPi);  // tau' = cos(2 pi z)
const double kGolden = 0.6180339887498949;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<std::pair<int, int>> mask_cells(const MicrosupportMap& map) {
    std::vector<std::pair<int, int>> out;
    for (int iy = 0; iy < map.grid.n_y; ++iy)
        for (int je = 0; je < map.grid.n_eta; ++je)
            if (map.support_mask[map.cell(iy, je)]) out.emplace_back(iy, je);
    return out;
}

int count_components(const MicrosupportMap& map) {
    const auto mask = mask_cells(map);
    std::vector<int> comp(mask.size(), -1);
    int ncomp = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (comp[i] >= 0) continue;
        comp[i] = ncomp;
        std::vector<std::size_t> stack{i};
        while (!stack.empty()) {
            const auto cur = mask[stack.back()];
            stack.pop_back();
            for (std::size_t k = 0; k < mask.size(); ++k) {
                if (comp[k] >= 0) continue;
                int dy = std::abs(mask[k].first - cur.first);
                dy = std::min(dy, map.grid.n_y - dy);
                if (dy <= 1 && std::abs(mask[k].second - cur.second) <= 1) {
                    comp[k] = ncomp;
                    stack.push_back(k);
                }
            }
        }
        ++ncomp;
    }
    return ncomp;
}

// ---- criterion 1: wavepacket self-support -------------------------------

Outcome criterion1() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    const double x0 = 0.5, xi0 = 0.8;
    const ScanGrid grid{64, 64, -4.0, 4.0};
    QuadPolicy policy;
    policy.phase_scale_bound = std::fabs(xi0);
    auto family = [&](double hbar) { return QuantumState::wavepacket({x0, xi0, hbar}); };
    const MicrosupportMap map =
        correlation_scan(family, grid, HbarLadder::standard(), policy);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const int ncomp = count_components(map);
    out.require(ncomp == 1, "mask has " + std::to_string(ncomp) + " components");
    const double dy = wrap_distance(grid.y_node(map.argmax_y), x0);
    const double de = std::fabs(grid.eta_node(map.argmax_eta) - xi0);
    out.require(dy <= grid.y_cell() + 1e-12 && de <= grid.eta_cell() + 1e-12,
                "argmax off by (" + fmt(dy / grid.y_cell()) + ", " +
                    fmt(de / grid.eta_cell()) + ") cells");
    double worst_slope = 1e9;
    for (int iy = 0; iy < grid.n_y; ++iy)
        for (int je = 0; je < grid.n_eta; ++je) {
            const double ddy = wrap_distance(grid.y_node(iy), x0);
            const double dde = grid.eta_node(je) - xi0;
            if (std::sqrt(ddy * ddy + dde * dde) > 0.2)
                worst_slope = std::min(worst_slope, map.slopes[map.cell(iy, je)]);
        }
    out.require(worst_slope >= 4.0,
                "min slope beyond 0.2 is " + fmt(worst_slope) + " < 4");
    const int threads = resolve_threads(0);
    out.note("scan " + fmt(seconds) + "s on " + std::to_string(threads) +
             " threads (target 600s on 8 cores)");
    out.require(seconds * std::min(threads, 8) / 8.0 <= 600.0, "runtime over target");
    return out;
}

// ---- criteria 2/3: evolved wavepackets ----------------------------------

Outcome criterion2() {
    Outcome out;
    ExperimentSpec spec;
    spec.name = "theorem1";
    spec.scenario = Scenario::theorem1;
    spec.source_x = 0.6;
    spec.source_xi = 1.0;
    const ExperimentReport rep = run_experiment(spec);
    const ScanReport& scan = rep.scans[0];
    out.require(scan.predicted_points.size() == 2, "expected two predicted points");
    for (const auto& [y, eta] : scan.predicted_points)
        out.require((wrap_distance(y, 0.3) < 1e-9 && std::fabs(eta - 2.0) < 1e-9) ||
                        (wrap_distance(y, 0.8) < 1e-9 && std::fabs(eta - 2.0) < 1e-9),
                    "prediction off: (" + fmt(y) + ", " + fmt(eta) + ")");
    out.require(scan.match_predicted.hit,
                "support_match.hit false (hausdorff " +
                    fmt(scan.match_predicted.hausdorff_cells) + " cells)");
    out.note("hausdorff " + fmt(scan.match_predicted.hausdorff_cells) + " cells");
    return out;
}

Outcome criterion3() {
    Outcome out;
    ExperimentSpec spec;
    spec.name = "theorem2";
    spec.scenario = Scenario::theorem2;
    spec.tau = kTau;
    spec.source_x = 0.0;
    spec.source_xi = 0.0;
    const ExperimentReport rep = run_experiment(spec);
    const ScanReport& scan = rep.scans[0];
    for (const auto& [y, eta] : scan.predicted_points)
        out.require((wrap_distance(y, 0.0) < 1e-9 && std::fabs(eta - 1.0) < 1e-9) ||
                        (wrap_distance(y, 0.5) < 1e-9 && std::fabs(eta + 1.0) < 1e-9),
                    "prediction off: (" + fmt(y) + ", " + fmt(eta) + ")");
    out.require(scan.match_predicted.hit,
                "support not within 1.5 cells (hausdorff " +
                    fmt(scan.match_predicted.hausdorff_cells) + ")");
    out.note("hausdorff " + fmt(scan.match_predicted.hausdorff_cells) + " cells");
    return out;
}

// ---- criterion 4: subaction scenario ------------------------------------

Outcome criterion4() {
    Outcome out;
    ExperimentSpec spec;
    spec.name = "subsup";
    spec.scenario = Scenario::subsup_doubling;
    spec.tau = kTau;
    spec.lambda = 0.5;
    spec.lagrangian_x = {0.2, 0.5, 0.8};
    spec.subaction_M = 2048;
    spec.subaction_tol = 1e-11;
    const ExperimentReport rep = run_experiment(spec);

    out.require(rep.bellman_residual <= 1e-10,
                "Bellman residual " + fmt(rep.bellman_residual) + " > 1e-10");
    out.require(rep.subaction_iterations <= 60,
                std::to_string(rep.subaction_iterations) + " iterations > 60");
    out.require(rep.contraction_ratio >= 0.45 && rep.contraction_ratio <= 0.55,
                "contraction ratio " + fmt(rep.contraction_ratio) + " outside [0.45,0.55]");
    out.note("residual " + fmt(rep.bellman_residual) + ", " +
             std::to_string(rep.subaction_iterations) + " iters, ratio " +
             fmt(rep.contraction_ratio));

    for (const ScanReport& scan : rep.scans) {
        const double d_graph = scan.match_graph.mask_to_pred_cells;
        const double d_pred = scan.match_predicted.mask_to_pred_cells;
        out.note("x=" + fmt(scan.source_x) + ": mask->Graph(u) " + fmt(d_graph) +
                 " cells, mask->predicted-curve " + fmt(d_pred) + " cells");
        out.require(d_graph <= 1.5, "x=" + fmt(scan.source_x) + " support sits " +
                                        fmt(d_graph) + " cells from Graph(u)");
    }
    if (!out.pass)
        out.note(
            "the calibrated equation holds only along maximizing branches; the "
            "non-maximizing inverse branch lifts the support off Graph(u) by twice "
            "the Bellman gap (max gap " +
            fmt(rep.bellman_max_gap) + "), as the stationary-phase curve predicts");
    return out;
}

// ---- criterion 5: diffeomorphism scenario -------------------------------

Outcome criterion5() {
    Outcome out;
    ExperimentSpec spec;
    spec.name = "diffeo";
    spec.scenario = Scenario::diffeo_invariance;
    spec.map = MapSpec::rotation(kGolden);
    spec.tau = kTau;
    spec.lagrangian_x = {0.5};
    const ExperimentReport rep = run_experiment(spec);
    out.require(rep.coboundary_residual <= 1e-12,
                "coboundary residual " + fmt(rep.coboundary_residual) + " > 1e-12");
    out.require(rep.graph_residual <= 1e-8,
                "graph invariance residual " + fmt(rep.graph_residual) + " > 1e-8");
    for (const ScanReport& scan : rep.scans) {
        out.require(scan.match_graph.mask_to_pred_cells <= 1.5,
                    "support sits " + fmt(scan.match_graph.mask_to_pred_cells) +
                        " cells from Graph(u)");
        out.note("x=" + fmt(scan.source_x) + ": mask->Graph(u) " +
                 fmt(scan.match_graph.mask_to_pred_cells) + " cells");
    }
    out.note("eqrot residual " + fmt(rep.coboundary_residual) + ", graph residual " +
             fmt(rep.graph_residual));
    return out;
}

// ---- criterion 6: oscillatory decay dichotomy ---------------------------

Outcome criterion6() {
    Outcome out;
    // The criterion pins |phi'| >= 0.5 but leaves the ladder free. With
    // c = 0.5 the whole-line transform e^{-c^2/hbar} underflows double
    // precision well before the standard ladder's tail, so the measurable
    // O(hbar^inf) decay of the windowed integral is its boundary term
    // ~ (2 hbar / c) e^{-a^2/4 hbar}; the ladder 0.12 * 2^-j places the four
    // smallest rungs where that decay is steep (local slope 1 + a^2/4hbar
    // in [5, 33]) yet still above the roundoff floor.
    const double c = 0.5, a = 0.49;
    const HbarLadder ladder{0.12, 0.5, 7};
    const std::vector<double> hbars = ladder.values();
    QuadPolicy policy;
    policy.phase_scale_bound = 1.0;

    const auto lin = [c](long double z) { return static_cast<long double>(c) * (z - 0.5L); };
    std::vector<double> nonstat;
    for (double h : hbars)
        nonstat.push_back(std::abs(oscillatory_integral(0.5, a, lin, h, policy)));
    const double slope_ns = decay_slope(nonstat, hbars);
    out.require(slope_ns >= 4.0, "non-stationary slope " + fmt(slope_ns) + " < 4");

    const auto quad = [](long double z) { return 0.5L * (z - 0.5L) * (z - 0.5L); };
    std::vector<double> stat;
    for (double h : hbars)
        stat.push_back(std::abs(oscillatory_integral(0.5, a, quad, h, policy)));
    const double slope_st = decay_slope(stat, hbars);
    out.require(std::fabs(slope_st - 0.5) <= 0.1,
                "stationary slope " + fmt(slope_st) + " not 0.5 +- 0.1");
    out.note("slopes: non-stationary " + fmt(slope_ns) + ", stationary " + fmt(slope_st));
    return out;
}

// ---- criterion 7: derivative L1 scaling ---------------------------------

Outcome criterion7() {
    Outcome out;
    const double a = 0.45;
    const std::vector<double> hbars{1e-2, 5e-3, 2.5e-3};

    const double v1 = gaussian_derivative_l1(1, a, 1e-2);
    const double closed = 2.0 - 2.0 * std::exp(-a * a / (4.0 * 1e-2));
    out.require(std::fabs(v1 - closed) <= 1e-10,
                "n=1 off closed form by " + fmt(std::fabs(v1 - closed)));

    for (int m : {1, 2}) {
        const int n = 2 * m + 1;
        std::vector<double> scaled;
        for (double h : hbars)
            scaled.push_back(gaussian_derivative_l1(n, a, h) * std::pow(h, m));
        double lo = scaled[0], hi = scaled[0];
        for (double s : scaled) {
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        out.require((hi - lo) / hi <= 0.10, "n=" + std::to_string(n) +
                                                " scaled spread " + fmt((hi - lo) / hi) +
                                                " > 10%");
        out.note("n=" + std::to_string(n) + " value*hbar^" + std::to_string(m) + " in [" +
                 fmt(lo) + ", " + fmt(hi) + "]");
    }

    // Even orders, as stated: value(2.5e-3) below 1e-6 of the n=1 value.
    const double ref = gaussian_derivative_l1(1, a, 2.5e-3);
    for (int n : {2, 4}) {
        const double v = gaussian_derivative_l1(n, a, 2.5e-3);
        out.require(v < 1e-6 * ref, "n=" + std::to_string(n) + " value " + fmt(v) +
                                        " not below 1e-6 of n=1 value " + fmt(ref));
    }
    if (!out.pass)
        out.note(
            "even-order L1 norms grow as hbar^{(1-n)/2}: the 2n-th derivative "
            "changes sign at |s| ~ sqrt(hbar) where the previous derivative peaks "
            "at hbar^{(1-n)/2}, so no even order can sit below the n=1 value");
    return out;
}

// ---- criterion 8: truncation ---------------------------------------------

Outcome criterion8() {
    Outcome out;
    double worst = 0.0;
    for (double hbar : {0.01, 0.005, 0.0025}) {
        for (int j = 0; j < 4096; ++j) {
            const double z = j / 4096.0;
            const WavepacketParams p{0.5, 0.8, hbar};
            const std::complex<double> narrow = eval_wavepacket_window(p, z, 2);
            const std::complex<double> wide = eval_wavepacket_window(p, z, 50);
            worst = std::max(worst, std::abs(narrow - wide));
        }
    }
    out.require(worst <= 1e-12, "windowed sums differ by " + fmt(worst));
    out.note("max |k<=2 minus k<=50| = " + fmt(worst));
    return out;
}

// ---- criterion 9: cross-method subaction consistency --------------------

Outcome criterion9() {
    Outcome out;
    SkewSpec spec;
    spec.lambda = 0.5;
    spec.A = kTau.derivative().scaled(-0.5);
    const SubactionSolution sol = solve_subaction(spec, 2048, 1e-11, 200);
    const int K = 22;
    const double tol = std::pow(0.5, K) * fn_sup_bound(spec.A) / 0.5 + 1e-6;

    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    std::vector<double> xs(32);
    for (auto& x : xs) x = ux(rng);
    std::vector<double> diffs(xs.size());
    parallel_for(static_cast<long>(xs.size()), 0, [&](long i) {
        diffs[i] = std::fabs(sup_over_sequences_tree(spec, xs[i], K) - sol.b(xs[i]));
    });
    double worst = 0.0;
    for (double d : diffs) worst = std::max(worst, d);
    out.require(worst <= tol,
                "max |tree - grid| = " + fmt(worst) + " > " + fmt(tol));
    out.note("max |tree - grid| = " + fmt(worst) + " (tolerance " + fmt(tol) + ")");
    return out;
}

// ---- criterion 10: cocycle identity --------------------------------------

Outcome criterion10() {
    Outcome out;
    SkewSpec spec;
    spec.lambda = 0.5;
    spec.A = kTau.derivative().scaled(-0.5);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    std::uniform_int_distribution<int> ud(1, 2);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const double x = ux(rng);
        SymbolSequence a;
        const int K = 30;
        for (int k = 0; k < K; ++k) a.digits.push_back(static_cast<std::uint8_t>(ud(rng)));
        SymbolSequence pia;
        pia.digits.push_back(static_cast<std::uint8_t>(branch_index(x)));
        pia.digits.insert(pia.digits.end(), a.digits.begin(), a.digits.end());
        const TsujiiResult sa = tsujii_series(spec, x, a);
        const double lhs = tsujii_series(spec, eval_map(spec.f, x), pia).value;
        const double rhs = fn_eval(spec.A, x) + 0.5 * sa.value;
        const double err = std::fabs(lhs - rhs);
        worst = std::max(worst, err);
        if (err > sa.tail_bound + 1e-12) {
            out.require(false, "identity off by " + fmt(err) + " at x=" + fmt(x));
            break;
        }
    }
    out.note("max identity residual " + fmt(worst));
    return out;
}

// ---- criterion 11: oracle suite ------------------------------------------

Outcome criterion11() {
    Outcome out;
    auto close_rel = [](double a, double b, double tol) {
        return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
    };

    // Finite-difference map derivative (perturbed rotation).
    {
        const MapSpec pert = MapSpec::perturbed(0.3, 0.1, TrigPoly::sine(1, 1.0));
        const double fd = oracle::finite_difference_lift_derivative(pert, 0.0, 1e-6);
        out.require(std::fabs(map_derivative(pert, 0.0) - fd) <= 1e-8,
                    "fd-map-deriv mismatch");
    }
    // Long-orbit rotation number.
    {
        const MapSpec pert = MapSpec::perturbed(kGolden, 0.01, TrigPoly::sine(1, 1.0));
        const double rho = oracle::birkhoff_rotation_number(pert, 1000000);
        out.require(std::fabs(rho - kGolden) < 0.01, "rotation-number oracle off");
    }
    // Convergent scans for the golden mean.
    {
        const auto ok = diophantine_check(kGolden, {0.2, 0.0, 10000});
        const auto no = diophantine_check(kGolden, {0.5, 0.0, 10000});
        out.require(ok.satisfied && !no.satisfied, "convergent-scan verdicts");
    }
    // One-sided kink derivatives from the grid interpolant.
    {
        const auto [l, r] = oracle::abs_kink_onesided_derivatives(512);
        out.require(std::fabs(l + 1.0) < 1e-6 && std::fabs(r - 1.0) < 1e-6,
                    "grid-onesided oracle off");
    }
    // Direct wavepacket sums.
    {
        const WavepacketParams p{0.5, 0.0, 0.01};
        out.require(std::abs(eval_wavepacket(p, 0.5) -
                             oracle::wavepacket_direct_sum(p, 0.5, 50)) < 1e-14,
                    "wavepacket-sum oracle mismatch");
        const WavepacketParams q{0.2, 1.0, 0.005};
        out.require(close_rel(std::abs(oracle::wavepacket_direct_sum(q, 0.7, 50)),
                              std::exp(-12.5), 1e-3),
                    "single-term dominance oracle off");
    }
    // Quadratic-lift Lagrangian sum.
    {
        PhaseFunction quad;
        quad.custom_lift = [](long double t) { return 0.5L * t * t; };
        quad.custom_slope = [](double t) { return t; };
        const std::complex<double> v = eval_lagrangian({quad, 0.5, 0.01}, 0.5);
        const std::complex<double> ref =
            oracle::lagrangian_quadratic_direct_sum(1.0, 0.0, 0.5, 0.01, 0.5, 50);
        out.require(std::abs(v - ref) < 1e-12, "lagrangian-sum oracle mismatch");
    }
    // Gaussian overlap closed form against the quadrature.
    {
        const double hbar = 0.005;
        const QuantumState a = QuantumState::wavepacket({0.2, 0.0, hbar});
        const QuantumState b = QuantumState::wavepacket({0.8, 0.0, hbar});
        QuadPolicy policy;
        const double ip = std::abs(inner_product(a, b, policy));
        const double ref = oracle::gaussian_overlap_modulus(0.2, 0.0, 0.8, 0.0, hbar);
        out.require(close_rel(ip, ref, 0.02), "overlap oracle mismatch: quadrature " +
                                                  fmt(ip) + " vs closed form " + fmt(ref));
    }
    // Windowed Gaussian integral (erf closed form).
    {
        QuadPolicy policy;
        const auto zero_phase = [](long double) { return 0.0L; };
        const double v =
            std::abs(oscillatory_integral(0.5, 0.3, zero_phase, 0.01, policy));
        out.require(std::fabs(v - oracle::gaussian_window_integral(0.3, 0.01)) < 1e-6,
                    "gauss-window oracle mismatch");
    }
    // Windowed linear-phase integral: independent Simpson reference.
    {
        QuadPolicy policy;
        policy.phase_scale_bound = 0.5;
        const auto lin = [](long double z) { return 0.5L * (z - 0.5L); };
        const std::complex<double> v = oscillatory_integral(0.5, 0.4, lin, 0.01, policy);
        const std::complex<double> ref =
            oracle::windowed_linear_phase_integral(0.5, 0.4, 0.01, 400000);
        out.require(std::abs(v - ref) < 1e-9 + 1e-6 * std::abs(ref),
                    "gauss-ft windowed reference mismatch");
    }
    // Geometric series (constant potential) via the Tsujii machinery.
    {
        SkewSpec cspec;
        cspec.A = TrigPoly::constant(0.7);
        const double v = tsujii_series(cspec, 0.2, SymbolSequence::constant(2, 20)).value;
        out.require(std::fabs(v - oracle::geometric_series(0.7, 20, 0.5)) < 1e-14,
                    "geometric-series oracle mismatch");
    }
    // Derivative-L1 brute quadrature vs the telescoped closed form.
    {
        for (int n : {1, 2, 3}) {
            const double exact = gaussian_derivative_l1(n, 0.3, 0.01);
            const double brute = oracle::derivative_l1_bruteforce(n, 0.3, 0.01, 2000000);
            out.require(close_rel(exact, brute, 1e-6),
                        "deriv-l1 oracle mismatch at n=" + std::to_string(n));
        }
    }
    // Depth-limited tree sup against the grid solver (small instance).
    {
        SkewSpec spec;
        spec.lambda = 0.5;
        spec.A = kTau.derivative().scaled(-0.5);
        const SubactionSolution sol = solve_subaction(spec, 512, 1e-11, 200);
        const double tree = sup_over_sequences_tree(spec, 0.25, 20);
        out.require(std::fabs(tree - sol.b(0.25)) < 1e-5, "subaction-tree oracle mismatch");
    }
    out.note("all closed-form references reproduced");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i + 1 < argc + 1; ++i) {
        if (i < argc && std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[i + 1]);
    }
    using Fn = std::function<Outcome()>;
    const std::vector<std::pair<int, Fn>> criteria = {
        {1, criterion1}, {2, criterion2}, {3, criterion3},   {4, criterion4},
        {5, criterion5}, {6, criterion6}, {7, criterion7},   {8, criterion8},
        {9, criterion9}, {10, criterion10}, {11, criterion11},
    };
    int failures = 0;
    for (const auto& [num, fn] : criteria) {
        if (only != 0 && num != only) continue;
        Outcome out;
        try {
            out = fn();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %d: %s\n", out.pass ? "PASS" : "FAIL", num,
                    out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures;
}
