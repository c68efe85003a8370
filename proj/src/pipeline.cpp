#include "mlc/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "mlc/circle.hpp"

namespace mlc {

PhaseFunction build_S_from_u(const PeriodicFunction& u) {
    PhaseFunction S;
    S.rho = fn_mean(u);
    if (const auto* t = std::get_if<TrigPoly>(&u)) {
        // Spectral antiderivative of the mean-zero part; already periodic.
        TrigPoly p = *t;
        p.set_coeff(0, 0.0);
        TrigPoly P;
        for (int n = 1; n <= p.max_mode(); ++n) {
            const std::complex<double> cn = p.coeff(n);
            if (cn != std::complex<double>(0.0, 0.0))
                P.set_coeff(n, cn / std::complex<double>(0.0, kTwoPi * n));
        }
        // Value 0 at z = 0.
        P = P - TrigPoly::constant(P(0.0));
        S.periodic = P;
        return S;
    }
    const auto& g = std::get<PiecewiseGrid>(u);
    const int M = g.size();
    const double rho = S.rho;
    std::vector<double> samples(M);
    for (int j = 0; j < M; ++j) {
        const double z = static_cast<double>(j) / M;
        samples[j] = g.antiderivative_at(z) - rho * z;
    }
    S.periodic = PiecewiseGrid(std::move(samples), g.breakpoints());
    return S;
}

namespace {

struct SubactionBundle {
    SubactionSolution sol;
    PhaseFunction S;
    CoboundaryReport cob;
};

SubactionBundle solve_and_integrate(const ExperimentSpec& spec) {
    SkewSpec skew;
    skew.f = spec.map;
    skew.lambda = spec.lambda;
    skew.A = spec.tau.derivative().scaled(-0.5);
    SubactionBundle out{
        solve_subaction(skew, spec.subaction_M, spec.subaction_tol, spec.subaction_max_iter),
        PhaseFunction{}, CoboundaryReport{}};
    if (!out.sol.converged)
        throw std::runtime_error("run_experiment: subaction iteration did not converge");
    PeriodicFunction u = out.sol.b;
    out.S = build_S_from_u(u);
    out.cob = coboundary_residual(u, spec.tau, spec.map, spec.lambda, spec.subaction_M);
    return out;
}

ScanReport scan_wavepacket_source(const ExperimentSpec& spec, const EvolutionSpec& evo) {
    ScanReport rep;
    rep.source_x = spec.source_x;
    rep.source_xi = spec.source_xi;
    QuadPolicy policy = spec.policy;
    policy.phase_scale_bound = std::fabs(spec.source_xi) * 2.0 + evo.tau.derivative().sup_bound();
    ScanOptions opts;
    opts.threads = spec.threads;
    opts.phase_data_scale =
        evo.coupling.mode == Coupling::Mode::semiclassical ? evo.tau.sup_bound() : 0.0;
    auto family = [&](double hbar) {
        return evolve(QuantumState::wavepacket({spec.source_x, spec.source_xi, hbar}), evo);
    };
    rep.map = correlation_scan(family, spec.grid, spec.ladder, policy, opts);
    PredictedSupport src = PredictedSupport::from_points({{spec.source_x, spec.source_xi}});
    PredictedSupport pred = predict_support(evo, src, spec.lambda);
    rep.predicted_points = pred.points;
    rep.match_predicted = support_match(rep.map, pred, spec.grid);
    rep.match_graph = rep.match_predicted;
    return rep;
}

ScanReport scan_lagrangian_source(const ExperimentSpec& spec, const EvolutionSpec& evo,
                                  const PhaseFunction& S, const PeriodicFunction& u,
                                  double x) {
    ScanReport rep;
    rep.source_x = x;
    QuadPolicy policy = spec.policy;
    policy.phase_scale_bound =
        2.0 * S.sup_slope() + evo.tau.derivative().sup_bound();
    ScanOptions opts;
    opts.threads = spec.threads;
    opts.phase_data_scale = fn_sup_bound(S.periodic) + std::fabs(S.rho) + evo.tau.sup_bound();
    auto family = [&](double hbar) {
        return evolve(QuantumState::lagrangian({S, x, hbar}), evo);
    };
    rep.map = correlation_scan(family, spec.grid, spec.ladder, policy, opts);
    rep.match_graph = support_match(rep.map, PredictedSupport::from_graph(u), spec.grid);
    PredictedSupport pred =
        predict_support(evo, PredictedSupport::from_graph(u), spec.lambda);
    rep.match_predicted = support_match(rep.map, pred, spec.grid);
    for (double y : preimages(spec.map, x))
        rep.predicted_points.emplace_back(
            y, fn_eval(u, eval_map(spec.map, y)) * map_derivative(spec.map, y) +
                   evo.tau.derivative()(y));
    return rep;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.name = spec.name;
    report.scenario = spec.scenario;
    report.spec = spec;

    switch (spec.scenario) {
        case Scenario::theorem1: {
            EvolutionSpec evo{spec.map, TrigPoly{}, Coupling::fixed(spec.fixed_nu)};
            report.scans.push_back(scan_wavepacket_source(spec, evo));
            report.certified = true;
            break;
        }
        case Scenario::theorem2: {
            EvolutionSpec evo{spec.map, spec.tau, Coupling::semiclassical()};
            report.scans.push_back(scan_wavepacket_source(spec, evo));
            report.certified = true;
            break;
        }
        case Scenario::subsup_doubling: {
            const SubactionBundle bundle = solve_and_integrate(spec);
            report.bellman_residual = bundle.sol.bellman_residual;
            report.bellman_max_gap = bundle.cob.max_gap;
            // The subaction satisfies the coboundary equation along maximizing
            // branches; its certificate is the min-over-branch gap, not the
            // everywhere-residual (which is O(1) off the maximizing branch).
            report.coboundary_residual = bundle.cob.max_gap;
            report.contraction_ratio = bundle.sol.contraction_ratio;
            report.subaction_iterations = bundle.sol.iterations;
            EvolutionSpec evo{spec.map, spec.tau, Coupling::semiclassical()};
            const PeriodicFunction u = bundle.sol.b;
            for (double x : spec.lagrangian_x)
                report.scans.push_back(scan_lagrangian_source(spec, evo, bundle.S, u, x));
            report.certified = report.coboundary_residual <= 1e-6;
            break;
        }
        case Scenario::diffeo_invariance: {
            const CoboundarySolution cs = solve_rotation_coboundary(spec.tau, spec.map.alpha);
            report.coboundary_residual = cs.residual;
            report.graph_residual =
                graph_invariance_residual(cs.u, spec.map, spec.tau, 4096);
            const PhaseFunction S = build_S_from_u(cs.u);
            EvolutionSpec evo{spec.map, spec.tau, Coupling::semiclassical()};
            const PeriodicFunction u = cs.u;
            for (double x : spec.lagrangian_x)
                report.scans.push_back(scan_lagrangian_source(spec, evo, S, u, x));
            report.certified = report.coboundary_residual <= 1e-6;
            break;
        }
    }
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace mlc
