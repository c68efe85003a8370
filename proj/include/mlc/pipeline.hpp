#pragma once

#include <string>
#include <vector>

#include "mlc/cohomology.hpp"
#include "mlc/ergodic.hpp"
#include "mlc/microsupport.hpp"

namespace mlc {

/// Integrate u into a phase function: drift rho = mean(u), periodic part =
/// antiderivative of (u - rho) with value 0 at z = 0 (per piece for grids,
/// continuity enforced at breakpoints). S' = u wherever u is differentiable.
PhaseFunction build_S_from_u(const PeriodicFunction& u);

enum class Scenario { theorem1, theorem2, subsup_doubling, diffeo_invariance };

struct ExperimentSpec {
    std::string name = "experiment";
    Scenario scenario = Scenario::theorem1;
    MapSpec map = MapSpec::doubling();
    TrigPoly tau;                       // forced to zero for theorem1
    double lambda = 0.5;
    double source_x = 0.6;              // wavepacket source (theorem1/theorem2)
    double source_xi = 1.0;
    std::vector<double> lagrangian_x = {0.2, 0.5, 0.8};  // subsup/diffeo sources
    double fixed_nu = 1.0;              // theorem1 runs uncoupled
    ScanGrid grid;
    HbarLadder ladder = HbarLadder::standard();
    QuadPolicy policy;
    int subaction_M = 2048;
    double subaction_tol = 1e-11;
    int subaction_max_iter = 200;
    int threads = 0;                    // 0: default
};

/// One scanned source within an experiment.
struct ScanReport {
    double source_x = 0.0;
    double source_xi = 0.0;             // wavepacket sources only
    MicrosupportMap map;
    SupportMatch match_graph;           // against Graph(u) where applicable
    SupportMatch match_predicted;       // against the stationary-phase prediction
    std::vector<std::pair<double, double>> predicted_points;
};

struct ExperimentReport {
    std::string name;
    Scenario scenario = Scenario::theorem1;
    std::vector<ScanReport> scans;
    double coboundary_residual = 0.0;   // of the u actually used
    double graph_residual = 0.0;        // diffeo scenario
    double bellman_residual = 0.0;      // subsup scenario
    double bellman_max_gap = 0.0;
    double contraction_ratio = 0.0;
    int subaction_iterations = 0;
    bool certified = false;             // coboundary residual <= 1e-6
    double seconds = 0.0;
    ExperimentSpec spec;
};

ExperimentReport run_experiment(const ExperimentSpec& spec);

}  // namespace mlc
