#include <CLI11.hpp>

#include <chrono>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "mlc/circle.hpp"
#include "mlc/cohomology.hpp"
#include "mlc/diophantine.hpp"
#include "mlc/ergodic.hpp"
#include "mlc/microsupport.hpp"
#include "mlc/oracles.hpp"
#include "mlc/pipeline.hpp"
#include "mlc/serialize.hpp"
#include "mlc/threading.hpp"

namespace fs = std::filesystem;
using mlc::json;

namespace {

struct GlobalArgs {
    std::string config;
    std::string out = "out";
    int threads = 0;
    std::uint64_t seed = 0;
};

json load_config(const GlobalArgs& g) {
    if (g.config.empty()) throw CLI::ValidationError("--config is required for this command");
    return mlc::read_json_file(g.config);
}

fs::path ensure_out(const GlobalArgs& g) {
    fs::path p(g.out);
    fs::create_directories(p);
    return p;
}

int run_scan(const GlobalArgs& g) {
    const json cfg = load_config(g);
    const fs::path out = ensure_out(g);
    const json src = cfg.at("source");
    const double x = src.value("x", 0.5);
    const double xi = src.value("xi", 0.0);
    mlc::ScanGrid grid;
    if (cfg.contains("grid")) grid = mlc::scangrid_from_json(cfg.at("grid"));
    mlc::HbarLadder ladder;
    if (cfg.contains("ladder")) ladder = mlc::ladder_from_json(cfg.at("ladder"));
    mlc::QuadPolicy policy;
    if (cfg.contains("policy")) policy = mlc::policy_from_json(cfg.at("policy"));

    std::function<mlc::QuantumState(double)> family;
    mlc::ScanOptions opts;
    opts.threads = g.threads;
    if (cfg.contains("evolution")) {
        const mlc::EvolutionSpec evo = mlc::evolution_from_json(cfg.at("evolution"));
        policy.phase_scale_bound =
            std::max(policy.phase_scale_bound,
                     std::fabs(xi) * 2.0 + evo.tau.derivative().sup_bound());
        if (evo.coupling.mode == mlc::Coupling::Mode::semiclassical)
            opts.phase_data_scale = evo.tau.sup_bound();
        family = [evo, x, xi](double hbar) {
            return evolve(mlc::QuantumState::wavepacket({x, xi, hbar}), evo);
        };
    } else {
        policy.phase_scale_bound = std::max(policy.phase_scale_bound, std::fabs(xi));
        family = [x, xi](double hbar) {
            return mlc::QuantumState::wavepacket({x, xi, hbar});
        };
    }
    const mlc::MicrosupportMap map = mlc::correlation_scan(family, grid, ladder, policy, opts);
    mlc::write_map_csv(map, out / "map.csv");
    mlc::write_json_file(mlc::microsupport_summary_json(map), out / "summary.json");
    for (std::size_t ih = 0; ih < map.hbars.size(); ++ih)
        mlc::write_heatmap_pgm(map, static_cast<int>(ih),
                               out / ("map_h" + std::to_string(ih) + ".pgm"));
    std::cout << "scan: wrote map.csv, summary.json and " << map.hbars.size()
              << " heatmaps to " << out << "\n";
    return 0;
}

int run_subaction(const GlobalArgs& g) {
    const json cfg = load_config(g);
    const fs::path out = ensure_out(g);
    mlc::SkewSpec skew;
    skew.lambda = cfg.value("lambda", 0.5);
    if (cfg.contains("A"))
        skew.A = mlc::periodic_from_json(cfg.at("A"));
    else
        skew.A = mlc::trigpoly_from_json(cfg.at("tau")).derivative().scaled(-0.5);
    const int M = cfg.value("M", 2048);
    const double tol = cfg.value("tol", 1e-11);
    const int max_iter = cfg.value("max_iter", 200);
    const mlc::SubactionSolution sol = mlc::solve_subaction(skew, M, tol, max_iter);
    mlc::write_subaction_csv(sol, out / "b.csv");
    mlc::write_json_file(mlc::to_json(sol), out / "subaction.json");
    std::cout << "subaction: residual " << mlc::format_double(sol.bellman_residual) << " in "
              << sol.iterations << " iterations, contraction "
              << mlc::format_double(sol.contraction_ratio) << "\n";
    if (!sol.converged) {
        std::cerr << "subaction: tolerance " << tol << " not reached within " << max_iter
                  << " iterations\n";
        return 3;
    }
    return 0;
}

int run_twist(const GlobalArgs& g) {
    const json cfg = load_config(g);
    const fs::path out = ensure_out(g);
    mlc::SkewSpec skew;
    skew.lambda = cfg.value("lambda", 0.5);
    if (cfg.contains("A"))
        skew.A = mlc::periodic_from_json(cfg.at("A"));
    else
        skew.A = mlc::trigpoly_from_json(cfg.at("tau")).derivative().scaled(-0.5);
    const int n_x = cfg.value("x_points", 64);
    std::vector<double> xs;
    for (int i = 0; i < n_x; ++i) {
        const double x = (i + 0.5) / n_x;
        if (mlc::wrap_distance(x, 0.0) > 1e-3 && mlc::wrap_distance(x, 0.5) > 1e-3)
            xs.push_back(x);
    }
    std::vector<std::pair<mlc::SymbolSequence, mlc::SymbolSequence>> pairs;
    if (cfg.contains("pairs")) {
        for (const auto& pr : cfg.at("pairs")) {
            mlc::SymbolSequence a, b;
            for (int d : pr.at(0)) a.digits.push_back(static_cast<std::uint8_t>(d));
            for (int d : pr.at(1)) b.digits.push_back(static_cast<std::uint8_t>(d));
            pairs.emplace_back(a, b);
        }
    } else {
        const int K = cfg.value("K", 18);
        pairs.emplace_back(mlc::SymbolSequence::constant(1, K),
                           mlc::SymbolSequence::constant(2, K));
    }
    const int K = cfg.value("K", 18);
    const double h_fd = cfg.value("h_fd", 1e-5);
    const mlc::TwistReport rep = mlc::twist_check(skew, xs, pairs, K, h_fd);
    mlc::write_json_file(json{{"holds", rep.holds},
                              {"min_margin", rep.min_margin},
                              {"witness_x", rep.witness_x},
                              {"witness_pair", rep.witness_pair},
                              {"skipped_cells", rep.skipped_cells}},
                         out / "twist.json");
    std::cout << "twist: holds=" << (rep.holds ? "true" : "false") << " min_margin "
              << mlc::format_double(rep.min_margin) << "\n";
    return 0;
}

int run_cohomology(const GlobalArgs& g) {
    const json cfg = load_config(g);
    const fs::path out = ensure_out(g);
    const mlc::TrigPoly tau = mlc::trigpoly_from_json(cfg.at("tau"));
    const double alpha = cfg.at("alpha").get<double>();
    const mlc::CoboundarySolution sol = mlc::solve_rotation_coboundary(tau, alpha);
    json j = mlc::to_json(sol);
    if (cfg.contains("diophantine")) {
        mlc::DiophantineParams dp;
        dp.K = cfg.at("diophantine").value("K", 0.2);
        dp.beta = cfg.at("diophantine").value("beta", 0.0);
        dp.q_max = cfg.at("diophantine").value("q_max", 10000);
        const mlc::DiophantineReport rep = mlc::diophantine_check(alpha, dp);
        j["diophantine"] = {{"satisfied", rep.satisfied},
                            {"worst_q", rep.worst_q},
                            {"margin", rep.margin},
                            {"rational", rep.rational}};
    }
    j["graph_invariance_residual"] =
        mlc::graph_invariance_residual(sol.u, mlc::MapSpec::rotation(alpha), tau, 4096);
    mlc::write_json_file(j, out / "coboundary.json");
    std::cout << "cohomology: residual " << mlc::format_double(sol.residual)
              << ", smallest divisor " << mlc::format_double(sol.smallest_divisor) << "\n";
    return 0;
}

int run_evolve(const GlobalArgs& g) {
    const json cfg = load_config(g);
    const fs::path out = ensure_out(g);
    const json st = cfg.at("state");
    const double hbar = st.at("hbar").get<double>();
    mlc::QuantumState state;
    if (st.at("kind") == "wavepacket")
        state = mlc::QuantumState::wavepacket(mlc::wavepacket_from_json(st));
    else if (st.at("kind") == "lagrangian")
        state = mlc::QuantumState::lagrangian(
            {mlc::phasefunction_from_json(st.at("S")), st.at("x").get<double>(), hbar});
    else
        throw CLI::ValidationError("state.kind must be wavepacket or lagrangian");
    const mlc::EvolutionSpec evo = mlc::evolution_from_json(cfg.at("evolution"));
    const mlc::QuantumState phi = evolve(state, evo);
    const int n = cfg.value("n_samples", 512);
    std::ofstream csv(out / "evolved.csv", std::ios::binary);
    csv << "z,re,im,abs\n";
    for (int i = 0; i < n; ++i) {
        const double z = static_cast<double>(i) / n;
        const std::complex<double> v = phi(z);
        csv << mlc::format_double(z) << ',' << mlc::format_double(v.real()) << ','
            << mlc::format_double(v.imag()) << ',' << mlc::format_double(std::abs(v)) << '\n';
    }
    std::cout << "evolve: wrote " << n << " samples to evolved.csv\n";
    return 0;
}

int run_experiment_cmd(const GlobalArgs& g) {
    const json cfg = load_config(g);
    mlc::ExperimentSpec spec = mlc::experiment_from_json(cfg);
    if (g.threads > 0) spec.threads = g.threads;
    const mlc::ExperimentReport report = mlc::run_experiment(spec);
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    const auto stamp = std::chrono::duration_cast<std::chrono::seconds>(now).count();
    const fs::path dir =
        fs::path(g.out) / (report.name + "_" + std::to_string(stamp));
    mlc::write_report_bundle(report, dir);
    bool all_hit = true;
    for (const auto& s : report.scans) all_hit = all_hit && s.match_predicted.hit;
    std::cout << "experiment " << report.name << ": " << report.scans.size()
              << " scan(s), predicted-set hit=" << (all_hit ? "true" : "false")
              << ", certified=" << (report.certified ? "true" : "false") << ", report in "
              << dir << "\n";
    return 0;
}

int run_oracle(const std::string& name, const std::vector<double>& p, const GlobalArgs& g) {
    json j;
    auto need = [&](std::size_t n) {
        if (p.size() != n)
            throw CLI::ValidationError("oracle " + name + ": expected " + std::to_string(n) +
                                       " numeric arguments");
    };
    if (name == "overlap") {
        need(5);
        j = {{"modulus", mlc::oracle::gaussian_overlap_modulus(p[0], p[1], p[2], p[3], p[4])},
             {"normalized",
              mlc::oracle::gaussian_overlap_normalized(p[0], p[1], p[2], p[3], p[4])}};
    } else if (name == "gauss-window") {
        need(2);
        j = {{"value", mlc::oracle::gaussian_window_integral(p[0], p[1])}};
    } else if (name == "gauss-ft") {
        need(4);
        const auto w = mlc::oracle::windowed_linear_phase_integral(
            p[0], p[1], p[2], static_cast<long>(p[3]));
        j = {{"whole_line_modulus", mlc::oracle::gaussian_ft_modulus(p[0], p[2])},
             {"windowed", {w.real(), w.imag()}},
             {"windowed_modulus", std::abs(w)}};
    } else if (name == "geom-series") {
        need(3);
        j = {{"value", mlc::oracle::geometric_series(p[0], static_cast<int>(p[1]), p[2])}};
    } else if (name == "convergents") {
        need(4);
        mlc::DiophantineParams dp{p[1], p[2], static_cast<std::int64_t>(p[3])};
        const auto rep = mlc::diophantine_check(p[0], dp);
        j = {{"satisfied", rep.satisfied},
             {"worst_q", rep.worst_q},
             {"margin", rep.margin},
             {"rational", rep.rational}};
    } else if (name == "fd-map-deriv") {
        need(2);
        mlc::MapSpec m = g.config.empty() ? mlc::MapSpec::doubling()
                                          : mlc::mapspec_from_json(mlc::read_json_file(g.config));
        j = {{"value", mlc::oracle::finite_difference_lift_derivative(m, p[0], p[1])}};
    } else if (name == "rotation-number") {
        need(1);
        mlc::MapSpec m = g.config.empty() ? mlc::MapSpec::rotation(0.0)
                                          : mlc::mapspec_from_json(mlc::read_json_file(g.config));
        j = {{"value", mlc::oracle::birkhoff_rotation_number(m, static_cast<long>(p[0]))}};
    } else if (name == "wavepacket-sum") {
        need(5);
        const auto v = mlc::oracle::wavepacket_direct_sum({p[0], p[1], p[2]}, p[3],
                                                          static_cast<int>(p[4]));
        j = {{"re", v.real()}, {"im", v.imag()}, {"abs", std::abs(v)}};
    } else if (name == "lagrangian-sum") {
        need(6);
        const auto v = mlc::oracle::lagrangian_quadratic_direct_sum(
            p[0], p[1], p[2], p[3], p[4], static_cast<int>(p[5]));
        j = {{"re", v.real()}, {"im", v.imag()}, {"abs", std::abs(v)}};
    } else if (name == "grid-onesided") {
        need(1);
        const auto [l, r] = mlc::oracle::abs_kink_onesided_derivatives(static_cast<int>(p[0]));
        j = {{"left", l}, {"right", r}};
    } else if (name == "deriv-l1") {
        need(4);
        j = {{"value", mlc::oracle::derivative_l1_bruteforce(
                  static_cast<int>(p[0]), p[1], p[2], static_cast<long>(p[3]))}};
    } else if (name == "subaction-tree") {
        need(3);
        mlc::SkewSpec skew;
        skew.A = mlc::TrigPoly::cosine(1, -0.5 * p[2]);
        j = {{"value", mlc::sup_over_sequences_tree(skew, p[0], static_cast<int>(p[1]))}};
    } else {
        throw CLI::ValidationError("unknown oracle: " + name);
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semiclassical micro-support toolkit for circle maps"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config, "JSON config file");
    app.add_option("--out", g.out, "output directory (all artifacts land here)");
    app.add_option("--threads", g.threads, "worker cap (fallback: MLC_THREADS, then hardware)");
    app.add_option("--seed", g.seed, "RNG seed for randomized helpers");

    auto* scan = app.add_subcommand("scan", "phase-space correlation scan of a state family");
    auto* subaction = app.add_subcommand("subaction", "discounted Bellman subaction solve");
    auto* twist = app.add_subcommand("twist", "twist-condition certification");
    auto* cohom = app.add_subcommand("cohomology", "rotation coboundary solve + residuals");
    auto* evolve_cmd = app.add_subcommand("evolve", "apply the evolution operator and sample");
    auto* experiment = app.add_subcommand("experiment", "end-to-end scenario driver");
    auto* oracle = app.add_subcommand("oracle", "closed-form reference values");
    std::string oracle_name;
    std::vector<double> oracle_params;
    oracle->add_option("name", oracle_name,
                       "one of: overlap, gauss-window, gauss-ft, geom-series, convergents, "
                       "fd-map-deriv, rotation-number, wavepacket-sum, lagrangian-sum, "
                       "grid-onesided, deriv-l1, subaction-tree")
        ->required();
    oracle->add_option("params", oracle_params, "numeric arguments");

    CLI11_PARSE(app, argc, argv);

    try {
        if (scan->parsed()) return run_scan(g);
        if (subaction->parsed()) return run_subaction(g);
        if (twist->parsed()) return run_twist(g);
        if (cohom->parsed()) return run_cohomology(g);
        if (evolve_cmd->parsed()) return run_evolve(g);
        if (experiment->parsed()) return run_experiment_cmd(g);
        if (oracle->parsed()) return run_oracle(oracle_name, oracle_params, g);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mlc::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const mlc::NodeCapError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
