#include "mlc/serialize.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mlc {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json to_json(const TrigPoly& t) {
    json modes = json::array();
    for (int n = 0; n <= t.max_mode(); ++n) {
        const std::complex<double> c = t.coeff(n);
        if (n > 0 && c == std::complex<double>(0.0, 0.0)) continue;
        modes.push_back({n, c.real(), c.imag()});
    }
    return modes;
}

TrigPoly trigpoly_from_json(const json& j) {
    std::vector<std::pair<int, std::complex<double>>> modes;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 3)
            throw std::invalid_argument("TrigPoly JSON: expected [n, re, im] triples");
        modes.emplace_back(e[0].get<int>(),
                           std::complex<double>(e[1].get<double>(), e[2].get<double>()));
    }
    return TrigPoly::from_modes(modes);
}

json to_json(const PiecewiseGrid& g) {
    return json{{"M", g.size()}, {"samples", g.samples()}, {"breakpoints", g.breakpoints()}};
}

PiecewiseGrid piecewisegrid_from_json(const json& j) {
    std::vector<double> s = j.at("samples").get<std::vector<double>>();
    if (j.contains("M") && j.at("M").get<int>() != static_cast<int>(s.size()))
        throw std::invalid_argument("PiecewiseGrid JSON: M does not match samples length");
    return PiecewiseGrid(std::move(s), j.value("breakpoints", std::vector<double>{}));
}

json to_json(const PeriodicFunction& f) {
    if (const auto* t = std::get_if<TrigPoly>(&f))
        return json{{"kind", "trig"}, {"coeffs", to_json(*t)}};
    const auto& g = std::get<PiecewiseGrid>(f);
    json o = to_json(g);
    o["kind"] = "grid";
    return o;
}

PeriodicFunction periodic_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "trig") return trigpoly_from_json(j.at("coeffs"));
    if (kind == "grid") return piecewisegrid_from_json(j);
    throw std::invalid_argument("PeriodicFunction JSON: unknown kind " + kind);
}

json to_json(const MapSpec& m) {
    switch (m.kind) {
        case MapSpec::Kind::doubling: return json{{"type", "doubling"}};
        case MapSpec::Kind::rotation: return json{{"type", "rotation"}, {"alpha", m.alpha}};
        case MapSpec::Kind::perturbed:
            return json{{"type", "perturbed"},
                        {"alpha", m.alpha},
                        {"eps", m.eps},
                        {"p", to_json(m.p)}};
    }
    throw std::logic_error("unreachable");
}

MapSpec mapspec_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "doubling") return MapSpec::doubling();
    if (type == "rotation") return MapSpec::rotation(j.at("alpha").get<double>());
    if (type == "perturbed")
        return MapSpec::perturbed(j.at("alpha").get<double>(), j.at("eps").get<double>(),
                                  trigpoly_from_json(j.at("p")));
    throw std::invalid_argument("MapSpec JSON: unknown type " + type);
}

json to_json(const WavepacketParams& p) {
    return json{{"x", p.x}, {"xi", p.xi}, {"hbar", p.hbar}};
}

WavepacketParams wavepacket_from_json(const json& j) {
    return {j.at("x").get<double>(), j.at("xi").get<double>(), j.at("hbar").get<double>()};
}

json to_json(const PhaseFunction& s) {
    if (s.is_custom())
        throw std::invalid_argument("PhaseFunction with a custom lift does not serialize");
    return json{{"rho", s.rho}, {"periodic", to_json(s.periodic)}};
}

PhaseFunction phasefunction_from_json(const json& j) {
    PhaseFunction s;
    s.rho = j.at("rho").get<double>();
    s.periodic = periodic_from_json(j.at("periodic"));
    return s;
}

json to_json(const Coupling& c) {
    if (c.mode == Coupling::Mode::fixed) return json{{"mode", "fixed"}, {"nu", c.nu}};
    return json{{"mode", "semiclassical"}};
}

Coupling coupling_from_json(const json& j) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "fixed") return Coupling::fixed(j.at("nu").get<double>());
    if (mode == "semiclassical") return Coupling::semiclassical();
    throw std::invalid_argument("Coupling JSON: unknown mode " + mode);
}

json to_json(const EvolutionSpec& e) {
    return json{{"map", to_json(e.f)}, {"tau", to_json(e.tau)}, {"coupling", to_json(e.coupling)}};
}

EvolutionSpec evolution_from_json(const json& j) {
    return {mapspec_from_json(j.at("map")), trigpoly_from_json(j.at("tau")),
            coupling_from_json(j.at("coupling"))};
}

json to_json(const ScanGrid& g) {
    return json{{"n_y", g.n_y}, {"n_eta", g.n_eta}, {"eta_min", g.eta_min}, {"eta_max", g.eta_max}};
}

ScanGrid scangrid_from_json(const json& j) {
    ScanGrid g;
    g.n_y = j.value("n_y", g.n_y);
    g.n_eta = j.value("n_eta", g.n_eta);
    g.eta_min = j.value("eta_min", g.eta_min);
    g.eta_max = j.value("eta_max", g.eta_max);
    return g;
}

json to_json(const HbarLadder& l) {
    return json{{"h0", l.h0}, {"ratio", l.ratio}, {"count", l.count}};
}

HbarLadder ladder_from_json(const json& j) {
    HbarLadder l;
    l.h0 = j.value("h0", l.h0);
    l.ratio = j.value("ratio", l.ratio);
    l.count = j.value("count", l.count);
    return l;
}

json to_json(const QuadPolicy& p) {
    return json{{"n_min", p.n_min},
                {"points_per_wavelength", p.points_per_wavelength},
                {"phase_scale_bound", p.phase_scale_bound}};
}

QuadPolicy policy_from_json(const json& j) {
    QuadPolicy p;
    p.n_min = j.value("n_min", p.n_min);
    p.points_per_wavelength = j.value("points_per_wavelength", p.points_per_wavelength);
    p.phase_scale_bound = j.value("phase_scale_bound", p.phase_scale_bound);
    return p;
}

json to_json(const SubactionSolution& s) {
    return json{{"samples", s.b.samples()},
                {"breakpoints", s.b.breakpoints()},
                {"residual", s.bellman_residual},
                {"iterations", s.iterations},
                {"branch", s.maximizing_branch},
                {"contraction_ratio", s.contraction_ratio},
                {"converged", s.converged}};
}

json to_json(const CoboundarySolution& s) {
    return json{{"alpha", s.alpha},
                {"w_coeffs", to_json(s.w)},
                {"u_coeffs", to_json(s.u)},
                {"residual", s.residual},
                {"smallest_divisor", s.smallest_divisor}};
}

json to_json(const SupportMatch& m) {
    return json{{"pred_to_mask_cells", m.pred_to_mask_cells},
                {"mask_to_pred_cells", m.mask_to_pred_cells},
                {"hausdorff_cells", m.hausdorff_cells},
                {"hit", m.hit}};
}

json microsupport_summary_json(const MicrosupportMap& map) {
    json peaks = json::array();
    const auto& grid = map.grid;
    // Local maxima of the smallest-hbar slice restricted to the mask.
    std::size_t smallest = 0;
    for (std::size_t ih = 1; ih < map.hbars.size(); ++ih)
        if (map.hbars[ih] < map.hbars[smallest]) smallest = ih;
    const auto& mags = map.magnitudes[smallest];
    for (int iy = 0; iy < grid.n_y; ++iy) {
        for (int je = 0; je < grid.n_eta; ++je) {
            const std::size_t c = map.cell(iy, je);
            if (!map.support_mask[c]) continue;
            bool is_peak = true;
            for (int dy = -1; dy <= 1 && is_peak; ++dy)
                for (int de = -1; de <= 1 && is_peak; ++de) {
                    if (dy == 0 && de == 0) continue;
                    const int ny = (iy + dy + grid.n_y) % grid.n_y;
                    const int ne = je + de;
                    if (ne < 0 || ne >= grid.n_eta) continue;
                    if (mags[map.cell(ny, ne)] > mags[c]) is_peak = false;
                }
            if (is_peak)
                peaks.push_back({{"y", grid.y_node(iy)},
                                 {"eta", grid.eta_node(je)},
                                 {"magnitude", mags[c]}});
        }
    }
    json slopes = json::array();
    json mask = json::array();
    for (int iy = 0; iy < grid.n_y; ++iy) {
        json srow = json::array(), mrow = json::array();
        for (int je = 0; je < grid.n_eta; ++je) {
            srow.push_back(map.slopes[map.cell(iy, je)]);
            mrow.push_back(static_cast<int>(map.support_mask[map.cell(iy, je)]));
        }
        slopes.push_back(srow);
        mask.push_back(mrow);
    }
    return json{{"grid", to_json(grid)},
                {"hbars", map.hbars},
                {"argmax", {{"y", grid.y_node(map.argmax_y)},
                            {"eta", grid.eta_node(map.argmax_eta)}}},
                {"failed_cells", map.failed_cells},
                {"peaks", peaks},
                {"slopes", slopes},
                {"mask", mask}};
}

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::theorem1: return "theorem1";
        case Scenario::theorem2: return "theorem2";
        case Scenario::subsup_doubling: return "subsup_doubling";
        case Scenario::diffeo_invariance: return "diffeo_invariance";
    }
    throw std::logic_error("unreachable");
}

Scenario scenario_from_name(const std::string& name) {
    if (name == "theorem1") return Scenario::theorem1;
    if (name == "theorem2") return Scenario::theorem2;
    if (name == "subsup_doubling") return Scenario::subsup_doubling;
    if (name == "diffeo_invariance") return Scenario::diffeo_invariance;
    throw std::invalid_argument("unknown scenario: " + name);
}

json to_json(const ExperimentSpec& s) {
    return json{{"name", s.name},
                {"scenario", scenario_name(s.scenario)},
                {"map", to_json(s.map)},
                {"tau", to_json(s.tau)},
                {"lambda", s.lambda},
                {"source", {{"x", s.source_x}, {"xi", s.source_xi}}},
                {"lagrangian_x", s.lagrangian_x},
                {"fixed_nu", s.fixed_nu},
                {"grid", to_json(s.grid)},
                {"ladder", to_json(s.ladder)},
                {"policy", to_json(s.policy)},
                {"subaction_M", s.subaction_M},
                {"subaction_tol", s.subaction_tol},
                {"threads", s.threads}};
}

ExperimentSpec experiment_from_json(const json& j) {
    ExperimentSpec s;
    s.name = j.value("name", s.name);
    s.scenario = scenario_from_name(j.at("scenario").get<std::string>());
    if (j.contains("map")) s.map = mapspec_from_json(j.at("map"));
    if (j.contains("tau")) s.tau = trigpoly_from_json(j.at("tau"));
    s.lambda = j.value("lambda", s.lambda);
    if (j.contains("source")) {
        s.source_x = j.at("source").value("x", s.source_x);
        s.source_xi = j.at("source").value("xi", s.source_xi);
    }
    if (j.contains("lagrangian_x"))
        s.lagrangian_x = j.at("lagrangian_x").get<std::vector<double>>();
    s.fixed_nu = j.value("fixed_nu", s.fixed_nu);
    if (j.contains("grid")) s.grid = scangrid_from_json(j.at("grid"));
    if (j.contains("ladder")) s.ladder = ladder_from_json(j.at("ladder"));
    if (j.contains("policy")) s.policy = policy_from_json(j.at("policy"));
    s.subaction_M = j.value("subaction_M", s.subaction_M);
    s.subaction_tol = j.value("subaction_tol", s.subaction_tol);
    s.threads = j.value("threads", s.threads);
    return s;
}

json to_json(const ExperimentReport& r) {
    json scans = json::array();
    for (const auto& s : r.scans) {
        json pts = json::array();
        for (const auto& [y, eta] : s.predicted_points) pts.push_back({y, eta});
        scans.push_back({{"source_x", s.source_x},
                         {"source_xi", s.source_xi},
                         {"summary", microsupport_summary_json(s.map)},
                         {"match_graph", to_json(s.match_graph)},
                         {"match_predicted", to_json(s.match_predicted)},
                         {"predicted_points", pts}});
    }
    return json{{"name", r.name},
                {"scenario", scenario_name(r.scenario)},
                {"scans", scans},
                {"coboundary_residual", r.coboundary_residual},
                {"graph_residual", r.graph_residual},
                {"bellman_residual", r.bellman_residual},
                {"bellman_max_gap", r.bellman_max_gap},
                {"contraction_ratio", r.contraction_ratio},
                {"subaction_iterations", r.subaction_iterations},
                {"certified", r.certified},
                {"seconds", r.seconds},
                {"spec", to_json(r.spec)}};
}

void write_map_csv(const MicrosupportMap& map, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << "hbar,y,eta,magnitude\n";
    for (std::size_t ih = 0; ih < map.hbars.size(); ++ih)
        for (int iy = 0; iy < map.grid.n_y; ++iy)
            for (int je = 0; je < map.grid.n_eta; ++je)
                out << format_double(map.hbars[ih]) << ',' << format_double(map.grid.y_node(iy))
                    << ',' << format_double(map.grid.eta_node(je)) << ','
                    << format_double(map.magnitudes[ih][map.cell(iy, je)]) << '\n';
}

void write_subaction_csv(const SubactionSolution& s, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << "z,b,branch\n";
    const int M = s.b.size();
    for (int i = 0; i < M; ++i)
        out << format_double(static_cast<double>(i) / M) << ','
            << format_double(s.b.samples()[i]) << ','
            << static_cast<int>(s.maximizing_branch[i]) << '\n';
}

void write_heatmap_pgm(const MicrosupportMap& map, int hbar_index,
                       const std::filesystem::path& path) {
    if (hbar_index < 0 || hbar_index >= static_cast<int>(map.hbars.size()))
        throw std::invalid_argument("write_heatmap_pgm: hbar index out of range");
    const auto& mags = map.magnitudes[hbar_index];
    double lo = mags[0], hi = mags[0];
    for (double v : mags) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << "P5\n" << map.grid.n_y << ' ' << map.grid.n_eta << "\n255\n";
    // Row 0 corresponds to eta_max.
    for (int je = map.grid.n_eta - 1; je >= 0; --je) {
        for (int iy = 0; iy < map.grid.n_y; ++iy) {
            const double v = mags[map.cell(iy, je)];
            const int px = span > 0.0 ? static_cast<int>(255.0 * (v - lo) / span + 0.5) : 0;
            out.put(static_cast<char>(px));
        }
    }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << j.dump(2) << '\n';
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return json::parse(in);
}

std::string spec_hash(const json& j) {
    const std::string s = j.dump();  // nlohmann emits sorted keys
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_report_bundle(const ExperimentReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_json_file(to_json(report), dir / "report.json");
    for (std::size_t i = 0; i < report.scans.size(); ++i) {
        const auto& scan = report.scans[i];
        const std::string stem = "scan_" + std::to_string(i);
        write_map_csv(scan.map, dir / (stem + ".csv"));
        for (std::size_t ih = 0; ih < scan.map.hbars.size(); ++ih)
            write_heatmap_pgm(scan.map, static_cast<int>(ih),
                              dir / (stem + "_h" + std::to_string(ih) + ".pgm"));
    }
    const json spec_json = to_json(report.spec);
    write_json_file(json{{"experiment", report.name},
                         {"scenario", scenario_name(report.scenario)},
                         {"spec_hash", spec_hash(spec_json)},
                         {"seconds", report.seconds}},
                    dir / "manifest.json");
}

}  // namespace mlc
