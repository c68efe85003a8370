#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mlc/microsupport.hpp"
#include "mlc/pipeline.hpp"

namespace mlc {

using nlohmann::json;

// TrigPoly: array of [n, re, im] triples (n >= 0 emitted; negative n accepted
// on input and checked against conjugate symmetry).
json to_json(const TrigPoly& t);
TrigPoly trigpoly_from_json(const json& j);

// PiecewiseGrid: {"M", "samples", "breakpoints"}.
json to_json(const PiecewiseGrid& g);
PiecewiseGrid piecewisegrid_from_json(const json& j);

// PeriodicFunction: {"kind": "trig"|"grid", ...}.
json to_json(const PeriodicFunction& f);
PeriodicFunction periodic_from_json(const json& j);

// MapSpec: tagged union {"type": "doubling"|"rotation"|"perturbed", ...}.
json to_json(const MapSpec& m);
MapSpec mapspec_from_json(const json& j);

json to_json(const WavepacketParams& p);
WavepacketParams wavepacket_from_json(const json& j);

json to_json(const PhaseFunction& s);          // drift + periodic only
PhaseFunction phasefunction_from_json(const json& j);

json to_json(const Coupling& c);
Coupling coupling_from_json(const json& j);

json to_json(const EvolutionSpec& e);
EvolutionSpec evolution_from_json(const json& j);

json to_json(const ScanGrid& g);
ScanGrid scangrid_from_json(const json& j);

json to_json(const HbarLadder& l);
HbarLadder ladder_from_json(const json& j);

json to_json(const QuadPolicy& p);
QuadPolicy policy_from_json(const json& j);

json to_json(const SubactionSolution& s);
json to_json(const CoboundarySolution& s);
json to_json(const SupportMatch& m);
json microsupport_summary_json(const MicrosupportMap& map);

json to_json(const ExperimentSpec& s);
ExperimentSpec experiment_from_json(const json& j);
json to_json(const ExperimentReport& r);

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

// ---- file artifacts ----

/// CSV long format: header "hbar,y,eta,magnitude", '.' decimal, '\n'
/// newlines, floats at 17 significant digits.
void write_map_csv(const MicrosupportMap& map, const std::filesystem::path& path);

/// CSV "z,b,branch".
void write_subaction_csv(const SubactionSolution& s, const std::filesystem::path& path);

/// Binary PGM (P5), width = N_y, height = N_eta, min-max scaled to 0..255,
/// row 0 = eta_max. A constant slice maps to all zeros.
void write_heatmap_pgm(const MicrosupportMap& map, int hbar_index,
                       const std::filesystem::path& path);

void write_json_file(const json& j, const std::filesystem::path& path);
json read_json_file(const std::filesystem::path& path);

/// Stable FNV-1a hash of the canonical (sorted-key, compact) JSON encoding.
std::string spec_hash(const json& j);

/// Write the full report bundle (report.json, map CSVs, PGM slices,
/// manifest.json with the spec hash) into out_dir.
void write_report_bundle(const ExperimentReport& report,
                         const std::filesystem::path& out_dir);

std::string format_double(double v);  // %.17g

}  // namespace mlc
