#pragma once

#include <string>
#include <utility>
#include <vector>

#include "symflow/io.hpp"

namespace symflow {

// Catalog audit documents (deterministic JSON, version-stamped). These back
// the `symflow accept` presets; each returns the full artifact text.
std::string group_audit_json();       // every family: order and generator kinds
std::string invariant_audit_json();   // invariant-space dimensions + spans
std::string moment_constants_json();  // closed-form moment integrals, P_m facts
std::string pm_divisibility_json();   // invariant non-divisible polynomials

// One experiment entry: a JSON object {"kind": K, ...} where K is one of
// group-audit | invariant-audit | moment-constants | pm-divisibility |
// simulate2d | simulate3d. Simulation entries carry the simulation config
// keys, plus optional "report_group"/"report_group_n" (writes a comparison
// report) and "plot_channels" (writes an SVG; empty array = default channels).
// Returns (artifact name, content) pairs named after the config file stem;
// nothing is written to disk.
std::vector<std::pair<std::string, std::string>> experiment_artifacts(
    const std::string& config_path);

// Runs experiment_artifacts and writes the results into out_dir.
std::vector<std::string> run_experiment(const std::string& config_path,
                                        const std::string& out_dir);

// Runs every top-level *.json entry under config_dir in filename order,
// writes all artifacts plus an accept_manifest.json (artifact name -> FNV-1a
// content hash) into out_dir. All content is computed before anything is
// written, so a failing entry leaves no partial output. Returns the names of
// the files written.
std::vector<std::string> run_accept_tree(const std::string& config_dir,
                                         const std::string& out_dir);

}  // namespace symflow
