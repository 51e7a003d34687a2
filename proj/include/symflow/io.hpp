#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "symflow/diagnostics.hpp"
#include "symflow/field.hpp"
#include "symflow/polynomial.hpp"
#include "symflow/solver2d.hpp"

namespace symflow {

inline constexpr const char* kVersion = "0.1.0";

// Raised for unreadable / malformed / inconsistent user inputs (config, field,
// polynomial files). The CLI maps it to exit status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 64-bit FNV-1a of the text, as 16 lowercase hex digits. Used to stamp every
// artifact with the hash of the canonical config it came from.
std::string fnv1a_hex(const std::string& text);

// Canonical `key=value` rendering of a config (sorted keys, reals in %.17g);
// the config hash is fnv1a_hex of this text, so it is stable under JSON
// reformatting and key reordering.
std::string canonical_config_text(const SimulationConfig& config);

// Whole-file helpers. Writes are performed in one call after all computation
// has finished, so a failed run leaves no partial artifact behind.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// --- diagnostic series <-> CSV ---
// Format: `# key=value` metadata lines (sorted by key), one header row
// `t,<channel>,...` (channels sorted by name), then one row per sample with
// every real printed as %.17g. Serialization is byte-deterministic.
std::string series_to_csv(const DiagnosticSeries& series);
DiagnosticSeries series_from_csv(const std::string& text);

// --- JSON readers/writers ---
// Simulation config: {"group": {"name": "D4", "n": 0} | "D4",
//   "field": "<builtin or path to a field .json>", "N", "L", "t_end",
//   "cadence", optional "field_n", "amplitude", "dt", "moment_max_order",
//   "window_frac", "tail_r_min", "tail_r_max"}. `dim` comes from the caller
// (the simulate2d/simulate3d subcommands). Unknown keys are rejected. When
// `field` names a readable file (relative paths resolved against base_dir) it
// is loaded as a field JSON and carried in config.custom_field.
SimulationConfig simulation_config_from_json(const std::string& text, int dim,
                                             const std::string& base_dir = "");

// Field file: {"dim", "envelope", "components": [[{"alpha": [..],
// "coeff": c}, ...], ...]} with one inner list per component.
PolyGaussianField field_from_json(const std::string& text);
std::string field_to_json(const PolyGaussianField& f);

// Homogeneous polynomial file: {"dim", "degree", "terms": [{"alpha": [..],
// "coeff": c}, ...]}.
HomogeneousPolynomial poly_from_json(const std::string& text);
std::string poly_to_json(const HomogeneousPolynomial& p);

// Comparison report: metadata block plus one entry per checked channel.
std::string report_to_json(const CompareReport& report,
                           const std::map<std::string, std::string>& meta);

// Static SVG log-log chart of the named channels (all positive-valued samples)
// against 1 + t. Channels default to every channel in the series whose values
// are positive somewhere. Deterministic bytes for a given series.
std::string series_to_svg(const DiagnosticSeries& series,
                          std::vector<std::string> channel_names = {});

}  // namespace symflow
