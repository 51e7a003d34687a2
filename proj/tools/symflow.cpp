// Command-line entry point: wires configs to the library modules and owns the
// artifact formats. Exit status 0 = success, 1 = runtime failure, 2 = bad
// input file, 3 = a check subcommand answered "no".
#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "symflow/experiment.hpp"
#include "symflow/group.hpp"
#include "symflow/io.hpp"
#include "symflow/moments.hpp"
#include "symflow/parallel.hpp"
#include "symflow/polynomial.hpp"
#include "symflow/rates.hpp"
#include "symflow/solver3d.hpp"

namespace {

using namespace symflow;

constexpr int kExitCheckFailed = 3;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-")
    std::fputs(content.c_str(), stdout);
  else
    write_text_file(out_path, content);
}

// A field argument is either a builtin catalog name or a path to a field JSON.
PolyGaussianField load_field(const std::string& input, int n) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(input, ec)) return field_from_json(read_text_file(input));
  const auto names = builtin_field_names();
  if (std::find(names.begin(), names.end(), input) == names.end())
    throw ConfigError(fmt::format("'{}' is neither a readable file nor a builtin field", input));
  return builtin_field(input, n);
}

int run_groups_list() {
  std::fputs(group_audit_json().c_str(), stdout);
  return 0;
}

int run_groups_show(const std::string& name, int n, int dim, const std::string& out_path) {
  const SymmetryGroup g = standard_group(name, n, dim);
  std::string csv = fmt::format("# version={}\n# group={} dim={} order={}\n", kVersion, g.name,
                                g.dim, g.order());
  csv += g.dim == 2 ? "m00,m01,m10,m11,det\n"
                    : "m00,m01,m02,m10,m11,m12,m20,m21,m22,det\n";
  for (const auto& e : g.elements) {
    for (int r = 0; r < g.dim; ++r)
      for (int c = 0; c < g.dim; ++c) csv += fmt::format("{:.17g},", e(r, c));
    csv += fmt::format("{:.17g}\n", e.det());
  }
  emit(out_path, csv);
  return 0;
}

int run_field_show(const std::string& input, int n, const std::string& out_path) {
  emit(out_path, field_to_json(load_field(input, n)));
  return 0;
}

int run_field_check(const std::string& input, int n, const std::string& group_name, int group_n,
                    const std::string& mode_name, double tol) {
  const PolyGaussianField f = load_field(input, n);
  const SymmetryGroup g = standard_group(group_name, group_n, f.dim);
  const TransformMode mode = transform_mode_from_string(mode_name);
  const bool ok = is_invariant(f, g, mode, tol);
  fmt::print("field={} group={} mode={} tol={:g} invariant={}\n", input, g.name, mode_name, tol,
             ok);
  return ok ? 0 : kExitCheckFailed;
}

int run_pm(const std::string& input, int field_n, int m, const std::string& out_path) {
  emit(out_path, poly_to_json(compute_Pm(load_field(input, field_n), m)));
  return 0;
}

int run_divisible(const std::string& input) {
  const HomogeneousPolynomial p = poly_from_json(read_text_file(input));
  const auto division = divide_by_r2(p);
  const double scale = p.max_abs_coeff();
  fmt::print("degree={} divisible={} remainder_relative_norm={:.17g}\n", p.degree,
             is_divisible_by_r2(p), scale > 0.0 ? division.remainder.max_abs_coeff() / scale : 0.0);
  return 0;
}

int run_invariant_space(const std::string& group_name, int group_n, int degree,
                        const std::string& out_path) {
  const SymmetryGroup g = standard_group(group_name, group_n, 3);
  const auto basis = invariant_space(g, degree);
  fmt::print("group={} degree={} dimension={} divisible_dimension={}\n", g.name, degree,
             basis.size(), divisible_subspace_dim(basis));
  if (!out_path.empty()) {
    std::string text;
    for (const auto& b : basis) text += poly_to_json(b);
    write_text_file(out_path, text);
  }
  return 0;
}

int run_simulate(int dim, const std::string& config_path, const std::string& out_path) {
  const std::filesystem::path path(config_path);
  const std::string base_dir = path.has_parent_path() ? path.parent_path().string() : "";
  const SimulationConfig cfg =
      simulation_config_from_json(read_text_file(config_path), dim, base_dir);
  DiagnosticSeries series = dim == 2 ? simulate_2d(cfg) : simulate_3d(cfg);
  series.meta["config_hash"] = fnv1a_hex(canonical_config_text(cfg));
  emit(out_path, series_to_csv(series));
  return 0;
}

int run_report(const std::string& series_path, const std::string& group_name, int group_n,
               double t_min, double t_max, const std::string& out_path) {
  const DiagnosticSeries series = series_from_csv(read_text_file(series_path));
  const auto it = series.meta.find("dim");
  if (it == series.meta.end())
    throw ConfigError("series metadata lacks 'dim'; was it written by simulate2d/simulate3d?");
  const int dim = std::stoi(it->second);
  CompareOptions options;
  if (t_min > 0.0) options.fit_t_min = t_min;
  if (t_max > 0.0) options.fit_t_max = t_max;
  const CompareReport report = compare(series, predicted_rates(group_name, dim, group_n), options);
  std::map<std::string, std::string> meta = {{"group", group_name}};
  if (series.meta.count("config_hash")) meta["config_hash"] = series.meta.at("config_hash");
  emit(out_path, report_to_json(report, meta));
  return report.all_pass ? 0 : kExitCheckFailed;
}

int run_plot(const std::string& series_path, const std::vector<std::string>& channels,
             const std::string& out_path) {
  const DiagnosticSeries series = series_from_csv(read_text_file(series_path));
  emit(out_path, series_to_svg(series, channels));
  return 0;
}

int run_accept(const std::string& config_dir, const std::string& out_dir) {
  const auto names = run_accept_tree(config_dir, out_dir);
  for (const auto& name : names) fmt::print("{}\n", name);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "symflow: symmetric divergence-free fields, their moment-polynomial\n"
      "audits, and pseudo-spectral Navier-Stokes decay experiments.\n"
      "SYMFLOW_THREADS caps internal parallelism (results do not depend on it)."};
  app.require_subcommand(1);

  auto* groups_cmd = app.add_subcommand("groups", "point-group catalog");
  groups_cmd->require_subcommand(1);
  groups_cmd->add_subcommand("list", "print the family table as JSON");
  auto* groups_show = groups_cmd->add_subcommand("show", "write one group's elements as CSV");
  std::string group_name, out_path;
  int group_n = 0, dim = 3;
  groups_show->add_option("name", group_name, "group name, e.g. Td, D4h, C6")->required();
  groups_show->add_option("--n", group_n, "parameter for parametric families");
  groups_show->add_option("--dim", dim, "2 or 3")->check(CLI::IsMember({2, 3}));
  groups_show->add_option("--out", out_path, "output path (default stdout)");

  auto* field_cmd = app.add_subcommand("field", "closed-form field catalog");
  field_cmd->require_subcommand(1);
  std::string field_input, field_mode = "velocity";
  int field_n = 0;
  double field_tol = 1e-10;
  auto* field_show = field_cmd->add_subcommand("show", "print a field as JSON");
  field_show->add_option("--input", field_input, "builtin name or field JSON path")->required();
  field_show->add_option("--field-n", field_n, "builtin parameter (e.g. prism_a)");
  field_show->add_option("--out", out_path, "output path (default stdout)");
  auto* field_check = field_cmd->add_subcommand("check", "test group invariance (exit 3 = no)");
  field_check->add_option("--input", field_input, "builtin name or field JSON path")->required();
  field_check->add_option("--field-n", field_n, "builtin parameter");
  field_check->add_option("--group", group_name, "group name")->required();
  field_check->add_option("--n", group_n, "group parameter");
  field_check->add_option("--mode", field_mode, "velocity | pseudo");
  field_check->add_option("--tol", field_tol, "relative tolerance");

  auto* pm_cmd = app.add_subcommand("pm", "moment polynomial P_m of a field");
  int pm_m = 0;
  pm_cmd->add_option("--input", field_input, "builtin name or field JSON path")->required();
  pm_cmd->add_option("--field-n", field_n, "builtin parameter");
  pm_cmd->add_option("--m", pm_m, "moment order m >= 0")->required();
  pm_cmd->add_option("--out", out_path, "output path (default stdout)");

  auto* div_cmd = app.add_subcommand("divisible", "divide a polynomial by |xi|^2");
  std::string poly_input;
  div_cmd->add_option("--input", poly_input, "polynomial JSON path")->required();

  auto* inv_cmd = app.add_subcommand("invariant-space", "invariant polynomial space of a group");
  int degree = 0;
  inv_cmd->add_option("--group", group_name, "group name")->required();
  inv_cmd->add_option("--n", group_n, "group parameter");
  inv_cmd->add_option("--degree", degree, "homogeneous degree")->required();
  inv_cmd->add_option("--out", out_path, "write the basis as concatenated JSON");

  std::string config_path, series_path;
  auto* sim2_cmd = app.add_subcommand("simulate2d", "vorticity-form 2D run");
  sim2_cmd->add_option("--config", config_path, "run config JSON")->required();
  sim2_cmd->add_option("--out", out_path, "series CSV path (default stdout)");
  auto* sim3_cmd = app.add_subcommand("simulate3d", "velocity-form 3D run");
  sim3_cmd->add_option("--config", config_path, "run config JSON")->required();
  sim3_cmd->add_option("--out", out_path, "series CSV path (default stdout)");

  auto* report_cmd = app.add_subcommand("report", "compare a series against the decay catalog");
  double t_min = 0.0, t_max = 0.0;
  report_cmd->add_option("--series", series_path, "series CSV path")->required();
  report_cmd->add_option("--group", group_name, "catalog group name")->required();
  report_cmd->add_option("--n", group_n, "group parameter");
  report_cmd->add_option("--t-min", t_min, "fit window start (default 5)");
  report_cmd->add_option("--t-max", t_max, "fit window end (default: series horizon)");
  report_cmd->add_option("--out", out_path, "report JSON path (default stdout)");

  auto* plot_cmd = app.add_subcommand("plot", "render a series as a log-log SVG chart");
  std::vector<std::string> channels;
  plot_cmd->add_option("--series", series_path, "series CSV path")->required();
  plot_cmd->add_option("--channels", channels, "channel names (default: all positive)");
  plot_cmd->add_option("--out", out_path, "SVG path (default stdout)");

  auto* accept_cmd = app.add_subcommand("accept", "run a config tree of experiment presets");
  std::string config_dir, out_dir = "accept-out";
  accept_cmd->add_option("--configs", config_dir, "directory of experiment JSON entries")
      ->required();
  accept_cmd->add_option("--out", out_dir, "artifact directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (groups_cmd->parsed()) {
      if (groups_cmd->get_subcommand("list")->parsed()) return run_groups_list();
      return run_groups_show(group_name, group_n, dim, out_path);
    }
    if (field_cmd->parsed()) {
      if (field_show->parsed()) return run_field_show(field_input, field_n, out_path);
      return run_field_check(field_input, field_n, group_name, group_n, field_mode, field_tol);
    }
    if (pm_cmd->parsed()) return run_pm(field_input, field_n, pm_m, out_path);
    if (div_cmd->parsed()) return run_divisible(poly_input);
    if (inv_cmd->parsed()) return run_invariant_space(group_name, group_n, degree, out_path);
    if (sim2_cmd->parsed()) return run_simulate(2, config_path, out_path);
    if (sim3_cmd->parsed()) return run_simulate(3, config_path, out_path);
    if (report_cmd->parsed()) return run_report(series_path, group_name, group_n, t_min, t_max, out_path);
    if (plot_cmd->parsed()) return run_plot(series_path, channels, out_path);
    if (accept_cmd->parsed()) return run_accept(config_dir, out_dir);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
