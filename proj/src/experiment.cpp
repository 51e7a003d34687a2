#include "symflow/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <numbers>

#include "symflow/group.hpp"
#include "symflow/moments.hpp"
#include "symflow/polynomial.hpp"
#include "symflow/rates.hpp"
#include "symflow/solver3d.hpp"

namespace symflow {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// Generator kinds per family, mirroring the standard_group catalog.
std::vector<std::string> family_generators(GroupFamily family, int dim) {
  using GF = GroupFamily;
  if (dim == 2) {
    if (family == GF::C) return {"R2d(n)"};
    return {"R2d(n)", "Tau2d"};
  }
  switch (family) {
    case GF::C:   return {"Rn(n)"};
    case GF::D:   return {"Rn(n)", "U"};
    case GF::S2n: return {"Rtilde(n)"};
    case GF::Cnh: return {"Rn(n)", "W3"};
    case GF::Cnv: return {"Rn(n)", "W2"};
    case GF::Dnh: return {"Rn(n)", "W2", "W3"};
    case GF::Dnd: return {"Rtilde(n)", "W2"};
    case GF::T:   return {"U", "S"};
    case GF::Td:  return {"U", "S", "Z"};
    case GF::Th:  return {"S", "U", "I"};
    case GF::O:   return {"U", "S", "V"};
    case GF::Oh:  return {"S", "V", "I"};
    case GF::Y:   return {"S", "J"};
    case GF::Yh:  return {"S", "J", "I"};
  }
  throw std::logic_error("unreachable");
}

double hp_dot(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
  double s = 0.0;
  for (const auto& [alpha, c] : a.terms) {
    const auto it = b.terms.find(alpha);
    if (it != b.terms.end()) s += c * it->second;
  }
  return s;
}

double hp_norm(const HomogeneousPolynomial& a) { return std::sqrt(hp_dot(a, a)); }

// Relative residual of projecting `expected` onto the span of an orthonormal
// basis: 0 means the expected polynomial lies in the computed space.
double span_residual(const HomogeneousPolynomial& expected,
                     const std::vector<HomogeneousPolynomial>& basis) {
  HomogeneousPolynomial r = expected;
  for (const auto& b : basis) r = hp_add(r, b, -hp_dot(expected, b) / hp_dot(b, b));
  const double scale = hp_norm(expected);
  return scale > 0.0 ? hp_norm(r) / scale : 0.0;
}

double invariance_residual(const HomogeneousPolynomial& p, const SymmetryGroup& g) {
  const double scale = p.max_abs_coeff();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (const auto& q : g.elements)
    worst = std::max(worst, hp_add(transform_poly(p, q), p, -1.0).max_abs_coeff());
  return worst / scale;
}

ordered_json invariant_space_row(const std::string& group_name, int degree,
                                 const std::vector<std::pair<std::string, HomogeneousPolynomial>>&
                                     expected_members) {
  const auto basis = invariant_space(standard_group(group_name, 0, 3), degree);
  ordered_json row;
  row["group"] = group_name;
  row["degree"] = degree;
  row["dimension"] = basis.size();
  row["divisible_dimension"] = divisible_subspace_dim(basis);
  if (!expected_members.empty()) {
    ordered_json members = ordered_json::array();
    for (const auto& [label, poly] : expected_members) {
      ordered_json m;
      m["polynomial"] = label;
      m["projection_residual"] = span_residual(poly, basis);
      members.push_back(std::move(m));
    }
    row["expected_members"] = std::move(members);
  }
  return row;
}

ordered_json pm_row(const std::string& label, const HomogeneousPolynomial& p,
                    const std::string& group_name) {
  const auto division = divide_by_r2(p);
  ordered_json row;
  row["polynomial"] = label;
  row["group"] = group_name;
  row["degree"] = p.degree;
  row["invariance_residual"] = invariance_residual(p, standard_group(group_name, 0, 3));
  row["divisible"] = is_divisible_by_r2(p);
  row["remainder_relative_norm"] =
      p.max_abs_coeff() > 0.0 ? division.remainder.max_abs_coeff() / p.max_abs_coeff() : 0.0;
  return row;
}

}  // namespace

std::string group_audit_json() {
  using GF = GroupFamily;
  ordered_json j;
  j["version"] = kVersion;
  ordered_json fams = ordered_json::array();
  const auto add_row = [&](GF family, int dim) {
    ordered_json row;
    row["name"] = to_string(family);
    row["dim"] = dim;
    row["generators"] = family_generators(family, dim);
    if (family_is_parametric(family)) {
      ordered_json orders;
      for (int n = 1; n <= 8; ++n)
        orders[std::to_string(n)] = standard_group(family, n, dim).order();
      row["orders"] = std::move(orders);
    } else {
      row["order"] = standard_group(family, 0, dim).order();
    }
    fams.push_back(std::move(row));
  };
  add_row(GF::C, 2);
  add_row(GF::D, 2);
  for (GF family : {GF::C, GF::D, GF::S2n, GF::Cnh, GF::Cnv, GF::Dnh, GF::Dnd, GF::T, GF::Td,
                    GF::Th, GF::O, GF::Oh, GF::Y, GF::Yh})
    add_row(family, 3);
  j["families"] = std::move(fams);
  return dump(j);
}

std::string invariant_audit_json() {
  const HomogeneousPolynomial r2 = r2_poly(3);
  const HomogeneousPolynomial r4 = hp_mul(r2, r2);
  const HomogeneousPolynomial r6 = hp_mul(r4, r2);
  ordered_json j;
  j["version"] = kVersion;
  ordered_json entries = ordered_json::array();
  entries.push_back(invariant_space_row("T", 2, {{"|xi|^2", r2}}));
  entries.push_back(invariant_space_row("O", 3, {}));
  entries.push_back(invariant_space_row("Th", 3, {}));
  entries.push_back(invariant_space_row("Y", 3, {}));
  entries.push_back(invariant_space_row("Y", 4, {{"|xi|^4", r4}}));
  entries.push_back(invariant_space_row("Y", 5, {}));
  entries.push_back(
      invariant_space_row("Y", 6, {{"|xi|^6", r6}, {"icosahedral sextic", icosahedral_sextic()}}));
  j["entries"] = std::move(entries);
  return dump(j);
}

std::string moment_constants_json() {
  const PolyGaussianField bar = builtin_field("bar_a");
  const PolyGaussianField tilde = builtin_field("tilde_a");
  const PolyGaussianField both = field_add(bar, tilde);
  const double s2pi32 = std::sqrt(2.0) * std::pow(std::numbers::pi, 1.5);

  ordered_json j;
  j["version"] = kVersion;

  ordered_json integrals = ordered_json::array();
  const auto add_integral = [&](const std::string& name, double computed, double closed_form) {
    ordered_json row;
    row["name"] = name;
    row["computed"] = computed;
    row["closed_form"] = closed_form;
    row["relative_error"] = std::abs(computed - closed_form) / std::abs(closed_form);
    integrals.push_back(std::move(row));
  };
  add_integral("4 int x1 x2 a1 a2 dx, octahedral field",
               4.0 * product_moment(tilde, tilde, 0, 1, {1, 1, 0}), 57.0 / 512.0 * s2pi32);
  add_integral("int (x1^2 - x2^2)(a1^2 - a2^2) dx, octahedral field",
               product_moment(tilde, tilde, 0, 0, {2, 0, 0}) -
                   product_moment(tilde, tilde, 1, 1, {2, 0, 0}) -
                   product_moment(tilde, tilde, 0, 0, {0, 2, 0}) +
                   product_moment(tilde, tilde, 1, 1, {0, 2, 0}),
               15.0 / 64.0 * s2pi32);
  j["integrals"] = std::move(integrals);

  ordered_json p1 = ordered_json::array();
  const auto add_p1 = [&](const std::string& name, const PolyGaussianField& f) {
    const HomogeneousPolynomial p = compute_Pm(f, 1);
    ordered_json row;
    row["field"] = name;
    row["max_abs_coeff"] = p.max_abs_coeff();
    if (name == "bar_plus_tilde_a") {
      const auto it = p.terms.find(Mono{1, 1, 1});
      const double c = it == p.terms.end() ? 0.0 : it->second;
      row["xi1_xi2_xi3_coeff"] = c;
      row["closed_form"] = 63.0 / 128.0 * s2pi32;
      double off = 0.0;
      for (const auto& [alpha, coeff] : p.terms)
        if (alpha != Mono{1, 1, 1}) off = std::max(off, std::abs(coeff));
      row["off_monomial_max"] = off;
    }
    p1.push_back(std::move(row));
  };
  add_p1("bar_a", bar);
  add_p1("tilde_a", tilde);
  add_p1("bar_plus_tilde_a", both);
  j["first_moment_polynomials"] = std::move(p1);

  const HomogeneousPolynomial p2 = compute_Pm(tilde, 2);
  const auto division = divide_by_r2(p2);
  ordered_json divisibility;
  divisibility["field"] = "tilde_a";
  divisibility["m"] = 2;
  divisibility["divisible"] = is_divisible_by_r2(p2);
  divisibility["remainder_relative_norm"] = division.remainder.max_abs_coeff() / p2.max_abs_coeff();
  j["second_moment_divisibility"] = std::move(divisibility);
  return dump(j);
}

std::string pm_divisibility_json() {
  ordered_json j;
  j["version"] = kVersion;
  ordered_json entries = ordered_json::array();
  entries.push_back(
      pm_row("xi1 xi2 xi3", make_homogeneous(3, 3, Poly{{Mono{1, 1, 1}, 1.0}}), "Td"));
  entries.push_back(pm_row(
      "xi1^4 + xi2^4 + xi3^4",
      make_homogeneous(3, 4, Poly{{Mono{4, 0, 0}, 1.0}, {Mono{0, 4, 0}, 1.0}, {Mono{0, 0, 4}, 1.0}}),
      "Oh"));
  entries.push_back(pm_row("icosahedral sextic", icosahedral_sextic(), "Y"));
  j["entries"] = std::move(entries);
  return dump(j);
}

std::vector<std::pair<std::string, std::string>> experiment_artifacts(
    const std::string& config_path) {
  const std::filesystem::path path(config_path);
  const std::string stem = path.stem().string();
  const std::string base_dir = path.has_parent_path() ? path.parent_path().string() : "";
  json j;
  try {
    j = json::parse(read_text_file(config_path));
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", config_path, e.what()));
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ConfigError(fmt::format("{}: experiment entry needs a string 'kind'", config_path));
  const std::string kind = j["kind"].get<std::string>();

  if (kind == "group-audit") return {{stem + ".json", group_audit_json()}};
  if (kind == "invariant-audit") return {{stem + ".json", invariant_audit_json()}};
  if (kind == "moment-constants") return {{stem + ".json", moment_constants_json()}};
  if (kind == "pm-divisibility") return {{stem + ".json", pm_divisibility_json()}};
  if (kind != "simulate2d" && kind != "simulate3d")
    throw ConfigError(fmt::format("{}: unknown experiment kind '{}'", config_path, kind));

  const int dim = kind == "simulate2d" ? 2 : 3;
  std::string report_group;
  int report_group_n = 0;
  bool want_plot = false;
  std::vector<std::string> plot_channels;
  json cfg_json = j;
  cfg_json.erase("kind");
  if (cfg_json.contains("report_group")) {
    if (!cfg_json["report_group"].is_string())
      throw ConfigError("report_group must be a string");
    report_group = cfg_json["report_group"].get<std::string>();
    cfg_json.erase("report_group");
  }
  if (cfg_json.contains("report_group_n")) {
    if (!cfg_json["report_group_n"].is_number_integer())
      throw ConfigError("report_group_n must be an integer");
    report_group_n = cfg_json["report_group_n"].get<int>();
    cfg_json.erase("report_group_n");
  }
  if (cfg_json.contains("plot_channels")) {
    if (!cfg_json["plot_channels"].is_array())
      throw ConfigError("plot_channels must be an array of channel names");
    for (const auto& name : cfg_json["plot_channels"]) {
      if (!name.is_string()) throw ConfigError("plot_channels must be an array of channel names");
      plot_channels.push_back(name.get<std::string>());
    }
    want_plot = true;
    cfg_json.erase("plot_channels");
  }

  const SimulationConfig cfg = simulation_config_from_json(cfg_json.dump(), dim, base_dir);
  DiagnosticSeries series = dim == 2 ? simulate_2d(cfg) : simulate_3d(cfg);
  series.meta["config_hash"] = fnv1a_hex(canonical_config_text(cfg));

  std::vector<std::pair<std::string, std::string>> artifacts;
  artifacts.emplace_back(stem + ".csv", series_to_csv(series));
  if (!report_group.empty()) {
    CompareReport report;
    try {
      report = compare(series, predicted_rates(report_group, dim, report_group_n));
    } catch (const std::exception& e) {
      throw ConfigError(fmt::format("{}: report failed: {}", config_path, e.what()));
    }
    std::map<std::string, std::string> meta = {{"config_hash", series.meta["config_hash"]},
                                               {"group", report_group}};
    artifacts.emplace_back(stem + ".report.json", report_to_json(report, meta));
  }
  if (want_plot) artifacts.emplace_back(stem + ".svg", series_to_svg(series, plot_channels));
  return artifacts;
}

std::vector<std::string> run_experiment(const std::string& config_path,
                                        const std::string& out_dir) {
  const auto artifacts = experiment_artifacts(config_path);
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> names;
  for (const auto& [name, content] : artifacts) {
    write_text_file((std::filesystem::path(out_dir) / name).string(), content);
    names.push_back(name);
  }
  return names;
}

std::vector<std::string> run_accept_tree(const std::string& config_dir,
                                         const std::string& out_dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(config_dir, ec))
    throw ConfigError(fmt::format("config tree '{}' is not a directory", config_dir));
  std::vector<std::string> entries;
  for (const auto& entry : std::filesystem::directory_iterator(config_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      entries.push_back(entry.path().string());
  std::sort(entries.begin(), entries.end());
  if (entries.empty()) throw ConfigError(fmt::format("no *.json entries under '{}'", config_dir));

  std::vector<std::pair<std::string, std::string>> artifacts;
  for (const auto& entry : entries)
    for (auto& artifact : experiment_artifacts(entry)) {
      for (const auto& [name, content] : artifacts)
        if (name == artifact.first)
          throw ConfigError(fmt::format("duplicate artifact name '{}'", artifact.first));
      artifacts.push_back(std::move(artifact));
    }

  std::map<std::string, std::string> hashes;
  for (const auto& [name, content] : artifacts) hashes[name] = fnv1a_hex(content);
  ordered_json manifest;
  manifest["version"] = kVersion;
  ordered_json table;
  for (const auto& [name, hash] : hashes) table[name] = hash;
  manifest["artifacts"] = std::move(table);
  artifacts.emplace_back("accept_manifest.json", dump(manifest));

  std::filesystem::create_directories(out_dir);
  std::vector<std::string> names;
  for (const auto& [name, content] : artifacts) {
    write_text_file((std::filesystem::path(out_dir) / name).string(), content);
    names.push_back(name);
  }
  return names;
}

}  // namespace symflow
