#include "symflow/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

namespace symflow {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string real_text(double v) { return fmt::format("{:.17g}", v); }

double parse_real(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v, std::chars_format::general);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ConfigError(fmt::format("bad numeric value '{}'", s));
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", what, e.what()));
  }
}

Mono mono_from_json(const json& alpha, int dim) {
  if (!alpha.is_array() || static_cast<int>(alpha.size()) != dim)
    throw ConfigError(fmt::format("alpha must be an array of {} exponents", dim));
  Mono m{0, 0, 0};
  for (int d = 0; d < dim; ++d) {
    if (!alpha[d].is_number_integer() || alpha[d].get<int>() < 0)
      throw ConfigError("alpha exponents must be non-negative integers");
    m[d] = alpha[d].get<int>();
  }
  return m;
}

ordered_json mono_to_json(const Mono& m, int dim) {
  ordered_json a = ordered_json::array();
  for (int d = 0; d < dim; ++d) a.push_back(m[d]);
  return a;
}

Poly poly_terms_from_json(const json& terms, int dim) {
  if (!terms.is_array()) throw ConfigError("terms/components entries must be arrays");
  Poly p;
  for (const auto& term : terms) {
    if (!term.is_object() || !term.contains("alpha") || !term.contains("coeff"))
      throw ConfigError("each term needs {alpha, coeff}");
    if (!term["coeff"].is_number()) throw ConfigError("coeff must be a number");
    p[mono_from_json(term["alpha"], dim)] += term["coeff"].get<double>();
  }
  return p;
}

ordered_json poly_terms_to_json(const Poly& p, int dim) {
  ordered_json terms = ordered_json::array();
  for (const auto& [alpha, coeff] : p) {
    ordered_json term;
    term["alpha"] = mono_to_json(alpha, dim);
    term["coeff"] = coeff;
    terms.push_back(std::move(term));
  }
  return terms;
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

std::string canonical_config_text(const SimulationConfig& config) {
  std::map<std::string, std::string> kv;
  kv["dim"] = std::to_string(config.dim);
  kv["group"] = config.group;
  kv["group_n"] = std::to_string(config.group_n);
  kv["field"] = config.field;
  kv["field_n"] = std::to_string(config.field_n);
  kv["amplitude"] = real_text(config.amplitude);
  kv["N"] = std::to_string(config.N);
  kv["L"] = real_text(config.L);
  kv["dt"] = real_text(config.dt);
  kv["t_end"] = real_text(config.t_end);
  kv["cadence"] = real_text(config.cadence);
  kv["moment_max_order"] = std::to_string(config.moment_max_order);
  kv["window_frac"] = real_text(config.window_frac);
  kv["tail_r_min"] = real_text(config.tail_r_min);
  kv["tail_r_max"] = real_text(config.tail_r_max);
  if (config.custom_field) kv["field_json"] = field_to_json(*config.custom_field);
  std::string out;
  for (const auto& [k, v] : kv) out += fmt::format("{}={}\n", k, v);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
  out << text;
  if (!out.good()) throw std::runtime_error(fmt::format("short write to '{}'", path));
}

std::string series_to_csv(const DiagnosticSeries& series) {
  series.validate();
  std::string out;
  if (!series.meta.count("version")) out += fmt::format("# version={}\n", kVersion);
  for (const auto& [k, v] : series.meta) out += fmt::format("# {}={}\n", k, v);
  out += "t";
  for (const auto& [name, values] : series.channels) out += fmt::format(",{}", name);
  out += "\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out += real_text(series.times[i]);
    for (const auto& [name, values] : series.channels) out += "," + real_text(values[i]);
    out += "\n";
  }
  return out;
}

DiagnosticSeries series_from_csv(const std::string& text) {
  DiagnosticSeries series;
  std::vector<std::string> names;
  for (const std::string_view line : split(text, '\n')) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view kv = line.substr(1);
      if (!kv.empty() && kv.front() == ' ') kv.remove_prefix(1);
      const std::size_t eq = kv.find('=');
      if (eq == std::string_view::npos) throw ConfigError("metadata line without '='");
      series.meta[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
      continue;
    }
    const auto cells = split(line, ',');
    if (names.empty()) {
      if (cells.empty() || cells[0] != "t") throw ConfigError("series header must start with t");
      for (std::size_t c = 1; c < cells.size(); ++c) {
        names.emplace_back(cells[c]);
        series.channels[names.back()];
      }
      continue;
    }
    if (cells.size() != names.size() + 1)
      throw ConfigError("series row width does not match the header");
    series.times.push_back(parse_real(cells[0]));
    for (std::size_t c = 0; c < names.size(); ++c)
      series.channels[names[c]].push_back(parse_real(cells[c + 1]));
  }
  if (names.empty()) throw ConfigError("series has no header row");
  try {
    series.validate();
  } catch (const std::exception& e) {
    throw ConfigError(fmt::format("inconsistent series: {}", e.what()));
  }
  return series;
}

SimulationConfig simulation_config_from_json(const std::string& text, int dim,
                                             const std::string& base_dir) {
  const json j = parse_json(text, "config");
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "group",  "field",   "field_n",          "amplitude",   "N",
      "L",      "dt",      "t_end",            "cadence",     "moment_max_order",
      "window_frac",       "tail_r_min",       "tail_r_max"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError(fmt::format("unknown config key '{}'", key));
  for (const char* key : {"group", "field", "N", "L", "t_end", "cadence"})
    if (!j.contains(key)) throw ConfigError(fmt::format("config key '{}' is required", key));

  SimulationConfig cfg;
  cfg.dim = dim;
  if (j["group"].is_string()) {
    cfg.group = j["group"].get<std::string>();
  } else if (j["group"].is_object()) {
    if (!j["group"].contains("name") || !j["group"]["name"].is_string())
      throw ConfigError("group.name must be a string");
    cfg.group = j["group"]["name"].get<std::string>();
    if (j["group"].contains("n")) {
      if (!j["group"]["n"].is_number_integer()) throw ConfigError("group.n must be an integer");
      cfg.group_n = j["group"]["n"].get<int>();
    }
    for (const auto& [key, value] : j["group"].items())
      if (key != "name" && key != "n")
        throw ConfigError(fmt::format("unknown group key '{}'", key));
  } else {
    throw ConfigError("group must be a string or {name, n}");
  }

  if (!j["field"].is_string()) throw ConfigError("field must be a string");
  cfg.field = j["field"].get<std::string>();

  const auto read_int = [&](const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) throw ConfigError(fmt::format("{} must be an integer", key));
    return j[key].get<int>();
  };
  const auto read_real = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(fmt::format("{} must be a number", key));
    return j[key].get<double>();
  };
  cfg.field_n = read_int("field_n", cfg.field_n);
  cfg.N = read_int("N", cfg.N);
  cfg.moment_max_order = read_int("moment_max_order", cfg.moment_max_order);
  cfg.amplitude = read_real("amplitude", cfg.amplitude);
  cfg.L = read_real("L", cfg.L);
  cfg.dt = read_real("dt", cfg.dt);
  cfg.t_end = read_real("t_end", cfg.t_end);
  cfg.cadence = read_real("cadence", cfg.cadence);
  cfg.window_frac = read_real("window_frac", cfg.window_frac);
  cfg.tail_r_min = read_real("tail_r_min", cfg.tail_r_min);
  cfg.tail_r_max = read_real("tail_r_max", cfg.tail_r_max);
  if (cfg.N < 4) throw ConfigError("N must be at least 4");
  if (!(cfg.L > 0.0)) throw ConfigError("L must be positive");
  if (!(cfg.t_end > 0.0) || !(cfg.cadence > 0.0))
    throw ConfigError("t_end and cadence must be positive");

  // A field value naming a readable file is loaded; anything else must be a
  // builtin catalog name.
  std::filesystem::path field_path(cfg.field);
  if (field_path.is_relative() && !base_dir.empty())
    field_path = std::filesystem::path(base_dir) / field_path;
  std::error_code ec;
  if (std::filesystem::is_regular_file(field_path, ec)) {
    cfg.custom_field = field_from_json(read_text_file(field_path.string()));
    if (cfg.custom_field->dim != dim)
      throw ConfigError(fmt::format("field file is {}-dimensional, run needs {}",
                                    cfg.custom_field->dim, dim));
  } else {
    const auto names = builtin_field_names();
    if (std::find(names.begin(), names.end(), cfg.field) == names.end())
      throw ConfigError(fmt::format("field '{}' is neither a readable file nor a builtin",
                                    cfg.field));
  }
  return cfg;
}

PolyGaussianField field_from_json(const std::string& text) {
  const json j = parse_json(text, "field");
  if (!j.is_object() || !j.contains("dim") || !j.contains("envelope") ||
      !j.contains("components"))
    throw ConfigError("field needs {dim, envelope, components}");
  PolyGaussianField f;
  if (!j["dim"].is_number_integer()) throw ConfigError("field dim must be an integer");
  f.dim = j["dim"].get<int>();
  if (f.dim != 2 && f.dim != 3) throw ConfigError("field dim must be 2 or 3");
  if (!j["envelope"].is_number()) throw ConfigError("field envelope must be a number");
  f.envelope = j["envelope"].get<double>();
  if (!(f.envelope > 0.0)) throw ConfigError("field envelope must be positive");
  if (!j["components"].is_array()) throw ConfigError("field components must be an array");
  const int nc = static_cast<int>(j["components"].size());
  if (nc != 1 && nc != f.dim)
    throw ConfigError("field must have one component (scalar) or dim components");
  for (const auto& comp : j["components"]) f.comp.push_back(poly_terms_from_json(comp, f.dim));
  return f;
}

std::string field_to_json(const PolyGaussianField& f) {
  ordered_json j;
  j["dim"] = f.dim;
  j["envelope"] = f.envelope;
  ordered_json comps = ordered_json::array();
  for (const auto& comp : f.comp) comps.push_back(poly_terms_to_json(comp, f.dim));
  j["components"] = std::move(comps);
  return j.dump(2) + "\n";
}

HomogeneousPolynomial poly_from_json(const std::string& text) {
  const json j = parse_json(text, "polynomial");
  if (!j.is_object() || !j.contains("dim") || !j.contains("degree") || !j.contains("terms"))
    throw ConfigError("polynomial needs {dim, degree, terms}");
  if (!j["dim"].is_number_integer() || !j["degree"].is_number_integer())
    throw ConfigError("polynomial dim and degree must be integers");
  const int dim = j["dim"].get<int>();
  if (dim != 2 && dim != 3) throw ConfigError("polynomial dim must be 2 or 3");
  try {
    return make_homogeneous(dim, j["degree"].get<int>(), poly_terms_from_json(j["terms"], dim));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string poly_to_json(const HomogeneousPolynomial& p) {
  ordered_json j;
  j["dim"] = p.dim;
  j["degree"] = p.degree;
  j["terms"] = poly_terms_to_json(p.terms, p.dim);
  return j.dump(2) + "\n";
}

std::string report_to_json(const CompareReport& report,
                           const std::map<std::string, std::string>& meta) {
  ordered_json j;
  ordered_json m;
  if (!meta.count("version")) m["version"] = kVersion;
  for (const auto& [k, v] : meta) m[k] = v;
  j["meta"] = std::move(m);
  j["all_pass"] = report.all_pass;
  ordered_json entries = ordered_json::array();
  for (const auto& e : report.entries) {
    ordered_json row;
    row["channel"] = e.channel;
    row["measured"] = e.measured;
    row["predicted"] = e.predicted;
    row["tolerance"] = e.tolerance;
    row["pass"] = e.pass;
    if (!e.note.empty()) row["note"] = e.note;
    entries.push_back(std::move(row));
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

std::string series_to_svg(const DiagnosticSeries& series,
                          std::vector<std::string> channel_names) {
  series.validate();
  if (series.times.empty()) throw std::invalid_argument("cannot plot an empty series");
  if (channel_names.empty()) {
    for (const auto& [name, values] : series.channels)
      if (std::any_of(values.begin(), values.end(), [](double v) { return v > 0.0; }))
        channel_names.push_back(name);
  }
  if (channel_names.empty()) throw std::invalid_argument("no positive-valued channel to plot");

  // Data ranges in log10 coordinates; x is log10(1+t).
  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  for (const double t : series.times) {
    const double x = std::log10(1.0 + t);
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
  }
  for (const auto& name : channel_names) {
    for (const double v : series.channel(name)) {
      if (!(v > 0.0)) continue;
      const double y = std::log10(v);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (y_lo > y_hi) throw std::invalid_argument("selected channels have no positive values");
  if (x_hi - x_lo < 1e-12) { x_lo -= 0.5; x_hi += 0.5; }
  if (y_hi - y_lo < 1e-12) { y_lo -= 0.5; y_hi += 0.5; }
  const double x_pad = 0.04 * (x_hi - x_lo), y_pad = 0.04 * (y_hi - y_lo);
  x_lo -= x_pad; x_hi += x_pad;
  y_lo -= y_pad; y_hi += y_pad;

  const double width = 760, height = 480;
  const double ml = 70, mr = 180, mt = 24, mb = 48;
  const auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (width - ml - mr); };
  const auto py = [&](double y) { return height - mb - (y - y_lo) / (y_hi - y_lo) * (height - mt - mb); };
  const auto coord = [](double v) { return fmt::format("{:.2f}", v); };

  static const char* palette[] = {"#1f6fb4", "#d1495b", "#2e8b57", "#8d5a97",
                                  "#c77d2a", "#4aa3a2", "#7a6a28", "#5c5c8a"};

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n",
      width, height);
  svg += "<desc>\n";
  if (!series.meta.count("version")) svg += fmt::format("version={}\n", kVersion);
  for (const auto& [k, v] : series.meta) svg += fmt::format("{}={}\n", k, v);
  svg += "</desc>\n";
  svg += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);

  // Decade grid lines and tick labels.
  for (int k = static_cast<int>(std::ceil(x_lo)); k <= static_cast<int>(std::floor(x_hi)); ++k) {
    svg += fmt::format(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#dddddd\"/>\n"
        "<text x=\"{0}\" y=\"{3}\" font-size=\"11\" text-anchor=\"middle\">1e{4}</text>\n",
        coord(px(k)), coord(py(y_hi)), coord(py(y_lo)), coord(height - mb + 16), k);
  }
  for (int k = static_cast<int>(std::ceil(y_lo)); k <= static_cast<int>(std::floor(y_hi)); ++k) {
    svg += fmt::format(
        "<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"#dddddd\"/>\n"
        "<text x=\"{3}\" y=\"{2}\" font-size=\"11\" text-anchor=\"end\" dy=\"4\">1e{4}</text>\n",
        coord(px(x_lo)), coord(px(x_hi)), coord(py(k)), coord(ml - 8), k);
  }
  svg += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333333\"/>\n",
      coord(ml), coord(mt), coord(width - ml - mr), coord(height - mt - mb));
  svg += fmt::format(
      "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">1 + t (log)</text>\n",
      coord(ml + (width - ml - mr) / 2), coord(height - 10));

  // One polyline per contiguous run of positive samples, one color per channel.
  int ci = 0;
  for (const auto& name : channel_names) {
    const auto& values = series.channel(name);
    const char* color = palette[ci % 8];
    std::string points;
    const auto flush = [&]() {
      if (points.empty()) return;
      svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                         color, points);
      points.clear();
    };
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] > 0.0)) {
        flush();
        continue;
      }
      points += fmt::format("{}{},{}", points.empty() ? "" : " ",
                            coord(px(std::log10(1.0 + series.times[i]))),
                            coord(py(std::log10(values[i]))));
    }
    flush();
    const double ly = mt + 16 + 18 * ci;
    svg += fmt::format(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n"
        "<text x=\"{4}\" y=\"{1}\" font-size=\"11\" dy=\"4\">{5}</text>\n",
        coord(width - mr + 10), coord(ly), coord(width - mr + 34), color,
        coord(width - mr + 40), name);
    ++ci;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace symflow
