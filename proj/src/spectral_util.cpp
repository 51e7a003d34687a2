#include "spectral_internal.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace symflow::detail {

int steps_per_cadence(double cadence, double t_end, double config_dt, int n, double l, double umax,
                      double* dt_out) {
  if (!(cadence > 0.0) || !(t_end >= cadence))
    throw std::invalid_argument("need 0 < cadence <= t_end");
  if (config_dt == 0.0) {
    const double dx = 2.0 * l / n;
    const double cap = umax > 0.0 ? 0.4 * dx / umax : cadence;
    const int k = std::max(1, static_cast<int>(std::ceil(cadence / cap)));
    *dt_out = cadence / k;
    return k;
  }
  if (!(config_dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double ratio = cadence / config_dt;
  const int k = static_cast<int>(std::lround(ratio));
  if (k < 1 || std::abs(ratio - k) > 1e-9 * ratio)
    throw std::invalid_argument("cadence must be an integer multiple of dt");
  *dt_out = cadence / k;
  return k;
}

void config_meta(const SimulationConfig& config, DiagnosticSeries& out) {
  out.meta["dim"] = std::to_string(config.dim);
  out.meta["group"] = config.group;
  out.meta["group_n"] = std::to_string(config.group_n);
  out.meta["field"] = config.field;
  out.meta["field_n"] = std::to_string(config.field_n);
  out.meta["amplitude"] = fmt::format("{:.17g}", config.amplitude);
  out.meta["N"] = std::to_string(config.N);
  out.meta["L"] = fmt::format("{:.17g}", config.L);
  out.meta["t_end"] = fmt::format("{:.17g}", config.t_end);
  out.meta["cadence"] = fmt::format("{:.17g}", config.cadence);
  out.meta["moment_max_order"] = std::to_string(config.moment_max_order);
  out.meta["window_frac"] = fmt::format("{:.17g}", config.window_frac);
  out.meta["tail_r_min"] = fmt::format("{:.17g}", config.tail_r_min);
  out.meta["tail_r_max"] = fmt::format("{:.17g}", config.tail_r_max);
}

namespace {

// Multi-indices with |alpha| <= max_order for the given dimension, in
// lexicographic order; trailing components stay zero in 2D.
std::vector<std::array<int, 3>> window_indices(int dim, int max_order) {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a <= max_order; ++a)
    for (int b = 0; a + b <= max_order; ++b) {
      if (dim == 2) {
        out.push_back({a, b, 0});
      } else {
        for (int c = 0; a + b + c <= max_order; ++c) out.push_back({a, b, c});
      }
    }
  return out;
}

std::string channel_name(int dim, const std::array<int, 3>& alpha) {
  return dim == 2 ? fmt::format("moment_{}_{}", alpha[0], alpha[1])
                  : fmt::format("moment_{}_{}_{}", alpha[0], alpha[1], alpha[2]);
}

}  // namespace

std::map<std::string, double> windowed_moments(const GridField& f, int max_order,
                                               double window_frac) {
  if (max_order < 0) return {};
  if (f.dim != 2 && f.dim != 3) throw std::invalid_argument("windowed_moments: bad dim");
  const int n = f.N;
  const double dx = f.dx();
  const double r0 = window_frac * f.L;
  const double width = 2.0 * dx;
  const auto alphas = window_indices(f.dim, max_order);
  const int na = static_cast<int>(alphas.size());

  std::vector<double> coord(n);
  std::vector<std::vector<double>> pow_t(n, std::vector<double>(max_order + 1, 1.0));
  for (int j = 0; j < n; ++j) {
    coord[j] = -f.L + j * dx;
    for (int d = 1; d <= max_order; ++d) pow_t[j][d] = pow_t[j][d - 1] * coord[j];
  }

  const int nrows = f.dim == 2 ? n : n * n;
  std::map<std::string, double> out;
  for (const auto& alpha : alphas) out[channel_name(f.dim, alpha)] = 0.0;

  for (const auto& comp : f.comp) {
    // Row partials, combined serially in row order below.
    std::vector<double> num(static_cast<std::size_t>(nrows) * na, 0.0);
    std::vector<double> den(static_cast<std::size_t>(nrows) * na, 0.0);
    parallel_for(nrows, [&](int r0_, int r1_) {
      for (int row = r0_; row < r1_; ++row) {
        const int iy = f.dim == 2 ? row : row % n;
        const int iz = f.dim == 2 ? 0 : row / n;
        const double yz2 = coord[iy] * coord[iy] + (f.dim == 2 ? 0.0 : coord[iz] * coord[iz]);
        double* nrow = num.data() + static_cast<std::size_t>(row) * na;
        double* drow = den.data() + static_cast<std::size_t>(row) * na;
        const std::size_t base = static_cast<std::size_t>(row) * n;
        for (int ix = 0; ix < n; ++ix) {
          const double r = std::sqrt(coord[ix] * coord[ix] + yz2);
          const double chi = 0.5 * (1.0 - std::tanh((r - r0) / width));
          const double v = comp[base + ix] * chi;
          if (v == 0.0) continue;
          const double av = std::abs(v);
          for (int a = 0; a < na; ++a) {
            const double xa = pow_t[ix][alphas[a][0]] * pow_t[iy][alphas[a][1]] *
                              pow_t[iz][alphas[a][2]];
            nrow[a] += v * xa;
            drow[a] += av * std::abs(xa);
          }
        }
      }
    });
    for (int a = 0; a < na; ++a) {
      double ns = 0.0, ds = 0.0;
      for (int row = 0; row < nrows; ++row) {
        ns += num[static_cast<std::size_t>(row) * na + a];
        ds += den[static_cast<std::size_t>(row) * na + a];
      }
      const double value = ds > 0.0 ? std::abs(ns) / ds : 0.0;
      auto& slot = out[channel_name(f.dim, alphas[a])];
      slot = std::max(slot, value);
    }
  }
  return out;
}

}  // namespace symflow::detail
