#include "symflow/solver3d.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spectral_internal.hpp"

namespace symflow {

using detail::freq_table;
using detail::mask_keep;

namespace {

constexpr double kCflLimit = 0.5;

using Arr3 = std::array<std::vector<Cplx>, 3>;

struct Spectral3D {
  int n;
  double l;
  const Fft& fft;
  std::vector<int> freq;

  Spectral3D(int n_, double l_) : n(n_), l(l_), fft(shared_fft(3, n_)), freq(freq_table(n_)) {}

  template <typename Fn>
  void for_modes(Fn&& fn) const {
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy) {
        std::size_t idx = (static_cast<std::size_t>(iz) * n + iy) * n;
        for (int ix = 0; ix < n; ++ix, ++idx) fn(idx, freq[ix], freq[iy], freq[iz]);
      }
  }
};

void project_modes(const Spectral3D& sp, Arr3& v) {
  sp.for_modes([&](std::size_t idx, long m1, long m2, long m3) {
    const long m_sq = m1 * m1 + m2 * m2 + m3 * m3;
    if (m_sq == 0) return;
    const Cplx dot = static_cast<double>(m1) * v[0][idx] + static_cast<double>(m2) * v[1][idx] +
                     static_cast<double>(m3) * v[2][idx];
    const Cplx s = dot / static_cast<double>(m_sq);
    v[0][idx] -= static_cast<double>(m1) * s;
    v[1][idx] -= static_cast<double>(m2) * s;
    v[2][idx] -= static_cast<double>(m3) * s;
  });
}

GridField grid_of(const Spectral3D& sp, const Arr3& hat) {
  GridField g;
  g.dim = 3;
  g.N = sp.n;
  g.L = sp.l;
  g.comp.resize(3);
  for (int c = 0; c < 3; ++c) {
    std::vector<Cplx> tmp = hat[c];
    sp.fft.backward(tmp);
    g.comp[c].resize(tmp.size());
    for (std::size_t i = 0; i < tmp.size(); ++i) g.comp[c][i] = tmp[i].real();
  }
  return g;
}

// Projected divergence-form advection P(-i xi . F[u (x) u]) with the strict
// radial mask on inputs and output; reports max |u| on the grid.
Arr3 nonlinear(const Spectral3D& sp, const Arr3& v_hat, double* umax_out) {
  Arr3 u;
  for (int c = 0; c < 3; ++c) {
    u[c] = v_hat[c];
    sp.for_modes([&](std::size_t idx, long m1, long m2, long m3) {
      if (!mask_keep(m1 * m1 + m2 * m2 + m3 * m3, sp.n)) u[c][idx] = 0.0;
    });
    sp.fft.backward(u[c]);
  }

  double umax_sq = 0.0;
  const std::size_t npts = u[0].size();
  for (std::size_t i = 0; i < npts; ++i) {
    const double a = u[0][i].real(), b = u[1][i].real(), c = u[2][i].real();
    umax_sq = std::max(umax_sq, a * a + b * b + c * c);
  }
  if (umax_out) *umax_out = std::sqrt(umax_sq);

  // Six distinct components of the symmetric flux u_a u_b.
  constexpr int pair_a[6] = {0, 1, 2, 0, 0, 1};
  constexpr int pair_b[6] = {0, 1, 2, 1, 2, 2};
  std::array<std::vector<Cplx>, 6> flux;
  for (int p = 0; p < 6; ++p) {
    flux[p].resize(npts);
    const auto& ua = u[pair_a[p]];
    const auto& ub = u[pair_b[p]];
    for (std::size_t i = 0; i < npts; ++i) flux[p][i] = ua[i].real() * ub[i].real();
    sp.fft.forward(flux[p]);
  }
  // flux index of the (a, b) component.
  constexpr int at[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};

  Arr3 out;
  const double k0 = std::numbers::pi / sp.l;
  for (int c = 0; c < 3; ++c) {
    out[c].resize(npts);
    sp.for_modes([&](std::size_t idx, long m1, long m2, long m3) {
      if (!mask_keep(m1 * m1 + m2 * m2 + m3 * m3, sp.n)) {
        out[c][idx] = 0.0;
        return;
      }
      const Cplx div = k0 * (static_cast<double>(m1) * flux[at[c][0]][idx] +
                             static_cast<double>(m2) * flux[at[c][1]][idx] +
                             static_cast<double>(m3) * flux[at[c][2]][idx]);
      out[c][idx] = Cplx(div.imag(), -div.real());  // -i * div
    });
  }
  project_modes(sp, out);
  return out;
}

void check_vector_grid(const GridField& g) {
  if (g.dim != 3 || g.comp.size() != 3) throw std::invalid_argument("expected a 3D vector grid");
  for (const auto& c : g.comp)
    if (c.size() != g.points()) throw std::invalid_argument("grid size mismatch");
}

}  // namespace

VelocityState3D make_state_3d(const GridField& u0) {
  check_vector_grid(u0);
  VelocityState3D s;
  s.N = u0.N;
  s.L = u0.L;
  s.t = 0.0;
  const Fft& fft = shared_fft(3, u0.N);
  for (int c = 0; c < 3; ++c) {
    s.u_hat[c].assign(u0.comp[c].begin(), u0.comp[c].end());
    fft.forward(s.u_hat[c]);
  }
  leray_project(s.N, s.L, s.u_hat);
  return s;
}

void leray_project(int n, double l, Arr3& v_hat) {
  Spectral3D sp(n, l);
  for (const auto& c : v_hat)
    if (c.size() != sp.fft.size()) throw std::invalid_argument("leray_project size mismatch");
  project_modes(sp, v_hat);
}

GridField velocity_grid_3d(const VelocityState3D& s) {
  return grid_of(Spectral3D(s.N, s.L), s.u_hat);
}

GridField curl_grid_3d(const VelocityState3D& s) {
  Spectral3D sp(s.N, s.L);
  const double k0 = std::numbers::pi / s.L;
  Arr3 w;
  for (int c = 0; c < 3; ++c) w[c].resize(s.u_hat[0].size());
  sp.for_modes([&](std::size_t idx, long m1, long m2, long m3) {
    const Cplx u1 = s.u_hat[0][idx], u2 = s.u_hat[1][idx], u3 = s.u_hat[2][idx];
    const Cplx c1 = k0 * (static_cast<double>(m2) * u3 - static_cast<double>(m3) * u2);
    const Cplx c2 = k0 * (static_cast<double>(m3) * u1 - static_cast<double>(m1) * u3);
    const Cplx c3 = k0 * (static_cast<double>(m1) * u2 - static_cast<double>(m2) * u1);
    w[0][idx] = Cplx(-c1.imag(), c1.real());  // i * c
    w[1][idx] = Cplx(-c2.imag(), c2.real());
    w[2][idx] = Cplx(-c3.imag(), c3.real());
  });
  return grid_of(sp, w);
}

VelocityState3D biot_savart_3d(int n, double l, const Arr3& omega_hat) {
  Spectral3D sp(n, l);
  for (const auto& c : omega_hat)
    if (c.size() != sp.fft.size()) throw std::invalid_argument("biot_savart_3d size mismatch");

  double num = 0.0, den = 0.0;
  sp.for_modes([&](std::size_t idx, long m1, long m2, long m3) {
    const Cplx dot = static_cast<double>(m1) * omega_hat[0][idx] +
                     static_cast<double>(m2) * omega_hat[1][idx] +
                     static_cast<double>(m3) * omega_hat[2][idx];
    const double mag = std::sqrt(static_cast<double>(m1 * m1 + m2 * m2 + m3 * m3));
    const double amp = std::max({std::abs(omega_hat[0][idx]), std::abs(omega_hat[1][idx]),
                                 std::abs(omega_hat[2][idx])});
    num = std::max(num, std::abs(dot));
    den = std::max(den, mag * amp);
  });
  if (den > 0.0 && num > 1e-8 * den)
    throw std::invalid_argument("biot_savart_3d: vorticity coefficients are not solenoidal");

  VelocityState3D s;
  s.N = n;
  s.L = l;
  for (int c = 0; c < 3; ++c) s.u_hat[c].resize(sp.fft.size());
  const double k0 = std::numbers::pi / l;
  sp.for_modes([&](std::size_t idx, long m1, long m2, long m3) {
    const long m_sq = m1 * m1 + m2 * m2 + m3 * m3;
    if (m_sq == 0) {
      s.u_hat[0][idx] = s.u_hat[1][idx] = s.u_hat[2][idx] = 0.0;
      return;
    }
    const double inv = 1.0 / (k0 * static_cast<double>(m_sq));
    const Cplx w1 = omega_hat[0][idx], w2 = omega_hat[1][idx], w3 = omega_hat[2][idx];
    const Cplx x1 = (static_cast<double>(m2) * w3 - static_cast<double>(m3) * w2) * inv;
    const Cplx x2 = (static_cast<double>(m3) * w1 - static_cast<double>(m1) * w3) * inv;
    const Cplx x3 = (static_cast<double>(m1) * w2 - static_cast<double>(m2) * w1) * inv;
    s.u_hat[0][idx] = Cplx(-x1.imag(), x1.real());  // i * (m x w) / (k0 m^2)
    s.u_hat[1][idx] = Cplx(-x2.imag(), x2.real());
    s.u_hat[2][idx] = Cplx(-x3.imag(), x3.real());
  });
  return s;
}

void step_3d(VelocityState3D& s, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step_3d: bad dt");
  Spectral3D sp(s.N, s.L);
  const std::size_t m = s.u_hat[0].size();

  std::vector<double> e(m);
  {
    const double c = (std::numbers::pi / s.L) * (std::numbers::pi / s.L) * 0.5 * dt;
    sp.for_modes([&](std::size_t idx, long m1, long m2, long m3) {
      e[idx] = std::exp(-c * static_cast<double>(m1 * m1 + m2 * m2 + m3 * m3));
    });
  }

  double umax = 0.0;
  Arr3 k = nonlinear(sp, s.u_hat, &umax);
  const double cfl = umax * dt * s.N / (2.0 * s.L);
  if (cfl > kCflLimit)
    throw std::runtime_error(fmt::format("CFL violation: max|u| dt / dx = {:.3f} > {:.2f}", cfl,
                                         kCflLimit));

  // Accumulate the RK4 combination as the k's stream through:
  //   u_next = E^2 u + dt/6 (E^2 k1 + 2 E k2 + 2 E k3 + k4).
  Arr3 acc, stage;
  for (int c = 0; c < 3; ++c) {
    acc[c].resize(m);
    stage[c].resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double e2 = e[i] * e[i];
      acc[c][i] = e2 * (s.u_hat[c][i] + (dt / 6.0) * k[c][i]);
      stage[c][i] = e[i] * (s.u_hat[c][i] + (0.5 * dt) * k[c][i]);
    }
  }
  k = nonlinear(sp, stage, nullptr);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < m; ++i) {
      acc[c][i] += (dt / 3.0) * e[i] * k[c][i];
      stage[c][i] = e[i] * s.u_hat[c][i] + (0.5 * dt) * k[c][i];
    }
  k = nonlinear(sp, stage, nullptr);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < m; ++i) {
      acc[c][i] += (dt / 3.0) * e[i] * k[c][i];
      stage[c][i] = e[i] * (e[i] * s.u_hat[c][i] + dt * k[c][i]);
    }
  k = nonlinear(sp, stage, nullptr);
  double amax = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < m; ++i) {
      acc[c][i] += (dt / 6.0) * k[c][i];
      amax = std::max(amax, std::abs(acc[c][i].real()) + std::abs(acc[c][i].imag()));
    }
  if (!std::isfinite(amax)) throw std::runtime_error("step_3d: solution lost finiteness");
  project_modes(sp, acc);
  s.u_hat = std::move(acc);
  s.t += dt;
}

namespace {

// Fixed interior probes for the trig-interpolant symmetry checks: two shells
// near the data core (the builtin envelopes peak around r ~ 1-2), generic
// directions away from symmetry axes and mirror planes.
std::array<std::array<double, 3>, 8> drift_probes() {
  const std::array<std::array<double, 3>, 8> dirs = {{{0.711, 0.237, 0.662},
                                                      {-0.402, 0.861, 0.310},
                                                      {0.159, -0.648, 0.745},
                                                      {0.866, -0.447, -0.224},
                                                      {-0.531, -0.306, 0.790},
                                                      {0.344, 0.778, -0.527},
                                                      {-0.715, 0.333, -0.614},
                                                      {0.243, 0.441, 0.864}}};
  std::array<std::array<double, 3>, 8> pts{};
  for (int q = 0; q < 8; ++q) {
    double norm = 0.0;
    for (double d : dirs[q]) norm += d * d;
    const double r = (q % 2 == 0 ? 1.2 : 1.8) / std::sqrt(norm);
    for (int d = 0; d < 3; ++d) pts[q][d] = dirs[q][d] * r;
  }
  return pts;
}

// Full-spectrum trigonometric interpolant at an arbitrary point. The dealias
// mask is never applied here: ball truncation rings at the 1e-3..1e-6 level,
// far above the drift budget, while the complete mode set reproduces smooth
// fields to ~1e-10 at the box sizes the symmetry runs use.
std::array<double, 3> eval_interpolant(const Spectral3D& sp, const Arr3& u_hat,
                                       const std::array<double, 3>& x) {
  const int n = sp.n;
  std::array<std::vector<Cplx>, 3> phase;
  for (int d = 0; d < 3; ++d) {
    phase[d].resize(n);
    const double base = std::numbers::pi / sp.l * (x[d] + sp.l);
    for (int k = 0; k < n; ++k) phase[d][k] = std::polar(1.0, base * sp.freq[k]);
  }
  std::array<Cplx, 3> acc{};
  for (int iz = 0; iz < n; ++iz) {
    std::array<Cplx, 3> plane{};
    for (int iy = 0; iy < n; ++iy) {
      std::array<Cplx, 3> line{};
      std::size_t idx = (static_cast<std::size_t>(iz) * n + iy) * n;
      for (int ix = 0; ix < n; ++ix, ++idx) {
        const Cplx p = phase[0][ix];
        for (int c = 0; c < 3; ++c) line[c] += u_hat[c][idx] * p;
      }
      for (int c = 0; c < 3; ++c) plane[c] += line[c] * phase[1][iy];
    }
    for (int c = 0; c < 3; ++c) acc[c] += plane[c] * phase[2][iz];
  }
  const double scale = 1.0 / static_cast<double>(sp.fft.size());
  return {acc[0].real() * scale, acc[1].real() * scale, acc[2].real() * scale};
}

// Exact grid relabeling defect for a signed-permutation element: compares
// u(P x_j) (a gather) against P u(x_j) pointwise over the whole grid.
double grid_defect(const GridField& u, const OrthogonalTransform& p) {
  const int n = u.N;
  int sigma[3] = {0, 1, 2};
  int sign[3] = {1, 1, 1};
  for (int r = 0; r < 3; ++r) {
    sigma[r] = -1;
    for (int c = 0; c < 3; ++c)
      if (std::abs(p(r, c)) > 0.5) {
        sigma[r] = c;
        sign[r] = p(r, c) > 0.0 ? 1 : -1;
      }
  }
  // Per-axis index maps: j'_r = j_{sigma(r)} (sign +) or (N - j) mod N (-).
  std::vector<int> map_pos(n), map_neg(n);
  for (int j = 0; j < n; ++j) {
    map_pos[j] = j;
    map_neg[j] = (n - j) % n;
  }
  double defect = 0.0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const int j[3] = {ix, iy, iz};
        int jp[3];
        for (int r = 0; r < 3; ++r) {
          const int src = j[sigma[r]];
          jp[r] = sign[r] > 0 ? map_pos[src] : map_neg[src];
        }
        const std::size_t src_idx = (static_cast<std::size_t>(iz) * n + iy) * n + ix;
        const std::size_t dst_idx = (static_cast<std::size_t>(jp[2]) * n + jp[1]) * n + jp[0];
        for (int r = 0; r < 3; ++r) {
          double pu = 0.0;
          for (int c = 0; c < 3; ++c) pu += p(r, c) * u.comp[c][src_idx];
          defect = std::max(defect, std::abs(u.comp[r][dst_idx] - pu));
        }
      }
  return defect;
}

}  // namespace

double symmetry_drift_3d(const VelocityState3D& s, const SymmetryGroup& g) {
  if (g.dim != 3) throw std::invalid_argument("symmetry_drift_3d needs a 3D group");
  Spectral3D sp(s.N, s.L);
  const GridField u = grid_of(sp, s.u_hat);
  const double gmax = detail::max_magnitude(u);
  if (gmax == 0.0) return 0.0;

  double defect = 0.0;
  for (const auto& p : g.elements)
    if (p.is_signed_permutation(1e-12)) defect = std::max(defect, grid_defect(u, p));

  const auto probes = drift_probes();
  for (const auto& p : g.generators) {
    if (p.is_signed_permutation(1e-12)) continue;  // covered exhaustively above
    for (const auto& x : probes) {
      const std::array<double, 3> px = p.apply(x);
      const std::array<double, 3> u_at_px = eval_interpolant(sp, s.u_hat, px);
      const std::array<double, 3> u_at_x = eval_interpolant(sp, s.u_hat, x);
      for (int r = 0; r < 3; ++r) {
        double pu = 0.0;
        for (int c = 0; c < 3; ++c) pu += p(r, c) * u_at_x[c];
        defect = std::max(defect, std::abs(u_at_px[r] - pu));
      }
    }
  }
  return defect / gmax;
}

double divergence_defect_3d(const VelocityState3D& s) {
  Spectral3D sp(s.N, s.L);
  double num = 0.0, den = 0.0;
  sp.for_modes([&](std::size_t idx, long m1, long m2, long m3) {
    const Cplx dot = static_cast<double>(m1) * s.u_hat[0][idx] +
                     static_cast<double>(m2) * s.u_hat[1][idx] +
                     static_cast<double>(m3) * s.u_hat[2][idx];
    const double mag = std::sqrt(static_cast<double>(m1 * m1 + m2 * m2 + m3 * m3));
    const double amp = std::max({std::abs(s.u_hat[0][idx]), std::abs(s.u_hat[1][idx]),
                                 std::abs(s.u_hat[2][idx])});
    num = std::max(num, std::abs(dot));
    den = std::max(den, mag * amp);
  });
  return den > 0.0 ? num / den : 0.0;
}

DiagnosticSeries simulate_3d(const SimulationConfig& config) {
  if (config.dim != 3) throw std::invalid_argument("simulate_3d: config.dim must be 3");
  PolyGaussianField f =
      config.custom_field ? *config.custom_field : builtin_field(config.field, config.field_n);
  if (f.dim != 3 || f.components() != 3)
    throw std::invalid_argument("simulate_3d needs a 3D vector field");
  f = field_scale(f, config.amplitude);
  const SymmetryGroup group = standard_group(config.group, config.group_n, 3);

  VelocityState3D s = make_state_3d(sample_to_grid(f, config.N, config.L));
  const Arr3 u0_hat = s.u_hat;
  Spectral3D sp(s.N, s.L);
  const double tail_max = config.tail_r_max > 0.0 ? config.tail_r_max : 0.45 * config.L;

  double dt = 0.0;
  const int per = detail::steps_per_cadence(config.cadence, config.t_end, config.dt, config.N,
                                            config.L,
                                            detail::max_magnitude(velocity_grid_3d(s)), &dt);
  const int cadences = static_cast<int>(std::lround(config.t_end / config.cadence));
  if (std::abs(cadences * config.cadence - config.t_end) > 1e-9 * config.t_end)
    throw std::invalid_argument("t_end must be an integer multiple of cadence");

  DiagnosticSeries out;
  detail::config_meta(config, out);
  out.meta["solver"] = "velocity3d";
  out.meta["dt"] = fmt::format("{:.17g}", dt);

  auto record = [&](double t) {
    out.append(t);
    const GridField u = velocity_grid_3d(s);
    const GridField w = curl_grid_3d(s);
    out.set("linf_u", detail::max_magnitude(u));
    out.set("l2_u", detail::l2_norm(u));
    out.set("linf_w", detail::max_magnitude(w));
    out.set("l2_w", detail::l2_norm(w));
    for (const auto& [name, value] :
         detail::windowed_moments(w, config.moment_max_order, config.window_frac))
      out.set(name, value);

    if (detail::max_magnitude(u) == 0.0) {
      out.set("tail_exponent", 0.0);
      out.set("tail_validity", 0.0);
    } else {
      const TailFit tail = tail_exponent(u, config.tail_r_min, tail_max);
      out.set("tail_exponent", tail.exponent);
      out.set("tail_validity", tail.validity ? 1.0 : 0.0);
    }

    // Nonlinear remainder u - e^{t Lap} u0: the algebraic far field develops
    // here, while the Gaussian-localized linear part still dominates |u|.
    GridField diff;
    {
      Arr3 d;
      const double c = (std::numbers::pi / s.L) * (std::numbers::pi / s.L) * t;
      for (int q = 0; q < 3; ++q) d[q].resize(u0_hat[q].size());
      sp.for_modes([&](std::size_t idx, long m1, long m2, long m3) {
        const double et = std::exp(-c * static_cast<double>(m1 * m1 + m2 * m2 + m3 * m3));
        for (int q = 0; q < 3; ++q) d[q][idx] = s.u_hat[q][idx] - et * u0_hat[q][idx];
      });
      diff = grid_of(sp, d);
    }
    if (detail::max_magnitude(diff) == 0.0) {
      out.set("tail_nl_exponent", 0.0);
      out.set("tail_nl_validity", 0.0);
    } else {
      const TailFit nl = tail_exponent(diff, config.tail_r_min, tail_max);
      out.set("tail_nl_exponent", nl.exponent);
      out.set("tail_nl_validity", nl.validity ? 1.0 : 0.0);
    }

    out.set("symmetry_drift", symmetry_drift_3d(s, group));
    out.set("div_defect", divergence_defect_3d(s));
  };

  record(0.0);
  for (int c = 1; c <= cadences; ++c) {
    for (int k = 0; k < per; ++k) step_3d(s, dt);
    s.t = c * config.cadence;  // absorb per-step rounding in the clock
    record(s.t);
  }
  out.validate();
  return out;
}

}  // namespace symflow
