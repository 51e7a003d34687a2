#pragma once

// Shared internals of the 2D/3D pseudo-spectral solvers: wavenumber tables,
// the radial dealias mask, grid norms, and scale-normalized windowed moments.
// Reductions accumulate per grid row and combine serially in row order, so
// results are bitwise identical for every SYMFLOW_THREADS setting.

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "symflow/diagnostics.hpp"
#include "symflow/fft.hpp"
#include "symflow/field.hpp"
#include "symflow/parallel.hpp"
#include "symflow/solver2d.hpp"

namespace symflow::detail {

inline std::vector<int> freq_table(int n) {
  std::vector<int> m(n);
  for (int k = 0; k < n; ++k) m[k] = freq_index(k, n);
  return m;
}

// Strict radial two-thirds rule: a mode survives when 9 |m|^2 < N^2. With
// the strict inequality the sum of two surviving modes has |m| < 2N/3, so
// every aliased image lands at |m'| >= N/3 and is removed again.
inline bool mask_keep(long m_sq, int n) { return 9 * m_sq < static_cast<long>(n) * n; }

inline double max_magnitude(const GridField& f) {
  double m = 0.0;
  for (std::size_t p = 0; p < f.comp[0].size(); ++p) {
    double s = 0.0;
    for (const auto& c : f.comp) s += c[p] * c[p];
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

// L^2(box) norm: sqrt(sum |f|^2 dx^dim).
inline double l2_norm(const GridField& f) {
  double s = 0.0;
  for (const auto& c : f.comp)
    for (double v : c) s += v * v;
  double measure = 1.0;
  for (int d = 0; d < f.dim; ++d) measure *= f.dx();
  return std::sqrt(s * measure);
}

// Number of equal steps per cadence interval, written through dt_out.
// config_dt == 0 picks the step from the given max |u| with a 0.4 safety
// factor on the advective CFL limit; an explicit dt must divide cadence.
int steps_per_cadence(double cadence, double t_end, double config_dt, int n, double l, double umax,
                      double* dt_out);

// Copies the run configuration into series metadata (deterministic %.17g
// formatting for reals).
void config_meta(const SimulationConfig& config, DiagnosticSeries& out);

// Scale-normalized moments of every component over a smooth radial window
// chi(r) = (1 - tanh((r - frac*L)/(2 dx)))/2: for each multi-index |alpha| <=
// max_order the channel value is max over components of
//   |sum chi x^alpha f_c| / sum chi |x^alpha| |f_c|
// (0 when the denominator vanishes). The smooth edge keeps the lattice sum
// spectrally accurate while preserving the window's rotational symmetry.
std::map<std::string, double> windowed_moments(const GridField& f, int max_order,
                                               double window_frac);

}  // namespace symflow::detail
