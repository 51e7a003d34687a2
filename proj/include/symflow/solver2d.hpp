#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "symflow/diagnostics.hpp"
#include "symflow/fft.hpp"
#include "symflow/field.hpp"

namespace symflow {

// Vorticity-form state on a [-L, L)^2 periodic box, unit viscosity. omega_hat
// holds the N*N complex coefficients of the scalar vorticity (x-fastest).
struct VorticityState2D {
  int N = 0;
  double L = 0.0;
  double t = 0.0;
  std::vector<Cplx> omega_hat;
};

// Transforms a sampled scalar vorticity grid into a spectral state.
VorticityState2D make_state_2d(const GridField& omega0);

// Scalar vorticity on the grid (inverse transform of the state).
GridField vorticity_grid_2d(const VorticityState2D& s);

// Velocity recovery u_hat = i (xi_2, -xi_1) omega_hat / |xi|^2, zero mode 0;
// the discrete curl of the result reproduces omega exactly.
GridField biot_savart_2d(const VorticityState2D& s);

// One integrating-factor RK4 step of d omega/dt + u.grad omega = Lap omega:
// diffusion handled exactly by e^{-|xi|^2 dt} factors, the advective term
// evaluated pseudo-spectrally in divergence form with a radial 2/3-rule mask
// (modes |k| > N/3 zeroed inside the nonlinear term). Throws on CFL violation
// (max|u| dt N / (2L) > 0.5) or non-finite values.
void step_2d(VorticityState2D& s, double dt);

struct SimulationConfig {
  int dim = 2;
  std::string group;        // catalog label, e.g. "D4", "Td", "C3"
  int group_n = 0;          // parameter for families named without one
  std::string field;        // builtin field name (or a label when custom_field is set)
  int field_n = 0;          // builtin parameter where applicable
  std::optional<PolyGaussianField> custom_field;  // overrides the builtin catalog
  double amplitude = 1.0;   // multiplies the builtin field
  int N = 256;
  double L = 16.0;
  double dt = 0.0;          // 0 = choose from the initial CFL, safety 0.5
  double t_end = 1.0;
  double cadence = 0.1;     // diagnostic sampling interval
  int moment_max_order = 4; // windowed moments through this total order
  double window_frac = 0.45;  // moment window |x| <= window_frac * L
  double tail_r_min = 4.0;
  double tail_r_max = 0.0;  // 0 = 0.4 L (2D) / 0.45 L (3D)
};

// Runs the vorticity solver, recording at each cadence point: L^2/L^inf norms
// of u and omega, scale-normalized windowed moments of omega through
// moment_max_order, and a spatial tail fit of |u|.
DiagnosticSeries simulate_2d(const SimulationConfig& config);

}  // namespace symflow
