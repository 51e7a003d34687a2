#pragma once

#include <array>
#include <vector>

#include "symflow/diagnostics.hpp"
#include "symflow/fft.hpp"
#include "symflow/field.hpp"
#include "symflow/group.hpp"
#include "symflow/solver2d.hpp"  // SimulationConfig

namespace symflow {

// Velocity-form state on a [-L, L)^3 periodic box, unit viscosity; three N^3
// coefficient arrays, discretely divergence-free after every step.
struct VelocityState3D {
  int N = 0;
  double L = 0.0;
  double t = 0.0;
  std::array<std::vector<Cplx>, 3> u_hat;
};

// Samples a velocity field and projects it onto the discretely
// divergence-free subspace (removes the rounding-level sampling divergence).
VelocityState3D make_state_3d(const GridField& u0);

// I - xi xi^T / |xi|^2 per mode; zero mode untouched. Idempotent.
void leray_project(int n, double l, std::array<std::vector<Cplx>, 3>& v_hat);

GridField velocity_grid_3d(const VelocityState3D& s);

// Omega_hat = i xi x u_hat, returned on the grid.
GridField curl_grid_3d(const VelocityState3D& s);

// u_hat = i xi x omega_hat / |xi|^2 for divergence-free vorticity
// coefficients; rejects inputs whose relative spectral divergence exceeds
// 1e-8.
VelocityState3D biot_savart_3d(int n, double l, const std::array<std::vector<Cplx>, 3>& omega_hat);

// Integrating-factor RK4 step of the projected momentum equation
// du/dt + P div(u (x) u) = Lap u, pseudo-spectral nonlinear term with the
// radial 2/3 mask, projection applied to every stage and to the result.
void step_3d(VelocityState3D& s, double dt);

// Maximum relative symmetry defect of the velocity under the group, divided
// by the grid maximum of |u|. Signed-permutation elements map grid points to
// grid points and are checked exhaustively by exact index relabeling;
// irrational-angle elements (the golden five-fold rotations) are checked via
// the full trigonometric interpolant at fixed interior sample points, and
// only for the group's generators: the defect of a product is bounded by the
// sum of the factors' defects, so generator defects control every element.
double symmetry_drift_3d(const VelocityState3D& s, const SymmetryGroup& g);

// max_xi |xi . u_hat| / max_xi |xi| |u_hat| (0 when the field vanishes).
double divergence_defect_3d(const VelocityState3D& s);

// Runs the velocity solver; records norms of u and Omega = curl u,
// scale-normalized windowed moments of each vorticity component (max over
// components per multi-index), tail fits of |u| and of the nonlinear
// remainder |u - e^{t Lap} u_0|, symmetry drift, and the divergence defect.
DiagnosticSeries simulate_3d(const SimulationConfig& config);

}  // namespace symflow
