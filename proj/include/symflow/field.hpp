#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "symflow/group.hpp"
#include "symflow/transform.hpp"

namespace symflow {

// Multi-index of monomial exponents; unused trailing axes stay zero in 2D.
using Mono = std::array<int, 3>;

inline int mono_degree(const Mono& a) { return a[0] + a[1] + a[2]; }

// Sparse polynomial with real coefficients; std::map keeps a deterministic
// term order for serialization and bitwise-reproducible arithmetic.
using Poly = std::map<Mono, double>;

double poly_eval(const Poly& p, const std::array<double, 3>& x);
double poly_max_abs_coeff(const Poly& p);
int poly_degree(const Poly& p);
Poly poly_add(const Poly& a, const Poly& b, double b_scale = 1.0);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_derivative(const Poly& p, int axis);
// Substitute x -> Q x and expand back into the monomial basis.
Poly poly_compose_linear(const Poly& p, const OrthogonalTransform& q);
// Drop coefficients below 1e-14 * max|coeff|.
Poly poly_pruned(const Poly& p);

// A vector (or scalar) field with components  p_c(x) * exp(-lambda |x|^2).
// All divergence-free initial data in the toolkit is of this closed form, so
// derivatives, orthogonal transforms and group averages stay exact.
struct PolyGaussianField {
  int dim = 3;
  double envelope = 1.0;  // lambda
  std::vector<Poly> comp; // 1 entry (scalar field) or dim entries

  bool is_scalar() const { return comp.size() == 1; }
  int components() const { return static_cast<int>(comp.size()); }
  double max_abs_coeff() const;
  int degree() const;
  bool is_zero(double tol = 0.0) const;
};

// Transformation law under x -> P x:
//   Velocity: f(x) -> P^T f(P x)          (vectors; scalars compose only)
//   Pseudo:   f(x) -> det(P) P^T f(P x)   (axial vectors / pseudo-scalars)
enum class TransformMode { Velocity, Pseudo };

TransformMode transform_mode_from_string(const std::string& s);

std::vector<double> evaluate(const PolyGaussianField& f, const std::array<double, 3>& x);
PolyGaussianField curl(const PolyGaussianField& f);        // dim 3 vector fields only
PolyGaussianField divergence(const PolyGaussianField& f);  // vector -> scalar
PolyGaussianField transform(const PolyGaussianField& f, const OrthogonalTransform& p,
                            TransformMode mode);
// Group average (1/|G|) sum_P transform(f, P, mode): a projection onto the
// invariant subspace (idempotent, and exact for closed-form coefficients).
PolyGaussianField symmetrize(const PolyGaussianField& f, const SymmetryGroup& g,
                             TransformMode mode);
// max over group elements of ||transform(f,P)-f|| <= tol * max|coeff|.
bool is_invariant(const PolyGaussianField& f, const SymmetryGroup& g, TransformMode mode,
                  double tol = 1e-10);

PolyGaussianField field_add(const PolyGaussianField& a, const PolyGaussianField& b);
PolyGaussianField field_scale(const PolyGaussianField& f, double s);

// Named closed-form fields. 3D:
//   bar_b, tilde_b           divergence-free vector potentials
//   bar_a  = curl(bar_b)     T_d-invariant velocity
//   tilde_a = curl(tilde_b)  O_h-invariant velocity
//   bar_plus_tilde_a         bar_a + tilde_a (T_d-invariant, sharp first moment)
//   prism_mu(n)              scalar stream-type function for the prism family
//   prism_a(n)               (-d2 mu, d1 mu, 0): D_{2n,h}-invariant velocity
//   icosahedral_a            Y_h-invariant velocity from a pseudo-symmetrized
//                            curl potential
// 2D (scalar vorticities):
//   dn_omega(n)              Im((x1+i x2)^n) e^{-|x|^2}   D_n-pseudo-invariant
//   cn_omega(n)              [Im + Re/2]((x1+i x2)^n) e^{-|x|^2}  C_n only
//   radial_gauss             e^{-|x|^2}
PolyGaussianField builtin_field(const std::string& name, int n = 0);
std::vector<std::string> builtin_field_names();

// Real-space samples on the uniform periodic grid x_j = -L + j * (2L/N),
// component-major, x-index fastest.
struct GridField {
  int dim = 3;
  int N = 0;
  double L = 0;
  std::vector<std::vector<double>> comp;

  std::size_t points() const;
  double dx() const { return 2.0 * L / N; }
};

GridField sample_to_grid(const PolyGaussianField& f, int N, double L);

}  // namespace symflow
