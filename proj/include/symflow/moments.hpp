#pragma once

#include <map>

#include "symflow/field.hpp"
#include "symflow/polynomial.hpp"

namespace symflow {

// Integral of x^alpha e^{-lambda |x|^2} over R^d (d implied by use; the
// product is taken over exactly the axes present in alpha). Odd exponents give
// an exact 0.0. Each even factor is (2k-1)!! (2 lambda)^{-k} sqrt(pi/lambda).
double gaussian_moment(const Mono& alpha, double lambda, int dim = 3);

// Integral of |x|^alpha e^{-lambda |x|^2}: per-axis Gamma((k+1)/2) lambda^{-(k+1)/2}.
// Used as the magnitude scale against which "this moment vanishes" is decided.
double abs_gaussian_moment(const Mono& alpha, double lambda, int dim = 3);

// Exact value of the integral of x^alpha f_h(x) g_k(x) dx, expanding the
// coefficient product and summing Gaussian moments at the combined envelope.
// Component indices are 0-based.
double product_moment(const PolyGaussianField& f, const PolyGaussianField& g, int h, int k,
                      const Mono& alpha);

// All moments of a scalar poly-Gaussian density up to max_order.
struct MomentTable {
  int dim = 3;
  int max_order = 0;
  std::map<Mono, double> entries;
};
MomentTable moment_table(const PolyGaussianField& g, int max_order);

// The degree-(m+2) polynomial with coefficient (1/alpha!) int x^alpha a_h a_k
// collected on the monomial xi^alpha xi_h xi_k.
HomogeneousPolynomial compute_Pm(const PolyGaussianField& a, int m);

// Gram matrix int a_h a_k equals c * identity within tol (relative to its
// largest entry). Equivalent to divisibility of compute_Pm(a, 0).
bool check_orthogonality(const PolyGaussianField& a, double tol = 1e-10);

// For each j, compares the degree-(m+3) polynomials
//   sum_{h,k,|alpha|=m} (1/alpha!) [int x^alpha u_h u_k] xi^alpha xi_j xi_h xi_k
//   == |xi|^2 * sum_{h,|alpha|=m} (1/alpha!) [int x^alpha u_h u_j] xi^alpha xi_h
// within tol relative to the larger side.
bool check_time_decay_identities(const PolyGaussianField& u, int m, double tol = 1e-10);

// Largest k <= max_order such that every component moment int x^alpha W_c dx
// with |alpha| <= k vanishes (|value| <= 1e-10 times the integral of
// |x^alpha| |W_c|); -1 if some order-0 integral is already nonzero.
int vorticity_vanish_order(const PolyGaussianField& w, int max_order);

}  // namespace symflow
