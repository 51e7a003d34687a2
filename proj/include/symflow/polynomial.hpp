#pragma once

#include <utility>
#include <vector>

#include "symflow/field.hpp"
#include "symflow/group.hpp"

namespace symflow {

// Homogeneous polynomial in the frequency variable, stored sparsely. Every
// multi-index sums to `degree`; coefficients that are exactly zero are not
// stored.
struct HomogeneousPolynomial {
  int dim = 3;
  int degree = 0;
  Poly terms;

  double max_abs_coeff() const { return poly_max_abs_coeff(terms); }
  bool is_zero() const { return terms.empty(); }
};

// Validates homogeneity and drops exact-zero coefficients.
HomogeneousPolynomial make_homogeneous(int dim, int degree, Poly terms);

// |xi|^2 = xi_1^2 + ... + xi_d^2.
HomogeneousPolynomial r2_poly(int dim);

HomogeneousPolynomial hp_add(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b,
                             double b_scale = 1.0);
HomogeneousPolynomial hp_mul(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b);

// Exact monomial expansion of P(Q xi).
HomogeneousPolynomial transform_poly(const HomogeneousPolynomial& p, const OrthogonalTransform& q);

// Single-divisor reduction P = |xi|^2 * Q + R under graded lexicographic
// order: the leading monomial of the divisor is xi_1^2, so R collects exactly
// the monomials with xi_1-exponent <= 1. Quotient and remainder are unique.
struct DivisionResult {
  HomogeneousPolynomial quotient;   // degree - 2 (zero polynomial if degree < 2)
  HomogeneousPolynomial remainder;  // degree
};
DivisionResult divide_by_r2(const HomogeneousPolynomial& p);

// max|R| <= tol * max|P|; the zero polynomial is divisible.
bool is_divisible_by_r2(const HomogeneousPolynomial& p, double tol = 1e-10);

// Orthonormal basis of the invariant subspace {P : P(Q xi) = P(xi) for all Q}
// of homogeneous polynomials of the given degree. Computed from the group
// generators as the nullspace of stacked (M_Q - I) constraint matrices with
// singular values thresholded at 1e-10 * sigma_max; a singular value falling
// inside the decision band is reported as an error rather than rounded.
std::vector<HomogeneousPolynomial> invariant_space(const SymmetryGroup& g, int degree);

// Dimension of {P in span(basis) : P divisible by |xi|^2}.
int divisible_subspace_dim(const std::vector<HomogeneousPolynomial>& basis);

// The degree-6 icosahedrally invariant polynomial
//   sum_i xi_i^6 + (3/4)(5+sqrt5) (xi1^4 xi2^2 + xi2^4 xi3^2 + xi3^4 xi1^2)
//              + (3/4)(5-sqrt5) (xi1^4 xi3^2 + xi2^4 xi1^2 + xi3^4 xi2^2),
// which is not divisible by |xi|^2. Together with |xi|^6 it spans the
// icosahedral sextic invariants.
HomogeneousPolynomial icosahedral_sextic();

}  // namespace symflow
