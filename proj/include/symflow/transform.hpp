#pragma once

#include <array>
#include <string>

namespace symflow {

// An element of O(2) or O(3). Stored row-major in a fixed 3x3 buffer; 2D
// transforms occupy the top-left 2x2 block and leave the third row/column
// as in the identity, so composition and application never special-case dim.
struct OrthogonalTransform {
  int dim = 3;
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double operator()(int r, int c) const { return m[3 * r + c]; }
  double& operator()(int r, int c) { return m[3 * r + c]; }

  static OrthogonalTransform identity(int dim);

  OrthogonalTransform operator*(const OrthogonalTransform& rhs) const;
  OrthogonalTransform transpose() const;
  double det() const;
  std::array<double, 3> apply(const std::array<double, 3>& x) const;

  double max_abs_diff(const OrthogonalTransform& rhs) const;
  bool approx_equal(const OrthogonalTransform& rhs, double tol = 1e-9) const;
  // ||Q^T Q - I||_max <= tol
  bool is_orthogonal(double tol = 1e-9) const;
  // All entries in {0, +-1} up to tol: the transform permutes grid axes.
  bool is_signed_permutation(double tol = 1e-9) const;
};

// The generator catalog. Parametric kinds (Rn, Rtilde, R2d) take n in [1, 64]:
//   Rn(n)     rotation by 2*pi/n about the x3 axis
//   U         diag(1, -1, -1)           (rotation by pi about x1)
//   S         cyclic coordinate shift x1->x2->x3->x1
//   V         swap x1,x2 with x3 -> -x3
//   J         icosahedral 5-fold rotation (golden-ratio entries)
//   I         -identity (point inversion)
//   Rtilde(n) rotation by pi/n about x3 composed with x3 -> -x3
//   W2        diag(1, -1, 1)
//   W3        diag(1, 1, -1)
//   Z         swap x1,x2
//   R2d(n)    2D rotation by 2*pi/n
//   Tau2d     2D reflection diag(1, -1)
enum class GeneratorKind { Rn, U, S, V, J, I, Rtilde, W2, W3, Z, R2d, Tau2d };

GeneratorKind generator_kind_from_string(const std::string& s);
std::string to_string(GeneratorKind kind);

OrthogonalTransform make_generator(GeneratorKind kind, int n = 0);

}  // namespace symflow
