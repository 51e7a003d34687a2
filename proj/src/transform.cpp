#include "symflow/transform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace symflow {

OrthogonalTransform OrthogonalTransform::identity(int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");
  OrthogonalTransform t;
  t.dim = dim;
  return t;
}

OrthogonalTransform OrthogonalTransform::operator*(const OrthogonalTransform& rhs) const {
  if (dim != rhs.dim) throw std::invalid_argument("transform dim mismatch");
  OrthogonalTransform out;
  out.dim = dim;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += (*this)(r, k) * rhs(k, c);
      out(r, c) = s;
    }
  return out;
}

OrthogonalTransform OrthogonalTransform::transpose() const {
  OrthogonalTransform out;
  out.dim = dim;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out(r, c) = (*this)(c, r);
  return out;
}

double OrthogonalTransform::det() const {
  const auto& a = *this;
  double d3 = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
              a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
              a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  return d3;  // 2D block is embedded with m22 = 1, so d3 equals the 2x2 det
}

std::array<double, 3> OrthogonalTransform::apply(const std::array<double, 3>& x) const {
  std::array<double, 3> y{};
  for (int r = 0; r < 3; ++r)
    y[r] = (*this)(r, 0) * x[0] + (*this)(r, 1) * x[1] + (*this)(r, 2) * x[2];
  return y;
}

double OrthogonalTransform::max_abs_diff(const OrthogonalTransform& rhs) const {
  double d = std::abs(static_cast<double>(dim - rhs.dim));
  for (int i = 0; i < 9; ++i) d = std::max(d, std::abs(m[i] - rhs.m[i]));
  return d;
}

bool OrthogonalTransform::approx_equal(const OrthogonalTransform& rhs, double tol) const {
  return dim == rhs.dim && max_abs_diff(rhs) <= tol;
}

bool OrthogonalTransform::is_orthogonal(double tol) const {
  OrthogonalTransform qtq = transpose() * (*this);
  return qtq.max_abs_diff(identity(dim)) <= tol;
}

bool OrthogonalTransform::is_signed_permutation(double tol) const {
  for (int i = 0; i < 9; ++i) {
    double v = std::abs(m[i]);
    if (std::abs(v) > tol && std::abs(v - 1.0) > tol) return false;
  }
  return is_orthogonal(tol);
}

GeneratorKind generator_kind_from_string(const std::string& s) {
  if (s == "Rn" || s == "R") return GeneratorKind::Rn;
  if (s == "U") return GeneratorKind::U;
  if (s == "S") return GeneratorKind::S;
  if (s == "V") return GeneratorKind::V;
  if (s == "J") return GeneratorKind::J;
  if (s == "I") return GeneratorKind::I;
  if (s == "Rtilde" || s == "Rt") return GeneratorKind::Rtilde;
  if (s == "W2") return GeneratorKind::W2;
  if (s == "W3") return GeneratorKind::W3;
  if (s == "Z") return GeneratorKind::Z;
  if (s == "R2d") return GeneratorKind::R2d;
  if (s == "Tau2d" || s == "tau") return GeneratorKind::Tau2d;
  throw std::invalid_argument("unknown generator kind: " + s);
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Rn: return "Rn";
    case GeneratorKind::U: return "U";
    case GeneratorKind::S: return "S";
    case GeneratorKind::V: return "V";
    case GeneratorKind::J: return "J";
    case GeneratorKind::I: return "I";
    case GeneratorKind::Rtilde: return "Rtilde";
    case GeneratorKind::W2: return "W2";
    case GeneratorKind::W3: return "W3";
    case GeneratorKind::Z: return "Z";
    case GeneratorKind::R2d: return "R2d";
    case GeneratorKind::Tau2d: return "Tau2d";
  }
  throw std::logic_error("unreachable");
}

namespace {

OrthogonalTransform from_rows(int dim, std::array<double, 9> rows) {
  OrthogonalTransform t;
  t.dim = dim;
  t.m = rows;
  return t;
}

void require_n(GeneratorKind kind, int n) {
  if (n < 1 || n > 64)
    throw std::invalid_argument("generator " + to_string(kind) +
                                " needs a parameter n in [1, 64], got n=" + std::to_string(n));
}

}  // namespace

OrthogonalTransform make_generator(GeneratorKind kind, int n) {
  const double pi = std::numbers::pi;
  switch (kind) {
    case GeneratorKind::Rn: {
      require_n(kind, n);
      double c = std::cos(2 * pi / n), s = std::sin(2 * pi / n);
      return from_rows(3, {c, -s, 0, s, c, 0, 0, 0, 1});
    }
    case GeneratorKind::U:
      return from_rows(3, {1, 0, 0, 0, -1, 0, 0, 0, -1});
    case GeneratorKind::S:
      return from_rows(3, {0, 0, 1, 1, 0, 0, 0, 1, 0});
    case GeneratorKind::V:
      return from_rows(3, {0, 1, 0, 1, 0, 0, 0, 0, -1});
    case GeneratorKind::J: {
      double r5 = std::sqrt(5.0);
      return from_rows(3, {0.5, -(r5 + 1) / 4, (r5 - 1) / 4,
                           (r5 + 1) / 4, (r5 - 1) / 4, -0.5,
                           (r5 - 1) / 4, 0.5, (r5 + 1) / 4});
    }
    case GeneratorKind::I:
      return from_rows(3, {-1, 0, 0, 0, -1, 0, 0, 0, -1});
    case GeneratorKind::Rtilde: {
      require_n(kind, n);
      double c = std::cos(pi / n), s = std::sin(pi / n);
      return from_rows(3, {c, -s, 0, s, c, 0, 0, 0, -1});
    }
    case GeneratorKind::W2:
      return from_rows(3, {1, 0, 0, 0, -1, 0, 0, 0, 1});
    case GeneratorKind::W3:
      return from_rows(3, {1, 0, 0, 0, 1, 0, 0, 0, -1});
    case GeneratorKind::Z:
      return from_rows(3, {0, 1, 0, 1, 0, 0, 0, 0, 1});
    case GeneratorKind::R2d: {
      require_n(kind, n);
      double c = std::cos(2 * pi / n), s = std::sin(2 * pi / n);
      return from_rows(2, {c, -s, 0, s, c, 0, 0, 0, 1});
    }
    case GeneratorKind::Tau2d:
      return from_rows(2, {1, 0, 0, 0, -1, 0, 0, 0, 1});
  }
  throw std::logic_error("unreachable");
}

}  // namespace symflow
