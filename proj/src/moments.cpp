#include "symflow/moments.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace symflow {

namespace {

constexpr int kMaxAxisPower = 64;

double axis_moment(int k, double lambda) {
  if (k < 0) throw std::invalid_argument("negative moment exponent");
  if (k > kMaxAxisPower) throw std::invalid_argument("moment exponent exceeds overflow guard");
  if (k % 2 == 1) return 0.0;
  double v = std::sqrt(std::numbers::pi / lambda);
  for (int j = 1; 2 * j <= k; ++j) v *= (2 * j - 1) / (2.0 * lambda);
  return v;
}

double axis_abs_moment(int k, double lambda) {
  if (k < 0) throw std::invalid_argument("negative moment exponent");
  if (k > kMaxAxisPower) throw std::invalid_argument("moment exponent exceeds overflow guard");
  return std::tgamma((k + 1) / 2.0) * std::pow(lambda, -(k + 1) / 2.0);
}

void check_alpha(const Mono& alpha, int dim) {
  if (dim == 2 && alpha[2] != 0) throw std::invalid_argument("2D moment uses x_3");
}

double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

// All multi-indices with |alpha| = order.
std::vector<Mono> multi_indices(int dim, int order) {
  std::vector<Mono> out;
  for (int a = 0; a <= order; ++a)
    for (int b = 0; a + b <= order; ++b) {
      if (dim == 2) {
        if (a + b == order) out.push_back(Mono{a, b, 0});
      } else {
        out.push_back(Mono{a, b, order - a - b});
      }
    }
  return out;
}

double scalar_moment(const Poly& p, const Mono& alpha, double lambda, int dim) {
  double v = 0.0;
  for (const auto& [m, c] : p)
    v += c * gaussian_moment(Mono{alpha[0] + m[0], alpha[1] + m[1], alpha[2] + m[2]}, lambda, dim);
  return v;
}

double scalar_moment_scale(const Poly& p, const Mono& alpha, double lambda, int dim) {
  double v = 0.0;
  for (const auto& [m, c] : p)
    v += std::abs(c) *
         abs_gaussian_moment(Mono{alpha[0] + m[0], alpha[1] + m[1], alpha[2] + m[2]}, lambda, dim);
  return v;
}

}  // namespace

double gaussian_moment(const Mono& alpha, double lambda, int dim) {
  if (lambda <= 0.0) throw std::invalid_argument("Gaussian envelope must be positive");
  check_alpha(alpha, dim);
  double v = 1.0;
  for (int i = 0; i < dim; ++i) {
    double f = axis_moment(alpha[i], lambda);
    if (f == 0.0) return 0.0;
    v *= f;
  }
  return v;
}

double abs_gaussian_moment(const Mono& alpha, double lambda, int dim) {
  if (lambda <= 0.0) throw std::invalid_argument("Gaussian envelope must be positive");
  check_alpha(alpha, dim);
  double v = 1.0;
  for (int i = 0; i < dim; ++i) v *= axis_abs_moment(alpha[i], lambda);
  return v;
}

double product_moment(const PolyGaussianField& f, const PolyGaussianField& g, int h, int k,
                      const Mono& alpha) {
  if (f.dim != g.dim) throw std::invalid_argument("product_moment dim mismatch");
  check_alpha(alpha, f.dim);
  if (h < 0 || h >= static_cast<int>(f.comp.size()) || k < 0 ||
      k >= static_cast<int>(g.comp.size()))
    throw std::invalid_argument("product_moment component out of range");
  const double lambda = f.envelope + g.envelope;
  double v = 0.0;
  for (const auto& [ma, ca] : f.comp[h])
    for (const auto& [mb, cb] : g.comp[k])
      v += ca * cb *
           gaussian_moment(Mono{alpha[0] + ma[0] + mb[0], alpha[1] + ma[1] + mb[1],
                                alpha[2] + ma[2] + mb[2]},
                           lambda, f.dim);
  return v;
}

MomentTable moment_table(const PolyGaussianField& g, int max_order) {
  if (!g.is_scalar()) throw std::invalid_argument("moment_table expects a scalar density");
  if (max_order < 0 || max_order > 32) throw std::invalid_argument("moment_table order out of range");
  MomentTable t{g.dim, max_order, {}};
  for (int order = 0; order <= max_order; ++order)
    for (const auto& alpha : multi_indices(g.dim, order))
      t.entries[alpha] = scalar_moment(g.comp[0], alpha, g.envelope, g.dim);
  return t;
}

HomogeneousPolynomial compute_Pm(const PolyGaussianField& a, int m) {
  if (m < 0 || m > 12) throw std::invalid_argument("compute_Pm order must be in [0, 12]");
  if (a.is_scalar()) throw std::invalid_argument("compute_Pm expects a vector field");
  const int d = a.dim;
  Poly terms;
  for (const auto& alpha : multi_indices(d, m)) {
    const double w = 1.0 / (factorial(alpha[0]) * factorial(alpha[1]) * factorial(alpha[2]));
    for (int h = 0; h < static_cast<int>(a.comp.size()); ++h)
      for (int k = 0; k < static_cast<int>(a.comp.size()); ++k) {
        double c = w * product_moment(a, a, h, k, alpha);
        if (c == 0.0) continue;
        Mono mono = alpha;
        ++mono[h];
        ++mono[k];
        terms[mono] += c;
      }
  }
  return make_homogeneous(d, m + 2, std::move(terms));
}

bool check_orthogonality(const PolyGaussianField& a, double tol) {
  const int d = static_cast<int>(a.components());
  std::vector<double> gram(static_cast<std::size_t>(d) * d);
  double scale = 0.0;
  for (int h = 0; h < d; ++h)
    for (int k = 0; k < d; ++k) {
      gram[h * d + k] = product_moment(a, a, h, k, Mono{0, 0, 0});
      scale = std::max(scale, std::abs(gram[h * d + k]));
    }
  if (scale == 0.0) return true;
  for (int h = 0; h < d; ++h)
    for (int k = 0; k < d; ++k) {
      double want = h == k ? gram[0] : 0.0;
      if (std::abs(gram[h * d + k] - want) > tol * scale) return false;
    }
  return true;
}

bool check_time_decay_identities(const PolyGaussianField& u, int m, double tol) {
  if (m < 0 || m > 8) throw std::invalid_argument("identity order must be in [0, 8]");
  const int d = u.dim;
  HomogeneousPolynomial pm = compute_Pm(u, m);
  HomogeneousPolynomial r2 = r2_poly(d);
  for (int j = 0; j < d; ++j) {
    Mono xij{j == 0, j == 1, j == 2};
    HomogeneousPolynomial lhs = hp_mul(pm, make_homogeneous(d, 1, Poly{{xij, 1.0}}));

    Poly q;
    for (const auto& alpha : multi_indices(d, m)) {
      const double w = 1.0 / (factorial(alpha[0]) * factorial(alpha[1]) * factorial(alpha[2]));
      for (int h = 0; h < static_cast<int>(u.comp.size()); ++h) {
        double c = w * product_moment(u, u, h, j, alpha);
        if (c == 0.0) continue;
        Mono mono = alpha;
        ++mono[h];
        q[mono] += c;
      }
    }
    HomogeneousPolynomial rhs = hp_mul(make_homogeneous(d, m + 1, std::move(q)), r2);

    double scale = std::max(lhs.max_abs_coeff(), rhs.max_abs_coeff());
    if (scale == 0.0) continue;
    if (hp_add(lhs, rhs, -1.0).max_abs_coeff() > tol * scale) return false;
  }
  return true;
}

int vorticity_vanish_order(const PolyGaussianField& w, int max_order) {
  if (max_order < 0 || max_order > 16) throw std::invalid_argument("max_order out of range");
  for (int order = 0; order <= max_order; ++order) {
    for (const auto& alpha : multi_indices(w.dim, order)) {
      for (const auto& comp : w.comp) {
        double value = scalar_moment(comp, alpha, w.envelope, w.dim);
        double scale = scalar_moment_scale(comp, alpha, w.envelope, w.dim);
        if (std::abs(value) > 1e-10 * scale) return order - 1;
      }
    }
  }
  return max_order;
}

}  // namespace symflow
