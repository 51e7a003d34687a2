#include "symflow/polynomial.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace symflow {

namespace {

void check_dim(int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("polynomial dim must be 2 or 3");
}

Poly drop_exact_zeros(Poly p) {
  for (auto it = p.begin(); it != p.end();)
    it = it->second == 0.0 ? p.erase(it) : std::next(it);
  return p;
}

// All multi-indices of the given total degree, in Mono map order.
std::vector<Mono> monomials_of_degree(int dim, int degree) {
  std::vector<Mono> out;
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b) {
      if (dim == 2) {
        if (a + b == degree) out.push_back(Mono{a, b, 0});
      } else {
        out.push_back(Mono{a, b, degree - a - b});
      }
    }
  return out;
}

Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& a, const char* what) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  double thr = 1e-10 * smax;
  long null_dim = 0;
  for (long i = 0; i < sv.size(); ++i) {
    if (sv(i) < thr) {
      ++null_dim;
    } else if (smax > 0.0 && sv(i) < 10.0 * thr) {
      // A singular value sitting on the decision threshold means the rank is
      // not numerically well defined; refuse to guess.
      throw std::runtime_error(std::string("ambiguous nullspace threshold in ") + what);
    }
  }
  if (smax == 0.0) null_dim = a.cols();  // no constraints at all
  return svd.matrixV().rightCols(null_dim);
}

}  // namespace

HomogeneousPolynomial make_homogeneous(int dim, int degree, Poly terms) {
  check_dim(dim);
  if (degree < 0) throw std::invalid_argument("degree must be non-negative");
  for (const auto& [m, c] : terms) {
    (void)c;
    if (mono_degree(m) != degree)
      throw std::invalid_argument("monomial degree does not match the declared degree");
    if (dim == 2 && m[2] != 0) throw std::invalid_argument("2D polynomial uses xi_3");
    if (m[0] < 0 || m[1] < 0 || m[2] < 0) throw std::invalid_argument("negative exponent");
  }
  return {dim, degree, drop_exact_zeros(std::move(terms))};
}

HomogeneousPolynomial r2_poly(int dim) {
  check_dim(dim);
  Poly t{{{2, 0, 0}, 1.0}, {{0, 2, 0}, 1.0}};
  if (dim == 3) t[{0, 0, 2}] = 1.0;
  return {dim, 2, t};
}

HomogeneousPolynomial hp_add(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b,
                             double b_scale) {
  if (a.dim != b.dim || a.degree != b.degree)
    throw std::invalid_argument("homogeneous polynomial mismatch in add");
  return {a.dim, a.degree, drop_exact_zeros(poly_add(a.terms, b.terms, b_scale))};
}

HomogeneousPolynomial hp_mul(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
  if (a.dim != b.dim) throw std::invalid_argument("dim mismatch in mul");
  return {a.dim, a.degree + b.degree, drop_exact_zeros(poly_mul(a.terms, b.terms))};
}

HomogeneousPolynomial transform_poly(const HomogeneousPolynomial& p,
                                     const OrthogonalTransform& q) {
  if (p.dim != q.dim) throw std::invalid_argument("dim mismatch in transform_poly");
  return {p.dim, p.degree, drop_exact_zeros(poly_compose_linear(p.terms, q))};
}

DivisionResult divide_by_r2(const HomogeneousPolynomial& p) {
  // Reduce by the single divisor |xi|^2, whose graded-lex leading monomial is
  // xi_1^2: any term with exponent >= 2 on xi_1 is replaced via
  //   c xi^a  ->  quotient += c xi^{a - 2e1},
  //               p += c xi^{a - 2e1} (xi_1^2 - |xi|^2).
  Poly work = p.terms, quot;
  auto top = [&]() {
    for (auto it = work.rbegin(); it != work.rend(); ++it)
      if (it->first[0] >= 2 && it->second != 0.0) return std::optional<Mono>(it->first);
    return std::optional<Mono>();
  };
  while (auto m = top()) {
    double c = work[*m];
    Mono q{(*m)[0] - 2, (*m)[1], (*m)[2]};
    quot[q] += c;
    work.erase(*m);
    work[Mono{q[0], q[1] + 2, q[2]}] -= c;
    if (p.dim == 3) work[Mono{q[0], q[1], q[2] + 2}] -= c;
  }
  DivisionResult res;
  res.quotient = p.degree >= 2 ? make_homogeneous(p.dim, p.degree - 2, std::move(quot))
                               : HomogeneousPolynomial{p.dim, 0, {}};
  res.remainder = make_homogeneous(p.dim, p.degree, std::move(work));
  return res;
}

bool is_divisible_by_r2(const HomogeneousPolynomial& p, double tol) {
  if (p.is_zero()) return true;
  return divide_by_r2(p).remainder.max_abs_coeff() <= tol * p.max_abs_coeff();
}

std::vector<HomogeneousPolynomial> invariant_space(const SymmetryGroup& g, int degree) {
  check_dim(g.dim);
  if (degree < 0 || degree > 12) throw std::invalid_argument("invariant_space degree must be in [0, 12]");
  auto monos = monomials_of_degree(g.dim, degree);
  const long n = static_cast<long>(monos.size());
  std::map<Mono, long> index;
  for (long i = 0; i < n; ++i) index[monos[i]] = i;

  // Invariance under every generator implies invariance under the whole
  // group; stack (M_Q - I) for each generator Q, where M_Q maps coefficient
  // vectors of P to those of P(Q xi).
  const auto& gens = g.generators;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<long>(gens.size()) * n, n);
  for (std::size_t qi = 0; qi < gens.size(); ++qi) {
    for (long col = 0; col < n; ++col) {
      Poly composed = poly_compose_linear(Poly{{monos[col], 1.0}}, gens[qi]);
      for (const auto& [m, c] : composed) a(static_cast<long>(qi) * n + index.at(m), col) += c;
    }
    for (long col = 0; col < n; ++col) a(static_cast<long>(qi) * n + col, col) -= 1.0;
  }

  Eigen::MatrixXd basis = nullspace_basis(a, "invariant_space");
  std::vector<HomogeneousPolynomial> out;
  for (long j = 0; j < basis.cols(); ++j) {
    // Deterministic sign: make the largest-magnitude coefficient positive.
    long arg = 0;
    basis.col(j).cwiseAbs().maxCoeff(&arg);
    Eigen::VectorXd v = basis.col(j) * (basis(arg, j) < 0 ? -1.0 : 1.0);
    Poly terms;
    for (long i = 0; i < n; ++i)
      if (std::abs(v(i)) > 1e-14) terms[monos[i]] = v(i);
    out.push_back(make_homogeneous(g.dim, degree, std::move(terms)));
  }
  return out;
}

int divisible_subspace_dim(const std::vector<HomogeneousPolynomial>& basis) {
  if (basis.empty()) return 0;
  auto monos = monomials_of_degree(basis[0].dim, basis[0].degree);
  std::map<Mono, long> index;
  for (std::size_t i = 0; i < monos.size(); ++i) index[monos[i]] = static_cast<long>(i);

  // p = sum c_j basis_j is divisible iff sum c_j remainder(basis_j) = 0, so
  // the divisible subspace has dimension (basis size - rank of remainders).
  Eigen::MatrixXd rem =
      Eigen::MatrixXd::Zero(static_cast<long>(basis.size()), static_cast<long>(monos.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (basis[j].dim != basis[0].dim || basis[j].degree != basis[0].degree)
      throw std::invalid_argument("divisible_subspace_dim needs a same-degree basis");
    for (const auto& [m, c] : divide_by_r2(basis[j]).remainder.terms)
      rem(static_cast<long>(j), index.at(m)) = c;
  }
  // Rank decided relative to the size of the basis polynomials themselves: a
  // remainder that is rounding-level small compared to its source counts as
  // zero even if it dominates the other remainders.
  double scale = 0.0;
  for (const auto& b : basis) scale = std::max(scale, b.max_abs_coeff());
  if (scale == 0.0) return static_cast<int>(basis.size());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rem);
  const auto& sv = svd.singularValues();
  double thr = 1e-10 * scale;
  int rank = 0;
  for (long i = 0; i < sv.size(); ++i) {
    if (sv(i) >= 10.0 * thr)
      ++rank;
    else if (sv(i) >= thr)
      throw std::runtime_error("ambiguous rank threshold in divisible_subspace_dim");
  }
  return static_cast<int>(basis.size()) - rank;
}

HomogeneousPolynomial icosahedral_sextic() {
  const double s5 = std::sqrt(5.0);
  const double cp = 0.75 * (5.0 + s5), cm = 0.75 * (5.0 - s5);
  Poly t{{{6, 0, 0}, 1.0}, {{0, 6, 0}, 1.0}, {{0, 0, 6}, 1.0},
         {{4, 2, 0}, cp},  {{0, 4, 2}, cp},  {{2, 0, 4}, cp},
         {{4, 0, 2}, cm},  {{2, 4, 0}, cm},  {{0, 2, 4}, cm}};
  return make_homogeneous(3, 6, std::move(t));
}

}  // namespace symflow
