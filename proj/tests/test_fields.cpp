#include <doctest.h>

#include <cmath>
#include <random>

#include "symflow/field.hpp"
#include "symflow/group.hpp"

using namespace symflow;
using GF = GroupFamily;

namespace {

PolyGaussianField random_vector_field(unsigned seed, int dim, int maxdeg, double lambda = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> deg(0, maxdeg);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  PolyGaussianField f;
  f.dim = dim;
  f.envelope = lambda;
  f.comp.resize(dim);
  for (auto& p : f.comp)
    for (int t = 0; t < 6; ++t) {
      Mono m{deg(rng), deg(rng), dim == 3 ? deg(rng) : 0};
      p[m] += coeff(rng);
    }
  return f;
}

double max_coeff_diff(const PolyGaussianField& a, const PolyGaussianField& b) {
  REQUIRE(a.comp.size() == b.comp.size());
  double d = 0;
  for (std::size_t c = 0; c < a.comp.size(); ++c)
    d = std::max(d, poly_max_abs_coeff(poly_add(a.comp[c], b.comp[c], -1.0)));
  return d;
}

// Central-difference oracle for one component of a field.
double fd_partial(const PolyGaussianField& f, int comp, int axis, std::array<double, 3> x) {
  const double h = 1e-5;
  auto xp = x, xm = x;
  xp[axis] += h;
  xm[axis] -= h;
  return (evaluate(f, xp)[comp] - evaluate(f, xm)[comp]) / (2 * h);
}

}  // namespace

TEST_CASE("polynomial kernels: eval, mul, derivative, composition") {
  Poly p{{{2, 1, 0}, 3.0}, {{0, 0, 1}, -1.5}};
  CHECK(poly_eval(p, {2.0, -1.0, 4.0}) == doctest::Approx(3 * 4 * (-1) - 1.5 * 4).epsilon(1e-15));

  Poly q{{{1, 0, 0}, 2.0}};
  Poly pq = poly_mul(p, q);
  CHECK(pq.at(Mono{3, 1, 0}) == doctest::Approx(6.0));
  CHECK(pq.at(Mono{1, 0, 1}) == doctest::Approx(-3.0));

  Poly dp = poly_derivative(p, 0);
  CHECK(dp.at(Mono{1, 1, 0}) == doctest::Approx(6.0));
  CHECK(dp.count(Mono{0, 0, 1}) == 0);

  // Composition oracle: (p o Q)(x) == p(Q x) pointwise.
  auto j = make_generator(GeneratorKind::J);
  Poly pj = poly_compose_linear(p, j);
  for (auto x : {std::array<double, 3>{0.3, -1.2, 0.7}, {1.0, 1.0, 1.0}, {-2.0, 0.1, 0.5}}) {
    auto qx = j.apply(x);
    CHECK(poly_eval(pj, x) == doctest::Approx(poly_eval(p, qx)).epsilon(1e-13));
  }
}

TEST_CASE("curl and divergence match finite differences and kill each other") {
  auto b = random_vector_field(7, 3, 3);
  auto cb = curl(b);
  auto div_cb = divergence(cb);
  CHECK(poly_max_abs_coeff(div_cb.comp[0]) <= 1e-12 * cb.max_abs_coeff());

  // Spot-check curl against central differences of the evaluated field.
  std::array<double, 3> x{0.4, -0.3, 0.8};
  auto cbx = evaluate(cb, x);
  CHECK(cbx[0] == doctest::Approx(fd_partial(b, 2, 1, x) - fd_partial(b, 1, 2, x)).epsilon(1e-8));
  CHECK(cbx[1] == doctest::Approx(fd_partial(b, 0, 2, x) - fd_partial(b, 2, 0, x)).epsilon(1e-8));
  CHECK(cbx[2] == doctest::Approx(fd_partial(b, 1, 0, x) - fd_partial(b, 0, 1, x)).epsilon(1e-8));

  auto dv = divergence(b);
  double fd_div = fd_partial(b, 0, 0, x) + fd_partial(b, 1, 1, x) + fd_partial(b, 2, 2, x);
  CHECK(evaluate(dv, x)[0] == doctest::Approx(fd_div).epsilon(1e-8));
}

TEST_CASE("printed closed forms of the curled potentials") {
  // curl(bar_b) expands to -2 x2 x3 (2 + 2x1^2 - x2^2 - x3^2) e^{-|x|^2} and
  // its cyclic shifts; curl(tilde_b) to the degree-5 cyclic family.
  auto bar_a = builtin_field("bar_a");
  PolyGaussianField bar_expected;
  bar_expected.dim = 3;
  bar_expected.comp = {
      Poly{{{0, 1, 1}, -4}, {{2, 1, 1}, -4}, {{0, 3, 1}, 2}, {{0, 1, 3}, 2}},
      Poly{{{1, 0, 1}, -4}, {{1, 2, 1}, -4}, {{1, 0, 3}, 2}, {{3, 0, 1}, 2}},
      Poly{{{1, 1, 0}, -4}, {{1, 1, 2}, -4}, {{3, 1, 0}, 2}, {{1, 3, 0}, 2}}};
  CHECK(max_coeff_diff(bar_a, bar_expected) <= 1e-14);

  auto tilde_a = builtin_field("tilde_a");
  PolyGaussianField tilde_expected;
  tilde_expected.dim = 3;
  tilde_expected.comp = {
      Poly{{{3, 0, 0}, 2}, {{1, 2, 0}, -3}, {{3, 2, 0}, -2}, {{1, 4, 0}, 2},
           {{1, 0, 2}, -3}, {{1, 0, 4}, 2}, {{3, 0, 2}, -2}},
      Poly{{{0, 3, 0}, 2}, {{0, 1, 2}, -3}, {{0, 3, 2}, -2}, {{0, 1, 4}, 2},
           {{2, 1, 0}, -3}, {{4, 1, 0}, 2}, {{2, 3, 0}, -2}},
      Poly{{{0, 0, 3}, 2}, {{2, 0, 1}, -3}, {{2, 0, 3}, -2}, {{4, 0, 1}, 2},
           {{0, 2, 1}, -3}, {{0, 4, 1}, 2}, {{0, 2, 3}, -2}}};
  CHECK(max_coeff_diff(tilde_a, tilde_expected) <= 1e-14);

  // Direct substitution at (1,1,1): every component equals -4 e^{-3}.
  double want = -4 * std::exp(-3.0);
  for (double v : evaluate(bar_a, {1, 1, 1})) CHECK(v == doctest::Approx(want).epsilon(1e-14));
  for (double v : evaluate(tilde_a, {1, 1, 1})) CHECK(v == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("transform is a right action and respects the two modes") {
  auto f = random_vector_field(11, 3, 3);
  auto p = make_generator(GeneratorKind::J);
  auto q = make_generator(GeneratorKind::S);

  auto lhs = transform(transform(f, q, TransformMode::Velocity), p, TransformMode::Velocity);
  auto rhs = transform(f, q * p, TransformMode::Velocity);
  CHECK(max_coeff_diff(lhs, rhs) <= 1e-12 * f.max_abs_coeff());

  // Velocity vs pseudo differ exactly by det(P) on improper maps.
  auto refl = make_generator(GeneratorKind::W2);
  auto tv = transform(f, refl, TransformMode::Velocity);
  auto tp = transform(f, refl, TransformMode::Pseudo);
  CHECK(max_coeff_diff(tp, field_scale(tv, -1.0)) == 0.0);

  // Pointwise law: P^T f(P x) at x equals transform(f, P) at x.
  std::array<double, 3> x{0.2, 0.9, -0.4};
  auto tfx = evaluate(transform(f, p, TransformMode::Velocity), x);
  auto fpx = evaluate(f, p.apply(x));
  auto pt = p.transpose();
  for (int i = 0; i < 3; ++i) {
    double want = pt(i, 0) * fpx[0] + pt(i, 1) * fpx[1] + pt(i, 2) * fpx[2];
    CHECK(tfx[i] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("builtin invariances") {
  auto td = standard_group(GF::Td, 0, 3);
  auto oh = standard_group(GF::Oh, 0, 3);
  auto t = standard_group(GF::T, 0, 3);

  auto bar_a = builtin_field("bar_a");
  auto tilde_a = builtin_field("tilde_a");
  auto both = builtin_field("bar_plus_tilde_a");

  CHECK(is_invariant(bar_a, td, TransformMode::Velocity));
  CHECK(is_invariant(bar_a, t, TransformMode::Velocity));
  CHECK_FALSE(is_invariant(bar_a, oh, TransformMode::Velocity));  // odd under inversion
  CHECK(is_invariant(tilde_a, oh, TransformMode::Velocity));
  CHECK(is_invariant(both, td, TransformMode::Velocity));

  // Divergence-free throughout.
  for (const auto* f : {&bar_a, &tilde_a, &both})
    CHECK(poly_max_abs_coeff(divergence(*f).comp[0]) <= 1e-12 * f->max_abs_coeff());

  // Vorticities transform as pseudo-vectors.
  CHECK(is_invariant(curl(bar_a), td, TransformMode::Pseudo));
  CHECK(is_invariant(curl(tilde_a), oh, TransformMode::Pseudo));
}

TEST_CASE("prism family") {
  for (int n : {1, 2, 3}) {
    CAPTURE(n);
    auto mu = builtin_field("prism_mu", n);
    auto a = builtin_field("prism_a", n);
    auto d2nh = standard_group(GF::Dnh, 2 * n, 3);

    CHECK(poly_max_abs_coeff(divergence(a).comp[0]) <= 1e-12 * a.max_abs_coeff());
    CHECK(is_invariant(a, d2nh, TransformMode::Velocity));
    // Third component identically zero, first is not: the Gram matrix of a
    // cannot be isotropic.
    CHECK(poly_max_abs_coeff(a.comp[2]) == 0.0);
    CHECK(poly_max_abs_coeff(a.comp[0]) > 0.0);

    // mu is odd in x2, even in x3, and invariant under rotation by pi/n.
    auto w2 = make_generator(GeneratorKind::W2);
    auto w3 = make_generator(GeneratorKind::W3);
    auto mu_w2 = transform(mu, w2, TransformMode::Velocity);
    CHECK(max_coeff_diff(mu_w2, field_scale(mu, -1.0)) == 0.0);
    auto mu_w3 = transform(mu, w3, TransformMode::Velocity);
    CHECK(max_coeff_diff(mu_w3, mu) == 0.0);
    auto rot = make_generator(GeneratorKind::Rn, 2 * n);  // angle pi/n
    CHECK(max_coeff_diff(transform(mu, rot, TransformMode::Velocity), mu) <=
          1e-12 * mu.max_abs_coeff());
  }
  CHECK(standard_group(GF::Dnh, 4, 3).order() == 16);  // D_{4h}, the n=2 case
}

TEST_CASE("icosahedral builtin") {
  auto yh = standard_group(GF::Yh, 0, 3);
  auto a = builtin_field("icosahedral_a");
  CHECK_FALSE(a.is_zero(1e-8));
  CHECK(poly_max_abs_coeff(divergence(a).comp[0]) <= 1e-11 * a.max_abs_coeff());
  CHECK(is_invariant(a, yh, TransformMode::Velocity, 1e-10));
  CHECK(is_invariant(curl(a), yh, TransformMode::Pseudo, 1e-10));
}

TEST_CASE("symmetrize is an idempotent projection onto invariants") {
  auto td = standard_group(GF::Td, 0, 3);
  auto f = random_vector_field(23, 3, 4);
  auto s1 = symmetrize(f, td, TransformMode::Velocity);
  auto s2 = symmetrize(s1, td, TransformMode::Velocity);
  CHECK(is_invariant(s1, td, TransformMode::Velocity, 1e-12));
  CHECK(max_coeff_diff(s1, s2) <= 1e-12 * std::max(1e-300, s1.max_abs_coeff()));

  // 2D pseudo-scalar: dn_omega(n) is already D_n-pseudo-invariant, and is NOT
  // velocity-invariant (the reflection flips its sign).
  for (int n : {3, 4, 5, 6}) {
    CAPTURE(n);
    auto dn = standard_group(GF::D, n, 2);
    auto w = builtin_field("dn_omega", n);
    CHECK(is_invariant(w, dn, TransformMode::Pseudo, 1e-12));
    CHECK_FALSE(is_invariant(w, dn, TransformMode::Velocity, 1e-6));
    auto cn = standard_group(GF::C, n, 2);
    auto wc = builtin_field("cn_omega", n);
    CHECK(is_invariant(wc, cn, TransformMode::Pseudo, 1e-12));
    if (n > 1) CHECK_FALSE(is_invariant(wc, dn, TransformMode::Pseudo, 1e-6));
  }

  // Annihilation case: an odd-degree potential averages to zero under Y_h in
  // pseudo mode (inversion acts as plain composition there).
  auto yh = standard_group(GF::Yh, 0, 3);
  PolyGaussianField odd;
  odd.dim = 3;
  odd.comp = {Poly{{{3, 1, 1}, 1.0}, {{1, 1, 1}, -0.5}}, Poly{}, Poly{}};
  CHECK(symmetrize(odd, yh, TransformMode::Pseudo).is_zero(1e-13));
}

TEST_CASE("grid sampling matches pointwise evaluation") {
  auto f = builtin_field("bar_a");
  int N = 16;
  double L = 8.0;
  auto g = sample_to_grid(f, N, L);
  REQUIRE(g.comp.size() == 3);
  REQUIRE(g.comp[0].size() == static_cast<std::size_t>(N) * N * N);

  double dx = 2.0 * L / N;
  for (auto [ix, iy, iz] : {std::array<int, 3>{0, 0, 0}, {5, 9, 12}, {8, 8, 8}, {15, 1, 7}}) {
    std::array<double, 3> x{-L + ix * dx, -L + iy * dx, -L + iz * dx};
    auto want = evaluate(f, x);
    std::size_t idx = (static_cast<std::size_t>(iz) * N + iy) * N + ix;
    for (int c = 0; c < 3; ++c) CHECK(g.comp[c][idx] == doctest::Approx(want[c]).epsilon(1e-14));
  }

  auto w = builtin_field("dn_omega", 4);
  auto g2 = sample_to_grid(w, 32, 10.0);
  REQUIRE(g2.comp.size() == 1);
  std::array<double, 3> x{-10.0 + 7 * (20.0 / 32), -10.0 + 20 * (20.0 / 32), 0.0};
  CHECK(g2.comp[0][20 * 32 + 7] == doctest::Approx(evaluate(w, x)[0]).epsilon(1e-14));

  CHECK_THROWS(sample_to_grid(f, 31, 8.0));  // not a power of two
  CHECK_THROWS(builtin_field("no_such_field"));
}
