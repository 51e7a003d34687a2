#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "symflow/group.hpp"

using namespace symflow;
using GK = GeneratorKind;
using GF = GroupFamily;

namespace {

OrthogonalTransform from_rows(int dim, std::array<double, 9> rows) {
  OrthogonalTransform t;
  t.dim = dim;
  t.m = rows;
  return t;
}

}  // namespace

TEST_CASE("generator matrices match the catalog verbatim") {
  const double r5 = std::sqrt(5.0);

  CHECK(make_generator(GK::U).approx_equal(from_rows(3, {1, 0, 0, 0, -1, 0, 0, 0, -1}), 0));
  CHECK(make_generator(GK::S).approx_equal(from_rows(3, {0, 0, 1, 1, 0, 0, 0, 1, 0}), 0));
  CHECK(make_generator(GK::V).approx_equal(from_rows(3, {0, 1, 0, 1, 0, 0, 0, 0, -1}), 0));
  CHECK(make_generator(GK::I).approx_equal(from_rows(3, {-1, 0, 0, 0, -1, 0, 0, 0, -1}), 0));
  CHECK(make_generator(GK::W2).approx_equal(from_rows(3, {1, 0, 0, 0, -1, 0, 0, 0, 1}), 0));
  CHECK(make_generator(GK::W3).approx_equal(from_rows(3, {1, 0, 0, 0, 1, 0, 0, 0, -1}), 0));
  CHECK(make_generator(GK::Z).approx_equal(from_rows(3, {0, 1, 0, 1, 0, 0, 0, 0, 1}), 0));

  auto j = make_generator(GK::J);
  CHECK(j.approx_equal(from_rows(3, {0.5, -(r5 + 1) / 4, (r5 - 1) / 4,
                                     (r5 + 1) / 4, (r5 - 1) / 4, -0.5,
                                     (r5 - 1) / 4, 0.5, (r5 + 1) / 4}),
                       0));
  // J is a 5-fold rotation: J^5 = 1 and no smaller power is.
  auto p = j;
  for (int k = 2; k <= 4; ++k) {
    p = p * j;
    CHECK_FALSE(p.approx_equal(OrthogonalTransform::identity(3), 1e-9));
  }
  CHECK((p * j).approx_equal(OrthogonalTransform::identity(3), 1e-12));

  const double pi = std::numbers::pi;
  auto r6 = make_generator(GK::Rn, 6);
  CHECK(r6(0, 0) == doctest::Approx(std::cos(pi / 3)).epsilon(1e-15));
  CHECK(r6(0, 1) == doctest::Approx(-std::sin(pi / 3)).epsilon(1e-15));
  CHECK(r6(2, 2) == 1.0);

  auto rt3 = make_generator(GK::Rtilde, 3);  // rotation by pi/3, x3 flipped
  CHECK(rt3(0, 0) == doctest::Approx(std::cos(pi / 3)).epsilon(1e-15));
  CHECK(rt3(2, 2) == -1.0);
  CHECK(rt3.det() == doctest::Approx(-1.0).epsilon(1e-14));

  auto r2d = make_generator(GK::R2d, 8);
  CHECK(r2d.dim == 2);
  CHECK(r2d(0, 0) == doctest::Approx(std::cos(pi / 4)).epsilon(1e-15));
  CHECK(make_generator(GK::Tau2d).det() == doctest::Approx(-1.0));

  for (auto k : {GK::U, GK::S, GK::V, GK::J, GK::I, GK::W2, GK::W3, GK::Z})
    CHECK(make_generator(k).is_orthogonal(1e-12));

  CHECK_THROWS(make_generator(GK::Rn, 0));
  CHECK_THROWS(make_generator(GK::Rn, 65));
  CHECK_THROWS(make_generator(GK::R2d, -3));
}

TEST_CASE("closure produces the catalog orders") {
  // Orders of the polyhedral groups.
  CHECK(standard_group(GF::T, 0, 3).order() == 12);
  CHECK(standard_group(GF::O, 0, 3).order() == 24);
  CHECK(standard_group(GF::Y, 0, 3).order() == 60);
  CHECK(standard_group(GF::Td, 0, 3).order() == 24);
  CHECK(standard_group(GF::Th, 0, 3).order() == 24);
  CHECK(standard_group(GF::Oh, 0, 3).order() == 48);
  CHECK(standard_group(GF::Yh, 0, 3).order() == 120);

  // Parametric families for n = 1..8 in 3D.
  for (int n = 1; n <= 8; ++n) {
    CAPTURE(n);
    CHECK(standard_group(GF::C, n, 3).order() == static_cast<std::size_t>(n));
    CHECK(standard_group(GF::D, n, 3).order() == static_cast<std::size_t>(2 * n));
    CHECK(standard_group(GF::S2n, n, 3).order() == static_cast<std::size_t>(2 * n));
    CHECK(standard_group(GF::Cnh, n, 3).order() == static_cast<std::size_t>(2 * n));
    CHECK(standard_group(GF::Cnv, n, 3).order() == static_cast<std::size_t>(2 * n));
    CHECK(standard_group(GF::Dnh, n, 3).order() == static_cast<std::size_t>(4 * n));
    CHECK(standard_group(GF::Dnd, n, 3).order() == static_cast<std::size_t>(4 * n));
  }

  // 2D.
  for (int n = 1; n <= 8; ++n) {
    CHECK(standard_group(GF::C, n, 2).order() == static_cast<std::size_t>(n));
    CHECK(standard_group(GF::D, n, 2).order() == static_cast<std::size_t>(2 * n));
  }

  // Spot check from the acceptance list.
  CHECK(standard_group(GF::Dnh, 3, 3).order() == 12);
}

TEST_CASE("every element is orthogonal and the set is closed") {
  for (auto fam : {GF::Td, GF::Oh, GF::Yh}) {
    auto g = standard_group(fam, 0, 3);
    for (const auto& e : g.elements) CHECK(e.is_orthogonal(1e-12));
    // Closure: products of random element pairs stay inside.
    for (std::size_t i = 0; i < g.order(); i += 7)
      for (std::size_t j = 0; j < g.order(); j += 11)
        CHECK(g.contains(g.elements[i] * g.elements[j], 1e-9));
    // Inverses (= transposes) stay inside.
    for (const auto& e : g.elements) CHECK(g.contains(e.transpose(), 1e-9));
  }
}

TEST_CASE("Oh is exactly the signed permutation matrices") {
  auto oh = standard_group(GF::Oh, 0, 3);
  REQUIRE(oh.order() == 48);
  std::set<std::array<long long, 9>> keys;
  for (const auto& e : oh.elements) {
    CHECK(e.is_signed_permutation(1e-12));
    std::array<long long, 9> k{};
    for (int i = 0; i < 9; ++i) k[i] = std::llround(e.m[i]);
    keys.insert(k);
  }
  CHECK(keys.size() == 48);
}

TEST_CASE("deterministic element ordering") {
  auto a = standard_group(GF::Yh, 0, 3);
  auto b = standard_group(GF::Yh, 0, 3);
  REQUIRE(a.order() == b.order());
  for (std::size_t i = 0; i < a.order(); ++i)
    CHECK(a.elements[i].max_abs_diff(b.elements[i]) == 0.0);
}

TEST_CASE("subgroup relations") {
  auto t = standard_group(GF::T, 0, 3);
  auto td = standard_group(GF::Td, 0, 3);
  auto th = standard_group(GF::Th, 0, 3);
  auto o = standard_group(GF::O, 0, 3);
  auto oh = standard_group(GF::Oh, 0, 3);
  auto y = standard_group(GF::Y, 0, 3);
  auto yh = standard_group(GF::Yh, 0, 3);

  CHECK(is_subgroup(t, o));
  CHECK(is_subgroup(t, td));
  CHECK(is_subgroup(t, th));
  CHECK(is_subgroup(t, y));
  CHECK(is_subgroup(o, oh));
  CHECK(is_subgroup(th, oh));
  CHECK(is_subgroup(td, oh));
  CHECK(is_subgroup(y, yh));
  CHECK_FALSE(is_subgroup(o, y));
  CHECK_FALSE(is_subgroup(oh, yh));
  CHECK_FALSE(is_subgroup(td, th));

  auto d4 = standard_group(GF::D, 4, 3);
  auto d4h = standard_group(GF::Dnh, 4, 3);
  CHECK(is_subgroup(d4, d4h));
  CHECK(is_subgroup(standard_group(GF::C, 4, 3), d4));
}

TEST_CASE("rotation-inversion groups") {
  // S2 = {1, -1}: the inversion group.
  auto s2 = standard_group(GF::S2n, 1, 3);
  REQUIRE(s2.order() == 2);
  CHECK(s2.contains(make_generator(GK::I), 1e-12));

  // Cnh contains the horizontal reflection and the rotation-inversion Rtilde_n
  // (rotation by 2*pi/n about x3 composed with the x3 flip).
  auto c3h = standard_group(GF::Cnh, 3, 3);
  CHECK(c3h.contains(make_generator(GK::W3), 1e-12));
  auto rot_inv = make_generator(GK::W3) * make_generator(GK::Rn, 3);
  CHECK(c3h.contains(rot_inv, 1e-9));
}

TEST_CASE("close_group guards") {
  // Irrational rotation never closes: must hit the cap and throw.
  OrthogonalTransform bad = OrthogonalTransform::identity(2);
  double a = 1.0;  // 1 radian: incommensurable with pi
  bad(0, 0) = std::cos(a);
  bad(0, 1) = -std::sin(a);
  bad(1, 0) = std::sin(a);
  bad(1, 1) = std::cos(a);
  CHECK_THROWS(close_group(2, "bad", {bad}, 500));

  // Non-orthogonal generator rejected.
  OrthogonalTransform sheared = OrthogonalTransform::identity(3);
  sheared(0, 1) = 0.5;
  CHECK_THROWS(close_group(3, "sheared", {sheared}));

  CHECK_THROWS(standard_group(GF::C, 0, 3));
  CHECK_THROWS(standard_group(GF::C, 65, 3));
  CHECK_THROWS(standard_group(GF::T, 0, 2));
}

TEST_CASE("name parsing") {
  CHECK(standard_group("C4", 0, 2).order() == 4);
  CHECK(standard_group("D6", 0, 2).order() == 12);
  CHECK(standard_group("D4h", 0, 3).order() == 16);
  CHECK(standard_group("D3d", 0, 3).order() == 12);
  CHECK(standard_group("C6v", 0, 3).order() == 12);
  CHECK(standard_group("S8", 0, 3).order() == 8);
  CHECK(standard_group("Td", 0, 3).order() == 24);
  CHECK(standard_group("T_d", 0, 3).order() == 24);
  CHECK(standard_group("Dnh", 4, 3).order() == 16);
  CHECK_THROWS(standard_group("Q5", 0, 3));
  CHECK_THROWS(standard_group("S7", 0, 3));
}
