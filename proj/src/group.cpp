#include "symflow/group.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace symflow {

namespace {

// Lexicographic order on entries rounded to 12 decimals: stable against the
// ~1e-16 noise of repeated products while separating genuinely distinct
// elements (distinct group elements here differ by >= ~0.09).
std::array<long long, 9> round_key(const OrthogonalTransform& t) {
  std::array<long long, 9> k{};
  for (int i = 0; i < 9; ++i) k[i] = std::llround(t.m[i] * 1e12);
  return k;
}

bool element_less(const OrthogonalTransform& a, const OrthogonalTransform& b) {
  return round_key(a) < round_key(b);
}

}  // namespace

bool SymmetryGroup::contains(const OrthogonalTransform& q, double tol) const {
  for (const auto& e : elements)
    if (e.approx_equal(q, tol)) return true;
  return false;
}

SymmetryGroup close_group(int dim, const std::string& name,
                          const std::vector<OrthogonalTransform>& generators,
                          std::size_t max_order, double tol) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");
  if (generators.empty()) throw std::invalid_argument("close_group: no generators");
  for (const auto& g : generators) {
    if (g.dim != dim) throw std::invalid_argument("close_group: generator dim mismatch");
    if (!g.is_orthogonal(tol)) throw std::invalid_argument("close_group: generator not orthogonal");
  }

  std::vector<OrthogonalTransform> elems{OrthogonalTransform::identity(dim)};
  auto known = [&](const OrthogonalTransform& q) {
    for (const auto& e : elems)
      if (e.approx_equal(q, tol)) return true;
    return false;
  };

  std::vector<OrthogonalTransform> frontier = elems;
  while (!frontier.empty()) {
    std::vector<OrthogonalTransform> next;
    for (const auto& e : frontier)
      for (const auto& g : generators) {
        OrthogonalTransform p = g * e;
        if (!known(p)) {
          elems.push_back(p);
          next.push_back(p);
          if (elems.size() > max_order)
            throw std::runtime_error("close_group: closure of '" + name + "' exceeds " +
                                     std::to_string(max_order) + " elements");
        }
      }
    frontier = std::move(next);
  }

  std::sort(elems.begin(), elems.end(), element_less);

  SymmetryGroup grp;
  grp.dim = dim;
  grp.name = name;
  grp.generators = generators;
  grp.elements = std::move(elems);
  return grp;
}

GroupFamily group_family_from_string(const std::string& s) {
  if (s == "C" || s == "Cn") return GroupFamily::C;
  if (s == "D" || s == "Dn") return GroupFamily::D;
  if (s == "S2n" || s == "S") return GroupFamily::S2n;
  if (s == "Cnh") return GroupFamily::Cnh;
  if (s == "Cnv") return GroupFamily::Cnv;
  if (s == "Dnh") return GroupFamily::Dnh;
  if (s == "Dnd") return GroupFamily::Dnd;
  if (s == "T") return GroupFamily::T;
  if (s == "Td" || s == "T_d") return GroupFamily::Td;
  if (s == "Th" || s == "T_h") return GroupFamily::Th;
  if (s == "O") return GroupFamily::O;
  if (s == "Oh" || s == "O_h") return GroupFamily::Oh;
  if (s == "Y") return GroupFamily::Y;
  if (s == "Yh" || s == "Y_h") return GroupFamily::Yh;
  throw std::invalid_argument("unknown group family: " + s);
}

std::string to_string(GroupFamily family) {
  switch (family) {
    case GroupFamily::C: return "C";
    case GroupFamily::D: return "D";
    case GroupFamily::S2n: return "S2n";
    case GroupFamily::Cnh: return "Cnh";
    case GroupFamily::Cnv: return "Cnv";
    case GroupFamily::Dnh: return "Dnh";
    case GroupFamily::Dnd: return "Dnd";
    case GroupFamily::T: return "T";
    case GroupFamily::Td: return "Td";
    case GroupFamily::Th: return "Th";
    case GroupFamily::O: return "O";
    case GroupFamily::Oh: return "Oh";
    case GroupFamily::Y: return "Y";
    case GroupFamily::Yh: return "Yh";
  }
  throw std::logic_error("unreachable");
}

bool family_is_parametric(GroupFamily family) {
  switch (family) {
    case GroupFamily::C:
    case GroupFamily::D:
    case GroupFamily::S2n:
    case GroupFamily::Cnh:
    case GroupFamily::Cnv:
    case GroupFamily::Dnh:
    case GroupFamily::Dnd:
      return true;
    default:
      return false;
  }
}

SymmetryGroup standard_group(GroupFamily family, int n, int dim) {
  using GK = GeneratorKind;
  if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");
  if (family_is_parametric(family) && (n < 1 || n > 64))
    throw std::invalid_argument("parametric group needs n in [1, 64]");

  if (dim == 2) {
    switch (family) {
      case GroupFamily::C:
        return close_group(2, "C" + std::to_string(n), {make_generator(GK::R2d, n)});
      case GroupFamily::D:
        return close_group(2, "D" + std::to_string(n),
                           {make_generator(GK::R2d, n), make_generator(GK::Tau2d)});
      default:
        throw std::invalid_argument("2D supports only the C and D families");
    }
  }

  auto g = [](GK k, int m = 0) { return make_generator(k, m); };
  std::string ns = std::to_string(n);
  switch (family) {
    case GroupFamily::C:
      return close_group(3, "C" + ns, {g(GK::Rn, n)});
    case GroupFamily::D:
      return close_group(3, "D" + ns, {g(GK::Rn, n), g(GK::U)});
    case GroupFamily::S2n:
      return close_group(3, "S" + std::to_string(2 * n), {g(GK::Rtilde, n)});
    case GroupFamily::Cnh:
      // sigma_h = Rtilde_n * R_n^{-1}; <R_n, sigma_h> = <R_n, Rtilde_n>.
      return close_group(3, "C" + ns + "h", {g(GK::Rn, n), g(GK::W3)});
    case GroupFamily::Cnv:
      return close_group(3, "C" + ns + "v", {g(GK::Rn, n), g(GK::W2)});
    case GroupFamily::Dnh:
      return close_group(3, "D" + ns + "h", {g(GK::Rn, n), g(GK::W2), g(GK::W3)});
    case GroupFamily::Dnd:
      return close_group(3, "D" + ns + "d", {g(GK::Rtilde, n), g(GK::W2)});
    case GroupFamily::T:
      return close_group(3, "T", {g(GK::U), g(GK::S)});
    case GroupFamily::Td:
      return close_group(3, "Td", {g(GK::U), g(GK::S), g(GK::Z)});
    case GroupFamily::Th:
      return close_group(3, "Th", {g(GK::S), g(GK::U), g(GK::I)});
    case GroupFamily::O:
      return close_group(3, "O", {g(GK::U), g(GK::S), g(GK::V)});
    case GroupFamily::Oh:
      return close_group(3, "Oh", {g(GK::S), g(GK::V), g(GK::I)});
    case GroupFamily::Y:
      return close_group(3, "Y", {g(GK::S), g(GK::J)});
    case GroupFamily::Yh:
      return close_group(3, "Yh", {g(GK::S), g(GK::J), g(GK::I)});
  }
  throw std::logic_error("unreachable");
}

ParsedGroupName parse_group_name(const std::string& name, int n) {
  // Inline parameter forms: C4, D6, D4h, D3d, C6v, C2h, S8 (= S2n with 2n=8).
  auto is_digits = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  std::string base = name;
  int m = n;
  if (name.size() >= 2) {
    std::size_t i = 0;
    while (i < name.size() && !std::isdigit(static_cast<unsigned char>(name[i]))) ++i;
    std::size_t j = i;
    while (j < name.size() && std::isdigit(static_cast<unsigned char>(name[j]))) ++j;
    if (i < j && (j == name.size() || j + 1 == name.size())) {
      std::string digits = name.substr(i, j - i);
      std::string head = name.substr(0, i), tail = name.substr(j);
      if (is_digits(digits) && (head == "C" || head == "D" || head == "S")) {
        m = std::stoi(digits);
        if (head == "S") {
          if (m % 2 != 0 || !tail.empty())
            throw std::invalid_argument("rotation-inversion groups are S<even>: " + name);
          return {GroupFamily::S2n, m / 2};
        }
        base = head + (tail.empty() ? "" : "n" + tail);  // C4v -> Cnv etc.
        if (tail.empty()) base = head;
      }
    }
  }
  return {group_family_from_string(base), m};
}

SymmetryGroup standard_group(const std::string& name, int n, int dim) {
  auto parsed = parse_group_name(name, n);
  return standard_group(parsed.family, parsed.n, dim);
}

bool is_subgroup(const SymmetryGroup& h, const SymmetryGroup& g, double tol) {
  if (h.dim != g.dim) return false;
  for (const auto& e : h.elements)
    if (!g.contains(e, tol)) return false;
  return true;
}

}  // namespace symflow
