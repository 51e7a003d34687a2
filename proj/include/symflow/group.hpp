#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "symflow/transform.hpp"

namespace symflow {

struct SymmetryGroup {
  int dim = 3;
  std::string name;
  std::vector<OrthogonalTransform> generators;
  // Closed element list, sorted lexicographically by rounded entries so the
  // ordering is reproducible bit-for-bit across runs.
  std::vector<OrthogonalTransform> elements;

  std::size_t order() const { return elements.size(); }
  bool contains(const OrthogonalTransform& q, double tol = 1e-9) const;
};

// Multiplicative closure by breadth-first products. Throws if the closure
// exceeds max_order elements (non-closing generator sets, e.g. irrational
// rotation angles) or if a generator is not orthogonal / has the wrong dim.
SymmetryGroup close_group(int dim, const std::string& name,
                          const std::vector<OrthogonalTransform>& generators,
                          std::size_t max_order = 1000, double tol = 1e-9);

// Point-group families. Parametric families take n in [1, 64]; the polyhedral
// families ignore n. 2D supports C and D only.
//
//   dim 2:  C(n) rotations; D(n) rotations + reflection            (n, 2n)
//   dim 3:  C(n) <R_n>; D(n) <R_n, U>                              (n, 2n)
//           S2n(n) <Rtilde(n)>  rotation-inversion by pi/n         (2n)
//           Cnh(n) <R_n, W3>;  Cnv(n) <R_n, W2>                    (2n, 2n)
//           Dnh(n) <R_n, W2, W3>;  Dnd(n) <Rtilde(n), W2>          (4n, 4n)
//           T <U, S>; Td <U, S, Z>; Th <S, U, I>                   (12, 24, 24)
//           O <U, S, V>; Oh <S, V, I>                              (24, 48)
//           Y <S, J>; Yh <S, J, I>                                 (60, 120)
enum class GroupFamily { C, D, S2n, Cnh, Cnv, Dnh, Dnd, T, Td, Th, O, Oh, Y, Yh };

GroupFamily group_family_from_string(const std::string& s);
std::string to_string(GroupFamily family);
bool family_is_parametric(GroupFamily family);

SymmetryGroup standard_group(GroupFamily family, int n, int dim);

struct ParsedGroupName {
  GroupFamily family;
  int n = 0;
};

// Accepts "Td", "T_d", "Dnh" (+ explicit n), or names with an inline
// parameter like "C4", "D6", "D4h", "S8" (S8 = S2n with 2n = 8).
ParsedGroupName parse_group_name(const std::string& name, int n = 0);

SymmetryGroup standard_group(const std::string& name, int n, int dim);

// Every element of h is an element of g (entrywise within tol).
bool is_subgroup(const SymmetryGroup& h, const SymmetryGroup& g, double tol = 1e-9);

}  // namespace symflow
