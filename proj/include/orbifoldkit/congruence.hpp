#pragma once
#include <vector>

#include "orbifoldkit/matrix.hpp"

namespace orbifoldkit {

// One connected component of the solution set of a linear congruence on the
// torus R^d/Z^d: the coset offset + span(generators) + Z^d.
//
// Canonical form: generators are the reduced row-echelon basis of the
// direction space (leading coefficient 1); the offset has all pivot
// coordinates equal to 0, every coordinate in [0,1), and is the lexicographic
// minimum among the finitely many equivalent normalized offsets.
struct CosetComponent {
  std::vector<Rat> offset;
  std::vector<std::vector<Rat>> generators;

  bool isolated() const { return generators.empty(); }
  bool operator==(const CosetComponent&) const = default;
};

// Full solution set: pairwise disjoint components sorted by (offset,
// generators).  A family may be empty only as an intermediate value; the
// solver throws EmptySolution instead of returning one.
struct CosetFamily {
  int dim = 0;
  std::vector<CosetComponent> components;

  bool finite() const {
    for (const auto& c : components)
      if (!c.isolated()) return false;
    return true;
  }
};

// Solve M x == c (mod Z^rows) for x in the torus R^cols/Z^cols; M integer
// with rows >= 1 and cols >= 1 (rows > cols makes the extra rows pure
// solvability constraints), c rational.  For square nonsingular M the family
// is finite with |det M| isolated points.  Throws EmptySolution when c is not
// in the image modulo Z^rows.
CosetFamily solve_congruence(const MatZ& m, const std::vector<Rat>& c);

// Rational coefficient matrix; scaled internally to an integer system.
CosetFamily solve_congruence_rational(const std::vector<std::vector<Rat>>& m,
                                      const std::vector<Rat>& c);

// Exact membership test against a canonical component.
bool coset_contains(const CosetComponent& comp, const std::vector<Rat>& p);

// Basis of the superlattice Lambda = Z^2 + sum_i Z*g_i, as the columns of a
// canonical lower-triangular matrix B (positive diagonal, bottom-left entry
// reduced modulo the bottom-right one).  The index [Lambda : Z^2] equals
// 1/|det B| and is a positive integer.
Mat2Q superlattice_basis(const std::vector<Vec2Q>& generators);

}  // namespace orbifoldkit
