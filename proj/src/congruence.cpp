#include "orbifoldkit/congruence.hpp"

#include <algorithm>

#include "orbifoldkit/errors.hpp"

namespace orbifoldkit {
namespace {

// Hard cap on the translate group explored during offset normalization.  The
// generators produced by the solver have small denominators, so hitting the
// cap indicates a bug rather than a large instance.
constexpr std::size_t kPhiCap = 4096;

// Reduced row echelon form in place; returns the pivot column of each
// surviving row.  Input rows are expected linearly independent (they come
// from columns of a unimodular matrix) but zero rows are dropped anyway.
std::vector<int> rref_rows(std::vector<std::vector<Rat>>& rows) {
  std::vector<int> pivots;
  if (rows.empty()) return pivots;
  const int d = static_cast<int>(rows[0].size());
  std::size_t r = 0;
  for (int col = 0; col < d && r < rows.size(); ++col) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const Rat lead = rows[r][col];
    for (auto& v : rows[r]) v /= lead;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j == r || rows[j][col] == 0) continue;
      const Rat f = rows[j][col];
      for (int k = 0; k < d; ++k) rows[j][k] -= f * rows[r][k];
    }
    pivots.push_back(col);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

std::vector<int> pivot_columns(const std::vector<std::vector<Rat>>& gens) {
  std::vector<int> pivots;
  for (const auto& g : gens) {
    int col = 0;
    while (col < static_cast<int>(g.size()) && g[col] == 0) ++col;
    pivots.push_back(col);
  }
  return pivots;
}

// The finite subgroup of the torus generated by the direction basis modulo
// Z^d.  Two normalized offsets describe the same coset exactly when they
// differ by an element of this group.
std::vector<std::vector<Rat>> phi_group(
    const std::vector<std::vector<Rat>>& gens, int d) {
  std::vector<std::vector<Rat>> elems{std::vector<Rat>(d, Rat(0))};
  std::vector<std::vector<Rat>> queue = elems;
  while (!queue.empty()) {
    const auto v = queue.back();
    queue.pop_back();
    for (const auto& g : gens) {
      std::vector<Rat> w(d);
      for (int i = 0; i < d; ++i) w[i] = mod1(v[i] + g[i]);
      if (std::find(elems.begin(), elems.end(), w) == elems.end()) {
        elems.push_back(w);
        queue.push_back(w);
        if (elems.size() > kPhiCap)
          throw InternalCheckFailure("offset translate group exceeds cap");
      }
    }
  }
  std::sort(elems.begin(), elems.end());
  return elems;
}

// Zero out the pivot coordinates of the offset, reduce into [0,1)^d, then
// take the lexicographic minimum over the finite translate group.
void canonicalize_component(CosetComponent& comp) {
  const int d = static_cast<int>(comp.offset.size());
  const auto pivots = rref_rows(comp.generators);
  for (std::size_t i = 0; i < comp.generators.size(); ++i) {
    const Rat coeff = comp.offset[pivots[i]];
    if (coeff == 0) continue;
    for (int k = 0; k < d; ++k) comp.offset[k] -= coeff * comp.generators[i][k];
  }
  for (auto& v : comp.offset) v = mod1(v);
  if (comp.generators.empty()) return;
  auto best = comp.offset;
  for (const auto& phi : phi_group(comp.generators, d)) {
    std::vector<Rat> cand(d);
    for (int i = 0; i < d; ++i) cand[i] = mod1(comp.offset[i] + phi[i]);
    if (cand < best) best = cand;
  }
  comp.offset = best;
}

bool component_less(const CosetComponent& a, const CosetComponent& b) {
  if (a.offset != b.offset) return a.offset < b.offset;
  return a.generators < b.generators;
}

// Core solver for N x == s (mod L*Z^rows) with N integer, x on the torus of
// dimension cols; the rational overload reduces to this with L the common
// denominator of its matrix.  Overdetermined systems (rows > cols) are
// allowed: the extra rows act as solvability constraints.
CosetFamily solve_core(const MatZ& n, const std::vector<Rat>& s, const Int& l) {
  const int rows = n.rows;
  const int cols = n.cols;
  if (static_cast<int>(s.size()) != rows)
    throw InputError("congruence: dimension mismatch");
  const int nmin = std::min(rows, cols);

  const SmithDecomposition snf = smith_normal_form(n);
  const MatZ uinv = inverse_unimodular(snf.u);
  const MatZ vinv = inverse_unimodular(snf.v);
  const std::vector<Rat> r = uinv.apply(s);

  // Diagonal system d_i * y_i == r_i (mod L).  Rows with a zero diagonal --
  // including every row past the diagonal -- constrain r_i; columns with a
  // zero or absent diagonal entry are free directions; the rest contribute
  // d_i / gcd(d_i, L) distinct residues each.
  std::vector<int> free_idx;
  std::vector<Int> counts(cols, 1);
  for (int i = 0; i < nmin; ++i) {
    const Int di = snf.d.at(i, i);
    if (di == 0) {
      const Rat q = r[i] / Rat(l);
      if (rat_den(q) != 1) throw EmptySolution("congruence has no solution");
      free_idx.push_back(i);
    } else {
      counts[i] = di / gcd_int(di, l);
    }
  }
  for (int i = nmin; i < rows; ++i) {
    const Rat q = r[i] / Rat(l);
    if (rat_den(q) != 1) throw EmptySolution("congruence has no solution");
  }
  for (int j = nmin; j < cols; ++j) free_idx.push_back(j);

  std::vector<std::vector<Rat>> gens;
  for (int i : free_idx) {
    std::vector<Rat> g(cols);
    for (int k = 0; k < cols; ++k) g[k] = Rat(vinv.at(k, i));
    gens.push_back(std::move(g));
  }

  CosetFamily fam;
  fam.dim = cols;
  std::vector<Int> t(cols, 0);
  while (true) {
    std::vector<Rat> y(cols, Rat(0));
    for (int i = 0; i < nmin; ++i) {
      const Int di = snf.d.at(i, i);
      if (di != 0) y[i] = (r[i] + Rat(l) * Rat(t[i])) / Rat(di);
    }
    CosetComponent comp;
    comp.offset = vinv.apply(y);
    comp.generators = gens;
    canonicalize_component(comp);
    fam.components.push_back(std::move(comp));

    int pos = cols - 1;
    while (pos >= 0) {
      t[pos] += 1;
      if (t[pos] < counts[pos]) break;
      t[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }

  std::sort(fam.components.begin(), fam.components.end(), component_less);
  for (std::size_t i = 1; i < fam.components.size(); ++i)
    if (fam.components[i] == fam.components[i - 1])
      throw InternalCheckFailure("congruence components not distinct");
  return fam;
}

}  // namespace

CosetFamily solve_congruence(const MatZ& m, const std::vector<Rat>& c) {
  return solve_core(m, c, 1);
}

CosetFamily solve_congruence_rational(const std::vector<std::vector<Rat>>& m,
                                      const std::vector<Rat>& c) {
  const int rows = static_cast<int>(m.size());
  if (rows == 0) throw InputError("congruence: empty system");
  const int cols = static_cast<int>(m[0].size());
  std::vector<Rat> flat;
  for (const auto& row : m) {
    if (static_cast<int>(row.size()) != cols)
      throw InputError("congruence: ragged matrix");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  const Int l = common_denominator(flat);
  MatZ n = MatZ::zero(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const Rat scaled = m[i][j] * Rat(l);
      n.at(i, j) = rat_num(scaled);
    }
  std::vector<Rat> s(rows);
  for (int i = 0; i < rows; ++i) s[i] = c[i] * Rat(l);
  return solve_core(n, s, l);
}

bool coset_contains(const CosetComponent& comp, const std::vector<Rat>& p) {
  const int d = static_cast<int>(comp.offset.size());
  if (static_cast<int>(p.size()) != d)
    throw InputError("coset_contains: dimension mismatch");
  std::vector<Rat> r(d);
  for (int i = 0; i < d; ++i) r[i] = p[i] - comp.offset[i];
  const auto pivots = pivot_columns(comp.generators);
  for (std::size_t i = 0; i < comp.generators.size(); ++i) {
    const Rat coeff = r[pivots[i]];
    if (coeff == 0) continue;
    for (int k = 0; k < d; ++k) r[k] -= coeff * comp.generators[i][k];
  }
  for (auto& v : r) v = mod1(v);
  if (comp.generators.empty()) {
    return std::all_of(r.begin(), r.end(), [](const Rat& v) { return v == 0; });
  }
  const auto phi = phi_group(comp.generators, d);
  return std::binary_search(phi.begin(), phi.end(), r);
}

Mat2Q superlattice_basis(const std::vector<Vec2Q>& generators) {
  std::vector<Rat> coords;
  for (const auto& g : generators) {
    coords.push_back(g.x);
    coords.push_back(g.y);
  }
  const Int l = common_denominator(coords);

  // Integer column collection spanning L*Lambda, starting with L*Z^2.
  std::vector<std::pair<Int, Int>> cols{{l, 0}, {0, l}};
  for (const auto& g : generators)
    cols.emplace_back(rat_num(g.x * Rat(l)), rat_num(g.y * Rat(l)));

  // Column-wise Euclid on the top row until a single nonzero entry remains.
  while (true) {
    std::size_t best = cols.size();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i].first == 0) continue;
      if (best == cols.size() ||
          abs(cols[i].first) < abs(cols[best].first))
        best = i;
    }
    if (best == cols.size())
      throw InternalCheckFailure("superlattice: top row vanished");
    bool reduced_all = true;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i == best || cols[i].first == 0) continue;
      const Int t = cols[i].first / cols[best].first;
      cols[i].first -= t * cols[best].first;
      cols[i].second -= t * cols[best].second;
      if (cols[i].first != 0) reduced_all = false;
    }
    if (reduced_all) {
      std::swap(cols[0], cols[best]);
      break;
    }
  }
  if (cols[0].first < 0) {
    cols[0].first = -cols[0].first;
    cols[0].second = -cols[0].second;
  }
  const Int a = cols[0].first;
  const Int b0 = cols[0].second;

  // The remaining columns generate the sublattice on the y-axis.
  Int c = 0;
  for (std::size_t i = 1; i < cols.size(); ++i) c = gcd_int(c, cols[i].second);
  if (c == 0)
    throw InternalCheckFailure("superlattice: rank collapsed");
  const Int b = ((b0 % c) + c) % c;

  if ((l * l) % (a * c) != 0)
    throw NotALattice("generators do not span a superlattice of Z^2");

  Mat2Q basis;
  basis.m00 = Rat(a, l);
  basis.m01 = Rat(0);
  basis.m10 = Rat(b, l);
  basis.m11 = Rat(c, l);

  // Every input generator must lie in the lattice spanned by the columns.
  const Mat2Q inv = basis.inverse();
  for (const auto& g : generators) {
    const Vec2Q w = inv.apply(g);
    if (rat_den(w.x) != 1 || rat_den(w.y) != 1)
      throw InternalCheckFailure("superlattice basis misses a generator");
  }
  return basis;
}

}  // namespace orbifoldkit
