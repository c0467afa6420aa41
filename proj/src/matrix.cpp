#include "orbifoldkit/matrix.hpp"

#include <algorithm>
#include <cstdlib>

namespace orbifoldkit {

Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw InputError("empty rational literal");
  const auto slash = s.find('/');
  const std::string ns = s.substr(0, slash);
  auto is_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  if (!is_int(ns)) throw InputError("bad rational literal: " + s);
  // cpp_int's parser rejects an explicit plus sign; the grammar allows it.
  Int num(ns[0] == '+' ? ns.substr(1) : ns);
  Int den = 1;
  if (slash != std::string::npos) {
    const std::string ds = s.substr(slash + 1);
    if (!is_int(ds) || ds[0] == '-' || ds[0] == '+')
      throw InputError("bad rational literal: " + s);
    den = Int(ds);
    if (den == 0) throw InputError("zero denominator: " + s);
  }
  return Rat(num, den);
}

Mat2Z Mat2Z::pow(int k) const {
  Mat2Z r = identity(), base = *this;
  for (; k > 0; k >>= 1) {
    if (k & 1) r = r * base;
    base = base * base;
  }
  return r;
}

Mat2Q Mat2Q::inverse() const {
  const Rat d = det();
  if (d == 0) throw InputError("singular matrix has no inverse");
  return {m11 / d, -m01 / d, -m10 / d, m00 / d};
}

Mat2Z Mat2Q::to_integer() const {
  if (!is_integer())
    throw InternalCheckFailure("matrix expected to be integral is not");
  return {rat_num(m00), rat_num(m01), rat_num(m10), rat_num(m11)};
}

MatZ MatZ::identity(int n) {
  MatZ m = zero(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

MatZ MatZ::mul(const MatZ& o) const {
  MatZ r = zero(rows, o.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      if (at(i, k) == 0) continue;
      for (int j = 0; j < o.cols; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
    }
  return r;
}

std::vector<Rat> MatZ::apply(const std::vector<Rat>& v) const {
  std::vector<Rat> r(rows, Rat(0));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) r[i] += Rat(at(i, j)) * v[j];
  return r;
}

Int det(const MatZ& m) {
  const int n = m.rows;
  if (n == 1) return m.at(0, 0);
  if (n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
  Int d = 0;
  int sign = 1;
  for (int j = 0; j < n; ++j, sign = -sign) {
    if (m.at(0, j) == 0) continue;
    MatZ minor = MatZ::zero(n - 1, n - 1);
    for (int i = 1; i < n; ++i) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor.at(i - 1, cc++) = m.at(i, c);
      }
    }
    d += sign * m.at(0, j) * det(minor);
  }
  return d;
}

bool is_unimodular(const MatZ& m) {
  if (m.rows != m.cols) return false;
  const Int d = det(m);
  return d == 1 || d == -1;
}

MatZ inverse_unimodular(const MatZ& u) {
  const int n = u.rows;
  const Int d = det(u);
  if (d != 1 && d != -1)
    throw InternalCheckFailure("inverse_unimodular on non-unimodular matrix");
  // adjugate via cofactors
  MatZ inv = MatZ::zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      MatZ minor = MatZ::zero(n - 1, n - 1);
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor.at(rr, cc++) = u.at(r, c);
        }
        ++rr;
      }
      Int cof = (n == 1) ? Int(1) : det(minor);
      if ((i + j) & 1) cof = -cof;
      inv.at(j, i) = cof * d;  // d = 1/d for d = +-1
    }
  return inv;
}

namespace {

// Row/column elementary operations maintaining m == u * d * v throughout.
struct SmithWork {
  MatZ u, d, v;

  void row_swap(int i, int j) {
    for (int c = 0; c < d.cols; ++c) std::swap(d.at(i, c), d.at(j, c));
    for (int r = 0; r < u.rows; ++r) std::swap(u.at(r, i), u.at(r, j));
  }
  void row_negate(int i) {
    for (int c = 0; c < d.cols; ++c) d.at(i, c) = -d.at(i, c);
    for (int r = 0; r < u.rows; ++r) u.at(r, i) = -u.at(r, i);
  }
  // row i += t * row j; compensate u by col j -= t * col i
  void row_addmul(int i, int j, const Int& t) {
    for (int c = 0; c < d.cols; ++c) d.at(i, c) += t * d.at(j, c);
    for (int r = 0; r < u.rows; ++r) u.at(r, j) -= t * u.at(r, i);
  }
  void col_swap(int i, int j) {
    for (int r = 0; r < d.rows; ++r) std::swap(d.at(r, i), d.at(r, j));
    for (int c = 0; c < v.cols; ++c) std::swap(v.at(i, c), v.at(j, c));
  }
  void col_negate(int j) {
    for (int r = 0; r < d.rows; ++r) d.at(r, j) = -d.at(r, j);
    for (int c = 0; c < v.cols; ++c) v.at(j, c) = -v.at(j, c);
  }
  // col j += t * col i; compensate v by row i -= t * row j
  void col_addmul(int j, int i, const Int& t) {
    for (int r = 0; r < d.rows; ++r) d.at(r, j) += t * d.at(r, i);
    for (int c = 0; c < v.cols; ++c) v.at(i, c) -= t * v.at(j, c);
  }
};

}  // namespace

SmithDecomposition smith_normal_form(const MatZ& m) {
  SmithWork w{MatZ::identity(m.rows), m, MatZ::identity(m.cols)};
  const int nmin = std::min(m.rows, m.cols);
  int k = 0;
  while (k < nmin) {
    // pick the entry of least nonzero magnitude in the trailing block
    int pi = -1, pj = -1;
    Int best = 0;
    for (int i = k; i < m.rows; ++i)
      for (int j = k; j < m.cols; ++j) {
        const Int a = boost::multiprecision::abs(w.d.at(i, j));
        if (a != 0 && (pi < 0 || a < best)) {
          best = a;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;  // trailing block is zero
    if (pi != k) w.row_swap(pi, k);
    if (pj != k) w.col_swap(pj, k);

    bool clean = true;
    for (int i = k + 1; i < m.rows; ++i) {
      if (w.d.at(i, k) == 0) continue;
      const Int t = w.d.at(i, k) / w.d.at(k, k);
      if (t != 0) w.row_addmul(i, k, -t);
      if (w.d.at(i, k) != 0) clean = false;
    }
    for (int j = k + 1; j < m.cols; ++j) {
      if (w.d.at(k, j) == 0) continue;
      const Int t = w.d.at(k, j) / w.d.at(k, k);
      if (t != 0) w.col_addmul(j, k, -t);
      if (w.d.at(k, j) != 0) clean = false;
    }
    if (!clean) continue;  // smaller remainders exist; re-pick the pivot

    // enforce d_k | d_ij on the trailing block
    bool divisible = true;
    for (int i = k + 1; i < m.rows && divisible; ++i)
      for (int j = k + 1; j < m.cols && divisible; ++j)
        if (w.d.at(i, j) % w.d.at(k, k) != 0) {
          w.row_addmul(k, i, 1);
          divisible = false;
        }
    if (!divisible) continue;

    if (w.d.at(k, k) < 0) w.row_negate(k);
    ++k;
  }
  return {w.u, w.d, w.v};
}

Smith2 smith_normal_form(const Mat2Z& m) {
  const SmithDecomposition s = smith_normal_form(MatZ::from(m));
  auto back = [](const MatZ& z) -> Mat2Z {
    return {z.at(0, 0), z.at(0, 1), z.at(1, 0), z.at(1, 1)};
  };
  return {back(s.u), back(s.d), back(s.v)};
}

}  // namespace orbifoldkit
