#pragma once
#include <vector>

#include "orbifoldkit/rational.hpp"

namespace orbifoldkit {

// 2x2 integer matrix, row-major.
struct Mat2Z {
  Int m00, m01, m10, m11;

  static Mat2Z identity() { return {1, 0, 0, 1}; }
  static Mat2Z zero() { return {0, 0, 0, 0}; }

  Int det() const { return m00 * m11 - m01 * m10; }
  // adj(M) * M == det(M) * I
  Mat2Z adjugate() const { return {m11, -m01, -m10, m00}; }

  Mat2Z operator*(const Mat2Z& o) const {
    return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
            m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
  }
  Mat2Z operator+(const Mat2Z& o) const {
    return {m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11};
  }
  Mat2Z operator-(const Mat2Z& o) const {
    return {m00 - o.m00, m01 - o.m01, m10 - o.m10, m11 - o.m11};
  }
  Vec2Q apply(const Vec2Q& v) const {
    return {Rat(m00) * v.x + Rat(m01) * v.y, Rat(m10) * v.x + Rat(m11) * v.y};
  }
  Mat2Z pow(int k) const;  // k >= 0

  bool operator==(const Mat2Z&) const = default;
};

// 2x2 rational matrix, row-major.
struct Mat2Q {
  Rat m00, m01, m10, m11;

  static Mat2Q identity() { return {1, 0, 0, 1}; }
  static Mat2Q from(const Mat2Z& m) {
    return {Rat(m.m00), Rat(m.m01), Rat(m.m10), Rat(m.m11)};
  }

  Rat det() const { return m00 * m11 - m01 * m10; }
  Mat2Q inverse() const;  // throws InputError if singular

  Mat2Q operator*(const Mat2Q& o) const {
    return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
            m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
  }
  Vec2Q apply(const Vec2Q& v) const {
    return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y};
  }

  bool is_integer() const {
    return rat_den(m00) == 1 && rat_den(m01) == 1 && rat_den(m10) == 1 &&
           rat_den(m11) == 1;
  }
  Mat2Z to_integer() const;  // throws InternalCheckFailure if not integral

  bool operator==(const Mat2Q&) const = default;
};

// Small dense integer matrix.  Only the 2x2 and 4x4 shapes needed by the
// congruence systems here are exercised; the code works for any n <= 4.
struct MatZ {
  int rows = 0, cols = 0;
  std::vector<Int> e;

  static MatZ zero(int r, int c) { return {r, c, std::vector<Int>(r * c, 0)}; }
  static MatZ identity(int n);
  static MatZ from(const Mat2Z& m) { return {2, 2, {m.m00, m.m01, m.m10, m.m11}}; }

  Int& at(int i, int j) { return e[i * cols + j]; }
  const Int& at(int i, int j) const { return e[i * cols + j]; }

  MatZ mul(const MatZ& o) const;
  std::vector<Rat> apply(const std::vector<Rat>& v) const;

  bool operator==(const MatZ&) const = default;
};

// Determinant by cofactor expansion; n <= 4.
Int det(const MatZ& m);

bool is_unimodular(const MatZ& m);

// Exact inverse of a unimodular matrix (integer adjugate over det = +-1).
MatZ inverse_unimodular(const MatZ& u);

// Smith normal form: m == u * d * v with u, v unimodular and d diagonal with
// nonnegative entries d1 | d2 | ... (zeros trailing).
struct SmithDecomposition {
  MatZ u, d, v;
};
SmithDecomposition smith_normal_form(const MatZ& m);

struct Smith2 {
  Mat2Z u, d, v;
};
Smith2 smith_normal_form(const Mat2Z& m);

}  // namespace orbifoldkit
