#pragma once
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "orbifoldkit/errors.hpp"

namespace orbifoldkit {

// Exact arbitrary-precision integers and rationals.  Rat is always in lowest
// terms with positive denominator; both invariants are maintained by the
// backing type on every operation.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

// floor(a/b); b must be nonzero.  cpp_int division truncates toward zero, so
// negative quotients need the usual correction.
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

// Fractional part r - floor(r), the canonical torus coordinate in [0, 1).
inline Rat mod1(const Rat& r) {
  const Int n = rat_num(r), d = rat_den(r);
  Int m = n % d;
  if (m < 0) m += d;
  return Rat(m, d);
}

inline Int gcd_int(const Int& a, const Int& b) {
  return boost::multiprecision::gcd(a, b);
}

inline Int lcm_int(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::lcm(a, b);
}

// "p" for integers, "p/q" otherwise.
inline std::string rat_to_string(const Rat& r) {
  const Int d = rat_den(r);
  std::string s = rat_num(r).str();
  if (d != 1) s += "/" + d.str();
  return s;
}

// Accepts "p" and "p/q" with an optional leading sign on p.
Rat rat_from_string(const std::string& s);

// Checked narrowing; raising instead of truncating keeps the fast integer
// kernels honest.
inline std::int64_t to_int64(const Int& v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    throw InternalCheckFailure("integer too large for 64-bit kernel");
  return static_cast<std::int64_t>(v);
}

struct Vec2Q {
  Rat x, y;

  friend bool operator==(const Vec2Q& a, const Vec2Q& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator<(const Vec2Q& a, const Vec2Q& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
  Vec2Q operator+(const Vec2Q& o) const { return {x + o.x, y + o.y}; }
  Vec2Q operator-(const Vec2Q& o) const { return {x - o.x, y - o.y}; }
};

// lcm of the coordinate denominators of a list of rationals.
inline Int common_denominator(const std::vector<Rat>& v) {
  Int l = 1;
  for (const Rat& r : v) l = lcm_int(l, rat_den(r));
  return l;
}

}  // namespace orbifoldkit
