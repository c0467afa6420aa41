#include "orbifoldkit/orbifold.hpp"

#include <algorithm>
#include <map>

#include "kernel.hpp"
#include "orbifoldkit/errors.hpp"

namespace orbifoldkit {

std::string sphere_label(const SpherePoint& p) {
  return rat_to_string(p.rep.x) + "," + rat_to_string(p.rep.y);
}

int RamifiedPortrait::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == label) return static_cast<int>(i);
  return -1;
}

void validate_portrait(const RamifiedPortrait& p) {
  const std::size_t n = p.vertices.size();
  if (p.degree < 2) throw InputError("portrait degree must be at least 2");
  if (p.sigma.size() != n || p.delta.size() != n || p.complete.size() != n)
    throw InputError("portrait field sizes disagree");
  for (std::size_t i = 0; i < n; ++i) {
    if (p.vertices[i].empty()) throw InputError("portrait vertex label empty");
    for (std::size_t j = i + 1; j < n; ++j)
      if (p.vertices[i] == p.vertices[j])
        throw InputError("portrait vertex labels not unique");
    if (p.sigma[i] < 0 || p.sigma[i] >= static_cast<int>(n))
      throw InputError("portrait map leaves the vertex set");
    if (p.delta[i] < 1) throw InputError("portrait local degree below 1");
  }
  for (std::size_t w = 0; w < n; ++w) {
    if (!p.complete[w]) continue;
    Int sum = 0;
    for (std::size_t v = 0; v < n; ++v)
      if (p.sigma[v] == static_cast<int>(w)) sum += p.delta[v];
    if (sum != p.degree)
      throw InputError("complete vertex '" + p.vertices[w] +
                       "' has preimage degrees summing to " + sum.str() +
                       " instead of the degree");
  }
}

RamifiedPortrait portrait_from_qote(const QuotientPair& pair) {
  const std::vector<SpherePoint> post = postcritical_set(pair);
  const detail::PairKernel kernel(pair, 1, 1);

  // Every marked level-1 vertex arises exactly once as a preimage of a
  // postcritical point, so one pass over P_f yields sigma and delta.
  std::map<SpherePoint, std::pair<SpherePoint, int>> entry;  // y -> (f(y), deg)
  for (const SpherePoint& p : post)
    for (const auto& pre : kernel.preimages_sphere(p)) {
      if (!entry.emplace(pre.point, std::make_pair(p, pre.degree)).second)
        throw InternalCheckFailure("sphere preimage sets overlap");
    }
  for (const SpherePoint& p : post)
    if (entry.find(p) == entry.end())
      throw InternalCheckFailure("postcritical point missing from level 1");

  RamifiedPortrait out;
  out.degree = pair.degree_f();
  std::vector<SpherePoint> pts;
  for (const auto& [y, tgt] : entry) pts.push_back(y);
  for (const auto& y : pts) out.vertices.push_back(sphere_label(y));
  for (const auto& y : pts) {
    const auto& [img, deg] = entry.at(y);
    const auto it = std::lower_bound(pts.begin(), pts.end(), img);
    if (it == pts.end() || !(*it == img))
      throw InternalCheckFailure("portrait image is not a vertex");
    out.sigma.push_back(static_cast<int>(it - pts.begin()));
    out.delta.push_back(deg);
    out.complete.push_back(std::binary_search(post.begin(), post.end(), y));
  }
  validate_portrait(out);
  return out;
}

Rat euler_characteristic(const std::vector<Nu>& signature) {
  Rat chi = 2;
  for (const Nu& nu : signature) {
    if (nu.inf)
      chi -= 1;
    else
      chi -= 1 - Rat(1, nu.v);
  }
  return chi;
}

OrbifoldData orbifold_from_signature(std::vector<Nu> signature) {
  std::sort(signature.begin(), signature.end());
  OrbifoldData data;
  data.chi = euler_characteristic(signature);
  data.signature = std::move(signature);
  return data;
}

OrbifoldData ramification(const RamifiedPortrait& p) {
  validate_portrait(p);
  const int n = static_cast<int>(p.vertices.size());

  // Postcritical closure: forward orbits of the critical vertices.
  std::vector<bool> pc(n, false);
  for (int v = 0; v < n; ++v) {
    if (p.delta[v] < 2) continue;
    int u = p.sigma[v];
    while (!pc[u]) {
      pc[u] = true;
      u = p.sigma[u];
    }
  }
  int pc_count = 0;
  for (int v = 0; v < n; ++v) {
    if (!pc[v]) continue;
    ++pc_count;
    if (!p.complete[v])
      throw IncompletePortrait("postcritical vertex '" + p.vertices[v] +
                               "' has no complete preimage list");
  }

  // Infinity exactly on cycles through a critical vertex.
  std::vector<bool> infv(n, false);
  for (int v = 0; v < n; ++v) {
    int u = v;
    for (int step = 0; step < n; ++step) u = p.sigma[u];  // now on a cycle
    std::vector<int> cycle{u};
    for (int w = p.sigma[u]; w != u; w = p.sigma[w]) cycle.push_back(w);
    if (std::none_of(cycle.begin(), cycle.end(),
                     [&](int w) { return p.delta[w] >= 2; }))
      continue;
    for (int w : cycle) infv[w] = true;
  }

  // Least fixed point of the multiple-condition on the finite part.
  std::vector<Nu> nu(n);
  for (int v = 0; v < n; ++v)
    if (infv[v]) nu[v] = Nu::infinity();
  const int cap = pc_count + 2;
  for (int round = 0;; ++round) {
    if (round > cap)
      throw InternalCheckFailure("ramification iteration did not stabilize");
    bool changed = false;
    for (int x = 0; x < n; ++x) {
      if (!pc[x] || infv[x]) continue;
      Nu acc{1, false};
      for (int y = 0; y < n; ++y) {
        if (p.sigma[y] != x) continue;
        if (infv[y])
          throw InternalCheckFailure("finite vertex fed by an infinite one");
        const Nu base = pc[y] ? nu[y] : Nu{1, false};
        acc = lcm_nu(acc, Nu{base.v * p.delta[y], false});
      }
      if (!(acc == nu[x])) {
        nu[x] = acc;
        changed = true;
      }
    }
    if (!changed) break;
  }

  OrbifoldData data;
  for (int v = 0; v < n; ++v) {
    if (!pc[v]) continue;
    if (!nu[v].inf && nu[v].v < 2)
      throw InternalCheckFailure("postcritical vertex with nu below 2");
    data.nu.emplace_back(p.vertices[v], nu[v]);
    data.signature.push_back(nu[v]);
  }
  std::sort(data.nu.begin(), data.nu.end());
  std::sort(data.signature.begin(), data.signature.end());
  data.chi = euler_characteristic(data.signature);
  return data;
}

std::vector<std::pair<std::string, Nu>> ramification_oracle(
    const RamifiedPortrait& p, int d) {
  validate_portrait(p);
  const int n = static_cast<int>(p.vertices.size());
  // memo[v][t] = lcm of backward path products of length <= t into v.
  std::vector<std::vector<std::optional<Nu>>> memo(
      n, std::vector<std::optional<Nu>>(d + 1));
  auto walk = [&](auto&& self, int v, int t) -> Nu {
    if (t == 0 || !p.complete[v]) return Nu{1, false};
    auto& slot = memo[v][t];
    if (slot) return *slot;
    Nu acc{1, false};
    for (int y = 0; y < n; ++y) {
      if (p.sigma[y] != v) continue;
      const Nu sub = self(self, y, t - 1);
      const Nu term = sub.inf ? Nu::infinity() : Nu{sub.v * p.delta[y], false};
      acc = lcm_nu(acc, term);
    }
    slot = acc;
    return acc;
  };
  std::vector<std::pair<std::string, Nu>> out;
  for (int v = 0; v < n; ++v) out.emplace_back(p.vertices[v], walk(walk, v, d));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<SpherePoint, Nu>> ramification_oracle(
    const QuotientPair& pair, int d) {
  const std::vector<SpherePoint> post = postcritical_set(pair);
  const int n = static_cast<int>(post.size());
  const detail::PairKernel kernel(pair, 1, 1);
  // Cached preimage lists; points outside P_f are leaves (every vertex of a
  // backward tree below them has local degree 1, since P_f is forward
  // invariant and images of critical points are postcritical).
  std::vector<std::vector<DegreedSpherePoint>> pre(n);
  const auto index_of = [&](const SpherePoint& p) {
    const auto it = std::lower_bound(post.begin(), post.end(), p);
    return it != post.end() && *it == p ? static_cast<int>(it - post.begin())
                                        : -1;
  };
  for (int i = 0; i < n; ++i) pre[i] = kernel.preimages_sphere(post[i]);
  std::vector<std::vector<std::optional<Nu>>> memo(
      n, std::vector<std::optional<Nu>>(d + 1));
  auto walk = [&](auto&& self, int i, int t) -> Nu {
    if (t == 0) return Nu{1, false};
    auto& slot = memo[i][t];
    if (slot) return *slot;
    Nu acc{1, false};
    for (const auto& [y, deg] : pre[i]) {
      const int j = index_of(y);
      const Nu sub = j >= 0 ? self(self, j, t - 1) : Nu{1, false};
      const Nu term = sub.inf ? Nu::infinity() : Nu{sub.v * deg, false};
      acc = lcm_nu(acc, term);
    }
    slot = acc;
    return acc;
  };
  std::vector<std::pair<SpherePoint, Nu>> out;
  for (int i = 0; i < n; ++i) out.emplace_back(post[i], walk(walk, i, d));
  return out;
}

OrbifoldClass classify(const OrbifoldData& data) {
  if (data.chi == 0) return OrbifoldClass::Parabolic;
  return data.chi < 0 ? OrbifoldClass::Hyperbolic : OrbifoldClass::NotRealizable;
}

std::string to_string(OrbifoldClass c) {
  switch (c) {
    case OrbifoldClass::Parabolic:
      return "parabolic";
    case OrbifoldClass::Hyperbolic:
      return "hyperbolic";
    default:
      return "not-realizable";
  }
}

std::optional<std::string> signature_taxonomy(const OrbifoldData& data) {
  const auto sig = [](std::vector<long> fin, int infs) {
    std::vector<Nu> s;
    for (long v : fin) s.push_back(Nu{v, false});
    for (int i = 0; i < infs; ++i) s.push_back(Nu::infinity());
    std::sort(s.begin(), s.end());
    return s;
  };
  static const std::vector<std::vector<Nu>> lattes = {
      sig({2, 2, 2, 2}, 0), sig({2, 4, 4}, 0), sig({3, 3, 3}, 0),
      sig({2, 3, 6}, 0)};
  static const std::vector<std::vector<Nu>> periodic = {sig({}, 2),
                                                        sig({2, 2}, 1)};
  for (const auto& s : lattes)
    if (data.signature == s) return "Lattes-type (no periodic critical points)";
  for (const auto& s : periodic)
    if (data.signature == s) return "parabolic with periodic critical points";
  return std::nullopt;
}

}  // namespace orbifoldkit
