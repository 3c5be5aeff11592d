#include "foldcode/cube.hpp"

#include <algorithm>
#include <stdexcept>

#include "foldcode/binom.hpp"

namespace foldcode {

namespace {

void check_n(int n) {
  if (n < kMinN || n > 62) throw std::invalid_argument("n must be in [6, 62]");
}

void check_oracle_n(int n) {
  check_n(n);
  if (n > kOracleMaxN) throw std::length_error("enumeration capped at n <= 13");
}

}  // namespace

Vertex canonical_vertex(Mask raw_mask, int n) {
  check_n(n);
  if (raw_mask > full_mask(n)) throw std::invalid_argument("raw_mask >= 2^n");
  Mask comp = ~raw_mask & full_mask(n);
  return Vertex{std::min(raw_mask, comp), n};
}

bool is_canonical(Mask mask, int n) { return mask < vertex_count(n); }

int distance(const Vertex& x, const Vertex& y) {
  if (x.n != y.n) throw std::invalid_argument("vertices from different cubes");
  return distance_masks(x.mask, y.mask, x.n);
}

int distance_masks(Mask x, Mask y, int n) {
  int p = popcount(x ^ y);
  return std::min(p, n - p);
}

TripleProfile classify_masks(Mask x, Mask y, Mask z, int n) {
  const int D = diameter(n);
  const Mask full = full_mask(n);
  const Mask a = x ^ y;
  const Mask b = x ^ z;
  const int pa = popcount(a);
  const int pb = popcount(b);
  const int i = std::min(pa, n - pa);
  const int j = std::min(pb, n - pb);
  // Difference set of the half realizing the distance; unique below level D.
  const Mask A = (pa == i) ? a : (~a & full);
  const Mask B = (pb == j) ? b : (~b & full);
  int t;
  if (n % 2 == 0 && (i == D || j == D)) {
    if (i == D && j < D)
      t = std::max(popcount(A & B), popcount((~A & full) & B));
    else
      t = std::max(popcount(A & B), popcount(A & (~B & full)));
  } else {
    t = popcount(A & B);
  }
  return TripleProfile{i, j, t};
}

TripleProfile classify_triple(const Vertex& x, const Vertex& y, const Vertex& z) {
  if (x.n != y.n || x.n != z.n) throw std::invalid_argument("vertices from different cubes");
  return classify_masks(x.mask, y.mask, z.mask, x.n);
}

bool profile_admissible(const TripleProfile& p, int n) {
  const int D = diameter(n);
  const int i = p.i, j = p.j, t = p.t;
  if (t < 0 || t > i || t > j || i > D || j > D) return false;
  if (n % 2 == 0) {
    if (i + j - t > 2 * D - 2) return false;
    if (i == D && t < (j + 1) / 2) return false;
    if (j == D && t < (i + 1) / 2) return false;
  } else {
    if (i + j - t > 2 * D) return false;
  }
  return true;
}

IndexSet enumerate_profiles(int n) {
  check_n(n);
  IndexSet s{n, {}};
  const int D = diameter(n);
  for (int i = 0; i <= D; ++i)
    for (int j = 0; j <= D; ++j)
      for (int t = 0; t <= std::min(i, j); ++t)
        if (profile_admissible({i, j, t}, n)) s.profiles.push_back({i, j, t});
  return s;
}

int third_distance(const TripleProfile& p, int n) {
  const int l = unwrapped_third(p);
  return std::min(l, n - l);
}

std::vector<Mask> sphere(int level, int n) {
  check_oracle_n(n);
  std::vector<Mask> out;
  const std::uint64_t count = vertex_count(n);
  for (Mask v = 0; v < count; ++v)
    if (distance_masks(0, v, n) == level) out.push_back(v);
  return out;
}

std::int64_t orbit_count(const TripleProfile& p, int n) {
  check_oracle_n(n);
  if (!profile_admissible(p, n)) throw std::invalid_argument("inadmissible profile");
  const auto ys = sphere(p.i, n);
  const auto zs = sphere(p.j, n);
  std::int64_t count = 0;
  for (Mask y : ys)
    for (Mask z : zs)
      if (classify_masks(0, y, z, n) == p) ++count;
  return count;
}

std::int64_t valency(int i, int n) {
  check_n(n);
  const int D = diameter(n);
  if (i < 0 || i > D) throw std::invalid_argument("level out of range");
  Int k = binom(n, i);
  if (n % 2 == 0 && i == D) k /= 2;
  return to_i64(k);
}

}  // namespace foldcode
