#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <vector>

namespace foldcode {

// Combinatorics of the folded n-cube. A vertex is an antipodal pair
// {S, complement(S)} of subsets of an n-element ground set, stored as the
// numerically smaller of the two n-bit characteristic masks. Since the
// complement flips bit n-1, the canonical masks are exactly 0 .. 2^{n-1}-1,
// and the mask doubles as the vertex index.

using Mask = std::uint64_t;

constexpr int kMinN = 6;
constexpr int kOracleMaxN = 13;  // cap for anything that enumerates X or X^2

inline int popcount(Mask m) { return std::popcount(m); }
inline Mask full_mask(int n) { return (n >= 64) ? ~Mask(0) : ((Mask(1) << n) - 1); }
inline int diameter(int n) { return n / 2; }
inline std::uint64_t vertex_count(int n) { return std::uint64_t(1) << (n - 1); }

struct Vertex {
  Mask mask = 0;
  int n = 0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct TripleProfile {
  int i = 0;  // distance(x, y)
  int j = 0;  // distance(x, z)
  int t = 0;  // intersection statistic of the two difference sets
  friend auto operator<=>(const TripleProfile&, const TripleProfile&) = default;
};

struct IndexSet {
  int n = 0;
  std::vector<TripleProfile> profiles;  // lexicographic by (i, j, t)
};

Vertex canonical_vertex(Mask raw_mask, int n);
bool is_canonical(Mask mask, int n);

// Distance of two canonical vertices: min(|a|, n-|a|) with a the xor mask.
int distance(const Vertex& x, const Vertex& y);

// Mask-level kernels, no validation. Hot paths (orbit sweeps, witness tests).
int distance_masks(Mask x, Mask y, int n);
TripleProfile classify_masks(Mask x, Mask y, Mask z, int n);

TripleProfile classify_triple(const Vertex& x, const Vertex& y, const Vertex& z);

bool profile_admissible(const TripleProfile& p, int n);
IndexSet enumerate_profiles(int n);

// i + j - 2t, the "unwrapped" third distance of the triple.
inline int unwrapped_third(const TripleProfile& p) { return p.i + p.j - 2 * p.t; }
// Actual distance(y, z) for a triple with this profile.
int third_distance(const TripleProfile& p, int n);

// gamma^t_{i,j}: number of pairs (y, z) with classify(0, y, z) = p.
// Enumerates the level-i and level-j spheres; n <= kOracleMaxN.
std::int64_t orbit_count(const TripleProfile& p, int n);

// k_i = gamma^0_{i,0}: sphere sizes around any vertex (closed form, any n <= 62).
std::int64_t valency(int i, int n);

// Vertex indices (= masks) at a given distance from the zero class.
std::vector<Mask> sphere(int level, int n);

}  // namespace foldcode
