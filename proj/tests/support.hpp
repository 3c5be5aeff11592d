#pragma once

#include <algorithm>
#include <initializer_list>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "foldcode/cube.hpp"

namespace foldcode::testsupport {

// element e of {1..n} occupies bit n-e, so set literals written left to right
// match the usual bitstring reading
inline Mask mask_of(std::initializer_list<int> elems, int n) {
  Mask m = 0;
  for (int e : elems) m |= Mask(1) << (n - e);
  return m;
}

inline Vertex vertex_of(std::initializer_list<int> elems, int n) {
  return canonical_vertex(mask_of(elems, n), n);
}

// coordinate permutation composed with a xor translation
struct Automorphism {
  int n = 0;
  std::vector<int> perm;  // output bit b takes input bit perm[b]
  Mask flip = 0;

  Mask apply_mask(Mask v) const {
    Mask x = v ^ flip;
    Mask y = 0;
    for (int b = 0; b < n; ++b) y |= ((x >> perm[b]) & 1) << b;
    return y;
  }
  Vertex operator()(const Vertex& v) const { return canonical_vertex(apply_mask(v.mask), n); }
};

inline Automorphism random_automorphism(int n, std::mt19937_64& rng) {
  Automorphism a;
  a.n = n;
  a.perm.resize(n);
  std::iota(a.perm.begin(), a.perm.end(), 0);
  std::shuffle(a.perm.begin(), a.perm.end(), rng);
  a.flip = rng() & full_mask(n);
  return a;
}

inline Vertex random_vertex(int n, std::mt19937_64& rng) {
  return canonical_vertex(rng() & full_mask(n), n);
}

// greedy code with minimum distance >= d over a shuffled vertex order
inline std::vector<Mask> greedy_code(int n, int d, std::mt19937_64& rng,
                                     std::size_t cap = SIZE_MAX) {
  std::vector<Mask> order(vertex_count(n));
  std::iota(order.begin(), order.end(), Mask(0));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Mask> code;
  for (Mask v : order) {
    bool ok = true;
    for (Mask c : code)
      if (distance_masks(v, c, n) < d) {
        ok = false;
        break;
      }
    if (ok) {
      code.push_back(v);
      if (code.size() >= cap) break;
    }
  }
  return code;
}

inline int min_distance(const std::vector<Mask>& code, int n) {
  int d = n;
  for (size_t a = 0; a < code.size(); ++a)
    for (size_t b = a + 1; b < code.size(); ++b)
      d = std::min(d, distance_masks(code[a], code[b], n));
  return d;
}

// lambda^t_{i,j} = |(C x C x C) classified as (i,j,t)|
inline std::map<TripleProfile, long long> lambda_counts(const std::vector<Mask>& code,
                                                        int n) {
  std::map<TripleProfile, long long> lam;
  for (Mask x : code)
    for (Mask y : code)
      for (Mask z : code) ++lam[classify_masks(x, y, z, n)];
  return lam;
}

// gamma for every admissible profile in one sweep
inline std::map<TripleProfile, long long> gamma_counts(int n) {
  std::map<TripleProfile, long long> gam;
  const std::uint64_t count = vertex_count(n);
  for (Mask y = 0; y < count; ++y)
    for (Mask z = 0; z < count; ++z) ++gam[classify_masks(0, y, z, n)];
  return gam;
}

}  // namespace foldcode::testsupport
