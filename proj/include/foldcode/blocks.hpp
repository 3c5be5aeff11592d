#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "foldcode/binom.hpp"
#include "foldcode/cube.hpp"

namespace foldcode {

// Block layout of the algebra after the orthonormal change of basis: one
// distinct block per endpoint r, with row/column labels N_r and multiplicity
// m_r = dim of the level-r seed space.
struct BlockSpec {
  struct Block {
    int r;
    int lo, hi;  // N_r = {lo, lo+1, ..., hi}
    Int multiplicity;
    int size() const { return hi - lo + 1; }
  };
  int n = 0;
  std::vector<Block> blocks;
};

BlockSpec block_spec(int n);

// beta^r_{i,j,t}: integer entries of the conjugated basis matrices after the
// symmetric positive-diagonal rescaling that clears the normalization factors.
// Even n dispatches on the five boundary cases (i and/or j equal to D);
// odd n has a single closed form. Throws std::invalid_argument on tuples that
// are not admissible block entries.
Int beta_even(int r, int i, int j, int t, int D);
Int beta_odd(int r, int i, int j, int t, int D);
Int beta(int r, int i, int j, int t, int n);

enum class BetaProvenance { closed_form, oracle_derived };

struct BetaTable {
  int n = 0;
  // key (r, i, j, t) over all block entries of block_spec(n)
  std::map<std::array<int, 4>, std::pair<Int, BetaProvenance>> values;

  const Int& at(int r, int i, int j, int t) const;
};

// Admissible t values contributing to block entry (i, j); the boundary
// restrictions at i = D or j = D are enforced here.
std::vector<int> admissible_t(int i, int j, int n);

BetaTable build_beta_table(int n);

std::string beta_table_csv(const BetaTable& table);

}  // namespace foldcode
