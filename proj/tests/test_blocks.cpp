#include "foldcode/blocks.hpp"

#include "doctest.h"

using namespace foldcode;

TEST_CASE("beta closed-form spot values") {
  CHECK(beta_even(0, 2, 2, 1, 4) == 336);  // C(8,2) * C(2,1) * C(6,1)
  CHECK(beta_even(4, 4, 4, 4, 4) == 1);    // r = D, t = D
  CHECK(beta_even(4, 4, 4, 2, 4) == 3);    // r = D, t = D/2
  CHECK(beta_odd(0, 0, 0, 0, 4) == 1);
  CHECK(beta_odd(0, 1, 1, 0, 4) == 72);  // C(9,1) * C(1,0) * C(8,1)
}

TEST_CASE("beta argument validation") {
  CHECK_THROWS_AS(beta_even(0, 1, 1, 5, 4), std::invalid_argument);   // t > i
  CHECK_THROWS_AS(beta_even(3, 4, 4, 3, 4), std::invalid_argument);   // odd r at i = D
  CHECK_THROWS_AS(beta_even(2, 1, 1, 1, 4), std::invalid_argument);   // r > min(i,j)
  CHECK_THROWS_AS(beta_odd(3, 2, 3, 1, 4), std::invalid_argument);    // r > min(i,j)
}

TEST_CASE("beta is symmetric in (i, j) across full tables") {
  for (int n = 8; n <= 13; ++n) {
    BetaTable t = build_beta_table(n);
    for (const auto& [key, val] : t.values) {
      auto [r, i, j, tt] = key;
      CHECK(val.first == t.at(r, j, i, tt));
    }
  }
}

TEST_CASE("block spec shapes and multiplicities") {
  BlockSpec s8 = block_spec(8);
  REQUIRE(s8.blocks.size() == 5);
  std::vector<int> sizes8;
  Int sumsq = 0;
  for (const auto& b : s8.blocks) {
    sizes8.push_back(b.size());
    sumsq += Int(b.size()) * b.size();
  }
  CHECK(sizes8 == std::vector<int>{5, 3, 3, 1, 1});
  CHECK(sumsq == 45);
  CHECK(s8.blocks[4].multiplicity == 14);

  BlockSpec s9 = block_spec(9);
  std::vector<int> sizes9;
  sumsq = 0;
  for (const auto& b : s9.blocks) {
    sizes9.push_back(b.size());
    sumsq += Int(b.size()) * b.size();
  }
  CHECK(sizes9 == std::vector<int>{5, 4, 3, 2, 1});
  CHECK(sumsq == 55);
}

TEST_CASE("block sizes square-sum to the profile count and labels count the module") {
  for (int n = 6; n <= 16; ++n) {
    BlockSpec s = block_spec(n);
    Int sumsq = 0, labels = 0;
    for (const auto& b : s.blocks) {
      sumsq += Int(b.size()) * b.size();
      labels += b.multiplicity * b.size();
    }
    CHECK(sumsq == Int(enumerate_profiles(n).profiles.size()));
    CHECK(labels == (Int(1) << (n - 1)));
  }
}

TEST_CASE("beta table covers every block entry and dumps as CSV") {
  BetaTable t = build_beta_table(8);
  for (const auto& blk : block_spec(8).blocks)
    for (int i = blk.lo; i <= blk.hi; ++i)
      for (int j = blk.lo; j <= blk.hi; ++j)
        for (int tt : admissible_t(i, j, 8)) CHECK_NOTHROW(t.at(blk.r, i, j, tt));
  std::string csv = beta_table_csv(t);
  CHECK(csv.rfind("n,r,i,j,t,beta,provenance\n", 0) == 0);
  CHECK(csv.find("closed-form") != std::string::npos);
}
