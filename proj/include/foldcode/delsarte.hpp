#pragma once

#include <vector>

#include "foldcode/binom.hpp"
#include "foldcode/model.hpp"
#include "foldcode/solver.hpp"

namespace foldcode {

// Second eigenmatrix of the folded n-cube (exact), and the first eigenmatrix
// recovered by exact rational inversion: p q = |X| I.
struct EigenmatrixTable {
  int n = 0;
  std::vector<std::vector<Int>> q;  // q[i][j] = qbar_j(i), 0 <= i, j <= D
  std::vector<std::vector<Rat>> p;  // |X| * q^{-1}; row 0 = valencies
  bool p_integral = true;
};

EigenmatrixTable eigenmatrix(int n);

// The linear programming bound as an all-1x1-block problem: maximize
// sum k_i x_i with x_0 = 1, x_i = 0 below the distance, x >= 0, and every
// row of p applied to x nonnegative.
SdpProblem build_delsarte_lp(int n, int d);

BoundResult delsarte_bound(int n, int d, const SolverConfig& cfg = {});

}  // namespace foldcode
