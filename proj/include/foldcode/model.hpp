#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "foldcode/blocks.hpp"
#include "foldcode/cube.hpp"

namespace foldcode {

// Equivalence classes of profiles under the triple-permutation symmetry:
// profiles sharing the sorted triple (i, j, i+j-2t), taken modulo the wrap
// n - (i+j-2t) when i+j-2t exceeds the diameter, carry equal inner-distribution
// values for every code.
struct VariableMap {
  int n = 0;
  std::vector<std::vector<TripleProfile>> classes;  // members sorted, classes by representative
  std::map<TripleProfile, int> class_of;

  int canonical_class(const TripleProfile& p) const;
  const TripleProfile& representative(int cls) const { return classes[cls].front(); }
  int size() const { return static_cast<int>(classes.size()); }
};

VariableMap variable_map(int n);

// constant + sum_i x_i * coeff_i, required PSD (dim 1 blocks are scalar
// inequalities).
struct AffineBlock {
  std::string name;
  int dim = 0;
  Eigen::MatrixXd constant;
  std::vector<std::pair<int, Eigen::MatrixXd>> coeffs;  // ascending var id
};

struct SdpProblem {
  int n = 0, d = 0;
  std::vector<std::string> var_names;  // one canonical class per variable
  std::vector<double> objective;       // maximize objective . x
  std::map<int, double> fixings;       // variable -> pinned value
  std::vector<AffineBlock> blocks;     // matrix blocks first, then 1x1 boxes
  int num_matrix_blocks = 0;

  int num_vars() const { return static_cast<int>(objective.size()); }
};

SdpProblem build_sdp(int n, int d);

std::string problem_summary_json(const SdpProblem& prob);

// Structural + numeric equality (block shapes, entries, objective, fixings).
bool same_problem(const SdpProblem& a, const SdpProblem& b);

}  // namespace foldcode
