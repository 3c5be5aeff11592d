#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "foldcode/blocks.hpp"
#include "foldcode/cube.hpp"

namespace foldcode {

// Brute-force construction of the orbit basis matrices M^t_{i,j} and the
// change of basis that block-diagonalizes the algebra they span, at n <= 13.
// Every identity check runs in exact integer sparse arithmetic; only the
// kernel bases and the conjugations are floating point.

using SpMatI = Eigen::SparseMatrix<std::int64_t>;
using SpMatD = Eigen::SparseMatrix<double>;

struct OracleInconsistency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SparseBasisMatrix {
  int n = 0;
  TripleProfile profile;
  SpMatI mat;  // 2^{n-1} x 2^{n-1}, 0/1 entries
  std::int64_t nnz() const { return mat.nonZeros(); }
  // (row, col) positions sorted lexicographically
  std::vector<std::pair<int, int>> entries() const;
};

SparseBasisMatrix build_basis_matrix(const TripleProfile& p, int n);

struct IdentityCheck {
  std::string name;
  bool pass = false;
  double residual = 0.0;  // 0 for exact checks; counterexample magnitude otherwise
  std::string detail;
};

struct VerifyReport {
  int n = 0;
  std::vector<IdentityCheck> checks;
  bool all_pass() const;
};

struct LevelBasis {
  int n = 0;
  int r = 0;
  Eigen::MatrixXd vectors;  // |X| rows, dim(L_r) orthonormal columns
  int dim() const { return static_cast<int>(vectors.cols()); }
};

struct ChangeOfBasis {
  struct Label {
    int r, xi, i;
  };
  int n = 0;
  std::vector<Label> labels;  // one per column, grouped by (r, xi), i ascending
  Eigen::MatrixXd u;          // |X| x |X| orthonormal
};

struct ConjugationReport {
  TripleProfile profile;
  double max_off_block = 0.0;  // bound on |entry| outside the (r, xi) blocks
  double max_copy_dev = 0.0;   // deviation between copies sharing an r
  std::map<int, Eigen::MatrixXd> blocks;  // distinct block per r, indexed by N_r
};

struct BetaMismatch {
  int r, i, j, t;
  Int closed_form, oracle;
};

class TerwilligerOracle {
 public:
  explicit TerwilligerOracle(int n);

  int n() const { return n_; }
  int dim() const { return static_cast<int>(vertex_count(n_)); }
  const IndexSet& index_set() const { return index_set_; }

  const SpMatI& basis(const TripleProfile& p) const;
  // Zero matrix stand-in for inadmissible profiles inside expansion sums.
  SpMatI basis_or_zero(int i, int j, int t) const;
  const SpMatI& adjacency() const { return a1_; }
  SpMatI dual_idempotent(int i) const;

  VerifyReport verify_identities() const;

  const LevelBasis& level_basis(int r) const;
  const ChangeOfBasis& change_of_basis() const;

  // ||M^r_{i,r} xi||^2 for unit xi in L_r; the diagonal congruence weights.
  double norm_weight(int r, int i) const;

  ConjugationReport conjugated_blocks(const TripleProfile& p) const;

  Int beta_oracle(int r, int i, int j, int t) const;
  BetaTable beta_table_oracle() const;

 private:
  void build_level_bases() const;
  int n_;
  IndexSet index_set_;
  std::vector<int> level_;                    // level per vertex index
  std::vector<std::vector<int>> level_verts_;  // vertex indices per level
  std::map<TripleProfile, SpMatI> mats_;
  SpMatI a1_;
  mutable std::vector<LevelBasis> level_bases_;  // lazy
  mutable std::unique_ptr<ChangeOfBasis> cob_;   // lazy
};

// Identities plus the numeric structure checks (kernel dimensions, basis
// orthonormality, block diagonality, closed-form beta against the oracle),
// reported as one flat check list. Backs the verify subcommand.
VerifyReport full_verification(int n);

// Free-function entry points over a fresh oracle (convenience; the class
// amortizes the enumeration when several calls share an n).
VerifyReport verify_identities(int n);
LevelBasis level_kernel_basis(int r, int n);
ChangeOfBasis build_change_of_basis(int n);
Int beta_oracle(int r, int i, int j, int t, int n);

// Replace closed-form entries that disagree with the oracle and flag them.
std::vector<BetaMismatch> arbitrate_beta_table(BetaTable& table,
                                               const BetaTable& oracle);

}  // namespace foldcode
