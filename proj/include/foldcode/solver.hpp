#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "foldcode/model.hpp"

namespace foldcode {

struct SolverConfig {
  double tol_gap = 1e-8;    // relative duality gap
  double tol_feas = 1e-8;   // primal/dual residual tolerance
  int max_iter = 200;
  double step_fraction = 0.98;  // fraction to boundary
  double tol_round = 1e-5;      // slack when flooring objectives to bounds
  bool use_corrector = true;    // Mehrotra second-order term
};

enum class SolveStatus { optimal, max_iter, infeasible_detected, numerical_failure };
std::string to_string(SolveStatus s);

struct IterLog {
  int iter;
  double mu, primal_res, dual_res, gap;
};

struct BoundResult {
  SolveStatus status = SolveStatus::numerical_failure;
  double objective = 0.0;
  double dual_objective = 0.0;
  long long bound = 0;  // floor(objective + tol_round)
  int iterations = 0;
  double primal_res = 0.0, dual_res = 0.0, rel_gap = 0.0;
  std::vector<double> min_block_eigenvalues;  // of the constraint matrices at x
  long long wall_time_ms = 0;

  // certificate data on the reduced problem (see reduce())
  Eigen::VectorXd x;
  std::vector<Eigen::MatrixXd> slack, dual;
  std::vector<IterLog> log;
  std::string iteration_csv() const;
};

// Standard form actually iterated on: maximize w.x subject to
// c_k + sum_i x_i a_{k,i} PSD, after substituting fixings, dropping
// structurally zero rows/columns and normalizing each block.
struct ReducedProblem {
  struct RBlock {
    int dim = 0;
    double scale = 1.0;
    Eigen::MatrixXd c;
    std::vector<std::pair<int, Eigen::MatrixXd>> a;
  };
  std::vector<double> w;      // objective scaled to unit max entry
  double obj_scale = 1.0;     // multiply w . x back by this
  double obj_constant = 0.0;  // unscaled additive part
  std::vector<RBlock> blocks;
  std::vector<int> var_ids;  // reduced index -> problem variable
};

ReducedProblem reduce(const SdpProblem& prob);

BoundResult solve(const SdpProblem& prob, const SolverConfig& cfg = {});

// Smallest eigenvalue by cyclic Jacobi iteration (off-diagonal norm 1e-12).
// Throws std::invalid_argument unless m is symmetric within 1e-12.
double min_eigenvalue(const Eigen::MatrixXd& m);
void jacobi_eigen(const Eigen::MatrixXd& m, Eigen::MatrixXd& q, Eigen::VectorXd& lam);

struct CertificateReport {
  bool ok = true;
  std::vector<std::string> violations;
  double primal_res = 0.0, dual_res = 0.0, rel_gap = 0.0;
  double min_eig_slack = 0.0, min_eig_dual = 0.0;
};

// Recomputes every residual and block eigenvalue from the returned point;
// flags anolmalies beyond 10x the solver tolerances.
CertificateReport check_certificate(const SdpProblem& prob, const BoundResult& res,
                                    const SolverConfig& cfg = {});

}  // namespace foldcode
