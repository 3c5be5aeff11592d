#include "foldcode/delsarte.hpp"

#include <stdexcept>

#include "foldcode/cube.hpp"

namespace foldcode {

namespace {

Int sign(int e) { return (e % 2 == 0) ? 1 : -1; }

// Gauss-Jordan inverse over exact rationals.
std::vector<std::vector<Rat>> invert(const std::vector<std::vector<Int>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<Rat>> w(n, std::vector<Rat>(2 * n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w[i][j] = Rat(a[i][j]);
    w[i][n + i] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (w[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::domain_error("matrix not invertible");
    std::swap(w[col], w[piv]);
    const Rat pval = w[col][col];
    for (int j = 0; j < 2 * n; ++j) w[col][j] /= pval;
    for (int r = 0; r < n; ++r) {
      if (r == col || w[r][col] == 0) continue;
      const Rat f = w[r][col];
      for (int j = 0; j < 2 * n; ++j) w[r][j] -= f * w[col][j];
    }
  }
  std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = w[i][n + j];
  return inv;
}

}  // namespace

EigenmatrixTable eigenmatrix(int n) {
  if (n < kMinN || n > 62) throw std::invalid_argument("n out of range");
  const int D = diameter(n);
  EigenmatrixTable tab;
  tab.n = n;
  tab.q.assign(D + 1, std::vector<Int>(D + 1, 0));
  for (int i = 0; i <= D; ++i)
    for (int j = 0; j <= D; ++j) {
      Int v = 0;
      for (int k = 0; k <= 2 * j; ++k) v += sign(k) * binom(i, k) * binom(n - i, 2 * j - k);
      tab.q[i][j] = v;
    }
  auto inv = invert(tab.q);
  const Int size = Int(1) << (n - 1);
  tab.p.assign(D + 1, std::vector<Rat>(D + 1));
  for (int i = 0; i <= D; ++i)
    for (int j = 0; j <= D; ++j) {
      tab.p[i][j] = Rat(size) * inv[i][j];
      if (denominator(tab.p[i][j]) != 1) tab.p_integral = false;
    }
  return tab;
}

SdpProblem build_delsarte_lp(int n, int d) {
  const int D = diameter(n);
  if (d < 1 || d > D) throw std::invalid_argument("d out of range");
  const EigenmatrixTable tab = eigenmatrix(n);

  SdpProblem prob;
  prob.n = n;
  prob.d = d;
  prob.objective.assign(D + 1, 0.0);
  for (int i = 0; i <= D; ++i) {
    prob.var_names.push_back("x_" + std::to_string(i));
    prob.objective[i] = static_cast<double>(valency(i, n));
  }
  prob.fixings[0] = 1.0;
  for (int i = 1; i <= d - 1; ++i) prob.fixings[i] = 0.0;
  prob.num_matrix_blocks = 0;

  using dmat = Eigen::MatrixXd;
  for (int i = d; i <= D; ++i) {
    AffineBlock b;
    b.name = "x_" + std::to_string(i) + " >= 0";
    b.dim = 1;
    b.constant = dmat::Zero(1, 1);
    b.coeffs.emplace_back(i, dmat::Constant(1, 1, 1.0));
    prob.blocks.push_back(std::move(b));
  }
  for (int j = 0; j <= D; ++j) {
    AffineBlock b;
    b.name = "eigenrow " + std::to_string(j);
    b.dim = 1;
    b.constant = dmat::Zero(1, 1);
    for (int i = 0; i <= D; ++i) {
      const double v = tab.p[j][i].convert_to<double>();
      if (v == 0.0) continue;
      b.coeffs.emplace_back(i, dmat::Constant(1, 1, v));
    }
    prob.blocks.push_back(std::move(b));
  }
  return prob;
}

BoundResult delsarte_bound(int n, int d, const SolverConfig& cfg) {
  return solve(build_delsarte_lp(n, d), cfg);
}

}  // namespace foldcode
