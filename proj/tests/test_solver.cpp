#include "foldcode/solver.hpp"

#include "doctest.h"
#include "foldcode/model.hpp"

using namespace foldcode;
using dmat = Eigen::MatrixXd;

namespace {

SdpProblem toy_sdp() {
  // maximize y subject to [[1, y], [y, 1]] PSD; optimum 1
  SdpProblem p;
  p.objective = {1.0};
  p.var_names = {"y"};
  AffineBlock b;
  b.name = "arrow";
  b.dim = 2;
  b.constant = dmat::Identity(2, 2);
  dmat a(2, 2);
  a << 0, 1, 1, 0;
  b.coeffs.emplace_back(0, a);
  p.blocks.push_back(b);
  return p;
}

SdpProblem toy_lp() {
  // maximize x subject to 0 <= x <= 3
  SdpProblem p;
  p.objective = {1.0};
  p.var_names = {"x"};
  AffineBlock lo{"x >= 0", 1, dmat::Zero(1, 1), {{0, dmat::Constant(1, 1, 1.0)}}};
  AffineBlock hi{"x <= 3", 1, dmat::Constant(1, 1, 3.0), {{0, dmat::Constant(1, 1, -1.0)}}};
  p.blocks.push_back(lo);
  p.blocks.push_back(hi);
  return p;
}

}  // namespace

TEST_CASE("jacobi eigenvalues") {
  CHECK(min_eigenvalue(dmat::Identity(3, 3)) == doctest::Approx(1.0).epsilon(1e-12));
  dmat d = dmat::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = -2;
  CHECK(min_eigenvalue(d) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(min_eigenvalue(dmat::Ones(2, 2)) == doctest::Approx(0.0).epsilon(1e-10));
  dmat ns(2, 2);
  ns << 0, 1, 0, 0;
  CHECK_THROWS_AS(min_eigenvalue(ns), std::invalid_argument);
  // larger spectrum against a known matrix
  dmat m(3, 3);
  m << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  CHECK(min_eigenvalue(m) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("analytic toy instances solve to 1e-7") {
  auto r1 = solve(toy_sdp());
  CHECK(r1.status == SolveStatus::optimal);
  CHECK(r1.objective == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r1.bound == 1);

  auto r2 = solve(toy_lp());
  CHECK(r2.status == SolveStatus::optimal);
  CHECK(r2.objective == doctest::Approx(3.0).epsilon(1e-7));
  CHECK(r2.bound == 3);
}

TEST_CASE("weak duality holds at the returned point") {
  auto r = solve(build_sdp(8, 2));
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.dual_objective >= r.objective - 1e-5 * (1.0 + std::abs(r.objective)));
}

TEST_CASE("deterministic repeat runs") {
  auto a = solve(build_sdp(8, 2));
  auto b = solve(build_sdp(8, 2));
  CHECK(a.iteration_csv() == b.iteration_csv());
  REQUIRE(a.x.size() == b.x.size());
  for (int i = 0; i < a.x.size(); ++i) CHECK(a.x[i] == b.x[i]);
  CHECK(a.objective == b.objective);
}

TEST_CASE("certificate checker accepts the solution and flags corruption") {
  SdpProblem prob = build_sdp(8, 2);
  auto r = solve(prob);
  REQUIRE(r.status == SolveStatus::optimal);
  auto rep = check_certificate(prob, r);
  CHECK(rep.ok);

  auto bad = r;
  bad.dual[0] -= 10.0 * Eigen::MatrixXd::Identity(bad.dual[0].rows(), bad.dual[0].cols());
  auto rep2 = check_certificate(prob, bad);
  CHECK(!rep2.ok);
}

TEST_CASE("per-block rescaling leaves the optimum unchanged") {
  SdpProblem a = build_sdp(8, 2);
  SdpProblem b = a;
  b.blocks[0].constant *= 2.0;
  for (auto& [v, m] : b.blocks[0].coeffs) m *= 2.0;
  auto ra = solve(a);
  auto rb = solve(b);
  REQUIRE(ra.status == SolveStatus::optimal);
  REQUIRE(rb.status == SolveStatus::optimal);
  CHECK(ra.objective == doctest::Approx(rb.objective).epsilon(1e-6));
}

TEST_CASE("infeasible problems are detected") {
  SdpProblem p;
  p.objective = {1.0};
  p.var_names = {"x"};
  AffineBlock lo{"x >= 0", 1, dmat::Zero(1, 1), {{0, dmat::Constant(1, 1, 1.0)}}};
  AffineBlock hi{"x <= -1", 1, dmat::Constant(1, 1, -1.0), {{0, dmat::Constant(1, 1, -1.0)}}};
  p.blocks.push_back(lo);
  p.blocks.push_back(hi);
  auto r = solve(p);
  CHECK(r.status == SolveStatus::infeasible_detected);
}

TEST_CASE("LP instances reduce the certificate to sign conditions") {
  SdpProblem p = toy_lp();
  auto r = solve(p);
  auto rep = check_certificate(p, r);
  CHECK(rep.ok);
  CHECK(rep.min_eig_slack >= -1e-8);
  CHECK(rep.min_eig_dual >= -1e-8);
}

TEST_CASE("reduce substitutes fixings and drops structural zeros") {
  SdpProblem p = build_sdp(10, 3);
  ReducedProblem rp = reduce(p);
  CHECK(rp.var_ids.size() + p.fixings.size() == static_cast<size_t>(p.num_vars()));
  CHECK(rp.obj_constant == 1.0);  // x^0_{0,0} contributes k_0
  for (const auto& b : rp.blocks) CHECK(b.dim >= 1);
}
