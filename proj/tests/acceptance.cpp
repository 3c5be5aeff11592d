// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
// Set FOLDCODE_SLOW=1 to extend the algebra verification to n = 10..13.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "foldcode/delsarte.hpp"
#include "foldcode/model.hpp"
#include "foldcode/oracle.hpp"
#include "foldcode/solver.hpp"
#include "support.hpp"

using namespace foldcode;
using namespace foldcode::testsupport;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what
            << std::endl;
  if (!pass) ++failures;
}

struct Instance {
  int n, d;
  long long sdp, delsarte;
};

const std::vector<Instance> kEven = {{8, 2, 28, 64},  {10, 2, 256, 256}, {10, 3, 24, 32},
                                     {12, 3, 87, 128}, {10, 4, 16, 16},  {12, 4, 54, 85}};
const std::vector<Instance> kOdd = {{9, 2, 93, 112},  {13, 2, 1348, 1877}, {11, 3, 85, 85},
                                    {13, 3, 213, 213}, {11, 4, 20, 27},    {13, 4, 111, 120}};

struct SolvedInstance {
  Instance inst;
  BoundResult sdp, lp;
};

std::vector<SolvedInstance> solve_instances(const std::vector<Instance>& list) {
  std::vector<SolvedInstance> out;
  for (const Instance& inst : list) {
    SolvedInstance s{inst, solve(build_sdp(inst.n, inst.d)), delsarte_bound(inst.n, inst.d)};
    out.push_back(std::move(s));
  }
  return out;
}

void table_criterion(int criterion, const std::vector<SolvedInstance>& solved,
                     const char* label) {
  bool pass = true;
  std::ostringstream detail;
  for (const auto& s : solved) {
    const bool ok = s.sdp.status == SolveStatus::optimal &&
                    s.lp.status == SolveStatus::optimal && s.sdp.bound == s.inst.sdp &&
                    s.lp.bound == s.inst.delsarte && s.sdp.wall_time_ms <= 60000 &&
                    s.lp.wall_time_ms <= 60000;
    if (!ok) {
      pass = false;
      detail << " [n=" << s.inst.n << " d=" << s.inst.d << " got sdp " << s.sdp.bound
             << "/" << to_string(s.sdp.status) << " lp " << s.lp.bound << "/"
             << to_string(s.lp.status) << " expected " << s.inst.sdp << "/"
             << s.inst.delsarte << "]";
    }
  }
  std::ostringstream what;
  what << label << " bounds reproduced (" << solved.size() << " instances)" << detail.str();
  report(criterion, pass, what.str());
}

void verification_criterion() {
  bool pass = true;
  std::ostringstream detail;
  std::vector<int> ns = {8, 9};
  if (const char* slow = std::getenv("FOLDCODE_SLOW"); slow && slow[0] == '1')
    for (int n = 10; n <= 13; ++n) ns.push_back(n);
  for (int n : ns) {
    VerifyReport rep = full_verification(n);
    for (const auto& c : rep.checks)
      if (!c.pass) {
        pass = false;
        detail << " [n=" << n << " " << c.name << ": " << c.detail << "]";
      }
  }
  // endpoint-D kernel is empty for odd D
  if (level_kernel_basis(5, 10).dim() != 0) {
    pass = false;
    detail << " [dim L_5 at n=10 nonzero]";
  }
  std::ostringstream what;
  what << "algebra verification (n =";
  for (int n : ns) what << " " << n;
  what << ", plus dim L_D check at n=10)" << detail.str();
  report(3, pass, what.str());
}

void dominance_criterion(const std::vector<SolvedInstance>& all) {
  bool pass = true;
  std::ostringstream detail;
  for (const auto& s : all) {
    if (!(s.sdp.objective <= s.lp.objective + 1e-6 * s.lp.objective)) {
      pass = false;
      detail << " [n=" << s.inst.n << " d=" << s.inst.d << " sdp " << s.sdp.objective
             << " > lp " << s.lp.objective << "]";
    }
  }
  report(4, pass, "semidefinite objective never exceeds the linear one" + detail.str());
}

void trivial_distance_criterion() {
  bool pass = true;
  std::ostringstream detail;
  for (int n = 8; n <= 13; ++n) {
    const long long expect = static_cast<long long>(vertex_count(n));
    auto s = solve(build_sdp(n, 1));
    auto l = delsarte_bound(n, 1);
    if (s.status != SolveStatus::optimal || l.status != SolveStatus::optimal ||
        s.bound != expect || l.bound != expect) {
      pass = false;
      detail << " [n=" << n << " sdp " << s.bound << " lp " << l.bound << " expected "
             << expect << "]";
    }
  }
  report(5, pass, "d = 1 gives 2^{n-1} for both methods, n = 8..13" + detail.str());
}

void witness_criterion() {
  bool pass = true;
  std::ostringstream detail;
  std::mt19937_64 rng(20240811);
  for (int n = 8; n <= 13 && pass; ++n) {
    const auto gam = gamma_counts(n);
    const BetaTable betas = build_beta_table(n);
    const BlockSpec spec = block_spec(n);
    const IndexSet idx = enumerate_profiles(n);
    for (int d = 2; d <= 4 && pass; ++d) {
      for (int rep = 0; rep < 100 && pass; ++rep) {
        // truncated greedy codes keep the triple counting O(1) per code
        const auto code = greedy_code(n, d, rng, 40);
        const long long size = static_cast<long long>(code.size());
        const auto lam = lambda_counts(code, n);
        auto fail = [&](const std::string& msg) {
          pass = false;
          detail << " [n=" << n << " d=" << d << " rep=" << rep << ": " << msg << "]";
        };
        long long diag = 0;
        for (int i = 0; i <= diameter(n); ++i) {
          auto it = lam.find({i, 0, 0});
          if (it != lam.end()) diag += it->second;
        }
        if (diag != size * size) fail("objective != |C|");
        for (const auto& p : idx.profiles) {
          auto it = lam.find(p);
          const long long lp = it == lam.end() ? 0 : it->second;
          auto iu = lam.find({p.i, 0, 0});
          const long long lu = iu == lam.end() ? 0 : iu->second;
          if (lp * gam.at({p.i, 0, 0}) > lu * gam.at(p)) fail("box constraint violated");
          const int l = unwrapped_third(p);
          for (int v : {p.i, p.j, l, n - l})
            if (1 <= v && v <= d - 1 && lp != 0) fail("distance-excluded profile hit");
        }
        auto xval = [&](const TripleProfile& p) {
          auto it = lam.find(p);
          const long long lp = it == lam.end() ? 0 : it->second;
          return static_cast<double>(lp) /
                 (static_cast<double>(size) * static_cast<double>(gam.at(p)));
        };
        for (const auto& blk : spec.blocks) {
          Eigen::MatrixXd mp = Eigen::MatrixXd::Zero(blk.size(), blk.size());
          Eigen::MatrixXd md = mp;
          for (int i = blk.lo; i <= blk.hi; ++i)
            for (int j = blk.lo; j <= blk.hi; ++j)
              for (int t : admissible_t(i, j, n)) {
                const double bv = to_double_exact(betas.at(blk.r, i, j, t));
                const double xv = xval({i, j, t});
                mp(i - blk.lo, j - blk.lo) += bv * xv;
                md(i - blk.lo, j - blk.lo) +=
                    bv * (xval({third_distance({i, j, t}, n), 0, 0}) - xv);
              }
          for (Eigen::MatrixXd* m : {&mp, &md}) {
            const double scale = std::max(1.0, m->cwiseAbs().maxCoeff());
            if (min_eigenvalue(*m / scale) < -1e-9) fail("empirical block not PSD");
          }
        }
      }
    }
  }
  report(6, pass,
         "empirical inner distributions of 100 random codes per (n, d) are feasible "
         "with objective |C|" +
             detail.str());
}

void solver_criterion() {
  bool pass = true;
  std::ostringstream detail;
  // analytic instances
  {
    SdpProblem p;
    p.objective = {1.0};
    p.var_names = {"y"};
    AffineBlock b;
    b.name = "arrow";
    b.dim = 2;
    b.constant = Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd a(2, 2);
    a << 0, 1, 1, 0;
    b.coeffs.emplace_back(0, a);
    p.blocks.push_back(b);
    auto r = solve(p);
    if (r.status != SolveStatus::optimal || std::abs(r.objective - 1.0) > 1e-7) {
      pass = false;
      detail << " [toy sdp off: " << r.objective << "]";
    }
  }
  {
    SdpProblem p;
    p.objective = {1.0};
    p.var_names = {"x"};
    p.blocks.push_back({"x >= 0", 1, Eigen::MatrixXd::Zero(1, 1),
                        {{0, Eigen::MatrixXd::Constant(1, 1, 1.0)}}});
    p.blocks.push_back({"x <= 3", 1, Eigen::MatrixXd::Constant(1, 1, 3.0),
                        {{0, Eigen::MatrixXd::Constant(1, 1, -1.0)}}});
    auto r = solve(p);
    if (r.status != SolveStatus::optimal || std::abs(r.objective - 3.0) > 1e-7) {
      pass = false;
      detail << " [toy lp off: " << r.objective << "]";
    }
  }
  {
    SdpProblem prob = build_sdp(8, 2);
    auto r = solve(prob);
    if (!check_certificate(prob, r).ok) {
      pass = false;
      detail << " [certificate rejected a clean solve]";
    }
    auto bad = r;
    if (!bad.dual.empty())
      bad.dual[0] -=
          10.0 * Eigen::MatrixXd::Identity(bad.dual[0].rows(), bad.dual[0].cols());
    if (check_certificate(prob, bad).ok) {
      pass = false;
      detail << " [corrupted dual point not flagged]";
    }
    auto r2 = solve(prob);
    bool same = r.iteration_csv() == r2.iteration_csv() && r.x.size() == r2.x.size();
    for (int i = 0; same && i < r.x.size(); ++i) same = r.x[i] == r2.x[i];
    if (!same) {
      pass = false;
      detail << " [repeat runs differ]";
    }
  }
  report(7, pass, "solver unit checks (analytic optima, certificate, determinism)" +
                      detail.str());
}

}  // namespace

int main() {
  auto even = solve_instances(kEven);
  table_criterion(1, even, "even-n table");
  auto odd = solve_instances(kOdd);
  table_criterion(2, odd, "odd-n table");
  verification_criterion();
  std::vector<SolvedInstance> all = even;
  all.insert(all.end(), odd.begin(), odd.end());
  dominance_criterion(all);
  trivial_distance_criterion();
  witness_criterion();
  solver_criterion();
  if (failures == 0) std::cout << "acceptance: all criteria passed" << std::endl;
  else std::cout << "acceptance: " << failures << " criterion(s) failed" << std::endl;
  return failures;
}
