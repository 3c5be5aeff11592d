#include "foldcode/model.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace foldcode {

namespace {

using dmat = Eigen::MatrixXd;

std::array<int, 4> class_key(const TripleProfile& p, int n) {
  const int D = diameter(n);
  const int l = unwrapped_third(p);
  std::array<int, 3> tri;
  int wrapped;
  if (l <= D) {
    tri = {p.i, p.j, l};
    wrapped = 0;
  } else {
    tri = {p.i, p.j, n - l};
    wrapped = 1;
  }
  std::sort(tri.begin(), tri.end());
  return {wrapped, tri[0], tri[1], tri[2]};
}

std::string profile_name(const TripleProfile& p) {
  std::ostringstream os;
  os << "x^" << p.t << "_{" << p.i << "," << p.j << "}";
  return os.str();
}

// constraint (v): the four distances of the triple must avoid 1..d-1
bool distance_excluded(const TripleProfile& p, int n, int d) {
  const int l = unwrapped_third(p);
  for (int v : {p.i, p.j, l, n - l})
    if (1 <= v && v <= d - 1) return true;
  return false;
}

}  // namespace

int VariableMap::canonical_class(const TripleProfile& p) const {
  auto it = class_of.find(p);
  if (it == class_of.end()) throw std::invalid_argument("inadmissible profile");
  return it->second;
}

VariableMap variable_map(int n) {
  VariableMap vm;
  vm.n = n;
  const IndexSet idx = enumerate_profiles(n);
  std::map<std::array<int, 4>, std::vector<TripleProfile>> groups;
  for (const auto& p : idx.profiles) groups[class_key(p, n)].push_back(p);
  std::vector<std::vector<TripleProfile>> classes;
  classes.reserve(groups.size());
  for (auto& [key, members] : groups) {
    std::sort(members.begin(), members.end());
    classes.push_back(std::move(members));
  }
  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (size_t c = 0; c < classes.size(); ++c)
    for (const auto& p : classes[c]) vm.class_of[p] = static_cast<int>(c);
  vm.classes = std::move(classes);
  return vm;
}

SdpProblem build_sdp(int n, int d) {
  const int D = diameter(n);
  if (n < kMinN) throw std::invalid_argument("n too small");
  if (d < 1 || d > D) throw std::invalid_argument("d out of range");

  const VariableMap vm = variable_map(n);
  SdpProblem prob;
  prob.n = n;
  prob.d = d;
  prob.objective.assign(vm.size(), 0.0);
  prob.var_names.reserve(vm.size());
  for (int c = 0; c < vm.size(); ++c)
    prob.var_names.push_back(profile_name(vm.representative(c)));

  // fixings: x^0_{0,0} = 1 and the distance-excluded classes = 0. Exclusion is
  // uniform across a class; assert that rather than assume it.
  for (int c = 0; c < vm.size(); ++c) {
    bool excl = distance_excluded(vm.classes[c].front(), n, d);
    for (const auto& p : vm.classes[c])
      if (distance_excluded(p, n, d) != excl)
        throw std::logic_error("inconsistent zero-fixing inside a class");
    if (excl) prob.fixings[c] = 0.0;
  }
  const int unit_class = vm.canonical_class({0, 0, 0});
  if (prob.fixings.count(unit_class)) throw std::logic_error("x^0_{0,0} zero-fixed");
  prob.fixings[unit_class] = 1.0;

  for (int i = 0; i <= D; ++i)
    prob.objective[vm.canonical_class({i, 0, 0})] +=
        static_cast<double>(valency(i, n));

  // M' and M'' blocks per endpoint r.
  const BlockSpec spec = block_spec(n);
  const BetaTable betas = build_beta_table(n);
  std::vector<AffineBlock> mprime, mdouble;
  for (const auto& blk : spec.blocks) {
    const int dim = blk.size();
    AffineBlock bp, bq;
    bp.dim = bq.dim = dim;
    bp.name = "Mprime r=" + std::to_string(blk.r);
    bq.name = "Mdouble r=" + std::to_string(blk.r);
    bp.constant = dmat::Zero(dim, dim);
    bq.constant = dmat::Zero(dim, dim);
    std::map<int, dmat> cp, cq;
    auto add = [&](std::map<int, dmat>& dst, int var, int a, int b, double v) {
      auto [it, fresh] = dst.try_emplace(var, dmat::Zero(dim, dim));
      it->second(a, b) += v;
    };
    for (int i = blk.lo; i <= blk.hi; ++i) {
      for (int j = blk.lo; j <= blk.hi; ++j) {
        const int a = i - blk.lo, b = j - blk.lo;
        for (int t : admissible_t(i, j, n)) {
          const double bv = to_double_exact(betas.at(blk.r, i, j, t));
          if (bv == 0.0) continue;
          const int var = vm.canonical_class({i, j, t});
          add(cp, var, a, b, bv);
          const int zeta = third_distance({i, j, t}, n);
          const int zvar = vm.canonical_class({zeta, 0, 0});
          add(cq, zvar, a, b, bv);
          add(cq, var, a, b, -bv);
        }
      }
    }
    for (auto& [var, m] : cp) bp.coeffs.emplace_back(var, std::move(m));
    for (auto& [var, m] : cq) bq.coeffs.emplace_back(var, std::move(m));
    mprime.push_back(std::move(bp));
    mdouble.push_back(std::move(bq));
  }
  for (auto& b : mprime) prob.blocks.push_back(std::move(b));
  for (auto& b : mdouble) prob.blocks.push_back(std::move(b));
  prob.num_matrix_blocks = static_cast<int>(prob.blocks.size());

  // Box constraints as 1x1 blocks: x >= 0 for every unfixed class, and
  // x^t_{i,j} <= x^0_{i,0} collected over each member profile.
  auto box = [&](const std::string& name, double cst,
                 std::vector<std::pair<int, double>> terms) {
    AffineBlock b;
    b.name = name;
    b.dim = 1;
    b.constant = dmat::Constant(1, 1, cst);
    std::sort(terms.begin(), terms.end());
    for (auto [var, v] : terms)
      b.coeffs.emplace_back(var, dmat::Constant(1, 1, v));
    return b;
  };
  std::map<std::vector<std::pair<int, double>>, AffineBlock> boxes;
  auto emit = [&](const std::string& name, double cst,
                  std::vector<std::pair<int, double>> terms) {
    std::sort(terms.begin(), terms.end());
    if (terms.empty()) {
      if (cst < 0) throw std::logic_error("statically infeasible box");
      return;
    }
    std::vector<std::pair<int, double>> key = terms;
    key.emplace_back(-1, cst);
    if (!boxes.count(key)) boxes.emplace(key, box(name, cst, terms));
  };
  for (int c = 0; c < vm.size(); ++c) {
    if (!prob.fixings.count(c))
      emit(prob.var_names[c] + " >= 0", 0.0, {{c, 1.0}});
  }
  for (int c = 0; c < vm.size(); ++c) {
    for (const auto& p : vm.classes[c]) {
      const int u = vm.canonical_class({p.i, 0, 0});
      if (u == c) continue;
      double cst = 0.0;
      std::vector<std::pair<int, double>> terms;
      auto fu = prob.fixings.find(u);
      auto fc = prob.fixings.find(c);
      if (fu != prob.fixings.end()) cst += fu->second;
      else terms.emplace_back(u, 1.0);
      if (fc != prob.fixings.end()) cst -= fc->second;
      else terms.emplace_back(c, -1.0);
      emit(prob.var_names[c] + " <= " + prob.var_names[u], cst, std::move(terms));
    }
  }
  for (auto& [key, b] : boxes) prob.blocks.push_back(std::move(b));
  return prob;
}

std::string problem_summary_json(const SdpProblem& prob) {
  nlohmann::json j;
  j["n"] = prob.n;
  j["d"] = prob.d;
  j["variables"] = prob.num_vars();
  j["fixings"] = prob.fixings.size();
  std::vector<int> sizes;
  for (int k = 0; k < prob.num_matrix_blocks; ++k) sizes.push_back(prob.blocks[k].dim);
  j["matrix_block_sizes"] = sizes;
  j["box_blocks"] = prob.blocks.size() - prob.num_matrix_blocks;
  return j.dump();
}

bool same_problem(const SdpProblem& a, const SdpProblem& b) {
  if (a.num_vars() != b.num_vars() || a.blocks.size() != b.blocks.size() ||
      a.num_matrix_blocks != b.num_matrix_blocks)
    return false;
  if (a.objective != b.objective) return false;
  if (a.fixings != b.fixings) return false;
  for (size_t k = 0; k < a.blocks.size(); ++k) {
    const auto& x = a.blocks[k];
    const auto& y = b.blocks[k];
    if (x.dim != y.dim || x.coeffs.size() != y.coeffs.size()) return false;
    if (x.constant != y.constant) return false;
    for (size_t i = 0; i < x.coeffs.size(); ++i) {
      if (x.coeffs[i].first != y.coeffs[i].first) return false;
      if (x.coeffs[i].second != y.coeffs[i].second) return false;
    }
  }
  return true;
}

}  // namespace foldcode
