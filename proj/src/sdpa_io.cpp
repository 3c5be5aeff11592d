#include "foldcode/sdpa_io.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace foldcode {

namespace {

using dmat = Eigen::MatrixXd;

std::string num(double v) {
  if (v == 0.0) return "0";
  if (v == std::floor(v) && std::abs(v) < 9.0e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string export_sdpa(const SdpProblem& prob, const std::string& tool_version) {
  std::ostringstream os;
  os << "* foldcode n=" << prob.n << " d=" << prob.d << " version=" << tool_version << "\n";
  os << "* maximize problem: SDPA objective below is negated\n";

  const int nmat = prob.num_matrix_blocks;
  int diag_slots = 2 * static_cast<int>(prob.fixings.size());
  for (size_t k = nmat; k < prob.blocks.size(); ++k) {
    if (prob.blocks[k].dim != 1) throw std::invalid_argument("trailing blocks must be 1x1");
    ++diag_slots;
  }
  const int nblocks = nmat + (diag_slots > 0 ? 1 : 0);

  os << prob.num_vars() << "\n" << nblocks << "\n";
  for (int k = 0; k < nmat; ++k) os << prob.blocks[k].dim << (k + 1 < nblocks ? " " : "");
  if (diag_slots > 0) os << -diag_slots;
  os << "\n";
  for (int v = 0; v < prob.num_vars(); ++v)
    os << num(-prob.objective[v]) << (v + 1 < prob.num_vars() ? " " : "");
  os << "\n";

  auto entry = [&os](int mat, int blk, int i, int j, double v) {
    if (v == 0.0) return;
    os << mat << " " << blk << " " << i << " " << j << " " << num(v) << "\n";
  };

  for (int k = 0; k < nmat; ++k) {
    const AffineBlock& b = prob.blocks[k];
    for (int i = 0; i < b.dim; ++i)
      for (int j = i; j < b.dim; ++j) entry(0, k + 1, i + 1, j + 1, -b.constant(i, j));
    for (const auto& [var, m] : b.coeffs)
      for (int i = 0; i < b.dim; ++i)
        for (int j = i; j < b.dim; ++j) entry(var + 1, k + 1, i + 1, j + 1, m(i, j));
  }
  if (diag_slots > 0) {
    const int blk = nmat + 1;
    int slot = 1;
    for (const auto& [var, val] : prob.fixings) {
      entry(0, blk, slot, slot, val);
      entry(var + 1, blk, slot, slot, 1.0);
      ++slot;
      entry(0, blk, slot, slot, -val);
      entry(var + 1, blk, slot, slot, -1.0);
      ++slot;
    }
    for (size_t k = nmat; k < prob.blocks.size(); ++k) {
      const AffineBlock& b = prob.blocks[k];
      entry(0, blk, slot, slot, -b.constant(0, 0));
      for (const auto& [var, m] : b.coeffs) entry(var + 1, blk, slot, slot, m(0, 0));
      ++slot;
    }
  }
  return os.str();
}

SdpProblem import_sdpa(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  SdpProblem prob;
  // comments: recover n and d when present
  std::vector<std::string> data_lines;
  while (std::getline(in, line)) {
    if (!line.empty() && (line[0] == '*' || line[0] == '"')) {
      std::istringstream cs(line);
      std::string tok;
      while (cs >> tok) {
        if (tok.rfind("n=", 0) == 0) prob.n = std::stoi(tok.substr(2));
        if (tok.rfind("d=", 0) == 0) prob.d = std::stoi(tok.substr(2));
      }
      continue;
    }
    if (line.find_first_not_of(" \t\r") != std::string::npos) data_lines.push_back(line);
  }
  if (data_lines.size() < 4) throw std::invalid_argument("truncated SDPA file");

  const int m = std::stoi(data_lines[0]);
  const int nblocks = std::stoi(data_lines[1]);
  std::vector<int> sizes;
  {
    std::istringstream bs(data_lines[2]);
    int s;
    while (bs >> s) sizes.push_back(s);
  }
  if (static_cast<int>(sizes.size()) != nblocks)
    throw std::invalid_argument("block structure mismatch");
  prob.objective.assign(m, 0.0);
  {
    std::istringstream cs(data_lines[3]);
    for (int v = 0; v < m; ++v) {
      double c;
      if (!(cs >> c)) throw std::invalid_argument("objective row too short");
      prob.objective[v] = -c;
    }
  }
  for (int v = 0; v < m; ++v) prob.var_names.push_back("x_" + std::to_string(v));

  int diag_block = -1;
  for (int k = 0; k < nblocks; ++k) {
    if (sizes[k] < 0) {
      if (k != nblocks - 1) throw std::invalid_argument("diagonal block must be last");
      diag_block = k;
    } else {
      AffineBlock b;
      b.dim = sizes[k];
      b.constant = dmat::Zero(b.dim, b.dim);
      b.name = "block " + std::to_string(k + 1);
      prob.blocks.push_back(std::move(b));
    }
  }
  prob.num_matrix_blocks = static_cast<int>(prob.blocks.size());

  const int nslots = diag_block >= 0 ? -sizes[diag_block] : 0;
  std::vector<double> diag_const(nslots, 0.0);
  std::vector<std::map<int, double>> diag_coeff(nslots);

  std::map<std::pair<int, int>, dmat> coeff_mats;  // (block, var) -> matrix
  for (size_t ln = 4; ln < data_lines.size(); ++ln) {
    std::istringstream es(data_lines[ln]);
    int mat, blk, i, j;
    double v;
    if (!(es >> mat >> blk >> i >> j >> v)) throw std::invalid_argument("bad entry line");
    if (blk == prob.num_matrix_blocks + 1 && diag_block >= 0) {
      if (i != j) throw std::invalid_argument("off-diagonal entry in diagonal block");
      if (mat == 0) diag_const[i - 1] -= v;  // F0 sign
      else diag_coeff[i - 1][mat - 1] += v;
    } else {
      AffineBlock& b = prob.blocks[blk - 1];
      if (mat == 0) {
        b.constant(i - 1, j - 1) = -v;
        if (i != j) b.constant(j - 1, i - 1) = -v;
      } else {
        auto [it, fresh] = coeff_mats.try_emplace({blk - 1, mat - 1}, dmat::Zero(b.dim, b.dim));
        (void)fresh;
        it->second(i - 1, j - 1) = v;
        if (i != j) it->second(j - 1, i - 1) = v;
      }
    }
  }
  for (auto& [key, mtx] : coeff_mats)
    prob.blocks[key.first].coeffs.emplace_back(key.second, std::move(mtx));
  for (auto& b : prob.blocks)
    std::sort(b.coeffs.begin(), b.coeffs.end(),
              [](const auto& a, const auto& c) { return a.first < c.first; });

  // leading negated pairs in the diagonal block are fixings
  int slot = 0;
  while (slot + 1 < nslots) {
    const auto& c0 = diag_coeff[slot];
    const auto& c1 = diag_coeff[slot + 1];
    if (c0.size() != 1 || c1.size() != 1) break;
    const auto [v0, a0] = *c0.begin();
    const auto [v1, a1] = *c1.begin();
    if (v0 != v1 || a0 != 1.0 || a1 != -1.0) break;
    if (diag_const[slot] != -diag_const[slot + 1]) break;
    prob.fixings[v0] = -diag_const[slot];  // x_v + const >= 0 paired both ways
    slot += 2;
  }
  for (; slot < nslots; ++slot) {
    AffineBlock b;
    b.dim = 1;
    b.name = "box " + std::to_string(slot + 1);
    b.constant = dmat::Constant(1, 1, diag_const[slot]);
    for (const auto& [var, v] : diag_coeff[slot])
      b.coeffs.emplace_back(var, dmat::Constant(1, 1, v));
    prob.blocks.push_back(std::move(b));
  }
  return prob;
}

}  // namespace foldcode
