#include "foldcode/blocks.hpp"

#include <sstream>
#include <stdexcept>

namespace foldcode {

namespace {

Int sign(int e) { return (e % 2 == 0) ? 1 : -1; }

// i = D, j < D. The y-count N(l) has one term per half of y realizing the
// statistic; the two coincide when j = 2t.
Int beta_even_edge(int r, int j, int t, int D) {
  auto N = [&](int l) {
    Int v = binom(D - l, t - l) * binom(D - r + l, j - r - t + l);
    if (j != 2 * t) v += binom(D - l, j - t - l) * binom(D - r + l, t - r + l);
    return v;
  };
  if (r == 0) return binom(2 * D, D) / 2 * N(0);
  Rat s = 0;
  for (int l = r / 2 + 1; l <= r; ++l) s += Rat(sign(r - l) * binom(r, l) * N(l));
  s += Rat(sign(r / 2) * binom(r, r / 2) * N(r / 2), 2);
  Rat b = Rat(2 * binom(2 * D - 2 * r, D - r)) * s;
  if (denominator(b) != 1) throw std::logic_error("beta_even_edge not integral");
  return numerator(b);
}

// i = j = D, r < D. For r = 0 the y-count picks up a second antipodal fold
// (both x and y live on level D), hence the extra halving.
Int beta_even_corner(int r, int t, int D) {
  auto A = [&](int l, int u) {
    return binom(D - l, u - l) * binom(D - r + l, D - u - r + l);
  };
  auto N = [&](int l) {
    Int v = A(l, t);
    if (2 * t != D) v += A(l, D - t);
    return v;
  };
  if (r == 0) {
    Rat b = Rat(binom(2 * D, D), 2) * Rat(N(0), 2);
    if (denominator(b) != 1) throw std::logic_error("beta_even_corner not integral");
    return numerator(b);
  }
  Rat s = 0;
  for (int l = r / 2 + 1; l <= r; ++l) s += Rat(sign(r - l) * binom(r, l) * N(l));
  s += Rat(sign(r / 2) * binom(r, r / 2) * N(r / 2), 2);
  Rat b = Rat(2 * binom(2 * D - 2 * r, D - r)) * s;
  if (denominator(b) != 1) throw std::logic_error("beta_even_corner not integral");
  return numerator(b);
}

void check_beta_args(int r, int i, int j, int t, int n) {
  const int D = diameter(n);
  if (!profile_admissible({i, j, t}, n))
    throw std::invalid_argument("inadmissible (i, j, t)");
  if (r < 0 || r > std::min(i, j)) throw std::invalid_argument("r out of range");
  if (n % 2 == 0) {
    if ((i == D || j == D) && r % 2 != 0)
      throw std::invalid_argument("boundary entries require even r");
    if (r % 2 != 0 && (i == D || j == D))
      throw std::invalid_argument("odd-r blocks stop at D-1");
  }
}

}  // namespace

Int beta_even(int r, int i, int j, int t, int D) {
  check_beta_args(r, i, j, t, 2 * D);
  if (i < D && j < D) {
    Int s = 0;
    for (int l = 0; l <= r; ++l)
      s += sign(r - l) * binom(r, l) * binom(i - l, t - l) *
           binom(2 * D - i - r + l, j - r - t + l);
    return binom(2 * D - 2 * r, i - r) * s;
  }
  if (i == D && j < D) return beta_even_edge(r, j, t, D);
  if (i < D && j == D) return beta_even_edge(r, i, t, D);
  if (r == D) {
    if (D % 2 != 0) throw std::invalid_argument("no r = D block for odd D");
    if (t == D / 2) return sign(D / 2) * binom(D, D / 2) / 2;
    return sign(D - t) * binom(D, t);
  }
  return beta_even_corner(r, t, D);
}

Int beta_odd(int r, int i, int j, int t, int D) {
  check_beta_args(r, i, j, t, 2 * D + 1);
  Int s = 0;
  for (int l = 0; l <= r; ++l)
    s += sign(r - l) * binom(r, l) * binom(i - l, t - l) *
         binom(2 * D + 1 - i - r + l, j - t - r + l);
  return binom(2 * D + 1 - 2 * r, i - r) * s;
}

Int beta(int r, int i, int j, int t, int n) {
  return (n % 2 == 0) ? beta_even(r, i, j, t, n / 2) : beta_odd(r, i, j, t, n / 2);
}

BlockSpec block_spec(int n) {
  if (n < kMinN) throw std::invalid_argument("n too small");
  const int D = diameter(n);
  BlockSpec spec{n, {}};
  if (n % 2 == 0) {
    for (int r = 0; r < D; ++r) {
      Int m = binom(2 * D, r) - binom(2 * D, r - 1);
      int hi = (r % 2 == 0) ? D : D - 1;
      spec.blocks.push_back({r, r, hi, m});
    }
    if (D % 2 == 0) {
      Rat m = Rat(binom(2 * D, D), 2) - Rat((D - 1) * binom(2 * D, D - 1), 2 * D);
      if (denominator(m) != 1) throw std::logic_error("m_D not integral");
      spec.blocks.push_back({D, D, D, numerator(m)});
    }
  } else {
    for (int r = 0; r <= D; ++r) {
      Int m = binom(2 * D + 1, r) - binom(2 * D + 1, r - 1);
      spec.blocks.push_back({r, r, D, m});
    }
  }
  return spec;
}

std::vector<int> admissible_t(int i, int j, int n) {
  std::vector<int> out;
  for (int t = 0; t <= std::min(i, j); ++t)
    if (profile_admissible({i, j, t}, n)) out.push_back(t);
  return out;
}

const Int& BetaTable::at(int r, int i, int j, int t) const {
  auto it = values.find({r, i, j, t});
  if (it == values.end()) throw std::invalid_argument("no beta entry for tuple");
  return it->second.first;
}

BetaTable build_beta_table(int n) {
  BetaTable table;
  table.n = n;
  for (const auto& blk : block_spec(n).blocks)
    for (int i = blk.lo; i <= blk.hi; ++i)
      for (int j = blk.lo; j <= blk.hi; ++j)
        for (int t : admissible_t(i, j, n))
          table.values[{blk.r, i, j, t}] = {beta(blk.r, i, j, t, n),
                                            BetaProvenance::closed_form};
  return table;
}

std::string beta_table_csv(const BetaTable& table) {
  std::ostringstream os;
  os << "n,r,i,j,t,beta,provenance\n";
  for (const auto& [key, val] : table.values) {
    os << table.n << ',' << key[0] << ',' << key[1] << ',' << key[2] << ','
       << key[3] << ',' << val.first << ','
       << (val.second == BetaProvenance::closed_form ? "closed-form" : "oracle-derived")
       << '\n';
  }
  return os.str();
}

}  // namespace foldcode
