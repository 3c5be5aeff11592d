#include "foldcode/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace foldcode {

namespace {

using dmat = Eigen::MatrixXd;
using dvec = Eigen::VectorXd;

constexpr double kBigStep = 1e16;

double maxabs(const dmat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// materialize before assigning: x = 0.5 * (x + x^T) aliases
dmat symmetrized(const dmat& m) { return 0.5 * (m + m.transpose()).eval(); }

dmat select_rows_cols(const dmat& m, const std::vector<int>& keep) {
  dmat out(keep.size(), keep.size());
  for (size_t a = 0; a < keep.size(); ++a)
    for (size_t b = 0; b < keep.size(); ++b) out(a, b) = m(keep[a], keep[b]);
  return out;
}

double inner(const dmat& a, const dmat& b) { return a.cwiseProduct(b).sum(); }

// largest step alpha with p + alpha*dp staying PSD
double boundary_step(const dmat& p, const dmat& dp) {
  Eigen::LLT<dmat> llt(p);
  if (llt.info() != Eigen::Success) return 0.0;
  dmat li = llt.matrixL().solve(dmat::Identity(p.rows(), p.cols()));
  dmat m = li * dp * li.transpose();
  m = symmetrized(m);
  Eigen::MatrixXd q;
  Eigen::VectorXd lam;
  jacobi_eigen(m, q, lam);
  const double lmin = lam.minCoeff();
  if (lmin >= -1e-14) return kBigStep;
  return -1.0 / lmin;
}

struct Scaling {
  dmat winv;       // W^{-1}
  dmat whalf;      // W^{1/2}
  dmat wmhalf;     // W^{-1/2}
  dmat sinv;
};

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iter: return "max-iter";
    case SolveStatus::infeasible_detected: return "infeasible-detected";
    case SolveStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

std::string BoundResult::iteration_csv() const {
  std::ostringstream os;
  os << "iter,mu,primal_res,dual_res,gap\n";
  for (const auto& l : log)
    os << l.iter << ',' << l.mu << ',' << l.primal_res << ',' << l.dual_res << ','
       << l.gap << '\n';
  return os.str();
}

void jacobi_eigen(const dmat& m, dmat& q, dvec& lam) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw std::invalid_argument("matrix not square");
  const double scale = std::max(1.0, maxabs(m));
  if (n > 1 && maxabs(m - m.transpose()) > 1e-12 * scale)
    throw std::invalid_argument("matrix not symmetric");
  dmat a = 0.5 * (m + m.transpose());
  q = dmat::Identity(n, n);
  const double fro = std::max(1.0, a.norm());
  for (int sweep = 0; sweep < 128; ++sweep) {
    double off2 = 0.0;
    for (int p = 0; p < n - 1; ++p)
      for (int r = p + 1; r < n; ++r) off2 += a(p, r) * a(p, r);
    if (std::sqrt(2.0 * off2) <= 1e-12 * fro) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int r = p + 1; r < n; ++r) {
        const double apr = a(p, r);
        if (std::abs(apr) < 1e-300) continue;
        const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
        const double t =
            (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akr = a(k, r);
          a(k, p) = c * akp - s * akr;
          a(k, r) = s * akp + c * akr;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), ark = a(r, k);
          a(p, k) = c * apk - s * ark;
          a(r, k) = s * apk + c * ark;
        }
        for (int k = 0; k < n; ++k) {
          const double qkp = q(k, p), qkr = q(k, r);
          q(k, p) = c * qkp - s * qkr;
          q(k, r) = s * qkp + c * qkr;
        }
      }
    }
  }
  lam = a.diagonal();
}

double min_eigenvalue(const dmat& m) {
  dmat q;
  dvec lam;
  jacobi_eigen(m, q, lam);
  return lam.minCoeff();
}

ReducedProblem reduce(const SdpProblem& prob) {
  ReducedProblem rp;
  const int nv = prob.num_vars();
  std::vector<int> newid(nv, -1);
  for (int v = 0; v < nv; ++v) {
    if (!prob.fixings.count(v)) {
      newid[v] = static_cast<int>(rp.var_ids.size());
      rp.var_ids.push_back(v);
      rp.w.push_back(prob.objective[v]);
    }
  }
  for (const auto& [v, val] : prob.fixings) rp.obj_constant += prob.objective[v] * val;
  for (double wi : rp.w) rp.obj_scale = std::max(rp.obj_scale, std::abs(wi));
  for (double& wi : rp.w) wi /= rp.obj_scale;

  for (const auto& b : prob.blocks) {
    dmat c = b.constant;
    std::vector<std::pair<int, dmat>> a;
    for (const auto& [v, mtx] : b.coeffs) {
      if (maxabs(mtx - mtx.transpose()) > 1e-12 * std::max(1.0, maxabs(mtx)))
        throw std::invalid_argument("non-symmetric coefficient in block " + b.name);
      auto f = prob.fixings.find(v);
      if (f != prob.fixings.end()) {
        if (f->second != 0.0) c += f->second * mtx;
      } else if (maxabs(mtx) > 0.0) {
        a.emplace_back(newid[v], mtx);
      }
    }
    std::vector<int> keep;
    for (int i = 0; i < b.dim; ++i) {
      bool nz = c.row(i).cwiseAbs().maxCoeff() > 0.0;
      for (const auto& [v, mtx] : a)
        if (!nz && mtx.row(i).cwiseAbs().maxCoeff() > 0.0) nz = true;
      if (nz) keep.push_back(i);
    }
    if (keep.empty()) continue;
    if (a.empty()) {
      // constant block: record static infeasibility via a sentinel 1x1 block
      dmat cc = select_rows_cols(c, keep);
      if (min_eigenvalue(cc) < -1e-9 * std::max(1.0, maxabs(cc)))
        throw std::domain_error("statically infeasible constant block " + b.name);
      continue;
    }
    ReducedProblem::RBlock rb;
    rb.dim = static_cast<int>(keep.size());
    rb.c = select_rows_cols(c, keep);
    double scale = maxabs(rb.c);
    for (const auto& [v, mtx] : a) {
      rb.a.emplace_back(v, select_rows_cols(mtx, keep));
      scale = std::max(scale, maxabs(rb.a.back().second));
    }
    if (scale <= 0.0) scale = 1.0;
    rb.scale = scale;
    rb.c /= scale;
    for (auto& [v, mtx] : rb.a) mtx /= scale;
    rp.blocks.push_back(std::move(rb));
  }
  return rp;
}

BoundResult solve(const SdpProblem& prob, const SolverConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  BoundResult res;
  ReducedProblem rp;
  try {
    rp = reduce(prob);
  } catch (const std::domain_error&) {
    res.status = SolveStatus::infeasible_detected;
    return res;
  }
  const int m = static_cast<int>(rp.w.size());
  const int K = static_cast<int>(rp.blocks.size());
  dvec w = Eigen::Map<const dvec>(rp.w.data(), m);
  const double wmax = (m > 0) ? w.cwiseAbs().maxCoeff() : 0.0;

  auto finish = [&](SolveStatus st) -> BoundResult& {
    res.status = st;
    res.objective = (m > 0 ? w.dot(res.x) : 0.0) * rp.obj_scale + rp.obj_constant;
    res.bound = static_cast<long long>(std::floor(res.objective + cfg.tol_round));
    res.min_block_eigenvalues.clear();
    for (int k = 0; k < K; ++k) {
      dmat g = rp.blocks[k].c;
      for (const auto& [v, a] : rp.blocks[k].a) g += res.x[v] * a;
      res.min_block_eigenvalues.push_back(min_eigenvalue(g));
    }
    res.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    return res;
  };

  res.x = dvec::Zero(m);
  if (m == 0 || K == 0) {
    // nothing to optimize; unbounded when an objective direction is free
    if (m > 0 && wmax > 0.0) return finish(SolveStatus::infeasible_detected);
    return finish(SolveStatus::optimal);
  }

  int N = 0;
  for (const auto& b : rp.blocks) N += b.dim;

  std::vector<dmat> S(K), Y(K);
  for (int k = 0; k < K; ++k) {
    S[k] = 10.0 * dmat::Identity(rp.blocks[k].dim, rp.blocks[k].dim);
    Y[k] = S[k];
  }
  dvec x = dvec::Zero(m);

  std::vector<dmat> Rp(K);
  std::vector<Scaling> sc(K);
  std::vector<std::vector<dmat>> T(K);
  SolveStatus status = SolveStatus::max_iter;
  int iters = 0;

  // Nonnegativity boxes give each variable a redundant scalar dual; use them
  // to cancel the dual-feasibility drift that the scaled products accumulate.
  std::vector<int> slot(m, -1);
  for (int k = 0; k < K; ++k) {
    const auto& b = rp.blocks[k];
    if (b.dim == 1 && b.a.size() == 1 && b.a[0].second(0, 0) > 0 && maxabs(b.c) == 0.0)
      slot[b.a[0].first] = k;
  }
  auto restore_dual = [&]() {
    dvec r = w;
    for (int k = 0; k < K; ++k)
      for (const auto& [v, a] : rp.blocks[k].a) r[v] += inner(a, Y[k]);
    for (int v = 0; v < m; ++v) {
      if (slot[v] < 0) continue;
      const double c = rp.blocks[slot[v]].a[0].second(0, 0);
      const double delta = r[v] / c;
      if (Y[slot[v]](0, 0) - delta >= 0.0) Y[slot[v]](0, 0) -= delta;
    }
  };

  for (int it = 0; it < cfg.max_iter; ++it) {
    iters = it;
    // residuals
    double pres_abs = 0.0;
    for (int k = 0; k < K; ++k) {
      dmat g = rp.blocks[k].c;
      for (const auto& [v, a] : rp.blocks[k].a) g += x[v] * a;
      Rp[k] = g - S[k];
      pres_abs = std::max(pres_abs, maxabs(Rp[k]));
    }
    dvec dres = w;
    for (int k = 0; k < K; ++k)
      for (const auto& [v, a] : rp.blocks[k].a) dres[v] += inner(a, Y[k]);
    double gapval = 0.0, dobj = 0.0;
    for (int k = 0; k < K; ++k) {
      gapval += inner(S[k], Y[k]);
      dobj += inner(rp.blocks[k].c, Y[k]);
    }
    dobj = rp.obj_constant + dobj * rp.obj_scale;
    const double mu = gapval / N;
    const double pobj = w.dot(x) * rp.obj_scale + rp.obj_constant;
    const double pres = pres_abs / 2.0;  // blocks normalized to unit max entry
    const double dres_rel = dres.cwiseAbs().maxCoeff() / (1.0 + wmax);
    const double rel_gap =
        gapval * rp.obj_scale / (1.0 + std::abs(pobj) + std::abs(dobj));
    res.log.push_back({it, mu, pres, dres_rel, rel_gap});
    if (std::getenv("FOLDCODE_TRACE"))
      fprintf(stderr, "it %d mu %.3e pres %.3e dres %.3e gap %.3e pobj %.6f dobj %.6f\n",
              it, mu, pres, dres_rel, rel_gap, pobj, dobj);
    res.primal_res = pres;
    res.dual_res = dres_rel;
    res.rel_gap = rel_gap;
    res.dual_objective = dobj;
    res.x = x;
    res.slack = S;
    res.dual = Y;

    if (pres <= cfg.tol_feas && dres_rel <= cfg.tol_feas && rel_gap <= cfg.tol_gap) {
      status = SolveStatus::optimal;
      break;
    }
    if (dobj < -1e10 * (1.0 + wmax) || pobj > 1e10 * (1.0 + wmax) ||
        x.cwiseAbs().maxCoeff() > 1e12) {
      status = SolveStatus::infeasible_detected;
      break;
    }

    // NT scaling point per block
    bool scaling_ok = true;
    for (int k = 0; k < K; ++k) {
      const int d = rp.blocks[k].dim;
      Eigen::LLT<dmat> slt(S[k]);
      if (slt.info() != Eigen::Success) {
        scaling_ok = false;
        break;
      }
      dmat ls = slt.matrixL();
      dmat mm = ls.transpose() * Y[k] * ls;
      mm = symmetrized(mm);
      dmat qm;
      dvec lm;
      jacobi_eigen(mm, qm, lm);
      if (lm.minCoeff() <= 0.0) {
        scaling_ok = false;
        break;
      }
      dvec lmh = lm.cwiseSqrt().cwiseInverse();            // lambda^{-1/2}
      dmat msqrtinv = qm * lmh.asDiagonal() * qm.transpose();
      dmat msqrt = qm * lm.cwiseSqrt().asDiagonal() * qm.transpose();
      dmat lsi = ls.triangularView<Eigen::Lower>().solve(dmat::Identity(d, d));
      dmat wmat = ls * msqrtinv * ls.transpose();
      sc[k].winv = lsi.transpose() * msqrt * lsi;
      sc[k].winv = symmetrized(sc[k].winv);
      sc[k].sinv = slt.solve(dmat::Identity(d, d));
      if (cfg.use_corrector) {
        dmat qw;
        dvec lw;
        jacobi_eigen(symmetrized(wmat), qw, lw);
        if (lw.minCoeff() <= 0.0) {
          scaling_ok = false;
          break;
        }
        sc[k].whalf = qw * lw.cwiseSqrt().asDiagonal() * qw.transpose();
        sc[k].wmhalf = qw * lw.cwiseSqrt().cwiseInverse().asDiagonal() * qw.transpose();
      }
    }
    if (!scaling_ok) {
      status = SolveStatus::numerical_failure;
      break;
    }

    // Schur complement B_{uv} = sum_k <A_u, W^{-1} A_v W^{-1}>
    dmat B = dmat::Zero(m, m);
    for (int k = 0; k < K; ++k) {
      const auto& as = rp.blocks[k].a;
      T[k].assign(as.size(), dmat());
      for (size_t j = 0; j < as.size(); ++j) {
        T[k][j] = sc[k].winv * as[j].second * sc[k].winv;
        T[k][j] = symmetrized(T[k][j]);
      }
      for (size_t i = 0; i < as.size(); ++i)
        for (size_t j = i; j < as.size(); ++j) {
          const double val = inner(as[i].second, T[k][j]);
          B(as[i].first, as[j].first) += val;
          if (i != j) B(as[j].first, as[i].first) += val;
        }
    }
    double reg = 1e-12 * std::max(1.0, B.diagonal().maxCoeff());
    Eigen::LLT<dmat> blt;
    for (;;) {
      blt.compute(B + reg * dmat::Identity(m, m));
      if (blt.info() == Eigen::Success) break;
      reg *= 100.0;
      if (reg > 1e-4 * std::max(1.0, B.diagonal().maxCoeff())) break;
    }
    if (blt.info() != Eigen::Success) {
      status = SolveStatus::numerical_failure;
      break;
    }

    dvec rhs_base = w;
    dvec sinv_tr = dvec::Zero(m);
    for (int k = 0; k < K; ++k) {
      dmat wrw = sc[k].winv * Rp[k] * sc[k].winv;
      for (const auto& [v, a] : rp.blocks[k].a) {
        rhs_base[v] -= inner(a, wrw);
        sinv_tr[v] += inner(a, sc[k].sinv);
      }
    }

    auto directions = [&](const dvec& rhs, const std::vector<dmat>* corr,
                          double sigmamu, std::vector<dmat>& dS, std::vector<dmat>& dY,
                          dvec& dx) {
      dx = blt.solve(rhs);
      // one round of iterative refinement with extended-precision residual
      dvec resid(m);
      for (int i = 0; i < m; ++i) {
        long double acc = rhs[i];
        for (int j = 0; j < m; ++j) acc -= static_cast<long double>(B(i, j)) * dx[j];
        resid[i] = static_cast<double>(acc);
      }
      dx += blt.solve(resid);
      dS.resize(K);
      dY.resize(K);
      for (int k = 0; k < K; ++k) {
        dS[k] = Rp[k];
        for (const auto& [v, a] : rp.blocks[k].a) dS[k] += dx[v] * a;
        dY[k] = sigmamu * sc[k].sinv - Y[k] - sc[k].winv * dS[k] * sc[k].winv;
        if (corr) dY[k] -= (*corr)[k];
        dY[k] = symmetrized(dY[k]);
      }
    };

    // predictor
    std::vector<dmat> dS_aff, dY_aff;
    dvec dx_aff;
    directions(rhs_base, nullptr, 0.0, dS_aff, dY_aff, dx_aff);
    double ap_aff = kBigStep, ad_aff = kBigStep;
    for (int k = 0; k < K; ++k) {
      ap_aff = std::min(ap_aff, boundary_step(S[k], dS_aff[k]));
      ad_aff = std::min(ad_aff, boundary_step(Y[k], dY_aff[k]));
    }
    ap_aff = std::min(1.0, ap_aff);
    ad_aff = std::min(1.0, ad_aff);
    double mu_aff = 0.0;
    for (int k = 0; k < K; ++k)
      mu_aff += inner(S[k] + ap_aff * dS_aff[k], Y[k] + ad_aff * dY_aff[k]);
    mu_aff = std::max(0.0, mu_aff / N);
    double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 1e-10, 1.0);

    // corrector
    std::vector<dmat> corr(K);
    bool have_corr = false;
    if (cfg.use_corrector) {
      have_corr = true;
      for (int k = 0; k < K; ++k) {
        const int d = rp.blocks[k].dim;
        dmat dsh = sc[k].wmhalf * dS_aff[k] * sc[k].wmhalf;
        dmat dyh = sc[k].whalf * dY_aff[k] * sc[k].whalf;
        dmat t2 = 0.5 * (dsh * dyh + dyh * dsh);
        dmat v = sc[k].wmhalf * S[k] * sc[k].wmhalf;
        v = symmetrized(v);
        dmat qv;
        dvec lv;
        jacobi_eigen(v, qv, lv);
        if (lv.minCoeff() <= 1e-300) {
          have_corr = false;
          break;
        }
        dmat tq = qv.transpose() * t2 * qv;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) tq(a, b) /= 0.5 * (lv[a] + lv[b]);
        corr[k] = sc[k].wmhalf * (qv * tq * qv.transpose()) * sc[k].wmhalf;
        corr[k] = symmetrized(corr[k]);
      }
    }

    dvec rhs = rhs_base + sigma * mu * sinv_tr;
    if (have_corr)
      for (int k = 0; k < K; ++k)
        for (const auto& [v, a] : rp.blocks[k].a) rhs[v] -= inner(a, corr[k]);

    std::vector<dmat> dS, dY;
    dvec dx;
    directions(rhs, have_corr ? &corr : nullptr, sigma * mu, dS, dY, dx);
    double ap = kBigStep, ad = kBigStep;
    for (int k = 0; k < K; ++k) {
      ap = std::min(ap, boundary_step(S[k], dS[k]));
      ad = std::min(ad, boundary_step(Y[k], dY[k]));
    }
    ap = std::min(1.0, cfg.step_fraction * ap);
    ad = std::min(1.0, cfg.step_fraction * ad);

    // drop the second-order term when it ruins the step
    if (have_corr && (ap < 0.05 && ap_aff > 0.5)) {
      directions(rhs_base + sigma * mu * sinv_tr, nullptr, sigma * mu, dS, dY, dx);
      ap = ad = kBigStep;
      for (int k = 0; k < K; ++k) {
        ap = std::min(ap, boundary_step(S[k], dS[k]));
        ad = std::min(ad, boundary_step(Y[k], dY[k]));
      }
      ap = std::min(1.0, cfg.step_fraction * ap);
      ad = std::min(1.0, cfg.step_fraction * ad);
    }

    if (ap < 1e-10 && ad < 1e-10) {
      status = SolveStatus::numerical_failure;
      break;
    }

    x += ap * dx;
    for (int k = 0; k < K; ++k) {
      S[k] += ap * dS[k];
      Y[k] += ad * dY[k];
      S[k] = symmetrized(S[k]);
      Y[k] = symmetrized(Y[k]);
    }
    restore_dual();
  }

  res.x = x;
  res.slack = S;
  res.dual = Y;
  res.iterations = iters;
  return finish(status);
}

CertificateReport check_certificate(const SdpProblem& prob, const BoundResult& res,
                                    const SolverConfig& cfg) {
  CertificateReport rep;
  ReducedProblem rp = reduce(prob);
  const int m = static_cast<int>(rp.w.size());
  const int K = static_cast<int>(rp.blocks.size());
  auto flag = [&](const std::string& msg) {
    rep.ok = false;
    rep.violations.push_back(msg);
  };
  if (res.x.size() != m || static_cast<int>(res.slack.size()) != K ||
      static_cast<int>(res.dual.size()) != K) {
    flag("certificate shape does not match the problem");
    return rep;
  }
  dvec w = Eigen::Map<const dvec>(rp.w.data(), m);
  double pres_abs = 0.0, gap = 0.0, dobj = 0.0;
  rep.min_eig_slack = rep.min_eig_dual = kBigStep;
  dvec dres = w;
  for (int k = 0; k < K; ++k) {
    dmat g = rp.blocks[k].c;
    for (const auto& [v, a] : rp.blocks[k].a) {
      g += res.x[v] * a;
      dres[v] += inner(a, res.dual[k]);
    }
    pres_abs = std::max(pres_abs, maxabs(g - res.slack[k]));
    gap += inner(res.slack[k], res.dual[k]);
    dobj += inner(rp.blocks[k].c, res.dual[k]);
    rep.min_eig_slack = std::min(rep.min_eig_slack, min_eigenvalue(res.slack[k]));
    rep.min_eig_dual = std::min(rep.min_eig_dual, min_eigenvalue(res.dual[k]));
  }
  const double wmax = (m > 0) ? w.cwiseAbs().maxCoeff() : 0.0;
  const double pobj = (m > 0 ? w.dot(res.x) : 0.0) * rp.obj_scale + rp.obj_constant;
  const double dobj_full = dobj * rp.obj_scale + rp.obj_constant;
  rep.primal_res = pres_abs / 2.0;
  rep.dual_res = (m > 0 ? dres.cwiseAbs().maxCoeff() : 0.0) / (1.0 + wmax);
  rep.rel_gap = gap * rp.obj_scale / (1.0 + std::abs(pobj) + std::abs(dobj_full));

  if (res.status == SolveStatus::optimal) {
    if (rep.primal_res > 10.0 * cfg.tol_feas) flag("primal residual beyond 10x tolerance");
    if (rep.dual_res > 10.0 * cfg.tol_feas) flag("dual residual beyond 10x tolerance");
    if (rep.rel_gap > 10.0 * cfg.tol_gap) flag("duality gap beyond 10x tolerance");
    if (rep.min_eig_slack < -10.0 * cfg.tol_feas) flag("slack block not PSD");
    if (rep.min_eig_dual < -10.0 * cfg.tol_feas) flag("dual block not PSD");
    if (std::abs(pobj - res.objective) > 1e-7 * (1.0 + std::abs(res.objective)))
      flag("objective does not match the returned point");
  }
  return rep;
}

}  // namespace foldcode
