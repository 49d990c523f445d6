#include "ogl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace ogl {

namespace {

double penalty_value(const GroupSet& groups, const Vector& beta) {
  double s = 0.0;
  for (const Group& g : groups.groups()) s += g.weight * group_norm(beta, g);
  return s;
}

// Power iteration for ||X||_2^2 with a deterministic start vector.
// An under-estimate only costs extra backtracking halvings.
double spectral_sq_estimate(const Matrix& x) {
  Vector v = Vector::Ones(x.cols());
  v /= v.norm();
  double est = 0.0;
  for (int it = 0; it < 30; ++it) {
    Vector w = x.transpose() * (x * v);
    double n = w.norm();
    if (n <= 0.0) return 0.0;
    est = n;
    v = w / n;
  }
  return est;
}

}  // namespace

Vector prox_overlap(const Vector& v, double tau, const GroupSet& groups,
                    const SolverConfig& cfg, ProxWorkspace* ws,
                    ProxInfo* info) {
  if (!(tau > 0.0)) {
    throw InputError("prox step must be positive");
  }
  if (groups.max_index() >= v.size()) {
    throw InputError("group index out of range for prox input");
  }
  const auto& gs = groups.groups();
  ProxWorkspace local;
  ProxWorkspace& state = ws ? *ws : local;

  bool reuse = state.initialized && state.xi.size() == gs.size();
  if (reuse) {
    for (size_t m = 0; m < gs.size(); ++m) {
      if (state.xi[m].size() != gs[m].size()) {
        reuse = false;
        break;
      }
    }
  }
  if (!reuse) {
    state.xi.assign(gs.size(), Vector());
    for (size_t m = 0; m < gs.size(); ++m) {
      state.xi[m] = Vector::Zero(gs[m].size());
    }
  }
  state.initialized = true;

  Vector b = v;
  for (size_t m = 0; m < gs.size(); ++m) {
    Vector& xi = state.xi[m];
    if (reuse) {
      double radius = tau * gs[m].weight;
      double n = xi.norm();
      if (n > radius) xi *= radius / n;
    }
    const auto& idx = gs[m].indices;
    for (size_t k = 0; k < idx.size(); ++k) b[idx[k]] -= xi[k];
  }

  int sweeps = 0;
  bool converged = gs.empty();
  double max_change = 0.0;
  std::vector<double> t;
  while (sweeps < cfg.prox_max_iters && !converged) {
    ++sweeps;
    max_change = 0.0;
    for (size_t m = 0; m < gs.size(); ++m) {
      const Group& g = gs[m];
      Vector& xi = state.xi[m];
      const auto& idx = g.indices;
      double radius = tau * g.weight;
      t.resize(idx.size());
      double tsq = 0.0;
      for (size_t k = 0; k < idx.size(); ++k) {
        t[k] = b[idx[k]] + xi[k];
        tsq += t[k] * t[k];
      }
      double tn = std::sqrt(tsq);
      double scale = tn <= radius ? 1.0 : radius / tn;
      double csq = 0.0;
      for (size_t k = 0; k < idx.size(); ++k) {
        double nx = t[k] * scale;
        double d = nx - xi[k];
        csq += d * d;
        b[idx[k]] -= d;
        xi[k] = nx;
      }
      max_change = std::max(max_change, std::sqrt(csq));
    }
    converged = max_change < cfg.prox_tol;
  }
  if (info) {
    info->sweeps = sweeps;
    info->converged = converged;
    info->last_change = max_change;
  }
  return b;
}

Solution solve(const Problem& p, double lambda, const Vector* warm_start,
               const SolverConfig& cfg, SolveTrace* trace) {
  if (!(lambda > 0.0)) {
    throw InputError("lambda must be positive");
  }
  if (warm_start && warm_start->size() != p.n_features()) {
    throw InputError("warm start length does not match feature count");
  }
  const Matrix& x = p.x.values();
  const Eigen::Index n_feat = p.n_features();

  Solution sol;
  sol.lambda = lambda;

  double fro_sq = p.x.col_norms().squaredNorm();
  if (fro_sq == 0.0) {
    // Zero design: the loss is constant and every group is penalized.
    sol.beta = Vector::Zero(n_feat);
    sol.objective = objective(p, sol.beta, lambda);
    sol.converged = true;
    if (trace) trace->objectives.push_back(sol.objective);
    return sol;
  }

  double tau;
  if (cfg.step_rule == StepRule::kFixedLipschitz) {
    tau = 1.0 / fro_sq;
  } else {
    double est = spectral_sq_estimate(x);
    tau = est > 0.0 ? 1.0 / est : 1.0 / fro_sq;
  }

  Vector beta = warm_start ? *warm_start : Vector::Zero(n_feat);
  Vector z = beta;
  double t_mom = 1.0;
  double f_beta = 0.5 * (p.y - x * beta).squaredNorm();
  double obj = f_beta + lambda * penalty_value(p.groups, beta);
  if (trace) trace->objectives.push_back(obj);

  ProxWorkspace prox_ws;
  int consecutive = 0;
  int iter = 0;
  bool converged = false;

  // One prox-gradient step from `point` with backtracking on the step size.
  auto step_from = [&](const Vector& point, Vector& cand, double& f_cand) {
    Vector resid = x * point - p.y;
    double f_point = 0.5 * resid.squaredNorm();
    Vector grad = x.transpose() * resid;
    for (int half = 0;; ++half) {
      cand = prox_overlap(point - tau * grad, tau * lambda, p.groups, cfg,
                          &prox_ws);
      f_cand = 0.5 * (p.y - x * cand).squaredNorm();
      if (cfg.step_rule == StepRule::kFixedLipschitz) break;
      Vector diff = cand - point;
      double quad = f_point + grad.dot(diff) + diff.squaredNorm() / (2.0 * tau);
      if (f_cand <= quad + 1e-12 * std::max(1.0, quad) || half >= 60) break;
      tau *= 0.5;
    }
  };

  Vector cand(n_feat);
  double f_cand = 0.0;
  while (iter < cfg.max_outer_iters) {
    ++iter;
    step_from(z, cand, f_cand);
    double obj_cand = f_cand + lambda * penalty_value(p.groups, cand);
    if (obj_cand > obj) {
      // Momentum overshot: restart from the last accepted iterate.
      z = beta;
      t_mom = 1.0;
      step_from(z, cand, f_cand);
      obj_cand = f_cand + lambda * penalty_value(p.groups, cand);
    }

    double rel = std::abs(obj - obj_cand) / std::max(std::abs(obj_cand), 1e-30);
    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_mom * t_mom));
    z = cand + ((t_mom - 1.0) / t_next) * (cand - beta);
    beta = cand;
    obj = obj_cand;
    t_mom = t_next;
    if (trace) trace->objectives.push_back(obj);

    consecutive = rel < cfg.outer_tol ? consecutive + 1 : 0;
    if (consecutive >= 5) {
      converged = true;
      break;
    }
  }

  sol.beta = std::move(beta);
  sol.converged = converged;
  sol.iterations = iter;
  sol.objective = objective(p, sol.beta, lambda);
  Vector grad = x.transpose() * (x * sol.beta - p.y);
  Vector pg = prox_overlap(sol.beta - tau * grad, tau * lambda, p.groups, cfg,
                           &prox_ws);
  sol.gap_estimate = (sol.beta - pg).norm() / tau;
  return sol;
}

DualPoint dual_point(const Problem& p, const Solution& sol) {
  if (!(sol.lambda > 0.0)) {
    throw InputError("lambda must be positive");
  }
  if (sol.beta.size() != p.n_features()) {
    throw InputError("solution length does not match feature count");
  }
  DualPoint d;
  d.lambda0 = sol.lambda;
  if (sol.beta.isZero(0.0)) {
    d.theta = p.y / sol.lambda;
    d.source = DualSource::kExact0;
  } else {
    d.theta = (p.y - p.x.values() * sol.beta) / sol.lambda;
    d.source = DualSource::kFromPrimal;
  }
  return d;
}

}  // namespace ogl
