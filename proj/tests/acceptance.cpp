// Acceptance gate: seven pinned criteria, one [PASS]/[FAIL] line each.
// Exit code 0 only when every criterion holds.

#include "ogl/datagen.hpp"
#include "ogl/model.hpp"
#include "ogl/path.hpp"
#include "ogl/screening.hpp"
#include "ogl/solver.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace ogl;

// Pinned tolerances.
constexpr double kZeroTol = 1e-6;         // reference coefficient counts as zero
constexpr double kObjRelTol = 1e-8;       // screened vs reference objective
constexpr double kDominanceSlack = 1e-12; // ols_lhs may exceed gdpp_lhs by this
constexpr double kProxOracleTol = 1e-6;   // prox vs enumeration oracle
constexpr double kOrthoTol = 1e-8;        // solve vs closed form
constexpr double kDualityTol = 1e-6;      // primal vs dual objective
constexpr double kLambdaPrimeTol = 1e-8;  // |beta|_inf at lambda'
constexpr double kSolsBand = 0.10;        // SOLS mean-ratio stability band

bool g_all_pass = true;

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion
            << ": " << detail << "\n";
  if (!pass) g_all_pass = false;
}

std::vector<std::vector<int>> make_groups(int which, int n_features) {
  switch (which) {
    case 0:
      return gen_nonoverlap_groups(n_features, 20);
    case 1:
      return gen_overlap_groups(n_features, 20, 5);
    default:
      return gen_tree_groups(n_features, {20, 15, 10, 5});
  }
}

SolverConfig tight_config() {
  SolverConfig cfg;
  cfg.outer_tol = 1e-12;
  cfg.max_outer_iters = 30000;
  return cfg;
}

struct SharedLoopStats {
  int instances = 0;
  int aborted = 0;
  int safety_violations = 0;
  double max_rel_obj = 0.0;
  long dominance_checks = 0;
  double max_lhs_excess = -1.0;
  long subset_breaks = 0;
  long w0_mismatches = 0;
};

// Criteria 1-3 share one instance sweep: 3 generators x 3 rules x 12 seeds.
SharedLoopStats run_shared_loop() {
  SharedLoopStats st;
  std::mt19937_64 master(20250814);
  std::uniform_int_distribution<int> n_dist(20, 100);
  std::uniform_int_distribution<int> j_dist(20, 200);
  std::uniform_real_distribution<double> sp_dist(0.15, 0.3);
  std::uniform_real_distribution<double> noise_dist(0.05, 0.3);
  SolverConfig cfg = tight_config();

  for (int gidx = 0; gidx < 3; ++gidx) {
    for (Rule rule : {Rule::kGdpp, Rule::kOls, Rule::kSols}) {
      for (int rep = 0; rep < 12; ++rep) {
        int n = n_dist(master);
        int j = j_dist(master);
        double sparsity = sp_dist(master);
        double noise = noise_dist(master);
        std::uint64_t seed = master();

        SynthData data = synth_data(n, j, sparsity, noise, seed);
        PenaltyKind kind = rule == Rule::kSols
                               ? PenaltyKind::kSparseOverlapping
                               : PenaltyKind::kOverlapping;
        Problem p = build_problem(DesignMatrix(data.x), data.y,
                                  make_groups(gidx, j), kind, 1.0);

        LambdaPrimeResult lp = find_lambda_prime(p, 0.9, 100, rule);
        LambdaPath path = LambdaPath::geometric(lp.lambda_prime, 0.9, 30);

        PathResult screened =
            run_sequential(p, path, rule, kDefaultWindow, cfg);
        PathResult reference = run_reference(p, path, cfg);
        ++st.instances;
        if (screened.aborted || reference.aborted) {
          ++st.aborted;
          continue;
        }

        try {
          evaluate_against_reference(screened, reference, p, kZeroTol);
        } catch (const SafetyViolation&) {
          ++st.safety_violations;
        }

        for (size_t t = 0; t < screened.steps.size(); ++t) {
          double rel = std::abs(screened.steps[t].objective -
                                reference.steps[t].objective) /
                       std::max(1.0, std::abs(reference.steps[t].objective));
          st.max_rel_obj = std::max(st.max_rel_obj, rel);
        }

        // Dominance checks at three path positions.
        size_t last = screened.steps.size() - 1;
        for (size_t t : {size_t{0}, last / 2, last}) {
          DualPoint theta;
          if (t == 0) {
            theta = DualPoint{p.y / path.anchor, path.anchor,
                              DualSource::kExact0};
          } else {
            Solution prev;
            prev.beta = screened.steps[t - 1].beta;
            prev.lambda = path.values[t - 1];
            theta = dual_point(p, prev);
          }
          double lam = path.values[t];
          ScreenReport g = screen_gdpp(p, lam, theta);
          ScreenReport o = screen_ols(p, lam, theta, kDefaultWindow);
          ScreenReport o0 = screen_ols(p, lam, theta, 0);
          for (int m = 0; m < p.groups.count(); ++m) {
            ++st.dominance_checks;
            st.max_lhs_excess = std::max(
                st.max_lhs_excess, o.decisions[m].lhs - g.decisions[m].lhs);
            if (g.decisions[m].discard && !o.decisions[m].discard) {
              ++st.subset_breaks;
            }
            if (o0.decisions[m].discard != g.decisions[m].discard) {
              ++st.w0_mismatches;
            }
          }
        }
      }
    }
  }
  return st;
}

bool criterion_4_prox_oracles() {
  std::mt19937_64 rng(7041);
  std::normal_distribution<double> gauss(0.0, 1.5);
  std::uniform_int_distribution<int> dim_dist(3, 6);
  std::uniform_real_distribution<double> tau_dist(0.2, 1.5);
  double max_prox_diff = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    int dim = dim_dist(rng);
    auto raw = ogl::testing::random_covering_groups(rng, dim);
    std::vector<Group> gs;
    for (auto& r : raw) gs.push_back(make_group(r));
    Vector v(dim);
    for (int k = 0; k < dim; ++k) v[k] = gauss(rng);
    double tau = tau_dist(rng);
    Vector oracle = ogl::testing::prox_bruteforce(v, tau, gs);
    Vector mine = prox_overlap(v, tau, GroupSet::build(gs));
    max_prox_diff =
        std::max(max_prox_diff, (mine - oracle).cwiseAbs().maxCoeff());
  }

  double max_ortho_diff = 0.0;
  SolverConfig cfg = tight_config();
  for (int trial = 0; trial < 10; ++trial) {
    Matrix raw(30, 12);
    for (int i = 0; i < 30; ++i)
      for (int k = 0; k < 12; ++k) raw(i, k) = gauss(rng);
    Matrix q = Eigen::HouseholderQR<Matrix>(raw).householderQ() *
               Matrix::Identity(30, 12);
    Vector y(30);
    for (int i = 0; i < 30; ++i) y[i] = gauss(rng);
    Problem p = build_problem(DesignMatrix(q), y,
                              gen_nonoverlap_groups(12, 3));
    std::uniform_real_distribution<double> frac(0.2, 0.8);
    double lambda = frac(rng) * lambda_one(p);
    Solution sol = solve(p, lambda, nullptr, cfg);
    Vector closed = ogl::testing::orthonormal_solution(p, lambda);
    max_ortho_diff =
        std::max(max_ortho_diff, (sol.beta - closed).cwiseAbs().maxCoeff());
  }

  double max_gap = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    int n = 25 + static_cast<int>(rng() % 20);
    int j = 15 + static_cast<int>(rng() % 15);
    SynthData data = synth_data(n, j, 0.3, 0.2, rng());
    auto raw = ogl::testing::random_covering_groups(rng, j);
    Problem p = build_problem(DesignMatrix(data.x), data.y, raw);
    std::uniform_real_distribution<double> frac(0.25, 0.7);
    double lambda = frac(rng) * lambda_one(p);
    Solution sol = solve(p, lambda, nullptr, cfg);
    if (!sol.converged) return false;
    DualPoint d = dual_point(p, sol);
    double dual = ogl::testing::dual_objective(p.y, d.theta, lambda);
    double gap = std::abs(sol.objective - dual) /
                 std::max(1.0, std::abs(sol.objective));
    max_gap = std::max(max_gap, gap);
  }

  bool pass = max_prox_diff <= kProxOracleTol &&
              max_ortho_diff <= kOrthoTol && max_gap <= kDualityTol;
  std::ostringstream detail;
  detail << std::setprecision(3) << "prox vs enumeration (60 instances) "
         << max_prox_diff << " <= " << kProxOracleTol
         << "; orthonormal closed form " << max_ortho_diff << " <= "
         << kOrthoTol << "; duality gap " << max_gap << " <= " << kDualityTol;
  report(4, pass, detail.str());
  return pass;
}

bool criterion_5_lambda_prime() {
  std::mt19937_64 rng(7051);
  SolverConfig cfg = tight_config();
  double max_beta_inf = 0.0;
  int exact_lambda1 = 0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    int n = 40 + static_cast<int>(rng() % 41);
    int j = 30 + static_cast<int>(rng() % 91);
    SynthData data = synth_data(n, j, 0.25, 0.15, rng());
    Problem p = build_problem(DesignMatrix(data.x), data.y,
                              make_groups(trial % 3, j));

    LambdaPrimeResult res = find_lambda_prime(p);
    Solution sol = solve(p, res.lambda_prime, nullptr, cfg);
    max_beta_inf = std::max(max_beta_inf, sol.beta.cwiseAbs().maxCoeff());

    // independent closed form over the raw group lists
    Vector corr = p.x.values().transpose() * p.y;
    double expect = 0.0;
    for (const auto& raw : make_groups(trial % 3, j)) {
      double sq = 0.0;
      for (int idx : raw) sq += corr[idx] * corr[idx];
      expect = std::max(expect, std::sqrt(sq) /
                                    std::sqrt(static_cast<double>(raw.size())));
    }
    if (res.lambda1 == expect) ++exact_lambda1;
  }
  bool pass = max_beta_inf <= kLambdaPrimeTol && exact_lambda1 == trials;
  std::ostringstream detail;
  detail << std::setprecision(3) << "max |beta|_inf at lambda' over "
         << trials << " instances = " << max_beta_inf << " <= "
         << kLambdaPrimeTol << "; lambda_1 closed form exact on "
         << exact_lambda1 << "/" << trials;
  report(5, pass, detail.str());
  return pass;
}

// Mean rejection ratio over a 30-step path; steps past the screening
// stop rule count as zero (nothing was discarded there).
double mean_rejection_ratio(Rule rule, int block, std::uint64_t seed,
                            bool* ok) {
  const int n = 100;
  const int j = 400;
  SynthData data = synth_data(n, j, 0.025, 0.1, seed);  // one active slot
  PenaltyKind kind = rule == Rule::kSols ? PenaltyKind::kSparseOverlapping
                                         : PenaltyKind::kOverlapping;
  Problem p = build_problem(DesignMatrix(data.x), data.y,
                            gen_overlap_groups(j, block, 5), kind, 1.0);
  SolverConfig cfg;
  cfg.outer_tol = 1e-10;
  cfg.max_outer_iters = 30000;

  LambdaPrimeResult lp = find_lambda_prime(p, 0.9, 100, rule);
  LambdaPath path = LambdaPath::geometric(lp.lambda_prime, 0.9, 30);
  PathResult screened = run_sequential(p, path, rule, kDefaultWindow, cfg);
  PathResult reference = run_reference(p, path, cfg);
  if (screened.aborted || reference.aborted) {
    *ok = false;
    return 0.0;
  }
  evaluate_against_reference(screened, reference, p, kZeroTol);

  double sum = 0.0;
  for (const PathStep& s : screened.steps) {
    if (s.screened && std::isfinite(s.rejection_ratio)) {
      sum += s.rejection_ratio;
    }
  }
  return sum / static_cast<double>(screened.steps.size());
}

bool criterion_6_trend() {
  const std::vector<int> sizes = {10, 40, 80, 160};
  const std::vector<std::uint64_t> seeds = {61001, 61002, 61003};
  bool ok = true;
  std::vector<double> gdpp_means;
  std::vector<double> sols_means;
  for (int block : sizes) {
    double g_sum = 0.0;
    double s_sum = 0.0;
    for (std::uint64_t seed : seeds) {
      g_sum += mean_rejection_ratio(Rule::kGdpp, block, seed, &ok);
      s_sum += mean_rejection_ratio(Rule::kSols, block, seed, &ok);
    }
    gdpp_means.push_back(g_sum / static_cast<double>(seeds.size()));
    sols_means.push_back(s_sum / static_cast<double>(seeds.size()));
  }

  bool gdpp_monotone = true;
  for (size_t i = 1; i < gdpp_means.size(); ++i) {
    if (gdpp_means[i] > gdpp_means[i - 1]) gdpp_monotone = false;
  }
  bool sols_stable = true;
  for (size_t i = 1; i < sols_means.size(); ++i) {
    if (std::abs(sols_means[i] - sols_means[0]) > kSolsBand) {
      sols_stable = false;
    }
  }

  bool pass = ok && gdpp_monotone && sols_stable;
  std::ostringstream detail;
  detail << std::setprecision(3) << "group sizes {10,40,80,160}: gdpp means {";
  for (size_t i = 0; i < gdpp_means.size(); ++i) {
    detail << (i ? "," : "") << gdpp_means[i];
  }
  detail << "} non-increasing=" << (gdpp_monotone ? "yes" : "no")
         << "; sols means {";
  for (size_t i = 0; i < sols_means.size(); ++i) {
    detail << (i ? "," : "") << sols_means[i];
  }
  detail << "} within " << kSolsBand << " of size-10="
         << (sols_stable ? "yes" : "no");
  if (!ok) detail << "; a path run aborted";
  report(6, pass, detail.str());
  return pass;
}

bool criterion_7_w_update_table() {
  WUpdate a = w_update(0.5, 1.0, 1.0);
  WUpdate b = w_update(2.0, 1.0, 1.0);
  WUpdate c = w_update(-3.0, 2.0, 0.25);
  bool pass = a.w == 0.5 && a.d_next == 0.75 && a.residual_sq == 0.0 &&
              b.w == 1.0 && b.d_next == 0.0 && b.residual_sq == 1.0 &&
              c.w == -0.5 && c.d_next == 0.0 && c.residual_sq == 4.0;
  report(7, pass, "three w_update hand cases reproduce exactly");
  return pass;
}

}  // namespace

int main() {
  std::cout << "acceptance gate: overlapping group lasso screening\n";

  SharedLoopStats st = run_shared_loop();
  {
    bool pass = st.aborted == 0 && st.safety_violations == 0;
    std::ostringstream detail;
    detail << "exactness: " << st.instances << " randomized 30-step paths, "
           << st.safety_violations << " safety violations, " << st.aborted
           << " aborted runs (zero tol " << kZeroTol << ", reference at 1e-12)";
    report(1, pass, detail.str());
  }
  {
    bool pass = st.aborted == 0 && st.max_lhs_excess <= kDominanceSlack &&
                st.subset_breaks == 0 && st.w0_mismatches == 0;
    std::ostringstream detail;
    detail << std::setprecision(3) << "dominance: " << st.dominance_checks
           << " group decisions at 3 path positions per instance, "
           << "max(ols_lhs - gdpp_lhs) = " << st.max_lhs_excess << " <= "
           << kDominanceSlack << ", gdpp-discard-not-ols " << st.subset_breaks
           << ", W=0 mismatches " << st.w0_mismatches;
    report(2, pass, detail.str());
  }
  {
    bool pass = st.aborted == 0 && st.max_rel_obj <= kObjRelTol;
    std::ostringstream detail;
    detail << std::setprecision(3)
           << "solution equivalence: max relative objective difference = "
           << st.max_rel_obj << " <= " << kObjRelTol;
    report(3, pass, detail.str());
  }

  criterion_4_prox_oracles();
  criterion_5_lambda_prime();
  criterion_6_trend();
  criterion_7_w_update_table();

  std::cout << (g_all_pass ? "all criteria passed\n"
                           : "one or more criteria FAILED\n");
  return g_all_pass ? 0 : 1;
}
