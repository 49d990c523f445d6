#include <benchmark/benchmark.h>

#include "ogl/datagen.hpp"
#include "ogl/model.hpp"
#include "ogl/path.hpp"
#include "ogl/screening.hpp"
#include "ogl/solver.hpp"

#include <memory>

namespace {

using namespace ogl;

struct Instance {
  Problem problem;
  DualPoint theta;
  double lambda;
};

// One solved anchor shared by the screening benchmarks so they measure the
// rule alone, not the solver.
const Instance& screening_instance(PenaltyKind kind) {
  auto build = [](PenaltyKind k) {
    SynthData data = synth_data(100, 600, 0.1, 0.1, 7);
    Problem p = build_problem(DesignMatrix(data.x), data.y,
                              gen_overlap_groups(600, 20, 5), k, 1.0);
    double anchor = find_lambda_prime(p, 0.9, 100,
                                      k == PenaltyKind::kOverlapping
                                          ? Rule::kOls
                                          : Rule::kSols)
                        .lambda_prime;
    Instance inst{std::move(p), DualPoint{}, anchor * 0.9};
    inst.theta = DualPoint{inst.problem.y / anchor, anchor,
                           DualSource::kExact0};
    return inst;
  };
  static const Instance plain = build(PenaltyKind::kOverlapping);
  static const Instance sparse = build(PenaltyKind::kSparseOverlapping);
  return kind == PenaltyKind::kOverlapping ? plain : sparse;
}

void bm_screen_gdpp(benchmark::State& state) {
  const Instance& inst = screening_instance(PenaltyKind::kOverlapping);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        screen_gdpp(inst.problem, inst.lambda, inst.theta));
  }
}
BENCHMARK(bm_screen_gdpp);

void bm_screen_ols(benchmark::State& state) {
  const Instance& inst = screening_instance(PenaltyKind::kOverlapping);
  int window = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        screen_ols(inst.problem, inst.lambda, inst.theta, window));
  }
}
BENCHMARK(bm_screen_ols)->Arg(0)->Arg(10)->Arg(50);

void bm_screen_sols(benchmark::State& state) {
  const Instance& inst = screening_instance(PenaltyKind::kSparseOverlapping);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        screen_sols(inst.problem, inst.lambda, inst.theta));
  }
}
BENCHMARK(bm_screen_sols);

void bm_prox_overlap(benchmark::State& state) {
  SynthData data = synth_data(1, 400, 0.2, 0.0, 11);
  GroupSet groups = GroupSet::build([] {
    std::vector<Group> gs;
    for (auto& raw : gen_overlap_groups(400, 20, 5)) {
      gs.push_back(make_group(raw));
    }
    return gs;
  }());
  Vector v = Vector::LinSpaced(400, -1.0, 1.0);
  ProxWorkspace ws;
  for (auto _ : state) {
    benchmark::DoNotOptimize(prox_overlap(v, 0.05, groups, {}, &ws));
  }
}
BENCHMARK(bm_prox_overlap);

void bm_solve_warm(benchmark::State& state) {
  SynthData data = synth_data(60, 150, 0.2, 0.1, 13);
  Problem p = build_problem(DesignMatrix(data.x), data.y,
                            gen_overlap_groups(150, 20, 5));
  double lambda = 0.5 * lambda_one(p);
  Solution cold = solve(p, lambda);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(p, lambda * 0.95, &cold.beta));
  }
}
BENCHMARK(bm_solve_warm);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
