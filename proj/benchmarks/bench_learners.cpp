#include <benchmark/benchmark.h>

#include "soilcast/adaboost.hpp"
#include "soilcast/c45.hpp"
#include "soilcast/cart.hpp"
#include "soilcast/cfs.hpp"
#include "soilcast/evaluation.hpp"
#include "soilcast/measures.hpp"
#include "soilcast/nbtree.hpp"
#include "soilcast/pipeline.hpp"

namespace {

using namespace soilcast;

const Dataset& soil_data(std::size_t n) {
  static const Dataset small = synthesize_soil_dataset(200, 7, 1.0);
  static const Dataset medium = synthesize_soil_dataset(600, 7, 1.0);
  static const Dataset large = synthesize_soil_dataset(1988, 7, 1.0);
  if (n <= 200) return small;
  if (n <= 600) return medium;
  return large;
}

void BM_InduceC45(benchmark::State& state) {
  const Dataset& data = soil_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(c45::induce(data, c45::C45Params{}));
  }
}
BENCHMARK(BM_InduceC45)->Arg(200)->Arg(600)->Arg(1988)->Unit(benchmark::kMillisecond);

void BM_SelectPrunedCart(benchmark::State& state) {
  const Dataset& data = soil_data(static_cast<std::size_t>(state.range(0)));
  cart::CartParams params;
  params.seed = 11;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cart::select_pruned_tree(data, params));
  }
}
BENCHMARK(BM_SelectPrunedCart)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_InduceNBTree(benchmark::State& state) {
  const Dataset& data = soil_data(static_cast<std::size_t>(state.range(0)));
  nbtree::NBTreeParams params;
  params.seed = 11;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nbtree::induce_nbtree(data, params));
  }
}
BENCHMARK(BM_InduceNBTree)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_DiscretizeMdl(benchmark::State& state) {
  const Dataset& data = soil_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    for (std::size_t a = 0; a + 1 < data.num_attributes(); ++a) {
      benchmark::DoNotOptimize(discretize_mdl(data, a));
    }
  }
}
BENCHMARK(BM_DiscretizeMdl)->Arg(600)->Arg(1988)->Unit(benchmark::kMillisecond);

void BM_CfsSearch(benchmark::State& state) {
  const Dataset& data = soil_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const cfs::CorrelationCache cache = cfs::build_correlations(data);
    benchmark::DoNotOptimize(cfs::best_first_search(cache));
  }
}
BENCHMARK(BM_CfsSearch)->Arg(600)->Arg(1988)->Unit(benchmark::kMillisecond);

void BM_BoostJ48(benchmark::State& state) {
  const Dataset& data = soil_data(static_cast<std::size_t>(state.range(0)));
  adaboost::BoostParams params;
  params.iterations = 10;
  params.seed = 11;
  const adaboost::BaseTrainer trainer = [](const Dataset& d) {
    Model model;
    model.node = TreeModel{LearnerKind::kJ48, c45::induce(d, c45::C45Params{})};
    return model;
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(adaboost::train(data, params, trainer));
  }
}
BENCHMARK(BM_BoostJ48)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_CrossValidateJ48(benchmark::State& state) {
  const Dataset& data = soil_data(static_cast<std::size_t>(state.range(0)));
  const PipelineSpec spec = parse_pipeline("j48");
  CvOptions options;
  options.seed = 11;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cross_validate(data, spec, PipelineParams{}, options));
  }
}
BENCHMARK(BM_CrossValidateJ48)->Arg(600)->Arg(1988)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
