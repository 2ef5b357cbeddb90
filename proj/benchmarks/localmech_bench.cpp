#include <benchmark/benchmark.h>

#include <cstdint>
#include <memory>

#include "localmech/coloring.hpp"
#include "localmech/corpus.hpp"
#include "localmech/mechanism.hpp"
#include "localmech/mwds.hpp"
#include "localmech/mwis.hpp"
#include "localmech/mwvc.hpp"
#include "localmech/oracle.hpp"
#include "localmech/slot.hpp"

namespace localmech {
namespace {

constexpr Weight kWeightBound = 8;

WeightedGraph RegularInstance(NodeId n) {
  Rng rng(42);
  return WithRandomWeights(RandomRegularGraph(n, 4, 7), kWeightBound, rng);
}

void BM_ColorGraph(benchmark::State& state) {
  const WeightedGraph g = RegularInstance(static_cast<NodeId>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ColorGraph(g, sim::ExecutionModel::Local()));
  }
}
BENCHMARK(BM_ColorGraph)->Arg(16)->Arg(64)->Arg(256);

template <typename M>
void BM_Allocate(benchmark::State& state) {
  const WeightedGraph g = RegularInstance(static_cast<NodeId>(state.range(0)));
  const M mechanism(g, sim::ExecutionModel::Local());
  for (auto _ : state) {
    benchmark::DoNotOptimize(mechanism.Allocate(g.weights()));
  }
}
BENCHMARK_TEMPLATE(BM_Allocate, MwisMechanism)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK_TEMPLATE(BM_Allocate, MwvcMechanism)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK_TEMPLATE(BM_Allocate, MwdsMechanism)->Arg(16)->Arg(64);

void BM_SlotAllocate(benchmark::State& state) {
  const WeightedGraph g = RegularInstance(static_cast<NodeId>(state.range(0)));
  const SlotMechanism mechanism(g, StandardRateSchedules().front(), sim::ExecutionModel::Local());
  for (auto _ : state) {
    benchmark::DoNotOptimize(mechanism.Allocate(g.weights()));
  }
}
BENCHMARK(BM_SlotAllocate)->Arg(16)->Arg(64)->Arg(256);

void BM_MwisPrices(benchmark::State& state) {
  const WeightedGraph g = RegularInstance(static_cast<NodeId>(state.range(0)));
  const MwisMechanism mechanism(g, sim::ExecutionModel::Congest(kCongestConstant));
  const PriceSource source = state.range(1) == 0 ? PriceSource::kAuto : PriceSource::kResimulation;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunMechanism(mechanism, g.weights(), source));
  }
  state.SetLabel(source == PriceSource::kAuto ? "protocol" : "resimulation");
}
BENCHMARK(BM_MwisPrices)->Args({16, 0})->Args({16, 1})->Args({64, 0})->Args({64, 1});

void BM_CriticalPrice(benchmark::State& state) {
  const WeightedGraph g = RegularInstance(64);
  const MwdsMechanism mechanism(g, sim::ExecutionModel::Local());
  NodeId v = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(CriticalPrice(mechanism, g.weights(), v));
    v = (v + 1) % g.node_count();
  }
}
BENCHMARK(BM_CriticalPrice);

void BM_TruthfulSweep(benchmark::State& state) {
  const Corpus corpus = ExhaustiveCorpus(static_cast<NodeId>(state.range(0)), 3);
  MechanismVariant variant;
  variant.kind = MechanismKind::kMwis;
  const MechanismFactory factory = MakeFactory(variant);
  std::int64_t checks = 0;
  for (auto _ : state) {
    const SuiteReport report = CheckTruthful(corpus, factory, {1});
    checks += report.checks;
  }
  state.counters["checks/s"] = benchmark::Counter(static_cast<double>(checks),
                                                  benchmark::Counter::kIsRate);
}
BENCHMARK(BM_TruthfulSweep)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace localmech

BENCHMARK_MAIN();
