#include "localmech/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include "json.hpp"
#include "localmech/corpus.hpp"
#include "localmech/errors.hpp"
#include "localmech/graph_io.hpp"
#include "localmech/mwds.hpp"
#include "localmech/mwis.hpp"
#include "localmech/mwvc.hpp"
#include "localmech/optimum.hpp"
#include "localmech/slot.hpp"

namespace localmech {
namespace {

std::string JoinRates(const std::vector<Rational>& rates) {
  std::string out;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (i > 0) out += ',';
    out += ToString(rates[i]);
  }
  return out;
}

std::string ModelArgs(const sim::ExecutionModel& model) {
  if (!model.is_congest()) return "";
  return " --model congest --congest-constant " + std::to_string(model.congest_constant);
}

std::string ToString(const BidVector& bids) {
  std::string out = "(";
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(bids[i]);
  }
  return out + ")";
}

std::string ToString(const std::vector<Rational>& values) {
  std::string out = "(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += localmech::ToString(values[i]);
  }
  return out + ")";
}

class BinaryUnderTest final : public MechanismUnderTest {
 public:
  BinaryUnderTest(std::shared_ptr<const BinaryMechanism> mechanism, std::string name,
                  PaymentRule payment, PriceSource price_source, std::string replay_args)
      : mechanism_(std::move(mechanism)),
        name_(std::move(name)),
        payment_(payment),
        price_source_(price_source),
        replay_args_(std::move(replay_args)) {}

  std::string name() const override { return name_; }
  Objective objective() const override { return mechanism_->objective(); }

  std::vector<std::int64_t> Allocate(const BidVector& bids) const override {
    const BinaryAllocation alloc = mechanism_->Allocate(bids);
    return {alloc.selected.begin(), alloc.selected.end()};
  }

  Outcome Run(const BidVector& bids) const override {
    MechanismResult result = RunMechanism(*mechanism_, bids, price_source_);
    Outcome outcome{std::move(result.allocation), std::move(result.payments)};
    if (payment_ == PaymentRule::kFirstPrice) {
      for (std::size_t v = 0; v < bids.size(); ++v) {
        if (outcome.labels[v] == 0) continue;
        const Rational bid(bids[v]);
        outcome.payments[v] = objective() == Objective::kMax ? -bid : bid;
      }
    }
    return outcome;
  }

  Rational Utility(std::int64_t label, const Rational& true_weight) const override {
    return TotalUtility(objective(), label != 0, true_weight, Rational(0));
  }

  Rational Rank(std::int64_t label) const override { return Rational(label); }
  std::string ReplayArgs() const override { return replay_args_; }

 private:
  std::shared_ptr<const BinaryMechanism> mechanism_;
  std::string name_;
  PaymentRule payment_;
  PriceSource price_source_;
  std::string replay_args_;
};

class SlotUnderTest final : public MechanismUnderTest {
 public:
  SlotUnderTest(const WeightedGraph& g, const std::vector<Rational>& rates,
                const sim::ExecutionModel& model, std::string name, std::string replay_args)
      : mechanism_(g, rates, model), name_(std::move(name)), replay_args_(std::move(replay_args)) {}

  std::string name() const override { return name_; }
  Objective objective() const override { return Objective::kMax; }

  std::vector<std::int64_t> Allocate(const BidVector& bids) const override {
    return mechanism_.Allocate(bids).slot;
  }

  Outcome Run(const BidVector& bids) const override {
    MechanismResult result = mechanism_.Run(bids);
    return {std::move(result.allocation), std::move(result.payments)};
  }

  Rational Utility(std::int64_t label, const Rational& true_weight) const override {
    return mechanism_.rates().rate(label) * true_weight;
  }

  Rational Rank(std::int64_t label) const override { return mechanism_.rates().rate(label); }
  std::string ReplayArgs() const override { return replay_args_; }

 private:
  SlotMechanism mechanism_;
  std::string name_;
  std::string replay_args_;
};

/// Memoises runs of one mechanism on one graph. Returned references stay
/// valid for the lifetime of the cache.
class OutcomeCache {
 public:
  explicit OutcomeCache(const MechanismUnderTest& mechanism) : mechanism_(mechanism) {}

  const Outcome& Run(const BidVector& bids) {
    auto it = runs_.find(bids);
    if (it == runs_.end()) it = runs_.emplace(bids, mechanism_.Run(bids)).first;
    return it->second;
  }

  const std::vector<std::int64_t>& Allocate(const BidVector& bids) {
    if (auto run = runs_.find(bids); run != runs_.end()) return run->second.labels;
    auto it = allocations_.find(bids);
    if (it == allocations_.end()) it = allocations_.emplace(bids, mechanism_.Allocate(bids)).first;
    return it->second;
  }

 private:
  const MechanismUnderTest& mechanism_;
  std::map<BidVector, Outcome> runs_;
  std::map<BidVector, std::vector<std::int64_t>> allocations_;
};

/// Distinct (v, b with b_v = 0) pairs over the swept bid vectors.
std::vector<std::pair<NodeId, BidVector>> Contexts(const CorpusInstance& instance) {
  std::set<std::pair<NodeId, BidVector>> seen;
  std::vector<std::pair<NodeId, BidVector>> contexts;
  for (const BidVector& b : instance.bid_vectors) {
    for (NodeId v = 0; v < instance.graph.node_count(); ++v) {
      BidVector base = b;
      base[v] = 0;
      if (seen.emplace(v, base).second) contexts.emplace_back(v, std::move(base));
    }
  }
  return contexts;
}

Violation MakeViolation(std::string mechanism, const CorpusInstance& instance,
                        const BidVector& bids, std::string detail, std::string_view replay_args) {
  Violation v;
  v.mechanism = std::move(mechanism);
  v.instance = instance.label;
  v.graph = instance.graph.WithWeights(bids, instance.graph.weight_bound());
  v.detail = std::move(detail);
  v.replay = ReplayCommand(v.graph, replay_args);
  return v;
}

template <class Task>
SuiteReport SweepInstances(std::string suite, std::size_t count, const SweepOptions& options,
                           Task task) {
  std::vector<SuiteReport> parts(count);
  unsigned workers = options.workers != 0 ? options.workers
                                          : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto work = [&] {
    for (std::size_t i; (i = next++) < count;) {
      try {
        parts[i] = task(i);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  SuiteReport report;
  report.suite = std::move(suite);
  for (SuiteReport& part : parts) report.Merge(std::move(part));
  return report;
}

std::unique_ptr<MechanismUnderTest> BuildOrRecord(const MechanismFactory& factory,
                                                  const CorpusInstance& instance,
                                                  SuiteReport& part) {
  try {
    return factory(instance.graph);
  } catch (const Error& e) {
    part.Add(MakeViolation("?", instance, instance.graph.weights(),
                           std::string("construction failed: ") + e.what(), ""));
    return nullptr;
  }
}

bool BetterOrEqual(Objective objective, const Rational& later, const Rational& earlier) {
  return objective == Objective::kMax ? later >= earlier : later <= earlier;
}

std::vector<Rational> SampleRealWeights(NodeId n, const DiscretizationSweep& sweep, Rng& rng) {
  const Rational low_scaled = sweep.min_weight * sweep.denominator;
  const std::int64_t low = CeilDiv(low_scaled);
  const std::int64_t high = sweep.weight_cap * sweep.denominator;
  if (low > high) throw RangeError("min_weight exceeds the weight cap");
  std::vector<Rational> w;
  w.reserve(n);
  for (NodeId v = 0; v < n; ++v) w.emplace_back(rng.Uniform(low, high), sweep.denominator);
  return w;
}

std::vector<std::vector<Rational>> SamplesFor(const DiscretizationSweep& sweep, std::size_t index,
                                              NodeId n) {
  Rng rng(sweep.seed * 1'000'003 + index);
  std::vector<std::vector<Rational>> samples;
  for (int s = 0; s < sweep.samples_per_instance; ++s) {
    samples.push_back(SampleRealWeights(n, sweep, rng));
  }
  return samples;
}

std::string DiscretizedReplayArgs(MechanismKind kind, const DiscretizationSweep& sweep,
                                  const std::vector<Rational>& weights) {
  std::string args = "--mechanism " + std::string(MechanismName(kind)) +
                     " --epsilon " + localmech::ToString(sweep.epsilon) + " --true-weights ";
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (i > 0) args += ',';
    args += localmech::ToString(weights[i]);
  }
  return args;
}

Violation MakeDiscretizedViolation(MechanismKind kind, const CorpusInstance& instance,
                                   const DiscretizationSweep& sweep,
                                   const std::vector<Rational>& weights, std::string detail) {
  Violation v;
  v.mechanism = std::string(MechanismName(kind)) + "[eps=" + localmech::ToString(sweep.epsilon) + "]";
  v.instance = instance.label;
  v.graph = instance.graph.WithWeights(BidVector(instance.graph.node_count(), 0), sweep.weight_cap);
  v.detail = std::move(detail) + "; true weights " + ToString(weights);
  v.replay = ReplayCommand(v.graph, DiscretizedReplayArgs(kind, sweep, weights));
  return v;
}

std::int64_t CeilLog2(std::int64_t n) {
  std::int64_t bits = 0;
  while ((std::int64_t{1} << bits) < n) ++bits;
  return bits;
}

}  // namespace

std::string_view MechanismName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kMwis: return "mwis";
    case MechanismKind::kMwvc: return "mwvc";
    case MechanismKind::kMwds: return "mwds";
    case MechanismKind::kSlot: return "slot";
  }
  return "?";
}

MechanismKind ParseMechanismKind(std::string_view name) {
  for (MechanismKind kind : {MechanismKind::kMwis, MechanismKind::kMwvc, MechanismKind::kMwds,
                             MechanismKind::kSlot}) {
    if (name == MechanismName(kind)) return kind;
  }
  throw RangeError("unknown mechanism '" + std::string(name) + "'");
}

Objective ObjectiveOf(MechanismKind kind) {
  return kind == MechanismKind::kMwvc || kind == MechanismKind::kMwds ? Objective::kMin
                                                                     : Objective::kMax;
}

std::int64_t RoundLimit(MechanismKind kind, int max_degree, Weight weight_bound) {
  const std::int64_t d = max_degree;
  const std::int64_t w = weight_bound;
  switch (kind) {
    case MechanismKind::kMwis:
      return kMwisRoundBound.a * (d + 1) * (w + 1) + kMwisRoundBound.b;
    case MechanismKind::kMwvc:
      return kMwvcRoundBound.a * d + kMwvcRoundBound.b;
    case MechanismKind::kMwds:
      return kMwdsRoundBound.a * (d + 1) * (d + 1) * (d + 1) * (w + 1) + kMwdsRoundBound.b;
    case MechanismKind::kSlot:
      return kSlotRoundBound.a * (d + 1) * (w + 1) + kSlotRoundBound.b;
  }
  return 0;
}

std::vector<std::vector<Rational>> StandardRateSchedules() {
  return {
      {Rational(5), Rational(4), Rational(3), Rational(2), Rational(1)},
      {Rational(16), Rational(8), Rational(4), Rational(2), Rational(1)},
      {Rational(1), Rational(1), Rational(1), Rational(1), Rational(1)},
      {Rational(3), Rational(1, 2), Rational(0), Rational(0), Rational(0)},
  };
}

Scope ParseScope(std::string_view name) {
  if (name == "quick") return Scope::kQuick;
  if (name == "full") return Scope::kFull;
  throw RangeError("unknown scope '" + std::string(name) + "'");
}

CorpusOptions CorpusOptions::For(Scope scope) {
  CorpusOptions options;
  if (scope == Scope::kQuick) {
    options.exhaustive_max_n = 3;
    options.five_node_graphs = false;
    options.random_graphs = 10;
    options.random_max_n = 7;
  }
  return options;
}

Corpus ExhaustiveCorpus(NodeId max_n, Weight weight_bound) {
  Corpus corpus;
  for (NodeId n = 1; n <= max_n; ++n) {
    const std::vector<WeightedGraph> graphs = ConnectedLabeledGraphs(n);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      CorpusInstance instance;
      instance.label = "connected-n" + std::to_string(n) + "-" + std::to_string(i);
      instance.exhaustive = true;
      ForEachBidVector(n, weight_bound,
                       [&](const BidVector& b) { instance.bid_vectors.push_back(b); });
      instance.graph = graphs[i].WithWeights(instance.bid_vectors.front(), weight_bound);
      corpus.push_back(std::move(instance));
    }
  }
  return corpus;
}

Corpus BuildCorpus(const CorpusOptions& options) {
  Corpus corpus = ExhaustiveCorpus(options.exhaustive_max_n, options.exhaustive_weight_bound);
  Rng rng(options.seed);
  if (options.five_node_graphs) {
    const std::vector<WeightedGraph> graphs = ConnectedLabeledGraphs(5);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      CorpusInstance instance;
      instance.label = "connected-n5-" + std::to_string(i);
      for (int s = 0; s < options.five_node_samples; ++s) {
        instance.bid_vectors.push_back(RandomBids(5, options.exhaustive_weight_bound, rng));
      }
      instance.graph =
          graphs[i].WithWeights(instance.bid_vectors.front(), options.exhaustive_weight_bound);
      corpus.push_back(std::move(instance));
    }
  }
  const std::vector<WeightedGraph> random =
      RandomBoundedDegreeGraphs(options.random_graphs, options.random_max_n,
                                options.random_max_degree, options.random_max_weight, options.seed);
  for (std::size_t i = 0; i < random.size(); ++i) {
    CorpusInstance instance;
    instance.label = "random-" + std::to_string(i);
    instance.graph = random[i];
    instance.bid_vectors.push_back(random[i].weights());
    for (int s = 1; s < options.random_samples; ++s) {
      instance.bid_vectors.push_back(
          RandomBids(random[i].node_count(), random[i].weight_bound(), rng));
    }
    corpus.push_back(std::move(instance));
  }
  return corpus;
}

std::string VariantName(const MechanismVariant& variant) {
  std::string name(MechanismName(variant.kind));
  std::vector<std::string> tags;
  if (variant.kind == MechanismKind::kSlot) tags.push_back(JoinRates(variant.rates));
  if (variant.model.is_congest()) tags.push_back("congest");
  if (variant.mwis.tie_rule == TieRule::kLargerColorWins) tags.push_back("larger-colour-tie");
  if (!variant.mwis.check_blocking) tags.push_back("no-blocking-check");
  if (variant.payment == PaymentRule::kFirstPrice) tags.push_back("first-price");
  if (variant.price_source == PriceSource::kResimulation) tags.push_back("resimulated-prices");
  if (tags.empty()) return name;
  name += '[';
  for (std::size_t i = 0; i < tags.size(); ++i) name += (i > 0 ? ";" : "") + tags[i];
  return name + ']';
}

std::unique_ptr<BinaryMechanism> MakeBinaryMechanism(MechanismKind kind, const WeightedGraph& g,
                                                     const sim::ExecutionModel& model,
                                                     const MwisOptions& mwis) {
  switch (kind) {
    case MechanismKind::kMwis: return std::make_unique<MwisMechanism>(g, model, mwis);
    case MechanismKind::kMwvc: return std::make_unique<MwvcMechanism>(g, model);
    case MechanismKind::kMwds: return std::make_unique<MwdsMechanism>(g, model);
    case MechanismKind::kSlot: break;
  }
  throw RangeError("slot assignment is not a binary mechanism");
}

std::unique_ptr<MechanismUnderTest> WrapBinary(std::shared_ptr<const BinaryMechanism> mechanism,
                                               std::string name, PaymentRule payment,
                                               PriceSource price_source, std::string replay_args) {
  return std::make_unique<BinaryUnderTest>(std::move(mechanism), std::move(name), payment,
                                           price_source, std::move(replay_args));
}

MechanismFactory MakeFactory(const MechanismVariant& variant) {
  const std::string name = VariantName(variant);
  std::string replay = "--mechanism " + std::string(MechanismName(variant.kind));
  if (variant.kind == MechanismKind::kSlot) replay += " --rates-text " + JoinRates(variant.rates);
  replay += ModelArgs(variant.model);
  return [variant, name, replay](const WeightedGraph& g) -> std::unique_ptr<MechanismUnderTest> {
    if (variant.kind == MechanismKind::kSlot) {
      return std::make_unique<SlotUnderTest>(g, variant.rates, variant.model, name, replay);
    }
    return WrapBinary(MakeBinaryMechanism(variant.kind, g, variant.model, variant.mwis), name,
                      variant.payment, variant.price_source, replay);
  };
}

void SuiteReport::Add(Violation violation) {
  ++violation_count;
  if (violations.size() < kMaxRecorded) violations.push_back(std::move(violation));
}

void SuiteReport::Merge(SuiteReport other) {
  instances += other.instances;
  checks += other.checks;
  violation_count += other.violation_count;
  for (Violation& v : other.violations) {
    if (violations.size() >= kMaxRecorded) break;
    violations.push_back(std::move(v));
  }
  if (table_header.empty()) table_header = std::move(other.table_header);
  for (auto& row : other.table) table.push_back(std::move(row));
}

std::string ToJsonLines(const SuiteReport& report) {
  std::string out;
  for (const Violation& v : report.violations) {
    nlohmann::ordered_json record;
    record["suite"] = report.suite;
    record["mechanism"] = v.mechanism;
    record["instance"] = v.instance;
    record["detail"] = v.detail;
    record["graph"] = FormatGraph(v.graph);
    record["replay"] = v.replay;
    out += record.dump() + '\n';
  }
  nlohmann::ordered_json summary;
  summary["suite"] = report.suite;
  summary["summary"] = true;
  summary["instances"] = report.instances;
  summary["checks"] = report.checks;
  summary["violations"] = report.violation_count;
  summary["recorded"] = report.violations.size();
  out += summary.dump() + '\n';
  return out;
}

std::string FormatTable(const SuiteReport& report) {
  if (report.table_header.empty()) return "";
  std::vector<std::size_t> widths(report.table_header.size(), 0);
  auto measure = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < widths.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  };
  measure(report.table_header);
  for (const auto& row : report.table) measure(row);
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < widths.size(); ++i) {
      out << row[i];
      if (i + 1 < row.size()) out << std::string(widths[i] - row[i].size() + 2, ' ');
    }
    out << '\n';
  };
  emit(report.table_header);
  for (const auto& row : report.table) emit(row);
  return out.str();
}

std::string ReplayCommand(const WeightedGraph& g, std::string_view mechanism_args) {
  std::string cmd = "localmech run";
  if (!mechanism_args.empty()) cmd += " " + std::string(mechanism_args);
  return cmd + " --graph-text '" + FormatGraph(g) + "'";
}

SuiteReport CheckTruthful(const Corpus& corpus, const MechanismFactory& factory,
                          const SweepOptions& options) {
  return SweepInstances("truthful", corpus.size(), options, [&](std::size_t i) {
    const CorpusInstance& instance = corpus[i];
    SuiteReport part;
    part.instances = 1;
    const auto mechanism = BuildOrRecord(factory, instance, part);
    if (!mechanism) return part;
    const Weight w_max = instance.graph.weight_bound();
    OutcomeCache cache(*mechanism);
    for (const auto& [v, base] : Contexts(instance)) {
      BidVector bids = base;
      try {
        std::vector<const Outcome*> at(w_max + 1);
        for (Weight x = 0; x <= w_max; ++x) {
          bids[v] = x;
          at[x] = &cache.Run(bids);
        }
        auto utility = [&](Weight x, const Rational& t) {
          return mechanism->Utility(at[x]->labels[v], t) + at[x]->payments[v];
        };
        for (Weight t = 0; t <= w_max; ++t) {
          const Rational truth = utility(t, Rational(t));
          bids[v] = t;
          ++part.checks;
          if (truth < Rational(0)) {
            part.Add(MakeViolation(mechanism->name(), instance, bids,
                                   "node " + std::to_string(v) + " with true weight " +
                                       std::to_string(t) + " has negative utility " +
                                       localmech::ToString(truth),
                                   mechanism->ReplayArgs()));
          }
          for (Weight x = 0; x <= w_max; ++x) {
            if (x == t) continue;
            ++part.checks;
            const Rational deviation = utility(x, Rational(t));
            if (deviation > truth) {
              part.Add(MakeViolation(
                  mechanism->name(), instance, bids,
                  "node " + std::to_string(v) + " with true weight " + std::to_string(t) +
                      " gains by bidding " + std::to_string(x) + ": " +
                      localmech::ToString(deviation) + " > " + localmech::ToString(truth),
                  mechanism->ReplayArgs()));
            }
          }
        }
      } catch (const Error& e) {
        part.Add(MakeViolation(mechanism->name(), instance, bids, e.what(),
                               mechanism->ReplayArgs()));
      }
    }
    return part;
  });
}

SuiteReport CheckMonotone(const Corpus& corpus, const MechanismFactory& factory,
                          const SweepOptions& options) {
  return SweepInstances("monotone", corpus.size(), options, [&](std::size_t i) {
    const CorpusInstance& instance = corpus[i];
    SuiteReport part;
    part.instances = 1;
    const auto mechanism = BuildOrRecord(factory, instance, part);
    if (!mechanism) return part;
    const Weight w_max = instance.graph.weight_bound();
    OutcomeCache cache(*mechanism);
    for (const auto& [v, base] : Contexts(instance)) {
      BidVector bids = base;
      try {
        Rational previous = mechanism->Rank(cache.Allocate(bids)[v]);
        for (Weight x = 1; x <= w_max; ++x) {
          bids[v] = x;
          const Rational rank = mechanism->Rank(cache.Allocate(bids)[v]);
          ++part.checks;
          if (!BetterOrEqual(mechanism->objective(), rank, previous)) {
            part.Add(MakeViolation(mechanism->name(), instance, bids,
                                   "node " + std::to_string(v) + " rank " +
                                       localmech::ToString(previous) + " at bid " +
                                       std::to_string(x - 1) + " but " +
                                       localmech::ToString(rank) + " at bid " + std::to_string(x),
                                   mechanism->ReplayArgs()));
          }
          previous = rank;
        }
      } catch (const Error& e) {
        part.Add(MakeViolation(mechanism->name(), instance, bids, e.what(),
                               mechanism->ReplayArgs()));
      }
    }
    return part;
  });
}

SuiteReport CheckPrices(const Corpus& corpus, const sim::ExecutionModel& model,
                        const MwisOptions& mwis, const SweepOptions& options) {
  const std::string name = VariantName({MechanismKind::kMwis, model, {}, mwis});
  const std::string replay = "--mechanism mwis" + ModelArgs(model);
  return SweepInstances("prices", corpus.size(), options, [&](std::size_t i) {
    const CorpusInstance& instance = corpus[i];
    SuiteReport part;
    part.instances = 1;
    const MwisMechanism mechanism(instance.graph, model, mwis);
    for (const BidVector& bids : instance.bid_vectors) {
      try {
        const BinaryAllocation alloc = mechanism.Allocate(bids);
        const std::optional<PriceProtocolResult> protocol = mechanism.PriceProtocol(bids, alloc);
        if (!protocol) throw ContractViolation("MWIS mechanism has no price protocol");
        for (NodeId v = 0; v < instance.graph.node_count(); ++v) {
          if (!alloc.selected[v]) continue;
          ++part.checks;
          const std::optional<Weight> oracle = CriticalPrice(mechanism, bids, v);
          if (protocol->prices[v] != oracle) {
            auto show = [](const std::optional<Weight>& p) {
              return p ? std::to_string(*p) : std::string("none");
            };
            part.Add(MakeViolation(name, instance, bids,
                                   "node " + std::to_string(v) + ": protocol price " +
                                       show(protocol->prices[v]) + ", re-simulated " + show(oracle),
                                   replay));
          }
        }
      } catch (const Error& e) {
        part.Add(MakeViolation(name, instance, bids, e.what(), replay));
      }
    }
    return part;
  });
}

SuiteReport CheckCongestBudget(const Corpus& corpus, std::int64_t constant,
                               const SweepOptions& options) {
  const sim::ExecutionModel model = sim::ExecutionModel::Congest(constant);
  const std::string replay = "--mechanism mwis" + ModelArgs(model);
  return SweepInstances("congest", corpus.size(), options, [&](std::size_t i) {
    const CorpusInstance& instance = corpus[i];
    const NodeId n = instance.graph.node_count();
    SuiteReport part;
    part.instances = 1;
    part.table_header = {"instance", "n", "log2n", "max_bits", "budget"};
    std::int64_t max_bits = 0;
    std::unique_ptr<MwisMechanism> mechanism;
    try {
      mechanism = std::make_unique<MwisMechanism>(instance.graph, model);
    } catch (const Error& e) {
      part.Add(MakeViolation("mwis", instance, instance.graph.weights(), e.what(), replay));
      return part;
    }
    for (const BidVector& bids : instance.bid_vectors) {
      try {
        const BinaryAllocation alloc = mechanism->Allocate(bids);
        const std::optional<PriceProtocolResult> prices = mechanism->PriceProtocol(bids, alloc);
        for (const sim::RoundTrace* trace : {&alloc.trace, &prices->trace}) {
          ++part.checks;
          max_bits = std::max(max_bits, trace->max_message_bits);
          if (auto failure = sim::AssertCongest(*trace, n, constant)) {
            part.Add(MakeViolation("mwis", instance, bids, *failure, replay));
          }
        }
      } catch (const Error& e) {
        part.Add(MakeViolation("mwis", instance, bids, e.what(), replay));
      }
    }
    const std::int64_t log_n = CeilLog2(std::max<std::int64_t>(n, 2));
    part.table.push_back({instance.label, std::to_string(n), std::to_string(log_n),
                          std::to_string(max_bits), std::to_string(constant * log_n)});
    return part;
  });
}

Rational ApproximationFactor(MechanismKind kind, int max_degree) {
  switch (kind) {
    case MechanismKind::kMwis: return Rational(std::max(max_degree, 1));
    case MechanismKind::kMwvc: return Rational(2);
    case MechanismKind::kMwds: return Harmonic(max_degree + 1);
    case MechanismKind::kSlot: break;
  }
  throw RangeError("slot assignment has no binary approximation factor");
}

SuiteReport CheckApprox(const Corpus& corpus, MechanismKind kind, const std::vector<Rational>& rates,
                        const SweepOptions& options) {
  std::string name(MechanismName(kind));
  if (kind == MechanismKind::kSlot) name += "[" + JoinRates(rates) + "]";
  std::string replay = "--mechanism " + std::string(MechanismName(kind));
  if (kind == MechanismKind::kSlot) replay += " --rates-text " + JoinRates(rates);
  return SweepInstances("approx", corpus.size(), options, [&](std::size_t i) {
    const CorpusInstance& instance = corpus[i];
    const WeightedGraph& g = instance.graph;
    const sim::ExecutionModel local = sim::ExecutionModel::Local();
    SuiteReport part;
    part.instances = 1;
    part.table_header = {"instance", "mechanism", "n", "D", "W", "vectors", "worst", "bound"};
    std::unique_ptr<BinaryMechanism> binary;
    std::unique_ptr<SlotMechanism> slot;
    if (kind == MechanismKind::kSlot) {
      slot = std::make_unique<SlotMechanism>(g, rates, local);
    } else {
      binary = MakeBinaryMechanism(kind, g, local);
    }
    std::optional<Rational> worst;
    Rational bound;
    for (const BidVector& bids : instance.bid_vectors) {
      const std::vector<Rational> weights = ToRationals(bids);
      RatioReport report;
      try {
        if (slot) {
          report = SlotVerifyRatio(g, weights, slot->Allocate(bids).slot, slot->rates());
        } else {
          const std::vector<char> selected = binary->Allocate(bids).selected;
          switch (kind) {
            case MechanismKind::kMwis: report = MwisVerifyRatio(g, weights, selected); break;
            case MechanismKind::kMwvc: report = MwvcVerifyRatio(g, weights, selected); break;
            default: report = MwdsVerifyRatio(g, weights, selected); break;
          }
        }
      } catch (const Error& e) {
        part.Add(MakeViolation(name, instance, bids, e.what(), replay));
        continue;
      }
      ++part.checks;
      bound = report.bound;
      if (!report.within_bound) {
        part.Add(MakeViolation(name, instance, bids,
                               "optimum " + localmech::ToString(report.optimum) + ", achieved " +
                                   localmech::ToString(report.achieved) + ", bound " +
                                   localmech::ToString(report.bound),
                               replay));
      } else if (!worst || report.ratio > *worst) {
        worst = report.ratio;
      }
    }
    part.table.push_back({instance.label, name, std::to_string(g.node_count()),
                          std::to_string(g.max_degree()), std::to_string(g.weight_bound()),
                          std::to_string(instance.bid_vectors.size()),
                          worst ? localmech::ToString(*worst) : "-", localmech::ToString(bound)});
    return part;
  });
}

SuiteReport CheckRounds(const Corpus& corpus, MechanismKind kind, const SweepOptions& options) {
  const std::string name(MechanismName(kind));
  const std::string replay = "--mechanism " + name +
                             (kind == MechanismKind::kSlot ? " --rates-text 1" : "");
  return SweepInstances("rounds", corpus.size(), options, [&](std::size_t i) {
    const CorpusInstance& instance = corpus[i];
    const WeightedGraph& g = instance.graph;
    const sim::ExecutionModel local = sim::ExecutionModel::Local();
    SuiteReport part;
    part.instances = 1;
    part.table_header = {"instance", "mechanism", "n", "D", "W", "max_rounds", "limit"};
    std::unique_ptr<BinaryMechanism> binary;
    std::unique_ptr<SlotMechanism> slot;
    if (kind == MechanismKind::kSlot) {
      slot = std::make_unique<SlotMechanism>(g, std::vector<Rational>{Rational(1)}, local);
    } else {
      binary = MakeBinaryMechanism(kind, g, local);
    }
    const std::int64_t limit = RoundLimit(kind, g.max_degree(), g.weight_bound());
    std::int64_t max_rounds = 0;
    std::optional<std::int64_t> first_rounds;
    for (const BidVector& bids : instance.bid_vectors) {
      std::int64_t rounds = 0;
      try {
        rounds = slot ? slot->Allocate(bids).trace.rounds : binary->Allocate(bids).trace.rounds;
      } catch (const Error& e) {
        part.Add(MakeViolation(name, instance, bids, e.what(), replay));
        continue;
      }
      ++part.checks;
      max_rounds = std::max(max_rounds, rounds);
      if (rounds > limit) {
        part.Add(MakeViolation(name, instance, bids,
                               std::to_string(rounds) + " rounds exceed the limit " +
                                   std::to_string(limit),
                               replay));
      }
      if (kind == MechanismKind::kMwvc) {
        if (!first_rounds) first_rounds = rounds;
        if (rounds != *first_rounds) {
          part.Add(MakeViolation(name, instance, bids,
                                 std::to_string(rounds) + " rounds differ from " +
                                     std::to_string(*first_rounds) + " on the first bid vector",
                                 replay));
        }
      }
    }
    part.table.push_back({instance.label, name, std::to_string(g.node_count()),
                          std::to_string(g.max_degree()), std::to_string(g.weight_bound()),
                          std::to_string(max_rounds), std::to_string(limit)});
    return part;
  });
}

SuiteReport CheckEquivalence(const Corpus& corpus, const SweepOptions& options) {
  const std::string replay = "--mechanism mwds";
  return SweepInstances("equivalence", corpus.size(), options, [&](std::size_t i) {
    const CorpusInstance& instance = corpus[i];
    SuiteReport part;
    part.instances = 1;
    auto compare = [&](const MwdsMechanism& mechanism, const CorpusInstance& swept,
                       const BidVector& bids) {
      try {
        const std::vector<char> adaptive = mechanism.Allocate(bids).selected;
        const std::vector<char> fixed =
            MwdsAllocateNonAdaptive(mechanism.graph(), bids, mechanism.two_hop_coloring());
        ++part.checks;
        if (adaptive != fixed) {
          std::string detail = "adaptive and non-adaptive sets differ:";
          for (NodeId v = 0; v < static_cast<NodeId>(bids.size()); ++v) {
            if (adaptive[v] != fixed[v]) detail += " " + std::to_string(v);
          }
          part.Add(MakeViolation("mwds", swept, bids, detail, replay));
        }
      } catch (const Error& e) {
        part.Add(MakeViolation("mwds", swept, bids, e.what(), replay));
      }
    };
    const sim::ExecutionModel local = sim::ExecutionModel::Local();
    const MwdsMechanism mechanism(instance.graph, local);
    for (const BidVector& bids : instance.bid_vectors) compare(mechanism, instance, bids);
    if (instance.exhaustive) {
      const NodeId n = instance.graph.node_count();
      for (Weight w = 1; w < instance.graph.weight_bound(); ++w) {
        CorpusInstance swept = instance;
        swept.graph = instance.graph.WithWeights(BidVector(n, 0), w);
        const MwdsMechanism reduced(swept.graph, local);
        ForEachBidVector(n, w, [&](const BidVector& bids) { compare(reduced, swept, bids); });
      }
    }
    return part;
  });
}

SuiteReport CheckDiscretizedTruthful(const Corpus& corpus, MechanismKind kind,
                                     const DiscretizationSweep& sweep,
                                     const SweepOptions& options) {
  const DiscretizationConfig config{sweep.epsilon, Rational(sweep.weight_cap)};
  const Weight grid = config.GridSize();
  const Objective objective = ObjectiveOf(kind);
  MechanismVariant variant;
  variant.kind = kind;
  const MechanismFactory factory = MakeFactory(variant);
  return SweepInstances("discretized-truthful", corpus.size(), options, [&](std::size_t i) {
    const CorpusInstance& instance = corpus[i];
    const NodeId n = instance.graph.node_count();
    SuiteReport part;
    part.instances = 1;
    const auto mechanism = factory(instance.graph.WithWeights(BidVector(n, 0), grid));
    OutcomeCache cache(*mechanism);
    for (const std::vector<Rational>& weights : SamplesFor(sweep, i, n)) {
      try {
        const BidVector truthful = Discretize(weights, config, objective);
        for (NodeId v = 0; v < n; ++v) {
          BidVector bids = truthful;
          auto utility = [&](Weight x) {
            bids[v] = x;
            const Outcome& outcome = cache.Run(bids);
            return mechanism->Utility(outcome.labels[v], weights[v]) +
                   outcome.payments[v] * sweep.epsilon;
          };
          const Rational truth = utility(truthful[v]);
          ++part.checks;
          if (truth < Rational(0)) {
            part.Add(MakeDiscretizedViolation(
                kind, instance, sweep, weights,
                "node " + std::to_string(v) + " has negative utility " + localmech::ToString(truth)));
          }
          for (Weight x = 0; x <= grid; ++x) {
            if (x == truthful[v]) continue;
            ++part.checks;
            const Rational deviation = utility(x);
            if (deviation > truth) {
              part.Add(MakeDiscretizedViolation(
                  kind, instance, sweep, weights,
                  "node " + std::to_string(v) + " gains by bidding grid index " +
                      std::to_string(x) + ": " + localmech::ToString(deviation) + " > " +
                      localmech::ToString(truth)));
            }
          }
        }
      } catch (const Error& e) {
        part.Add(MakeDiscretizedViolation(kind, instance, sweep, weights, e.what()));
      }
    }
    return part;
  });
}

SuiteReport CheckDiscretizedQuality(const Corpus& corpus, MechanismKind kind,
                                    const DiscretizationSweep& sweep,
                                    const SweepOptions& options) {
  const DiscretizationConfig config{sweep.epsilon, Rational(sweep.weight_cap)};
  const Weight grid = config.GridSize();
  const Objective objective = ObjectiveOf(kind);
  return SweepInstances("discretized-quality", corpus.size(), options, [&](std::size_t i) {
    const CorpusInstance& instance = corpus[i];
    const NodeId n = instance.graph.node_count();
    const WeightedGraph g = instance.graph.WithWeights(BidVector(n, 0), grid);
    SuiteReport part;
    part.instances = 1;
    const auto mechanism = MakeBinaryMechanism(kind, g, sim::ExecutionModel::Local());
    const Rational alpha = ApproximationFactor(kind, g.max_degree());
    const Rational keep = Rational(1) - sweep.epsilon;
    for (const std::vector<Rational>& weights : SamplesFor(sweep, i, n)) {
      try {
        const BidVector bids = Discretize(weights, config, objective);
        const std::vector<char> selected = mechanism->Allocate(bids).selected;
        const Rational achieved = SetWeight(weights, selected);
        Rational optimum;
        switch (kind) {
          case MechanismKind::kMwis: optimum = OptMwis(g, weights); break;
          case MechanismKind::kMwvc: optimum = OptMwvc(g, weights); break;
          default: optimum = OptMwds(g, weights); break;
        }
        ++part.checks;
        const bool within = objective == Objective::kMax ? keep * optimum <= alpha * achieved
                                                         : keep * achieved <= alpha * optimum;
        if (!within) {
          part.Add(MakeDiscretizedViolation(
              kind, instance, sweep, weights,
              "optimum " + localmech::ToString(optimum) + ", achieved " +
                  localmech::ToString(achieved) + ", alpha " + localmech::ToString(alpha) +
                  ", grid bids " + ToString(bids)));
        }
      } catch (const Error& e) {
        part.Add(MakeDiscretizedViolation(kind, instance, sweep, weights, e.what()));
      }
    }
    return part;
  });
}

}  // namespace localmech
