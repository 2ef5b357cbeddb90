#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "localmech/graph.hpp"
#include "localmech/mechanism.hpp"
#include "localmech/mwis.hpp"
#include "localmech/rational.hpp"
#include "localmech/sim.hpp"

namespace localmech {

enum class MechanismKind { kMwis, kMwvc, kMwds, kSlot };

std::string_view MechanismName(MechanismKind kind);
/// Accepts "mwis", "mwvc", "mwds" and "slot". Throws RangeError otherwise.
MechanismKind ParseMechanismKind(std::string_view name);
Objective ObjectiveOf(MechanismKind kind);

// Frozen regression constants. Round bounds are a * f(D, W) + b with f as
// named; the CONGEST constant c bounds every MWIS message by c * ceil(log2 n).
struct RoundBound {
  std::int64_t a = 0;
  std::int64_t b = 0;
};
inline constexpr RoundBound kMwisRoundBound{2, 1};  // (D+1)(W+1)
inline constexpr RoundBound kMwvcRoundBound{2, 1};  // D
inline constexpr RoundBound kMwdsRoundBound{4, 2};  // (D+1)^3 (W+1)
inline constexpr RoundBound kSlotRoundBound{1, 1};  // (D+1)(W+1)
inline constexpr std::int64_t kCongestConstant = 6;

std::int64_t RoundLimit(MechanismKind kind, int max_degree, Weight weight_bound);

/// Non-increasing schedules with five entries; RateSchedule truncates them
/// to D+1 slots.
std::vector<std::vector<Rational>> StandardRateSchedules();

// ---------------------------------------------------------------------------
// Corpus

enum class Scope { kQuick, kFull };

/// Accepts "quick" and "full". Throws RangeError otherwise.
Scope ParseScope(std::string_view name);

struct CorpusInstance {
  std::string label;
  /// Structure and weight bound; the weights are the first swept bid vector.
  WeightedGraph graph;
  std::vector<BidVector> bid_vectors;
  /// True when bid_vectors is all of {0..W}^n.
  bool exhaustive = false;
};

using Corpus = std::vector<CorpusInstance>;

struct CorpusOptions {
  NodeId exhaustive_max_n = 4;
  Weight exhaustive_weight_bound = 3;
  /// Labeled connected graphs on five nodes with sampled bid vectors.
  bool five_node_graphs = true;
  int five_node_samples = 2;
  int random_graphs = 100;
  NodeId random_max_n = 10;
  int random_max_degree = 4;
  Weight random_max_weight = 6;
  int random_samples = 2;
  std::uint64_t seed = 1;

  static CorpusOptions For(Scope scope);
};

Corpus BuildCorpus(const CorpusOptions& options);

/// The exhaustive part only (labeled connected graphs with n <= max_n).
Corpus ExhaustiveCorpus(NodeId max_n, Weight weight_bound);

// ---------------------------------------------------------------------------
// Mechanisms under test

/// Allocation labels are 0/1 for binary problems and 1-based slots for
/// slot assignment.
struct Outcome {
  std::vector<std::int64_t> labels;
  std::vector<Rational> payments;
};

class MechanismUnderTest {
 public:
  virtual ~MechanismUnderTest() = default;

  virtual std::string name() const = 0;
  virtual Objective objective() const = 0;
  virtual std::vector<std::int64_t> Allocate(const BidVector& bids) const = 0;
  virtual Outcome Run(const BidVector& bids) const = 0;
  /// u_v(o) for an allocation label and a true weight.
  virtual Rational Utility(std::int64_t label, const Rational& true_weight) const = 0;
  /// Quantity that must grow with the own bid for kMax and shrink for kMin:
  /// selection for binary problems, the slot rate for slot assignment.
  virtual Rational Rank(std::int64_t label) const = 0;
  /// Extra `localmech run` arguments reproducing this mechanism.
  virtual std::string ReplayArgs() const = 0;
};

using MechanismFactory = std::function<std::unique_ptr<MechanismUnderTest>(const WeightedGraph&)>;

enum class PaymentRule { kCritical, kFirstPrice };

struct MechanismVariant {
  MechanismKind kind = MechanismKind::kMwis;
  sim::ExecutionModel model = sim::ExecutionModel::Local();
  std::vector<Rational> rates;
  MwisOptions mwis;
  PaymentRule payment = PaymentRule::kCritical;
  PriceSource price_source = PriceSource::kAuto;
};

std::string VariantName(const MechanismVariant& variant);
/// Throws RangeError for kSlot.
std::unique_ptr<BinaryMechanism> MakeBinaryMechanism(MechanismKind kind, const WeightedGraph& g,
                                                     const sim::ExecutionModel& model,
                                                     const MwisOptions& mwis = {});
MechanismFactory MakeFactory(const MechanismVariant& variant);

/// Adapts any binary mechanism; `name` labels reports.
std::unique_ptr<MechanismUnderTest> WrapBinary(std::shared_ptr<const BinaryMechanism> mechanism,
                                               std::string name, PaymentRule payment,
                                               PriceSource price_source, std::string replay_args);

// ---------------------------------------------------------------------------
// Reports

struct Violation {
  std::string mechanism;
  std::string instance;
  /// The instance with the offending bid vector as weights.
  WeightedGraph graph;
  std::string detail;
  std::string replay;
};

struct SuiteReport {
  /// Violations beyond this many are counted but not recorded.
  static constexpr std::size_t kMaxRecorded = 50;

  std::string suite;
  std::int64_t instances = 0;
  std::int64_t checks = 0;
  std::int64_t violation_count = 0;
  std::vector<Violation> violations;
  std::vector<std::string> table_header;
  std::vector<std::vector<std::string>> table;

  bool passed() const { return violation_count == 0; }
  void Add(Violation violation);
  /// Appends `other`; merging is associative.
  void Merge(SuiteReport other);
};

/// One JSON record per recorded violation, then a summary record.
std::string ToJsonLines(const SuiteReport& report);
/// Aligned columns; empty when the report has no table.
std::string FormatTable(const SuiteReport& report);

std::string ReplayCommand(const WeightedGraph& g, std::string_view mechanism_args);

struct SweepOptions {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned workers = 0;
};

// ---------------------------------------------------------------------------
// Suites

/// For every swept context (v, b_-v), true weight t and deviation x in
/// {0..W}: U_v(t; bid t) >= U_v(t; bid x) and U_v(t; bid t) >= 0.
SuiteReport CheckTruthful(const Corpus& corpus, const MechanismFactory& factory,
                          const SweepOptions& options = {});

/// For every swept context the rank of v's label is monotone in v's bid.
SuiteReport CheckMonotone(const Corpus& corpus, const MechanismFactory& factory,
                          const SweepOptions& options = {});

/// MWIS price protocol against re-simulated critical prices for every
/// selected node.
SuiteReport CheckPrices(const Corpus& corpus, const sim::ExecutionModel& model,
                        const MwisOptions& mwis, const SweepOptions& options = {});

/// Every MWIS allocation and price-protocol message fits c * ceil(log2 n).
SuiteReport CheckCongestBudget(const Corpus& corpus, std::int64_t constant,
                               const SweepOptions& options = {});

/// Approximation bound against brute force for every swept bid vector;
/// `rates` is used by slot assignment only. Tabulates the worst ratio per
/// instance.
SuiteReport CheckApprox(const Corpus& corpus, MechanismKind kind, const std::vector<Rational>& rates,
                        const SweepOptions& options = {});

/// Allocation rounds within RoundLimit; for MWVC also identical across all
/// bid vectors of an instance.
SuiteReport CheckRounds(const Corpus& corpus, MechanismKind kind, const SweepOptions& options = {});

/// MWDS adaptive and non-adaptive allocations agree. Exhaustive instances
/// are additionally swept over every weight bound 1..W.
SuiteReport CheckEquivalence(const Corpus& corpus, const SweepOptions& options = {});

struct DiscretizationSweep {
  Rational epsilon{1};
  /// Integer cap W on true weights.
  Weight weight_cap = 3;
  /// True weights are drawn from {min_weight, min_weight + 1/d, ..., W}.
  Rational min_weight{0};
  std::int64_t denominator = 24;
  int samples_per_instance = 3;
  std::uint64_t seed = 1;
};

/// Real true weights are rounded onto the epsilon grid and the mechanism
/// runs on grid indices; payments are scaled back by epsilon. Every
/// grid deviation is checked for every node.
SuiteReport CheckDiscretizedTruthful(const Corpus& corpus, MechanismKind kind,
                                     const DiscretizationSweep& sweep,
                                     const SweepOptions& options = {});

/// Quality of the discretized allocation on the real weights: for kMax
/// (1 - eps) OPT <= alpha ALG, for kMin (1 - eps) ALG <= alpha OPT.
SuiteReport CheckDiscretizedQuality(const Corpus& corpus, MechanismKind kind,
                                    const DiscretizationSweep& sweep,
                                    const SweepOptions& options = {});

/// The approximation factor proved for `kind` on a graph of maximum degree
/// D (binary problems only).
Rational ApproximationFactor(MechanismKind kind, int max_degree);

}  // namespace localmech
