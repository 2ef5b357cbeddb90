// localmech: run mechanisms, generate graphs and execute verification suites.
//
// Exit codes: 0 ok, 2 usage, 3 input, 4 violation, 5 nontermination.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "localmech/corpus.hpp"
#include "localmech/errors.hpp"
#include "localmech/graph.hpp"
#include "localmech/graph_io.hpp"
#include "localmech/mechanism.hpp"
#include "localmech/optimum.hpp"
#include "localmech/oracle.hpp"
#include "localmech/rational.hpp"
#include "localmech/slot.hpp"

namespace {

using namespace localmech;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitViolation = 4;
constexpr int kExitNonTermination = 5;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RangeError("cannot write '" + path + "'");
  out << text;
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t\n"));
    item.erase(item.find_last_not_of(" \t\n") + 1);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<Rational> ParseRateList(const std::string& text) {
  std::string lines;
  for (const std::string& item : SplitList(text)) lines += item + '\n';
  return ParseRates(lines);
}

// ---------------------------------------------------------------------------
// run

struct RunConfig {
  std::string mechanism;
  std::string graph_path;
  std::string graph_text;
  std::string model = "local";
  std::int64_t congest_constant = kCongestConstant;
  std::string rates_path;
  std::string rates_text;
  std::string epsilon;
  std::string true_weights;
  std::uint64_t seed = 1;
  std::string out;
  std::optional<std::int64_t> max_rounds;
};

WeightedGraph LoadGraph(const std::string& path, const std::string& text) {
  if (!path.empty() && !text.empty()) throw UsageError("--graph and --graph-text are exclusive");
  if (!text.empty()) return ParseGraph(text);
  if (path.empty()) throw UsageError("one of --graph or --graph-text is required");
  return ReadGraphFile(path);
}

sim::ExecutionModel ModelFor(const RunConfig& config) {
  sim::ExecutionModel model;
  if (config.model == "local") {
    model = sim::ExecutionModel::Local();
  } else if (config.model == "congest") {
    if (config.congest_constant <= 0) throw UsageError("--congest-constant must be positive");
    model = sim::ExecutionModel::Congest(config.congest_constant);
  } else {
    throw UsageError("--model must be local or congest");
  }
  if (config.max_rounds) {
    if (*config.max_rounds <= 0) throw UsageError("--max-rounds must be positive");
    model.max_rounds = config.max_rounds;
  }
  return model;
}

std::vector<Rational> LoadRates(const std::string& path, const std::string& text) {
  if (!path.empty() && !text.empty()) throw UsageError("--rates and --rates-text are exclusive");
  if (!text.empty()) return ParseRateList(text);
  if (!path.empty()) return ReadRatesFile(path);
  return {};
}

int CmdRun(const RunConfig& config) {
  const MechanismKind kind = [&] {
    try {
      return ParseMechanismKind(config.mechanism);
    } catch (const RangeError& e) {
      throw UsageError(e.what());
    }
  }();
  WeightedGraph g = LoadGraph(config.graph_path, config.graph_text);
  sim::ExecutionModel model = ModelFor(config);
  // MWVC, MWDS and slot runs under CONGEST are accounted but not enforced.
  if (model.is_congest() && kind != MechanismKind::kMwis) model = model.AccountingOnly();

  const std::vector<Rational> rates = LoadRates(config.rates_path, config.rates_text);
  if (kind == MechanismKind::kSlot && rates.empty()) {
    throw UsageError("slot assignment requires --rates or --rates-text");
  }
  if (kind != MechanismKind::kSlot && !rates.empty()) {
    throw UsageError("--rates applies to slot assignment only");
  }
  if (!config.true_weights.empty() && config.epsilon.empty()) {
    throw UsageError("--true-weights requires --epsilon");
  }

  nlohmann::ordered_json out;
  if (config.epsilon.empty()) {
    MechanismResult result;
    if (kind == MechanismKind::kSlot) {
      result = SlotMechanism(g, rates, model).Run(g.weights());
    } else {
      result = RunMechanism(*MakeBinaryMechanism(kind, g, model), g.weights());
    }
    out = nlohmann::ordered_json::parse(ToJson(result));
  } else {
    if (kind == MechanismKind::kSlot) throw UsageError("--epsilon applies to binary mechanisms");
    const Rational epsilon = ParseRational(config.epsilon);
    const DiscretizationConfig discretization{epsilon, Rational(g.weight_bound())};
    const Weight grid = discretization.GridSize();
    std::vector<Rational> weights;
    if (config.true_weights.empty()) {
      weights = ToRationals(g.weights());
    } else {
      for (const std::string& item : SplitList(config.true_weights)) {
        weights.push_back(ParseRational(item));
      }
      if (static_cast<NodeId>(weights.size()) != g.node_count()) {
        throw RangeError("--true-weights needs " + std::to_string(g.node_count()) + " values");
      }
    }
    const Objective objective = ObjectiveOf(kind);
    const BidVector bids = Discretize(weights, discretization, objective);
    const WeightedGraph on_grid = g.WithWeights(bids, grid);
    MechanismResult result = RunMechanism(*MakeBinaryMechanism(kind, on_grid, model), bids);
    result.objective_value = Rational(0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      result.payments[v] *= epsilon;
      result.objective_value +=
          TotalUtility(objective, result.allocation[v] != 0, weights[v], Rational(0));
    }
    out = nlohmann::ordered_json::parse(ToJson(result));
    out["epsilon"] = ToString(epsilon);
    out["grid_bids"] = bids;
  }
  WriteOutput(config.out, out.dump() + '\n');
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gen

struct GenConfig {
  std::string kind;
  NodeId n = 0;
  int degree = 0;
  double p = 0.5;
  NodeId rows = 0;
  NodeId cols = 0;
  Weight weight_bound = 1;
  std::uint64_t seed = 1;
  std::string out;
};

int CmdGen(const GenConfig& config) {
  auto need_n = [&](NodeId min) {
    if (config.n < min) throw UsageError("--n must be at least " + std::to_string(min));
  };
  WeightedGraph structure;
  if (config.kind == "path") {
    need_n(1);
    structure = PathGraph(config.n);
  } else if (config.kind == "cycle") {
    need_n(3);
    structure = CycleGraph(config.n);
  } else if (config.kind == "star") {
    need_n(1);
    structure = StarGraph(config.n - 1);
  } else if (config.kind == "grid") {
    if (config.rows < 1 || config.cols < 1) throw UsageError("grid requires --rows and --cols");
    structure = GridGraph(config.rows, config.cols);
  } else if (config.kind == "gnp") {
    need_n(1);
    if (config.p < 0 || config.p > 1) throw UsageError("--p must lie in [0, 1]");
    structure = GnpGraph(config.n, config.p, config.seed);
  } else if (config.kind == "regular") {
    need_n(1);
    structure = RandomRegularGraph(config.n, config.degree, config.seed);
  } else {
    throw UsageError("unknown graph kind '" + config.kind + "'");
  }
  if (config.weight_bound < 0) throw UsageError("--weight-bound must be non-negative");
  Rng rng(config.seed);
  const WeightedGraph g = WithRandomWeights(structure, config.weight_bound, rng);
  RequireValid(g);
  WriteOutput(config.out, FormatGraph(g));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyConfig {
  std::string suite;
  std::string mechanism;
  std::string scope = "quick";
  std::uint64_t seed = 1;
  std::string out;
  unsigned workers = 0;
  std::string rates_path;
  std::string rates_text;
  std::string epsilon;
};

class VerifyRun {
 public:
  explicit VerifyRun(const VerifyConfig& config) : config_(config) {}

  void Add(const std::string& label, const SuiteReport& report, bool show_table) {
    std::cout << (report.passed() ? "ok   " : "FAIL ") << report.suite << ' ' << label
              << "  instances=" << report.instances << " checks=" << report.checks
              << " violations=" << report.violation_count << '\n';
    if (show_table) std::cout << FormatTable(report);
    for (const Violation& v : report.violations) {
      std::cout << "  " << v.instance << ": " << v.detail << "\n    replay: " << v.replay << '\n';
    }
    jsonl_ += ToJsonLines(report);
    passed_ = passed_ && report.passed();
  }

  /// A planted faulty variant must produce at least one violation.
  void ExpectCaught(const std::string& label, const SuiteReport& report) {
    const bool caught = !report.passed();
    std::cout << (caught ? "ok   " : "FAIL ") << report.suite << ' ' << label
              << "  violations=" << report.violation_count << (caught ? "" : " (undetected)")
              << '\n';
    nlohmann::ordered_json record;
    record["suite"] = "mutation";
    record["variant"] = label;
    record["detected_by"] = report.suite;
    record["violations"] = report.violation_count;
    jsonl_ += record.dump() + '\n';
    passed_ = passed_ && caught;
  }

  int Finish() const {
    if (!config_.out.empty()) WriteOutput(config_.out, jsonl_);
    return passed_ ? kExitOk : kExitViolation;
  }

 private:
  const VerifyConfig& config_;
  std::string jsonl_;
  bool passed_ = true;
};

std::vector<MechanismKind> SelectedKinds(const VerifyConfig& config,
                                         std::vector<MechanismKind> defaults) {
  if (config.mechanism.empty()) return defaults;
  try {
    const MechanismKind kind = ParseMechanismKind(config.mechanism);
    if (std::find(defaults.begin(), defaults.end(), kind) == defaults.end()) {
      throw UsageError("suite '" + config.suite + "' does not apply to " + config.mechanism);
    }
    return {kind};
  } catch (const RangeError& e) {
    throw UsageError(e.what());
  }
}

const std::vector<MechanismKind> kAllKinds = {MechanismKind::kMwis, MechanismKind::kMwvc,
                                              MechanismKind::kMwds, MechanismKind::kSlot};
const std::vector<MechanismKind> kBinaryKinds = {MechanismKind::kMwis, MechanismKind::kMwvc,
                                                 MechanismKind::kMwds};

int CmdVerify(const VerifyConfig& config) {
  const Scope scope = [&] {
    try {
      return ParseScope(config.scope);
    } catch (const RangeError& e) {
      throw UsageError(e.what());
    }
  }();
  CorpusOptions corpus_options = CorpusOptions::For(scope);
  corpus_options.seed = config.seed;
  const Corpus corpus = BuildCorpus(corpus_options);
  const SweepOptions sweep{config.workers};

  std::vector<std::vector<Rational>> schedules = StandardRateSchedules();
  if (!config.rates_path.empty() || !config.rates_text.empty()) {
    schedules = {LoadRates(config.rates_path, config.rates_text)};
  }
  auto variants = [&](const std::vector<MechanismKind>& kinds) {
    std::vector<MechanismVariant> out;
    for (MechanismKind kind : kinds) {
      MechanismVariant variant;
      variant.kind = kind;
      if (kind != MechanismKind::kSlot) {
        out.push_back(variant);
        continue;
      }
      for (const auto& rates : schedules) {
        variant.rates = rates;
        out.push_back(variant);
      }
    }
    return out;
  };

  VerifyRun run(config);
  const std::string& suite = config.suite;
  if (suite == "truthful" || suite == "monotone") {
    for (const MechanismVariant& variant : variants(SelectedKinds(config, kAllKinds))) {
      const SuiteReport report = suite == "truthful"
                                     ? CheckTruthful(corpus, MakeFactory(variant), sweep)
                                     : CheckMonotone(corpus, MakeFactory(variant), sweep);
      run.Add(VariantName(variant), report, false);
    }
  } else if (suite == "prices") {
    SelectedKinds(config, {MechanismKind::kMwis});
    run.Add("mwis", CheckPrices(corpus, sim::ExecutionModel::Congest(kCongestConstant), {}, sweep),
            false);
  } else if (suite == "congest") {
    SelectedKinds(config, {MechanismKind::kMwis});
    run.Add("mwis", CheckCongestBudget(corpus, kCongestConstant, sweep), true);
  } else if (suite == "approx") {
    for (MechanismKind kind : SelectedKinds(config, kAllKinds)) {
      if (kind != MechanismKind::kSlot) {
        run.Add(std::string(MechanismName(kind)), CheckApprox(corpus, kind, {}, sweep), true);
        continue;
      }
      for (const auto& rates : schedules) {
        MechanismVariant variant;
        variant.kind = kind;
        variant.rates = rates;
        run.Add(VariantName(variant), CheckApprox(corpus, kind, rates, sweep), true);
      }
    }
  } else if (suite == "rounds") {
    for (MechanismKind kind : SelectedKinds(config, kAllKinds)) {
      run.Add(std::string(MechanismName(kind)), CheckRounds(corpus, kind, sweep), true);
    }
  } else if (suite == "equivalence") {
    SelectedKinds(config, {MechanismKind::kMwds});
    run.Add("mwds", CheckEquivalence(corpus, sweep), false);
  } else if (suite == "discretization") {
    std::vector<Rational> epsilons = {Rational(1), Rational(1, 2), Rational(1, 4)};
    if (!config.epsilon.empty()) epsilons = {ParseRational(config.epsilon)};
    for (MechanismKind kind : SelectedKinds(config, kBinaryKinds)) {
      for (const Rational& epsilon : epsilons) {
        DiscretizationSweep discretization;
        discretization.epsilon = epsilon;
        discretization.seed = config.seed;
        const std::string label =
            std::string(MechanismName(kind)) + "[eps=" + ToString(epsilon) + "]";
        run.Add(label, CheckDiscretizedTruthful(corpus, kind, discretization, sweep), false);
        run.Add(label, CheckDiscretizedQuality(corpus, kind, discretization, sweep), false);
      }
    }
  } else if (suite == "mutation") {
    for (MechanismKind kind : kBinaryKinds) {
      MechanismVariant variant;
      variant.kind = kind;
      variant.payment = PaymentRule::kFirstPrice;
      run.ExpectCaught(VariantName(variant), CheckTruthful(corpus, MakeFactory(variant), sweep));
    }
    MwisOptions reversed;
    reversed.tie_rule = TieRule::kLargerColorWins;
    run.ExpectCaught("mwis[larger-colour-tie]",
                     CheckPrices(corpus, sim::ExecutionModel::Local(), reversed, sweep));
    MwisOptions unblocked;
    unblocked.check_blocking = false;
    run.ExpectCaught("mwis[no-blocking-check]",
                     CheckPrices(corpus, sim::ExecutionModel::Local(), unblocked, sweep));
  } else {
    throw UsageError("unknown suite '" + suite + "'");
  }
  return run.Finish();
}

int Dispatch(int argc, char** argv) {
  CLI::App app{"Truthful distributed mechanisms on a LOCAL/CONGEST simulator"};
  app.require_subcommand(1);

  RunConfig run_config;
  CLI::App* run = app.add_subcommand("run", "Run a mechanism on a graph and print its result");
  run->add_option("--mechanism", run_config.mechanism, "mwis | mwvc | mwds | slot")->required();
  run->add_option("--graph", run_config.graph_path, "Graph file");
  run->add_option("--graph-text", run_config.graph_text, "Graph given inline");
  run->add_option("--model", run_config.model, "local | congest");
  run->add_option("--congest-constant", run_config.congest_constant,
                  "c in the c*ceil(log2 n) message budget");
  run->add_option("--rates", run_config.rates_path, "Slot rates file");
  run->add_option("--rates-text", run_config.rates_text, "Slot rates, comma separated");
  run->add_option("--epsilon", run_config.epsilon, "Discretization step (rational)");
  run->add_option("--true-weights", run_config.true_weights,
                  "Real weights for --epsilon, comma separated");
  run->add_option("--seed", run_config.seed, "Seed (runs are deterministic)");
  run->add_option("--out", run_config.out, "Output file (default stdout)");
  run->add_option("--max-rounds", run_config.max_rounds, "Round cap per simulation");

  GenConfig gen_config;
  CLI::App* gen = app.add_subcommand("gen", "Generate a weighted graph file");
  gen->add_option("kind", gen_config.kind, "path | cycle | star | grid | gnp | regular")
      ->required();
  gen->add_option("--n", gen_config.n, "Node count");
  gen->add_option("--d", gen_config.degree, "Degree for regular graphs");
  gen->add_option("--p", gen_config.p, "Edge probability for gnp");
  gen->add_option("--rows", gen_config.rows, "Grid rows");
  gen->add_option("--cols", gen_config.cols, "Grid columns");
  gen->add_option("--weight-bound,-W", gen_config.weight_bound, "Weights drawn from {0..W}");
  gen->add_option("--seed", gen_config.seed, "Seed");
  gen->add_option("--out", gen_config.out, "Output file (default stdout)");

  VerifyConfig verify_config;
  CLI::App* verify = app.add_subcommand("verify", "Run a verification suite");
  verify
      ->add_option("suite", verify_config.suite,
                   "truthful | monotone | prices | approx | rounds | equivalence | congest | "
                   "discretization | mutation")
      ->required();
  verify->add_option("--mechanism", verify_config.mechanism, "Restrict to one mechanism");
  verify->add_option("--scope", verify_config.scope, "quick | full");
  verify->add_option("--seed", verify_config.seed, "Corpus seed");
  verify->add_option("--out", verify_config.out, "JSON-lines report file");
  verify->add_option("--workers", verify_config.workers, "Worker threads (0 = all cores)");
  verify->add_option("--rates", verify_config.rates_path, "Slot rates file");
  verify->add_option("--rates-text", verify_config.rates_text, "Slot rates, comma separated");
  verify->add_option("--epsilon", verify_config.epsilon, "Single discretization step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (run->parsed()) return CmdRun(run_config);
  if (gen->parsed()) return CmdGen(gen_config);
  return CmdVerify(verify_config);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Dispatch(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NonTermination& e) {
    std::cerr << "nontermination: " << e.what() << '\n';
    return kExitNonTermination;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const RangeError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const CapExceeded& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "violation: " << e.what() << '\n';
    return kExitViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}
