#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "localmech/graph.hpp"
#include "localmech/graph_io.hpp"
#include "localmech/mechanism.hpp"
#include "localmech/mwis.hpp"

namespace localmech {
namespace {

struct Invocation {
  int exit_code = -1;
  std::string out;
};

Invocation Cli(const std::string& args) {
  const std::string command = std::string(LOCALMECH_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  Invocation result;
  std::array<char, 4096> buffer{};
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) result.out.append(buffer.data(), n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("localmech_cli_" + std::string(
                                   ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& text) {
    const std::filesystem::path path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  std::filesystem::path dir_;
};

const char kPath151[] = "3 2 5\n0 1\n1 5\n2 1\n0 1\n1 2\n";

TEST_F(CliTest, GenPathHasTwoEdges) {
  const Invocation r = Cli("gen path --n 3 -W 5 --seed 1");
  ASSERT_EQ(r.exit_code, 0);
  const WeightedGraph g = ParseGraph(r.out);
  EXPECT_EQ(g.node_count(), 3);
  EXPECT_EQ(g.edge_count(), 2);
  EXPECT_EQ(g.weight_bound(), 5);
}

TEST_F(CliTest, GenOddRegularIsAnError) {
  EXPECT_EQ(Cli("gen regular --n 5 --d 3").exit_code, 3);
}

TEST_F(CliTest, GenGnpIsDeterministic) {
  const Invocation a = Cli("gen gnp --n 10 --p 0.3 --seed 7");
  const Invocation b = Cli("gen gnp --n 10 --p 0.3 --seed 7");
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(ParseGraph(a.out).Validate().has_value());
}

TEST_F(CliTest, GenEveryKind) {
  for (const char* args : {"cycle --n 5", "star --n 4", "grid --rows 2 --cols 3",
                           "regular --n 6 --d 3 --seed 2"}) {
    const Invocation r = Cli(std::string("gen ") + args + " -W 3");
    ASSERT_EQ(r.exit_code, 0) << args;
    EXPECT_FALSE(ParseGraph(r.out).Validate().has_value()) << args;
  }
  EXPECT_EQ(Cli("gen hypercube --n 4").exit_code, 2);
}

TEST_F(CliTest, RunMwisOnPathMatchesCriticalPrice) {
  const Invocation r = Cli("run --mechanism mwis --graph " + Write("g.txt", kPath151));
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["allocation"], nlohmann::json({0, 1, 0}));
  // Independent price: scan the middle bid through the re-simulated allocation.
  const WeightedGraph g = ParseGraph(kPath151);
  const MwisMechanism mech(g, sim::ExecutionModel::Local());
  BidVector bids = g.weights();
  Weight price = -1;
  for (Weight x = 0; x <= g.weight_bound() && price < 0; ++x) {
    bids[1] = x;
    if (mech.Allocate(bids).selected[1]) price = x;
  }
  EXPECT_EQ(j["payments"], nlohmann::json({0, -price, 0}));
  EXPECT_EQ(j["objective_value"], 5);
}

TEST_F(CliTest, RunSlotWithoutRatesIsUsageError) {
  EXPECT_EQ(Cli("run --mechanism slot --graph " + Write("g.txt", kPath151)).exit_code, 2);
}

TEST_F(CliTest, RunSlotWithRatesFile) {
  const std::string rates = Write("rates.txt", "# best first\n5\n2\n1\n");
  const Invocation r =
      Cli("run --mechanism slot --rates " + rates + " --graph " + Write("g.txt", kPath151));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["allocation"][1], 1);
}

TEST_F(CliTest, RunMwvcUnderCongestReportsBits) {
  const Invocation r =
      Cli("run --mechanism mwvc --model congest --graph " + Write("g.txt", kPath151));
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_GT(j["max_message_bits"].get<int>(), 0);
  EXPECT_EQ(j["allocation"], nlohmann::json({1, 0, 1}));
}

TEST_F(CliTest, RunWritesOutFile) {
  const std::string out = (dir_ / "result.json").string();
  ASSERT_EQ(Cli("run --mechanism mwds --out " + out + " --graph " + Write("g.txt", kPath151))
                .exit_code,
            0);
  std::ifstream in(out);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["mechanism"], "mwds");
}

TEST_F(CliTest, RunDiscretizedScalesPayments) {
  const Invocation r = Cli("run --mechanism mwds --epsilon 1/2 --true-weights 0.3,2.2,1.3 "
                           "--graph " + Write("g.txt", kPath151));
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["grid_bids"], nlohmann::json({1, 5, 3}));
  EXPECT_EQ(j["epsilon"], "1/2");
}

TEST_F(CliTest, ExitCodes) {
  const std::string g = Write("g.txt", kPath151);
  EXPECT_EQ(Cli("run --mechanism mwis --graph " + Write("bad.txt", "3 2 5\n0 1\n")).exit_code, 3);
  EXPECT_EQ(Cli("run --mechanism nope --graph " + g).exit_code, 2);
  EXPECT_EQ(Cli("run --mechanism mwis").exit_code, 2);
  EXPECT_EQ(Cli("run --mechanism mwis --max-rounds 2 --graph " + g).exit_code, 5);
  EXPECT_EQ(Cli("run --mechanism mwis --model congest --congest-constant 1 --graph " + g)
                .exit_code,
            4);
  EXPECT_EQ(Cli("verify nonsense").exit_code, 2);
}

TEST_F(CliTest, VerifySuitesPassOnQuickScope) {
  for (const char* suite : {"prices", "equivalence", "monotone", "rounds", "congest"}) {
    EXPECT_EQ(Cli(std::string("verify ") + suite).exit_code, 0) << suite;
  }
}

TEST_F(CliTest, VerifyApproxPrintsRatioTable) {
  const Invocation r = Cli("verify approx --mechanism mwis");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("worst"), std::string::npos);
  EXPECT_NE(r.out.find("connected-n3-0"), std::string::npos);
}

TEST_F(CliTest, VerifyIsByteIdentical) {
  const std::string a = (dir_ / "a.jsonl").string();
  const std::string b = (dir_ / "b.jsonl").string();
  const Invocation first = Cli("verify truthful --mechanism mwds --seed 3 --out " + a);
  const Invocation second = Cli("verify truthful --mechanism mwds --seed 3 --workers 2 --out " + b);
  ASSERT_EQ(first.exit_code, 0);
  EXPECT_EQ(first.out, second.out);
  std::ifstream fa(a), fb(b);
  const std::string ta((std::istreambuf_iterator<char>(fa)), {});
  const std::string tb((std::istreambuf_iterator<char>(fb)), {});
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, tb);
}

TEST_F(CliTest, VerifyMutationDetectsPlantedVariants) {
  EXPECT_EQ(Cli("verify mutation").exit_code, 0);
}

}  // namespace
}  // namespace localmech
