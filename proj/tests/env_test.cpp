#include <gtest/gtest.h>

#include "rlverif/agents.hpp"
#include "rlverif/dut_axi.hpp"
#include "rlverif/dut_rle.hpp"
#include "rlverif/env.hpp"
#include "rlverif/episode_log.hpp"
#include "rlverif/errors.hpp"
#include "test_util.hpp"

namespace rlv {
namespace {

std::vector<EventSpec> rle_events(std::vector<double> m) {
  auto ev = make_events(rle::RleDut().event_names());
  for (std::size_t i = 0; i < m.size(); ++i) ev[i].multiplier = m[i];
  return ev;
}

Environment rle_env(std::vector<double> m = {0, 0, 0, 1}) {
  return Environment(std::make_unique<rle::RleDut>(), rle_events(std::move(m)));
}

TEST(EnvironmentTest, EventListMustMatchDut) {
  auto ev = rle_events({0, 0, 0, 1});
  ev.pop_back();
  EXPECT_THROW(Environment(std::make_unique<rle::RleDut>(), ev), ContractViolation);
  auto renamed = rle_events({});
  renamed[2].name = "other";
  EXPECT_THROW(Environment(std::make_unique<rle::RleDut>(), renamed), ContractViolation);
}

TEST(EnvironmentTest, ResetIsDeterministicAndZeroed) {
  Environment env = rle_env();
  const Observation a = env.reset(9);
  EXPECT_EQ(a, env.reset(9));
  EXPECT_EQ(a.state, (std::vector<double>{0, 0, 0, 0}));
}

TEST(EnvironmentTest, StepRewardIsPartialCountCount) {
  Environment env = rle_env();
  env.reset(1);
  const StepResult r = env.step(Action{{0.4, 6, 300}});
  EXPECT_EQ(r.reward, static_cast<double>(r.counts.counts[rle::partial_count]));
  EXPECT_TRUE(r.done);
}

TEST(EnvironmentTest, ZeroMultipliersGiveZeroReward) {
  Environment env = rle_env({0, 0, 0, 0});
  for (std::uint64_t s = 0; s < 20; ++s) {
    env.reset(s);
    EXPECT_EQ(env.step(Action{{0.9, 7, 1000}}).reward, 0.0);
  }
}

TEST(EnvironmentTest, ReplayIsBitIdentical) {
  Environment a = rle_env({1, -2, 0.5, 3});
  Environment b = rle_env({1, -2, 0.5, 3});
  for (std::uint64_t s = 0; s < 50; ++s) {
    a.reset(s);
    b.reset(s);
    const Action act{{0.05 * static_cast<double>(s % 20), static_cast<double>(1 + s % 8), 500}};
    EXPECT_EQ(a.step(act), b.step(act));
  }
}

TEST(EnvironmentTest, ProtocolErrors) {
  Environment env = rle_env();
  EXPECT_THROW(env.step(Action{{0.4, 6, 300}}), ProtocolError);
  env.reset(0);
  EXPECT_THROW(env.step(Action{{0.4, 9, 300}}), ValidationError);
  EXPECT_FALSE(env.done());
  EXPECT_EQ(env.steps_taken(), 0u);
  env.step(Action{{0.4, 6, 300}});
  EXPECT_THROW(env.step(Action{{0.4, 6, 300}}), ProtocolError);
}

TEST(EnvironmentTest, ResetMidEpisodeRestarts) {
  Environment env(std::make_unique<rle::RleDut>(), rle_events({}), 3);
  env.reset(0);
  env.step(Action{{0.4, 6, 300}});
  EXPECT_EQ(env.steps_taken(), 1u);
  EXPECT_FALSE(env.done());
  env.reset(0);
  EXPECT_EQ(env.steps_taken(), 0u);
}

// Counts its calls so the campaign loop can be inspected.
class SpyAgent final : public Agent {
 public:
  explicit SpyAgent(ActionSpace space) : inner_(std::move(space)) {}
  Action propose(Rng& rng) override {
    ++proposed;
    return inner_.propose(rng);
  }
  void observe(const Action& a, double r) override { observed.emplace_back(a, r); }
  nlohmann::json snapshot() const override { return {}; }
  std::string kind() const override { return "spy"; }

  int proposed = 0;
  std::vector<std::pair<Action, double>> observed;

 private:
  RandomAgent inner_;
};

TEST(RunCampaignTest, OneEpisodeOneRecord) {
  Environment env = rle_env();
  RandomAgent agent(env.action_space());
  MemoryEpisodeLog log;
  const auto cov = run_campaign(env, agent, 1, 3, log);
  ASSERT_EQ(log.records.size(), 1u);
  EXPECT_EQ(cov.episodes, 1u);
  EXPECT_EQ(cov.totals, log.records[0].counts.counts);
  EXPECT_THROW(run_campaign(env, agent, 0, 3, log), ContractViolation);
}

TEST(RunCampaignTest, AgentObservesEveryEpisode) {
  Environment env = rle_env();
  SpyAgent agent(env.action_space());
  MemoryEpisodeLog log;
  run_campaign(env, agent, 40, 1, log);
  ASSERT_EQ(agent.proposed, 40);
  ASSERT_EQ(agent.observed.size(), 40u);
  for (std::size_t i = 0; i < 40; ++i) {
    EXPECT_EQ(agent.observed[i].first, log.records[i].action);
    EXPECT_EQ(agent.observed[i].second, log.records[i].reward);
    EXPECT_EQ(log.records[i].episode, i);
  }
}

TEST(RunCampaignTest, TotalsEqualCsvColumnSums) {
  testing::TempDir tmp;
  Environment env = rle_env();
  RandomAgent agent(env.action_space());
  CumulativeCoverage cov;
  {
    CsvEpisodeLog csv(tmp / "episodes.csv", env.action_space().names(), rle::RleDut().event_names());
    cov = run_campaign(env, agent, 1000, 7, csv);
  }
  const EpisodeTable t = read_episode_table(tmp / "episodes.csv");
  ASSERT_EQ(t.rows.size(), 1000u);
  const auto names = rle::RleDut().event_names();
  for (std::size_t e = 0; e < names.size(); ++e) {
    double sum = 0.0;
    for (const auto& row : t.rows) sum += row[t.column(names[e])];
    EXPECT_EQ(static_cast<std::uint64_t>(sum), cov.totals[e]) << names[e];
  }
}

TEST(RunCampaignTest, SameSeedSameCsv) {
  testing::TempDir tmp;
  for (const char* name : {"a.csv", "b.csv"}) {
    Environment env = rle_env();
    CemAgent agent(env.action_space());
    CsvEpisodeLog csv(tmp / name, env.action_space().names(), rle::RleDut().event_names());
    run_campaign(env, agent, 300, 21, csv);
  }
  EXPECT_EQ(testing::slurp(tmp / "a.csv"), testing::slurp(tmp / "b.csv"));
}

TEST(RunCampaignTest, PartialCountsOnlyForNonDivisorWidths) {
  Environment env = rle_env();
  RandomAgent agent(env.action_space());
  MemoryEpisodeLog log;
  run_campaign(env, agent, 1000, 11, log);
  std::uint64_t nondivisor_total = 0;
  for (const auto& r : log.records) {
    const double cw = r.action.values[1];
    const auto e3 = r.counts.counts[rle::partial_count];
    if (cw == 1 || cw == 2 || cw == 4 || cw == 8) EXPECT_EQ(e3, 0u) << "episode " << r.episode;
    else nondivisor_total += e3;
  }
  EXPECT_GT(nondivisor_total, 0u);
}

TEST(RunCampaignTest, EpisodesReplayInIsolation) {
  Environment env = rle_env();
  RandomAgent agent(env.action_space());
  MemoryEpisodeLog log;
  run_campaign(env, agent, 100, 5, log);
  rle::RleDut dut;
  for (const auto& r : log.records) {
    dut.reset(episode_seed(5, r.episode, Stream::dut));
    EXPECT_EQ(dut.step(r.action).counts, r.counts);
  }
}

// Fails on a chosen step to exercise the abort path.
class FaultyDut final : public DutModel {
 public:
  explicit FaultyDut(int fail_at) : fail_at_(fail_at) {}
  const ActionSpace& action_space() const override { return inner_.action_space(); }
  std::vector<std::string> event_names() const override { return inner_.event_names(); }
  Observation reset(std::uint64_t seed) override { return inner_.reset(seed); }
  DutStepOutput step(const Action& a) override {
    if (++steps_ == fail_at_) throw Error("simulator crashed");
    return inner_.step(a);
  }

 private:
  rle::RleDut inner_;
  int fail_at_;
  int steps_ = 0;
};

TEST(RunCampaignTest, FailureFlushesPartialLog) {
  testing::TempDir tmp;
  Environment env(std::make_unique<FaultyDut>(6), rle_events({0, 0, 0, 1}));
  RandomAgent agent(env.action_space());
  CsvEpisodeLog csv(tmp / "partial.csv", env.action_space().names(), rle::RleDut().event_names());
  EXPECT_THROW(run_campaign(env, agent, 100, 1, csv), Error);
  EXPECT_EQ(read_episode_table(tmp / "partial.csv").rows.size(), 5u);
}

TEST(RunCampaignTest, MultiStepEpisodesLogEveryStep) {
  Environment env(std::make_unique<axi::AxiDut>(), make_events(axi::AxiDut().event_names()), 3);
  SpyAgent agent(env.action_space());
  MemoryEpisodeLog log;
  const auto cov = run_campaign(env, agent, 4, 2, log);
  EXPECT_EQ(log.records.size(), 12u);
  EXPECT_EQ(cov.episodes, 12u);
  EXPECT_EQ(log.records[11].episode, 3u);
  EXPECT_EQ(env.dut().scoreboard_mismatches(), 0u);
}

TEST(EpisodeSeedTest, StreamsAndEpisodesDiffer) {
  EXPECT_NE(episode_seed(1, 0, Stream::dut), episode_seed(1, 0, Stream::agent));
  EXPECT_NE(episode_seed(1, 0, Stream::dut), episode_seed(1, 1, Stream::dut));
  EXPECT_NE(episode_seed(1, 0, Stream::dut), episode_seed(2, 0, Stream::dut));
  EXPECT_EQ(episode_seed(1, 5, Stream::agent), episode_seed(1, 5, Stream::agent));
}

}  // namespace
}  // namespace rlv
