#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "rlverif/dut_axi.hpp"
#include "rlverif/errors.hpp"

namespace rlv::axi {
namespace {

TEST(AxiDecodeTest, ActionToRange) {
  const AxiConfig cfg;
  EXPECT_EQ(decode_action(Action{{7, 3}}, cfg), (AddressRange{0x3000, 0x8000}));
  EXPECT_EQ(decode_action(Action{{4, 4}}, cfg), (AddressRange{0x4000, 0x5000}));
  EXPECT_EQ(decode_action(Action{{0, 9}}, cfg), (AddressRange{0x0000, 0xA000}));
}

TEST(AxiDecodeTest, AddressToSlave) {
  const AxiConfig cfg;
  EXPECT_EQ(decode_address(0x4800, cfg), 4u);
  EXPECT_EQ(decode_address(0x0, cfg), 0u);
  EXPECT_EQ(decode_address(0x9FFF, cfg), 9u);
  EXPECT_THROW(decode_address(0xA000, cfg), DecodeError);
}

TEST(SlaveFifoTest, FlagsTrackOccupancy) {
  SlaveFifo f(2);
  EXPECT_TRUE(f.not_full());
  EXPECT_FALSE(f.not_empty());
  f.enqueue({1, 0, 0});
  f.enqueue({2, 0, 1});
  EXPECT_FALSE(f.not_full());
  EXPECT_THROW(f.enqueue({3, 0, 0}), ContractViolation);
  EXPECT_EQ(f.dequeue().id, 1u);
  EXPECT_EQ(f.dequeue().id, 2u);
  EXPECT_THROW(f.dequeue(), ContractViolation);
}

// Every request of a singleton range lands on one slave, so the occupancy
// sequence is deterministic and can be replayed with a bare counter.
std::uint64_t singleton_full_cycles(const AxiConfig& cfg) {
  std::size_t occ = 0;
  std::uint64_t full = 0;
  for (std::size_t c = 0; c < cfg.cycles_per_step; ++c) {
    occ = std::min(occ + kMasters, cfg.fifo_depth);
    if (c % cfg.drain_period == 0 && occ > 0) --occ;
    if (occ == cfg.fifo_depth) ++full;
  }
  return full;
}

TEST(CrossbarTest, SingletonRangeSaturatesOnlyItsSlave) {
  const AxiConfig cfg;
  ASSERT_EQ(singleton_full_cycles(cfg), 65u);  // cycles 2..99 not divisible by 3
  Crossbar xbar(cfg);
  Rng rng(1);
  const StepOutcome out = xbar.step(decode_action(Action{{4, 4}}, cfg), rng);
  for (std::size_t s = 0; s < kSlaves; ++s) {
    EXPECT_EQ(out.counts.counts[s], s == 4 ? 65u : 0u) << s;
  }
}

TEST(CrossbarTest, OracleAgreesUnderOverrides) {
  for (std::size_t depth : {1u, 2u, 6u}) {
    for (std::size_t drain : {1u, 2u, 5u}) {
      AxiConfig cfg;
      cfg.fifo_depth = depth;
      cfg.drain_period = drain;
      cfg.cycles_per_step = 57;
      Crossbar xbar(cfg);
      Rng rng(9);
      EXPECT_EQ(xbar.step(decode_action(Action{{2, 2}}, cfg), rng).counts.counts[2], singleton_full_cycles(cfg));
    }
  }
}

TEST(CrossbarTest, FullRangeRarelySaturates) {
  // Per-slave influx 2/10 per cycle against a drain of 1/3: queues stay short.
  const AxiConfig cfg;
  std::vector<std::uint64_t> sums;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Crossbar xbar(cfg);
    Rng rng(seed);
    const auto out = xbar.step(decode_action(Action{{0, 9}}, cfg), rng);
    sums.push_back(std::accumulate(out.counts.counts.begin(), out.counts.counts.end(), std::uint64_t{0}));
  }
  std::nth_element(sums.begin(), sums.begin() + 50, sums.end());
  EXPECT_LE(sums[50], 5u);
}

TEST(CrossbarTest, ZeroCyclesGiveNoCounts) {
  AxiConfig cfg;
  cfg.cycles_per_step = 0;
  Crossbar xbar(cfg);
  Rng rng(0);
  const auto out = xbar.step(decode_action(Action{{0, 9}}, cfg), rng);
  EXPECT_EQ(out.counts.counts, std::vector<std::uint64_t>(kSlaves, 0));
}

TEST(CrossbarTest, PropertyInvariantsOverRandomRanges) {
  const AxiConfig cfg;
  Rng rng(31);
  const ActionSpace space = action_space();
  for (int trial = 0; trial < 500; ++trial) {
    const Action a = sample_uniform(space, rng);
    const auto lo = static_cast<std::size_t>(std::min(a.values[0], a.values[1]));
    const auto hi = static_cast<std::size_t>(std::max(a.values[0], a.values[1]));
    Crossbar xbar(cfg);
    std::vector<TraceEntry> trace;
    const auto out = xbar.step(decode_action(a, cfg), rng, &trace);

    std::vector<long> balance(kSlaves, 0);
    for (const auto& t : trace) {
      if (t.kind == TraceKind::enqueue) ++balance[t.slave];
      if (t.kind == TraceKind::dequeue) --balance[t.slave];
    }
    for (std::size_t s = 0; s < kSlaves; ++s) {
      ASSERT_LE(out.occupancy[s], cfg.fifo_depth);
      ASSERT_EQ(static_cast<long>(out.occupancy[s]), balance[s]) << "conservation, slave " << s;
      if (out.counts.counts[s] > 0) {
        ASSERT_GE(s, lo);
        ASSERT_LE(s, hi);
      }
      ASSERT_EQ(xbar.fifos()[s].not_full(), out.occupancy[s] < cfg.fifo_depth);
      ASSERT_EQ(xbar.fifos()[s].not_empty(), out.occupancy[s] > 0);
    }
    ASSERT_TRUE(golden_check(trace, cfg).empty());
  }
}

TEST(CrossbarTest, NarrowRangeDominatesFullRange) {
  const AxiConfig cfg;
  std::vector<std::uint64_t> narrow, wide;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Crossbar a(cfg), b(cfg);
    Rng ra(seed), rb(seed);
    narrow.push_back(a.step(decode_action(Action{{4, 4}}, cfg), ra).counts.counts[4]);
    wide.push_back(b.step(decode_action(Action{{0, 9}}, cfg), rb).counts.counts[4]);
  }
  std::nth_element(narrow.begin(), narrow.begin() + 50, narrow.end());
  std::nth_element(wide.begin(), wide.begin() + 50, wide.end());
  EXPECT_GT(narrow[50], wide[50]);
}

std::vector<TraceEntry> busy_trace() {
  const AxiConfig cfg;
  Crossbar xbar(cfg);
  Rng rng(3);
  std::vector<TraceEntry> trace;
  xbar.step(decode_action(Action{{4, 5}}, cfg), rng, &trace);
  return trace;
}

TEST(GoldenCheckTest, CleanTracePasses) { EXPECT_TRUE(golden_check(busy_trace(), AxiConfig{}).empty()); }

TEST(GoldenCheckTest, SwappedDequeuesBreakFifoOrder) {
  auto trace = busy_trace();
  std::vector<std::size_t> deq;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].kind == TraceKind::dequeue && trace[i].slave == 4) deq.push_back(i);
  }
  ASSERT_GE(deq.size(), 2u);
  std::swap(trace[deq[0]].request, trace[deq[1]].request);
  const auto v = golden_check(trace, AxiConfig{});
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().kind, TraceViolation::Kind::fifo_order);
}

TEST(GoldenCheckTest, EnqueueAtFullIsFlagged) {
  auto trace = busy_trace();
  auto rej = std::find_if(trace.begin(), trace.end(), [](const TraceEntry& t) { return t.kind == TraceKind::reject; });
  ASSERT_NE(rej, trace.end());
  rej->kind = TraceKind::enqueue;
  const auto v = golden_check(trace, AxiConfig{});
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().kind, TraceViolation::Kind::enqueue_when_full);
}

TEST(GoldenCheckTest, MisroutedAndEmptyDequeue) {
  const AxiConfig cfg;
  std::vector<TraceEntry> trace{
      {0, TraceKind::enqueue, 3, {0, 0x4800, 0}},
      {0, TraceKind::dequeue, 7, {1, 0x7000, 0}},
  };
  const auto v = golden_check(trace, cfg);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].kind, TraceViolation::Kind::misrouted);
  EXPECT_EQ(v[1].kind, TraceViolation::Kind::dequeue_when_empty);
}

TEST(AxiDutTest, ResetAndDeterminism) {
  AxiDut a, b;
  EXPECT_EQ(a.reset(5).state, std::vector<double>(kSlaves, 0.0));
  b.reset(5);
  const auto ra = a.step(Action{{2, 6}});
  const auto rb = b.step(Action{{2, 6}});
  EXPECT_EQ(ra.counts, rb.counts);
  EXPECT_EQ(ra.observation, rb.observation);
  EXPECT_EQ(a.scoreboard_mismatches(), 0u);
  EXPECT_EQ(a.event_names().at(4), "fifo_full_slave_4");
}

TEST(AxiConfigTest, RejectsZeroes) {
  AxiConfig c;
  c.drain_period = 0;
  EXPECT_THROW(c.check(), ConfigError);
}

}  // namespace
}  // namespace rlv::axi
