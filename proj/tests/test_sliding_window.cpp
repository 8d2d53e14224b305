#include <gtest/gtest.h>

#include "swucrl/errors.hpp"
#include "swucrl/rng.hpp"
#include "swucrl/sliding_window.hpp"

using namespace swucrl;

namespace {

// Recount of the retained entries, the reference for the incremental tallies.
void expect_matches_recount(const SlidingWindowBuffer& buf) {
  const std::size_t S = buf.num_states();
  const std::size_t A = buf.num_actions();
  std::vector<std::uint64_t> count(S * A, 0), succ(S * A * S, 0);
  std::vector<double> reward(S * A, 0.0);
  for (const auto& e : buf.entries()) {
    ++count[e.state * A + e.action];
    reward[e.state * A + e.action] += e.reward;
    ++succ[(e.state * A + e.action) * S + e.next_state];
  }
  ASSERT_EQ(buf.counts(), count);
  ASSERT_EQ(buf.successor_counts(), succ);
  for (std::size_t i = 0; i < S * A; ++i) ASSERT_NEAR(buf.reward_sums()[i], reward[i], 1e-9);
}

}  // namespace

TEST(SlidingWindowBuffer, FifoEviction) {
  SlidingWindowBuffer buf(3, 1, 2);
  const Transition a{0, 0, 1.0, 1}, b{1, 0, 0.0, 2}, c{2, 0, 1.0, 0};
  buf.push(a);
  buf.push(b);
  buf.push(c);
  ASSERT_EQ(buf.size(), 2u);
  EXPECT_EQ(buf.entries()[0].state, 1u);
  EXPECT_EQ(buf.entries()[1].state, 2u);
  EXPECT_EQ(buf.count(0, 0), 0u);
  EXPECT_EQ(buf.reward_sum(0, 0), 0.0);
}

TEST(SlidingWindowBuffer, ZeroCapacityRejected) {
  EXPECT_THROW(SlidingWindowBuffer(2, 2, 0), InputError);
}

TEST(SlidingWindowBuffer, CountingIdentityAndRecountFuzz) {
  Rng rng(2024);
  for (std::size_t capacity : {1u, 7u, 64u, 1000u}) {
    SlidingWindowBuffer buf(4, 3, capacity);
    for (std::size_t n = 1; n <= 10000; ++n) {
      const Transition rec{static_cast<std::size_t>(rng.uniform() * 4),
                           static_cast<std::size_t>(rng.uniform() * 3),
                           rng.bernoulli(0.4) ? 1.0 : rng.uniform(),
                           static_cast<std::size_t>(rng.uniform() * 4)};
      buf.push(rec);
      std::uint64_t total = 0;
      for (auto c : buf.counts()) total += c;
      ASSERT_EQ(total, std::min<std::size_t>(n, capacity));
      ASSERT_EQ(buf.size(), std::min<std::size_t>(n, capacity));
      if (n % 97 == 0) expect_matches_recount(buf);
    }
    expect_matches_recount(buf);
    for (std::size_t s = 0; s < 4; ++s) {
      for (std::size_t a = 0; a < 3; ++a) {
        EXPECT_LE(buf.reward_sum(s, a), static_cast<double>(buf.count(s, a)) + 1e-9);
      }
    }
  }
}

TEST(SlidingWindowBuffer, UnboundedNeverEvicts) {
  SlidingWindowBuffer buf(2, 1, SlidingWindowBuffer::kUnbounded);
  for (int i = 0; i < 5000; ++i) buf.push({0, 0, 1.0, 1});
  EXPECT_EQ(buf.count(0, 0), 5000u);
  buf.clear();
  EXPECT_EQ(buf.size(), 0u);
  EXPECT_EQ(buf.count(0, 0), 0u);
}

TEST(EpisodeStats, EmptyBuffer) {
  SlidingWindowBuffer buf(3, 2, 10);
  const auto st = snapshot_episode(buf, 1);
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t a = 0; a < 2; ++a) {
      EXPECT_EQ(st.count(s, a), 0u);
      EXPECT_EQ(st.reward_estimate(s, a), 0.0);
      for (double p : st.transition_estimate(s, a)) EXPECT_EQ(p, 0.0);
      EXPECT_EQ(st.visits(s, a), 0u);
    }
  }
}

TEST(EpisodeStats, SingleRecord) {
  SlidingWindowBuffer buf(3, 2, 10);
  buf.push({0, 0, 0.5, 1});
  const auto st = snapshot_episode(buf, 2);
  EXPECT_EQ(st.reward_estimate(0, 0), 0.5);
  EXPECT_EQ(st.transition_estimate(0, 0)[1], 1.0);
  EXPECT_EQ(st.transition_estimate(0, 0)[0], 0.0);
}

TEST(EpisodeStats, HandCountedSixRecordWindow) {
  // (s,a) = (0,0): rewards 1, 0, 1 -> successors 1, 1, 0
  // (s,a) = (1,1): rewards 0, 0, 1 -> successors 0, 0, 0
  SlidingWindowBuffer buf(2, 2, 6);
  buf.push({0, 0, 1.0, 1});
  buf.push({1, 1, 0.0, 0});
  buf.push({0, 0, 0.0, 1});
  buf.push({1, 1, 0.0, 0});
  buf.push({0, 0, 1.0, 0});
  buf.push({1, 1, 1.0, 0});
  const auto st = snapshot_episode(buf, 7);
  EXPECT_EQ(st.count(0, 0), 3u);
  EXPECT_EQ(st.count(1, 1), 3u);
  EXPECT_NEAR(st.reward_estimate(0, 0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(st.reward_estimate(1, 1), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(st.transition_estimate(0, 0)[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(st.transition_estimate(0, 0)[1], 2.0 / 3.0, 1e-15);
  EXPECT_EQ(st.transition_estimate(1, 1)[0], 1.0);
  EXPECT_EQ(st.count(0, 1), 0u);

  // A seventh push evicts the first (0,0) record.
  buf.push({0, 1, 1.0, 1});
  const auto next = snapshot_episode(buf, 8);
  EXPECT_EQ(next.count(0, 0), 2u);
  EXPECT_NEAR(next.reward_estimate(0, 0), 0.5, 1e-15);
  EXPECT_EQ(next.transition_estimate(0, 0)[0], 0.5);
}

TEST(EpisodeStats, EstimatesAreNormalized) {
  Rng rng(5);
  SlidingWindowBuffer buf(4, 2, 50);
  for (int i = 0; i < 300; ++i) {
    buf.push({static_cast<std::size_t>(rng.uniform() * 4), static_cast<std::size_t>(rng.uniform() * 2),
              rng.uniform(), static_cast<std::size_t>(rng.uniform() * 4)});
  }
  const auto st = snapshot_episode(buf, 301);
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t a = 0; a < 2; ++a) {
      double sum = 0.0;
      for (double p : st.transition_estimate(s, a)) sum += p;
      EXPECT_NEAR(sum, st.count(s, a) > 0 ? 1.0 : 0.0, 1e-12);
      EXPECT_GE(st.reward_estimate(s, a), 0.0);
      EXPECT_LE(st.reward_estimate(s, a), 1.0);
    }
  }
}

TEST(EpisodeShouldEnd, FloorOfOne) {
  SlidingWindowBuffer buf(2, 1, 10);
  auto st = snapshot_episode(buf, 1);
  EXPECT_FALSE(episode_should_end(st, 0, 0));
  st.record_visit(0, 0);
  EXPECT_TRUE(episode_should_end(st, 0, 0));
}

TEST(EpisodeShouldEnd, DoublingCriterion) {
  SlidingWindowBuffer buf(2, 1, 10);
  for (int i = 0; i < 4; ++i) buf.push({0, 0, 0.0, 0});
  auto st = snapshot_episode(buf, 5);
  for (int i = 0; i < 3; ++i) st.record_visit(0, 0);
  EXPECT_FALSE(episode_should_end(st, 0, 0));
  st.record_visit(0, 0);
  EXPECT_TRUE(episode_should_end(st, 0, 0));
  EXPECT_NEAR(st.weighted_visits(), 4.0 / 2.0, 1e-15);
}
