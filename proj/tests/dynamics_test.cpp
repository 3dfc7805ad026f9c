// Apache License, Version 2.0, refer to LICENSE.txt

#include "rolemine/dynamics.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "rolemine/rng.hpp"
#include "test_support.hpp"

using namespace rolemine;

namespace {

StateSequence seq(const std::string& id, std::vector<int> states) {
  StateSequence s;
  s.account_id = id;
  s.states = std::move(states);
  return s;
}

}  // namespace

TEST(BuildSequences, FillsInactiveForMissingWindows) {
  std::vector<std::map<std::string, int>> per_window(4);
  per_window[0] = {{"a", 1}, {"b", 0}};
  per_window[1] = {{"a", 1}, {"b", 2}};
  per_window[2] = {{"a", 1}};
  per_window[3] = {{"a", 0}, {"b", 2}, {"c", 3}};
  const auto sequences = build_sequences(per_window);
  ASSERT_EQ(sequences.size(), 3u);
  EXPECT_EQ(sequences[0].account_id, "a");
  EXPECT_EQ(sequences[0].states, (std::vector<int>{1, 1, 1, 0}));
  EXPECT_EQ(sequences[1].states, (std::vector<int>{0, 2, kInactiveState, 2}));
  EXPECT_EQ(sequences[2].states,
            (std::vector<int>{kInactiveState, kInactiveState, kInactiveState, 3}));
}

TEST(Retention, SpanRules) {
  const std::vector<StateSequence> sequences = {
      seq("full", {0, 0, 0, 0}),
      seq("break", {0, 0, 1, 0}),      // non-contiguous return does not extend
      seq("inactive", {0, kInactiveState, 0, 0}),  // marker breaks the run
  };
  const RetentionReport report = retention_distribution(sequences, 2);
  const auto& counts = report.counts.at(0);
  ASSERT_EQ(counts.size(), 4u);
  EXPECT_EQ(counts[0], 1u);  // span 1
  EXPECT_EQ(counts[1], 1u);  // span 2
  EXPECT_EQ(counts[2], 0u);
  EXPECT_EQ(counts[3], 1u);  // span 4
  const auto& props = report.proportions.at(0);
  double sum = 0;
  for (double p : props) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(Retention, InactiveStartExcludedAndCounted) {
  const std::vector<StateSequence> sequences = {
      seq("gone", {kInactiveState, 0, 0, 0}), seq("here", {1, 1, 1, 1})};
  const RetentionReport report = retention_distribution(sequences, 2);
  EXPECT_EQ(report.excluded_inactive_start, 1u);
  EXPECT_EQ(report.counts.count(0), 0u);
  EXPECT_EQ(report.counts.at(1)[3], 1u);
}

TEST(Transitions, ConstantChainIsIdentityRow) {
  const std::vector<StateSequence> sequences = {seq("a", {0, 0, 0, 0}),
                                                seq("b", {0, 0, 0, 0})};
  const TransitionMatrix matrix = transition_matrix(sequences, 2);
  EXPECT_DOUBLE_EQ(matrix.probabilities[0][0], 1.0);
  EXPECT_DOUBLE_EQ(matrix.probabilities[0][1], 0.0);
  ASSERT_EQ(matrix.zero_rows.size(), 1u);
  EXPECT_EQ(matrix.zero_rows[0], 1);
}

TEST(Transitions, HandCountedProbabilities) {
  const std::vector<StateSequence> sequences = {
      seq("x", {0, 1}), seq("y", {0, 1}), seq("z", {0, 0})};
  const TransitionMatrix matrix = transition_matrix(sequences, 2);
  EXPECT_NEAR(matrix.probabilities[0][1], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(matrix.probabilities[0][0], 1.0 / 3.0, 1e-12);
  EXPECT_EQ(matrix.counts[0][0] + matrix.counts[0][1], 3);
}

TEST(Transitions, InactivePairsAreSkippedByDefault) {
  const std::vector<StateSequence> sequences = {
      seq("a", {0, kInactiveState, 1, 1})};
  const TransitionMatrix matrix = transition_matrix(sequences, 2);
  // Only the 1->1 pair survives; pairs touching the marker are dropped.
  EXPECT_EQ(matrix.counts[0][0], 0);
  EXPECT_EQ(matrix.counts[0][1], 0);
  EXPECT_EQ(matrix.counts[1][1], 1);
}

TEST(Transitions, InactiveAsStateMode) {
  const std::vector<StateSequence> sequences = {
      seq("a", {0, kInactiveState, 1, 1})};
  const TransitionMatrix matrix = transition_matrix(sequences, 2, true);
  ASSERT_EQ(matrix.counts.size(), 3u);
  EXPECT_EQ(matrix.counts[0][2], 1);  // 0 -> inactive
  EXPECT_EQ(matrix.counts[2][1], 1);  // inactive -> 1
  EXPECT_EQ(matrix.counts[1][1], 1);
}

TEST(Transitions, RowStochasticityAndCountConservation) {
  Rng rng(17);
  std::vector<StateSequence> sequences;
  std::size_t concrete_pairs = 0;
  for (int i = 0; i < 300; ++i) {
    std::vector<int> states;
    for (int w = 0; w < 4; ++w) {
      const int state = rng.next_double() < 0.1
                            ? kInactiveState
                            : static_cast<int>(rng.next_index(5));
      states.push_back(state);
    }
    for (int w = 0; w + 1 < 4; ++w)
      if (states[w] != kInactiveState && states[w + 1] != kInactiveState)
        ++concrete_pairs;
    sequences.push_back(seq("s" + std::to_string(i), std::move(states)));
  }
  const TransitionMatrix matrix = transition_matrix(sequences, 5);
  std::int64_t total = 0;
  for (std::size_t row = 0; row < matrix.counts.size(); ++row) {
    std::int64_t row_count = 0;
    double row_prob = 0.0;
    for (std::size_t col = 0; col < matrix.counts[row].size(); ++col) {
      row_count += matrix.counts[row][col];
      row_prob += matrix.probabilities[row][col];
    }
    total += row_count;
    if (row_count > 0) EXPECT_NEAR(row_prob, 1.0, 1e-9);
  }
  EXPECT_EQ(static_cast<std::size_t>(total), concrete_pairs);
}

namespace {

// Draws sequences from a known chain with a uniform initial distribution.
std::vector<StateSequence> sample_chain(
    const std::vector<std::vector<double>>& chain, int length, int count,
    std::uint64_t seed) {
  Rng rng(seed);
  const int k = static_cast<int>(chain.size());
  std::vector<StateSequence> sequences;
  for (int i = 0; i < count; ++i) {
    std::vector<int> states = {static_cast<int>(rng.next_index(
        static_cast<std::size_t>(k)))};
    for (int step = 1; step < length; ++step) {
      const double r = rng.next_double();
      double acc = 0.0;
      int next = k - 1;
      for (int candidate = 0; candidate < k; ++candidate) {
        acc += chain[static_cast<std::size_t>(states.back())]
                    [static_cast<std::size_t>(candidate)];
        if (r < acc) {
          next = candidate;
          break;
        }
      }
      states.push_back(next);
    }
    sequences.push_back(seq("s" + std::to_string(i), std::move(states)));
  }
  return sequences;
}

double max_abs_error(const std::vector<std::vector<double>>& a,
                     const std::vector<std::vector<double>>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  return worst;
}

const std::vector<std::vector<double>> kChain = {
    {0.70, 0.10, 0.10, 0.05, 0.05},
    {0.15, 0.60, 0.10, 0.10, 0.05},
    {0.05, 0.10, 0.55, 0.20, 0.10},
    {0.10, 0.10, 0.10, 0.50, 0.20},
    {0.20, 0.05, 0.05, 0.10, 0.60},
};

}  // namespace

TEST(Transitions, MleErrorShrinksWithSampleSize) {
  const auto small = sample_chain(kChain, 4, 400, 5);
  const auto large = sample_chain(kChain, 4, 8000, 6);
  const double small_err =
      max_abs_error(transition_matrix(small, 5).probabilities, kChain);
  const double large_err =
      max_abs_error(transition_matrix(large, 5).probabilities, kChain);
  EXPECT_LT(large_err, small_err);
}

TEST(PerPairMatrices, OneMatrixPerConsecutiveWindowPair) {
  const std::vector<StateSequence> sequences = {seq("a", {0, 1, 0, 1})};
  const auto matrices = per_pair_transition_matrices(sequences, 2);
  ASSERT_EQ(matrices.size(), 3u);
  EXPECT_EQ(matrices[0].counts[0][1], 1);
  EXPECT_EQ(matrices[1].counts[1][0], 1);
  EXPECT_EQ(matrices[2].counts[0][1], 1);
}
