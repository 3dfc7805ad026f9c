// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rolemine {

/// State marker for a window without any activity-based assignment.
inline constexpr int kInactiveState = -1;

/// One account's role per window; length equals the window count.
struct StateSequence {
  std::string account_id;
  std::vector<int> states;  // cluster index or kInactiveState
};

/// Builds one sequence per account over the union of all windows' account
/// sets; windows without an assignment read kInactiveState.
std::vector<StateSequence> build_sequences(
    const std::vector<std::map<std::string, int>>& assignments_per_window);

struct RetentionReport {
  /// Per starting role: proportions over spans 1..window_count (each row sums
  /// to 1 when observed).
  std::map<int, std::vector<double>> proportions;
  std::map<int, std::vector<std::size_t>> counts;
  /// Accounts skipped because window 0 was inactive.
  std::size_t excluded_inactive_start = 0;
};

/// Retention span of a sequence: the largest n with states[0..n) all equal to
/// states[0]; an inactive window breaks the run.
RetentionReport retention_distribution(const std::vector<StateSequence>& sequences,
                                       int k);

struct TransitionMatrix {
  std::vector<std::vector<std::int64_t>> counts;
  std::vector<std::vector<double>> probabilities;  // row-normalized counts
  std::vector<int> zero_rows;  // rows without outgoing observations
};

/// Maximum-likelihood transition estimates pooled over all consecutive window
/// pairs. Pairs touching an inactive state are skipped unless
/// inactive_as_state is set, which appends the marker as state index k.
TransitionMatrix transition_matrix(const std::vector<StateSequence>& sequences,
                                   int k, bool inactive_as_state = false);

/// One matrix per consecutive window pair (cohort inspection).
std::vector<TransitionMatrix> per_pair_transition_matrices(
    const std::vector<StateSequence>& sequences, int k,
    bool inactive_as_state = false);

}  // namespace rolemine
