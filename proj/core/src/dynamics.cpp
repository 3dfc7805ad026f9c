// Apache License, Version 2.0, refer to LICENSE.txt

#include "rolemine/dynamics.hpp"

#include <set>
#include <stdexcept>

namespace rolemine {

std::vector<StateSequence> build_sequences(
    const std::vector<std::map<std::string, int>>& assignments_per_window) {
  if (assignments_per_window.empty())
    throw std::invalid_argument("build_sequences: no windows");

  std::set<std::string> accounts;
  for (const auto& window : assignments_per_window)
    for (const auto& [account, cluster] : window) accounts.insert(account);

  std::vector<StateSequence> sequences;
  sequences.reserve(accounts.size());
  for (const std::string& account : accounts) {
    StateSequence seq;
    seq.account_id = account;
    seq.states.reserve(assignments_per_window.size());
    for (const auto& window : assignments_per_window) {
      const auto it = window.find(account);
      seq.states.push_back(it == window.end() ? kInactiveState : it->second);
    }
    sequences.push_back(std::move(seq));
  }
  return sequences;
}

RetentionReport retention_distribution(const std::vector<StateSequence>& sequences,
                                       int k) {
  if (k < 1) throw std::invalid_argument("retention_distribution: k must be >= 1");
  RetentionReport report;
  std::size_t window_count = 0;
  for (const StateSequence& seq : sequences) {
    if (seq.states.empty()) continue;
    window_count = std::max(window_count, seq.states.size());
    const int start = seq.states[0];
    if (start == kInactiveState) {
      ++report.excluded_inactive_start;
      continue;
    }
    if (start < 0 || start >= k)
      throw std::invalid_argument("retention_distribution: state out of range");
    std::size_t span = 1;
    while (span < seq.states.size() && seq.states[span] == start) ++span;

    auto& counts = report.counts[start];
    if (counts.size() < seq.states.size()) counts.resize(seq.states.size(), 0);
    ++counts[span - 1];
  }
  for (auto& [role, counts] : report.counts) {
    if (counts.size() < window_count) counts.resize(window_count, 0);
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    auto& props = report.proportions[role];
    props.assign(counts.size(), 0.0);
    if (total == 0) continue;
    for (std::size_t i = 0; i < counts.size(); ++i)
      props[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return report;
}

namespace {

TransitionMatrix count_transitions(const std::vector<StateSequence>& sequences,
                                   int k, bool inactive_as_state,
                                   int only_pair_index) {
  const int dim = inactive_as_state ? k + 1 : k;
  TransitionMatrix matrix;
  matrix.counts.assign(static_cast<std::size_t>(dim),
                       std::vector<std::int64_t>(static_cast<std::size_t>(dim), 0));

  const auto state_index = [&](int state) -> int {
    if (state == kInactiveState) return inactive_as_state ? k : -1;
    if (state < 0 || state >= k)
      throw std::invalid_argument("transition_matrix: state out of range");
    return state;
  };

  for (const StateSequence& seq : sequences) {
    for (std::size_t i = 0; i + 1 < seq.states.size(); ++i) {
      if (only_pair_index >= 0 && static_cast<std::size_t>(only_pair_index) != i)
        continue;
      const int from = state_index(seq.states[i]);
      const int to = state_index(seq.states[i + 1]);
      if (from < 0 || to < 0) continue;
      ++matrix.counts[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)];
    }
  }

  matrix.probabilities.assign(static_cast<std::size_t>(dim),
                              std::vector<double>(static_cast<std::size_t>(dim), 0.0));
  for (int row = 0; row < dim; ++row) {
    std::int64_t total = 0;
    for (std::int64_t c : matrix.counts[static_cast<std::size_t>(row)]) total += c;
    if (total == 0) {
      matrix.zero_rows.push_back(row);
      continue;
    }
    for (int col = 0; col < dim; ++col) {
      matrix.probabilities[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] =
          static_cast<double>(matrix.counts[static_cast<std::size_t>(row)]
                                           [static_cast<std::size_t>(col)]) /
          static_cast<double>(total);
    }
  }
  return matrix;
}

}  // namespace

TransitionMatrix transition_matrix(const std::vector<StateSequence>& sequences,
                                   int k, bool inactive_as_state) {
  if (k < 1) throw std::invalid_argument("transition_matrix: k must be >= 1");
  return count_transitions(sequences, k, inactive_as_state, -1);
}

std::vector<TransitionMatrix> per_pair_transition_matrices(
    const std::vector<StateSequence>& sequences, int k, bool inactive_as_state) {
  if (k < 1) throw std::invalid_argument("transition_matrix: k must be >= 1");
  std::size_t window_count = 0;
  for (const StateSequence& seq : sequences)
    window_count = std::max(window_count, seq.states.size());
  std::vector<TransitionMatrix> result;
  for (std::size_t pair = 0; pair + 1 < window_count; ++pair)
    result.push_back(count_transitions(sequences, k, inactive_as_state,
                                       static_cast<int>(pair)));
  return result;
}

}  // namespace rolemine
