// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rolemine/corpus.hpp"

namespace rolemine {

/// Discrete-time event counts for one link: the sparse matrix of event counts
/// per (time bin, process). Process k is the role index of the posting
/// account.
struct EventSeries {
  std::string link_url;
  SourceType source_type = SourceType::kOther;
  std::int64_t bin_width_seconds = 1;
  std::int64_t horizon_bins = 0;  // bins span [0, horizon_bins)
  int process_count = 0;

  struct Entry {
    std::int64_t bin = 0;
    int process = 0;
    std::int64_t count = 0;  // >= 1
  };
  std::vector<Entry> entries;  // sorted by (bin, process)

  std::int64_t total_events() const;
  std::int64_t last_event_bin() const;  // -1 when empty
  /// Throws std::invalid_argument when ordering/range invariants fail.
  void validate() const;

  std::string to_json() const;
  static EventSeries from_json(std::string_view text);
};

/// Model parameters: per-process background rates, the excitation weight
/// matrix (expected offspring counts), and the lag mass function over lags
/// 1..L. The lag mass is shared across process pairs unless pair_lag_pmfs is
/// populated (one pmf per ordered pair).
struct HawkesParams {
  int process_count = 0;
  std::vector<double> background_rates;              // length K
  std::vector<std::vector<double>> weights;          // K x K
  std::vector<double> lag_pmf;                       // length L, sums to 1
  std::vector<std::vector<std::vector<double>>> pair_lag_pmfs;  // optional K x K x L

  int lag_horizon() const;
  bool per_pair() const { return !pair_lag_pmfs.empty(); }
  /// Mass at lag tau (1-based) for the (from, to) pair.
  double lag_mass(int from, int to, std::int64_t tau) const;
  void validate() const;

  std::string to_json() const;
  static HawkesParams from_json(std::string_view text);
};

/// Largest eigenvalue magnitude; < 1 is required for a stable simulation.
double spectral_radius(const std::vector<std::vector<double>>& matrix);

/// Rates lambda[t][k] over the full horizon. A bin's rate depends only on
/// counts in strictly earlier bins.
std::vector<std::vector<double>> compute_rates(const EventSeries& series,
                                               const HawkesParams& params);

struct SimulationTrace {
  EventSeries series;
  std::vector<std::int64_t> events_per_process;
  /// offspring_counts[i][j]: events in process j attributed to parent events
  /// in process i (the simulator draws each excitation component separately,
  /// so parentage is exact).
  std::vector<std::vector<std::int64_t>> offspring_counts;
  std::int64_t background_events = 0;
};

/// Sequential per-bin simulation: each bin draws one Poisson count per
/// excitation component. Deterministic for a given seed. Throws
/// std::domain_error when the weight matrix spectral radius is >= 1.
SimulationTrace simulate_traced(const HawkesParams& params,
                                std::int64_t horizon_bins, std::uint64_t seed);
EventSeries simulate(const HawkesParams& params, std::int64_t horizon_bins,
                     std::uint64_t seed);

struct EmConfig {
  int lag_horizon = 2880;  // bins (24h at a 30s bin width)
  int max_iters = 500;
  double tol = 1e-6;  // per-event log-likelihood change
  std::uint64_t seed = 0;
  bool per_pair_lags = false;
};

struct EmResult {
  HawkesParams params;
  int iterations = 0;
  double log_likelihood = 0.0;
  bool converged = false;
  std::vector<double> ll_history;  // one observed-data value per iteration
  /// Max over events and iterations of |responsibility sum - 1|.
  double max_conservation_error = 0.0;
};

/// Latent-parent EM. Each unit event is explained by the background or by one
/// earlier event within the lag horizon; the M-step re-estimates background
/// rates, weights and the lag mass from the responsibility masses. The
/// fitting horizon extends to (last event bin + L + 1) so every event keeps
/// its full excitation window inside the likelihood, which makes the M-step
/// exact and the log-likelihood non-decreasing.
EmResult fit_em(const EventSeries& series, const EmConfig& config = {});

/// Divides each row by its sum; all-zero rows stay zero. Throws on negative
/// entries.
std::vector<std::vector<double>> row_normalize(
    const std::vector<std::vector<double>>& weights);

/// Links shared by enough distinct role-assigned accounts spanning enough
/// distinct roles, restricted to classified (non-other) source types.
/// Deterministically sorted.
std::vector<std::string> select_links(const std::vector<PostRecord>& posts,
                                      const std::map<std::string, int>& roles,
                                      const DomainRegistry& registry,
                                      std::size_t min_accounts = 10,
                                      std::size_t min_roles = 3);

/// Seconds between consecutive posts of the same classified link by
/// role-assigned accounts, pooled over links.
std::vector<double> link_inter_arrivals(const std::vector<PostRecord>& posts,
                                        const std::map<std::string, int>& roles,
                                        const DomainRegistry& registry);

/// Percentile of the inter-arrival distribution, floored to a whole second
/// (minimum 1).
std::int64_t choose_bin_width(const std::vector<double>& inter_arrival_seconds,
                              double percentile = 10.0);

/// Bins every qualifying post of the link: bin = (timestamp - first) / width.
/// The total binned count equals the number of qualifying posts.
EventSeries build_event_series(const std::string& link,
                               const std::vector<PostRecord>& posts,
                               const std::map<std::string, int>& roles,
                               int process_count, const DomainRegistry& registry,
                               std::int64_t bin_width_seconds);

struct LinkFit {
  std::string link_url;
  SourceType source_type = SourceType::kOther;
  HawkesParams params;
  std::int64_t events = 0;
};

struct InfluenceReport {
  SourceType source_type = SourceType::kOther;
  /// Row-wise mean of the row-normalized weight matrices; a row averages the
  /// links that observed transitions out of that role, so every row still
  /// sums to 1 (or stays all-zero).
  std::vector<std::vector<double>> mean_normalized_weights;
  std::size_t links_fitted = 0;
  std::int64_t events_total = 0;
};

/// Per-source-type mean of row-normalized weight matrices.
std::vector<InfluenceReport> aggregate_influence(const std::vector<LinkFit>& fits,
                                                 int process_count);

}  // namespace rolemine
