// Apache License, Version 2.0, refer to LICENSE.txt

#include "rolemine/hawkes.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <Eigen/Dense>
#include <json.hpp>

#include "rolemine/rng.hpp"

namespace rolemine {

using nlohmann::json;

std::int64_t EventSeries::total_events() const {
  std::int64_t total = 0;
  for (const Entry& e : entries) total += e.count;
  return total;
}

std::int64_t EventSeries::last_event_bin() const {
  return entries.empty() ? -1 : entries.back().bin;
}

void EventSeries::validate() const {
  if (process_count <= 0)
    throw std::invalid_argument("event series: process_count must be positive");
  if (bin_width_seconds <= 0)
    throw std::invalid_argument("event series: bin width must be positive");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Entry& e = entries[i];
    if (e.count < 1) throw std::invalid_argument("event series: count < 1");
    if (e.bin < 0 || e.bin >= horizon_bins)
      throw std::invalid_argument("event series: bin outside horizon");
    if (e.process < 0 || e.process >= process_count)
      throw std::invalid_argument("event series: process index out of range");
    if (i > 0) {
      const Entry& prev = entries[i - 1];
      if (prev.bin > e.bin || (prev.bin == e.bin && prev.process >= e.process))
        throw std::invalid_argument("event series: entries not sorted");
    }
  }
}

std::string EventSeries::to_json() const {
  json j;
  j["link_url"] = link_url;
  j["source_type"] = source_type_name(source_type);
  j["bin_width_seconds"] = bin_width_seconds;
  j["horizon_bins"] = horizon_bins;
  j["k"] = process_count;
  json rows = json::array();
  for (const Entry& e : entries) rows.push_back({e.bin, e.process, e.count});
  j["entries"] = rows;
  return j.dump(2);
}

EventSeries EventSeries::from_json(std::string_view text) {
  const json j = json::parse(text);
  EventSeries series;
  series.link_url = j.value("link_url", std::string());
  if (j.contains("source_type")) {
    const auto type = source_type_from_name(j["source_type"].get<std::string>());
    if (!type) throw std::runtime_error("event series: unknown source type");
    series.source_type = *type;
  }
  series.bin_width_seconds = j.at("bin_width_seconds").get<std::int64_t>();
  series.horizon_bins = j.at("horizon_bins").get<std::int64_t>();
  series.process_count = j.at("k").get<int>();
  for (const auto& row : j.at("entries")) {
    if (!row.is_array() || row.size() != 3)
      throw std::runtime_error("event series: entry must be [bin, process, count]");
    series.entries.push_back({row[0].get<std::int64_t>(), row[1].get<int>(),
                              row[2].get<std::int64_t>()});
  }
  series.validate();
  return series;
}

int HawkesParams::lag_horizon() const {
  if (per_pair()) {
    return pair_lag_pmfs.empty() || pair_lag_pmfs[0].empty()
               ? 0
               : static_cast<int>(pair_lag_pmfs[0][0].size());
  }
  return static_cast<int>(lag_pmf.size());
}

double HawkesParams::lag_mass(int from, int to, std::int64_t tau) const {
  const auto idx = static_cast<std::size_t>(tau - 1);
  if (per_pair())
    return pair_lag_pmfs[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)][idx];
  return lag_pmf[idx];
}

void HawkesParams::validate() const {
  const auto k = static_cast<std::size_t>(process_count);
  if (process_count <= 0) throw std::invalid_argument("hawkes params: k must be positive");
  if (background_rates.size() != k)
    throw std::invalid_argument("hawkes params: background rate count != k");
  if (weights.size() != k)
    throw std::invalid_argument("hawkes params: weight matrix must be k x k");
  for (const auto& row : weights) {
    if (row.size() != k)
      throw std::invalid_argument("hawkes params: weight matrix must be k x k");
    for (double w : row)
      if (w < 0.0) throw std::invalid_argument("hawkes params: negative weight");
  }
  for (double rate : background_rates)
    if (rate < 0.0) throw std::invalid_argument("hawkes params: negative background rate");

  const auto check_pmf = [](const std::vector<double>& pmf) {
    if (pmf.empty()) throw std::invalid_argument("hawkes params: empty lag pmf");
    double sum = 0.0;
    for (double g : pmf) {
      if (g < 0.0) throw std::invalid_argument("hawkes params: negative lag mass");
      sum += g;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("hawkes params: lag pmf must sum to 1");
  };
  if (per_pair()) {
    if (pair_lag_pmfs.size() != k)
      throw std::invalid_argument("hawkes params: pair lag pmfs must be k x k");
    for (const auto& row : pair_lag_pmfs) {
      if (row.size() != k)
        throw std::invalid_argument("hawkes params: pair lag pmfs must be k x k");
      for (const auto& pmf : row) check_pmf(pmf);
    }
  } else {
    check_pmf(lag_pmf);
  }
}

std::string HawkesParams::to_json() const {
  json j;
  j["k"] = process_count;
  j["background_rates"] = background_rates;
  j["weights"] = weights;
  j["lag_pmf"] = lag_pmf;
  if (per_pair()) j["pair_lag_pmfs"] = pair_lag_pmfs;
  return j.dump(2);
}

HawkesParams HawkesParams::from_json(std::string_view text) {
  const json j = json::parse(text);
  HawkesParams params;
  params.process_count = j.at("k").get<int>();
  params.background_rates = j.at("background_rates").get<std::vector<double>>();
  params.weights = j.at("weights").get<std::vector<std::vector<double>>>();
  if (j.contains("lag_pmf")) params.lag_pmf = j.at("lag_pmf").get<std::vector<double>>();
  if (j.contains("pair_lag_pmfs"))
    params.pair_lag_pmfs =
        j.at("pair_lag_pmfs").get<std::vector<std::vector<std::vector<double>>>>();
  params.validate();
  return params;
}

double spectral_radius(const std::vector<std::vector<double>>& matrix) {
  if (matrix.empty()) return 0.0;
  const auto n = static_cast<Eigen::Index>(matrix.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (matrix[static_cast<std::size_t>(i)].size() != matrix.size())
      throw std::invalid_argument("spectral_radius: matrix must be square");
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<std::vector<double>> compute_rates(const EventSeries& series,
                                               const HawkesParams& params) {
  series.validate();
  params.validate();
  if (series.process_count != params.process_count)
    throw std::invalid_argument("compute_rates: process count mismatch");

  const int k = params.process_count;
  const std::int64_t horizon = series.horizon_bins;
  const std::int64_t lag_bins = params.lag_horizon();
  std::vector<std::vector<double>> rates(
      static_cast<std::size_t>(horizon),
      std::vector<double>(static_cast<std::size_t>(k), 0.0));

  std::size_t window_lo = 0;
  std::size_t window_hi = 0;
  for (std::int64_t t = 0; t < horizon; ++t) {
    while (window_lo < series.entries.size() &&
           series.entries[window_lo].bin < t - lag_bins)
      ++window_lo;
    while (window_hi < series.entries.size() && series.entries[window_hi].bin < t)
      ++window_hi;

    auto& row = rates[static_cast<std::size_t>(t)];
    for (int target = 0; target < k; ++target)
      row[static_cast<std::size_t>(target)] =
          params.background_rates[static_cast<std::size_t>(target)];
    for (std::size_t idx = window_lo; idx < window_hi; ++idx) {
      const EventSeries::Entry& parent = series.entries[idx];
      const std::int64_t tau = t - parent.bin;
      for (int target = 0; target < k; ++target) {
        row[static_cast<std::size_t>(target)] +=
            static_cast<double>(parent.count) *
            params.weights[static_cast<std::size_t>(parent.process)]
                          [static_cast<std::size_t>(target)] *
            params.lag_mass(parent.process, target, tau);
      }
    }
  }
  return rates;
}

SimulationTrace simulate_traced(const HawkesParams& params,
                                std::int64_t horizon_bins, std::uint64_t seed) {
  params.validate();
  if (horizon_bins < 0) throw std::invalid_argument("simulate: negative horizon");
  const double radius = spectral_radius(params.weights);
  if (radius >= 1.0)
    throw std::domain_error("simulate: explosive process (spectral radius " +
                            std::to_string(radius) + " >= 1)");

  const int k = params.process_count;
  const std::int64_t lag_bins = params.lag_horizon();
  Rng rng(seed);

  SimulationTrace trace;
  trace.series.process_count = k;
  trace.series.horizon_bins = horizon_bins;
  trace.events_per_process.assign(static_cast<std::size_t>(k), 0);
  trace.offspring_counts.assign(
      static_cast<std::size_t>(k),
      std::vector<std::int64_t>(static_cast<std::size_t>(k), 0));

  auto& entries = trace.series.entries;
  std::size_t window_lo = 0;
  for (std::int64_t t = 0; t < horizon_bins; ++t) {
    while (window_lo < entries.size() && entries[window_lo].bin < t - lag_bins)
      ++window_lo;
    const std::size_t window_hi = entries.size();  // bins < t only

    for (int target = 0; target < k; ++target) {
      std::int64_t count = rng.next_poisson(
          params.background_rates[static_cast<std::size_t>(target)]);
      trace.background_events += count;
      for (std::size_t idx = window_lo; idx < window_hi; ++idx) {
        const EventSeries::Entry& parent = entries[idx];
        const double mean =
            static_cast<double>(parent.count) *
            params.weights[static_cast<std::size_t>(parent.process)]
                          [static_cast<std::size_t>(target)] *
            params.lag_mass(parent.process, target, t - parent.bin);
        const std::int64_t children = rng.next_poisson(mean);
        if (children > 0) {
          trace.offspring_counts[static_cast<std::size_t>(parent.process)]
                                [static_cast<std::size_t>(target)] += children;
          count += children;
        }
      }
      if (count > 0) {
        entries.push_back({t, target, count});
        trace.events_per_process[static_cast<std::size_t>(target)] += count;
      }
    }
  }
  return trace;
}

EventSeries simulate(const HawkesParams& params, std::int64_t horizon_bins,
                     std::uint64_t seed) {
  return simulate_traced(params, horizon_bins, seed).series;
}

namespace {

struct EmState {
  std::vector<double> background;                 // lambda0
  std::vector<std::vector<double>> weights;       // W
  std::vector<double> shared_lag;                 // G
  std::vector<std::vector<std::vector<double>>> pair_lag;  // per-pair G
  bool per_pair = false;

  double lag(std::size_t from, std::size_t to, std::int64_t tau) const {
    const auto idx = static_cast<std::size_t>(tau - 1);
    return per_pair ? pair_lag[from][to][idx] : shared_lag[idx];
  }
};

}  // namespace

EmResult fit_em(const EventSeries& series, const EmConfig& config) {
  series.validate();
  const int k = series.process_count;
  const auto uk = static_cast<std::size_t>(k);
  const std::int64_t lag_bins = config.lag_horizon;
  if (lag_bins < 1) throw std::invalid_argument("fit_em: lag horizon must be >= 1");
  if (config.max_iters < 1) throw std::invalid_argument("fit_em: max_iters must be >= 1");

  const std::int64_t total = series.total_events();
  if (total < 2) throw std::invalid_argument("fit_em: need at least 2 events");

  std::vector<double> events_per_process(uk, 0.0);
  for (const auto& entry : series.entries)
    events_per_process[static_cast<std::size_t>(entry.process)] +=
        static_cast<double>(entry.count);

  // Extending the horizon past the last event keeps every excitation window
  // fully observed, which is what makes the closed-form M-step exact.
  const double horizon = static_cast<double>(
      std::max(series.horizon_bins, series.last_event_bin() + lag_bins + 1));

  // Initialization: half the mass to the background, uniform weights and lag
  // mass, all nudged by <= 1% seeded noise to break symmetry.
  Rng rng(config.seed);
  const auto nudge = [&rng]() { return 1.0 + 0.01 * (2.0 * rng.next_double() - 1.0); };
  EmState state;
  state.per_pair = config.per_pair_lags;
  state.background.resize(uk);
  for (std::size_t p = 0; p < uk; ++p)
    state.background[p] = events_per_process[p] / (2.0 * horizon) * nudge();
  state.weights.assign(uk, std::vector<double>(uk, 0.0));
  for (auto& row : state.weights)
    for (double& w : row) w = 0.1 * nudge();
  const auto uniform_pmf = [&](std::vector<double>& pmf) {
    pmf.resize(static_cast<std::size_t>(lag_bins));
    double sum = 0.0;
    for (double& g : pmf) {
      g = nudge();
      sum += g;
    }
    for (double& g : pmf) g /= sum;
  };
  if (state.per_pair) {
    state.pair_lag.assign(uk, std::vector<std::vector<double>>(uk));
    for (auto& row : state.pair_lag)
      for (auto& pmf : row) uniform_pmf(pmf);
  } else {
    uniform_pmf(state.shared_lag);
  }

  // Parent window per entry: contiguous entry range with bin in
  // [entry.bin - L, entry.bin - 1].
  EmResult result;
  const std::size_t entry_count = series.entries.size();
  std::vector<double> bg_mass(uk);
  std::vector<std::vector<double>> pair_mass(uk, std::vector<double>(uk));
  std::vector<double> shared_lag_mass(static_cast<std::size_t>(lag_bins));
  std::vector<std::vector<std::vector<double>>> pair_lag_mass;
  if (state.per_pair)
    pair_lag_mass.assign(
        uk, std::vector<std::vector<double>>(
                uk, std::vector<double>(static_cast<std::size_t>(lag_bins))));

  long double prev_ll = -std::numeric_limits<long double>::infinity();
  for (int iter = 0; iter < config.max_iters; ++iter) {
    for (auto& v : bg_mass) v = 0.0;
    for (auto& row : pair_mass)
      for (auto& v : row) v = 0.0;
    for (auto& v : shared_lag_mass) v = 0.0;
    for (auto& row : pair_lag_mass)
      for (auto& pmf : row)
        for (auto& v : pmf) v = 0.0;

    long double ll = 0.0;
    std::size_t window_lo = 0;
    for (std::size_t i = 0; i < entry_count; ++i) {
      const EventSeries::Entry& entry = series.entries[i];
      const auto target = static_cast<std::size_t>(entry.process);
      while (window_lo < entry_count &&
             series.entries[window_lo].bin < entry.bin - lag_bins)
        ++window_lo;

      double rate = state.background[target];
      std::size_t window_hi = i;
      while (window_hi > 0 && series.entries[window_hi - 1].bin == entry.bin)
        --window_hi;  // same-bin entries cannot be parents
      for (std::size_t p = window_lo; p < window_hi; ++p) {
        const EventSeries::Entry& parent = series.entries[p];
        const auto source = static_cast<std::size_t>(parent.process);
        rate += static_cast<double>(parent.count) * state.weights[source][target] *
                state.lag(source, target, entry.bin - parent.bin);
      }
      if (!(rate > 0.0) || !std::isfinite(rate))
        throw std::domain_error(
            "fit_em: non-finite or zero event rate at iteration " +
            std::to_string(iter) + ", bin " + std::to_string(entry.bin));

      ll += static_cast<long double>(entry.count) *
            static_cast<long double>(std::log(rate));

      const double scale = static_cast<double>(entry.count) / rate;
      bg_mass[target] += state.background[target] * scale;
      double assigned = state.background[target] * scale;
      for (std::size_t p = window_lo; p < window_hi; ++p) {
        const EventSeries::Entry& parent = series.entries[p];
        const auto source = static_cast<std::size_t>(parent.process);
        const std::int64_t tau = entry.bin - parent.bin;
        const double resp = static_cast<double>(parent.count) *
                            state.weights[source][target] *
                            state.lag(source, target, tau) * scale;
        pair_mass[source][target] += resp;
        if (state.per_pair)
          pair_lag_mass[source][target][static_cast<std::size_t>(tau - 1)] += resp;
        else
          shared_lag_mass[static_cast<std::size_t>(tau - 1)] += resp;
        assigned += resp;
      }
      const double conservation =
          std::abs(assigned / static_cast<double>(entry.count) - 1.0);
      result.max_conservation_error =
          std::max(result.max_conservation_error, conservation);
    }

    // Compensator over the full horizon; uses the actual lag mass sums so the
    // evaluation stays consistent with the parameters in use.
    long double compensator = 0.0;
    for (std::size_t p = 0; p < uk; ++p)
      compensator += static_cast<long double>(state.background[p]) * horizon;
    for (std::size_t source = 0; source < uk; ++source) {
      for (std::size_t target = 0; target < uk; ++target) {
        long double lag_sum = 0.0;
        if (state.per_pair) {
          for (double g : state.pair_lag[source][target]) lag_sum += g;
        } else {
          for (double g : state.shared_lag) lag_sum += g;
        }
        compensator += static_cast<long double>(events_per_process[source]) *
                       static_cast<long double>(state.weights[source][target]) *
                       lag_sum;
      }
    }
    ll -= compensator;

    assert(ll >= prev_ll - 1e-9 && "EM log-likelihood must not decrease");
    result.ll_history.push_back(static_cast<double>(ll));
    if (!std::isfinite(result.ll_history.back()))
      throw std::domain_error("fit_em: non-finite log-likelihood at iteration " +
                              std::to_string(iter));
    if (iter > 0 &&
        std::abs(static_cast<double>(ll - prev_ll)) / static_cast<double>(total) <
            config.tol) {
      result.converged = true;
      prev_ll = ll;
      break;
    }
    prev_ll = ll;

    // M-step.
    for (std::size_t p = 0; p < uk; ++p) state.background[p] = bg_mass[p] / horizon;
    for (std::size_t source = 0; source < uk; ++source) {
      for (std::size_t target = 0; target < uk; ++target) {
        state.weights[source][target] =
            events_per_process[source] > 0.0
                ? pair_mass[source][target] / events_per_process[source]
                : 0.0;
      }
    }
    const auto renormalize = [](const std::vector<double>& mass,
                                std::vector<double>& pmf) {
      double sum = 0.0;
      for (double v : mass) sum += v;
      if (sum <= 0.0) return;  // no offspring mass; keep the previous pmf
      for (std::size_t t = 0; t < pmf.size(); ++t) pmf[t] = mass[t] / sum;
    };
    if (state.per_pair) {
      for (std::size_t source = 0; source < uk; ++source)
        for (std::size_t target = 0; target < uk; ++target)
          renormalize(pair_lag_mass[source][target], state.pair_lag[source][target]);
    } else {
      renormalize(shared_lag_mass, state.shared_lag);
    }
  }

  result.iterations = static_cast<int>(result.ll_history.size());
  result.log_likelihood = result.ll_history.back();
  result.params.process_count = k;
  result.params.background_rates = std::move(state.background);
  result.params.weights = std::move(state.weights);
  if (state.per_pair)
    result.params.pair_lag_pmfs = std::move(state.pair_lag);
  else
    result.params.lag_pmf = std::move(state.shared_lag);
  return result;
}

std::vector<std::vector<double>> row_normalize(
    const std::vector<std::vector<double>>& weights) {
  std::vector<std::vector<double>> normalized = weights;
  for (auto& row : normalized) {
    double sum = 0.0;
    for (double w : row) {
      if (w < 0.0) throw std::invalid_argument("row_normalize: negative entry");
      sum += w;
    }
    if (sum == 0.0) continue;
    for (double& w : row) w /= sum;
  }
  return normalized;
}

namespace {

struct LinkStats {
  std::set<std::string> accounts;
  std::set<int> roles;
};

}  // namespace

std::vector<std::string> select_links(const std::vector<PostRecord>& posts,
                                      const std::map<std::string, int>& roles,
                                      const DomainRegistry& registry,
                                      std::size_t min_accounts,
                                      std::size_t min_roles) {
  std::map<std::string, LinkStats> stats;
  for (const PostRecord& post : posts) {
    const auto role = roles.find(post.account_id);
    if (role == roles.end()) continue;
    std::unordered_set<std::string> seen;  // a post counts a link once
    for (const std::string& link : post.links) {
      if (!seen.insert(link).second) continue;
      if (registry.classify(link) == SourceType::kOther) continue;
      auto& entry = stats[link];
      entry.accounts.insert(post.account_id);
      entry.roles.insert(role->second);
    }
  }
  std::vector<std::string> selected;
  for (const auto& [link, entry] : stats) {
    if (entry.accounts.size() >= min_accounts && entry.roles.size() >= min_roles)
      selected.push_back(link);
  }
  return selected;
}

std::vector<double> link_inter_arrivals(const std::vector<PostRecord>& posts,
                                        const std::map<std::string, int>& roles,
                                        const DomainRegistry& registry) {
  std::map<std::string, std::vector<std::int64_t>> timestamps;
  for (const PostRecord& post : posts) {
    if (!roles.count(post.account_id)) continue;
    std::unordered_set<std::string> seen;
    for (const std::string& link : post.links) {
      if (!seen.insert(link).second) continue;
      if (registry.classify(link) == SourceType::kOther) continue;
      timestamps[link].push_back(post.timestamp);
    }
  }
  std::vector<double> gaps;
  for (auto& [link, times] : timestamps) {
    if (times.size() < 2) continue;
    std::sort(times.begin(), times.end());
    for (std::size_t i = 1; i < times.size(); ++i)
      gaps.push_back(static_cast<double>(times[i] - times[i - 1]));
  }
  return gaps;
}

std::int64_t choose_bin_width(const std::vector<double>& inter_arrival_seconds,
                              double percentile) {
  if (inter_arrival_seconds.empty())
    throw std::invalid_argument("choose_bin_width: no inter-arrival times");
  const double cutoff = percentile_cutoff(inter_arrival_seconds, percentile);
  const auto width = static_cast<std::int64_t>(std::floor(cutoff));
  return std::max<std::int64_t>(width, 1);
}

EventSeries build_event_series(const std::string& link,
                               const std::vector<PostRecord>& posts,
                               const std::map<std::string, int>& roles,
                               int process_count, const DomainRegistry& registry,
                               std::int64_t bin_width_seconds) {
  if (bin_width_seconds <= 0)
    throw std::invalid_argument("build_event_series: bin width must be positive");
  if (process_count <= 0)
    throw std::invalid_argument("build_event_series: process count must be positive");

  struct PostEvent {
    std::int64_t timestamp;
    int role;
  };
  std::vector<PostEvent> events;
  for (const PostRecord& post : posts) {
    const auto role = roles.find(post.account_id);
    if (role == roles.end()) continue;
    if (std::find(post.links.begin(), post.links.end(), link) == post.links.end())
      continue;
    if (role->second < 0 || role->second >= process_count)
      throw std::invalid_argument("build_event_series: role index out of range");
    events.push_back({post.timestamp, role->second});
  }
  if (events.empty())
    throw std::invalid_argument("build_event_series: no qualifying posts for link");

  std::int64_t first = events[0].timestamp;
  for (const PostEvent& e : events) first = std::min(first, e.timestamp);

  std::map<std::pair<std::int64_t, int>, std::int64_t> counts;
  std::int64_t max_bin = 0;
  for (const PostEvent& e : events) {
    const std::int64_t bin = (e.timestamp - first) / bin_width_seconds;
    ++counts[{bin, e.role}];
    max_bin = std::max(max_bin, bin);
  }

  EventSeries series;
  series.link_url = link;
  series.source_type = registry.classify(link);
  series.bin_width_seconds = bin_width_seconds;
  series.process_count = process_count;
  series.horizon_bins = max_bin + 1;
  for (const auto& [key, count] : counts)
    series.entries.push_back({key.first, key.second, count});
  return series;
}

std::vector<InfluenceReport> aggregate_influence(const std::vector<LinkFit>& fits,
                                                 int process_count) {
  const auto k = static_cast<std::size_t>(process_count);
  std::map<SourceType, InfluenceReport> by_type;
  std::map<SourceType, std::vector<std::size_t>> row_counts;

  for (const LinkFit& fit : fits) {
    const auto normalized = row_normalize(fit.params.weights);
    auto& report = by_type[fit.source_type];
    if (report.mean_normalized_weights.empty()) {
      report.source_type = fit.source_type;
      report.mean_normalized_weights.assign(k, std::vector<double>(k, 0.0));
      row_counts[fit.source_type].assign(k, 0);
    }
    ++report.links_fitted;
    report.events_total += fit.events;
    for (std::size_t row = 0; row < k; ++row) {
      double row_sum = 0.0;
      for (double w : normalized[row]) row_sum += w;
      if (row_sum == 0.0) continue;  // link saw no events out of this role
      ++row_counts[fit.source_type][row];
      for (std::size_t col = 0; col < k; ++col)
        report.mean_normalized_weights[row][col] += normalized[row][col];
    }
  }

  std::vector<InfluenceReport> reports;
  for (auto& [type, report] : by_type) {
    for (std::size_t row = 0; row < k; ++row) {
      const std::size_t count = row_counts[type][row];
      if (count == 0) continue;
      for (std::size_t col = 0; col < k; ++col)
        report.mean_normalized_weights[row][col] /= static_cast<double>(count);
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace rolemine
