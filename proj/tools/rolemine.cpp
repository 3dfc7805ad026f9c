// Apache License, Version 2.0, refer to LICENSE.txt
//
// Command-line pipeline driver. Stages communicate through files in the
// output directory; every artifact embeds the seed and the config hash, and
// rerunning a stage with unchanged inputs reproduces it byte for byte.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rolemine/civil.hpp"
#include "rolemine/clustering.hpp"
#include "rolemine/corpus.hpp"
#include "rolemine/dynamics.hpp"
#include "rolemine/features.hpp"
#include "rolemine/hawkes.hpp"
#include "rolemine/io.hpp"
#include "rolemine/lexicon.hpp"
#include "rolemine/patterns.hpp"
#include "rolemine/pipeline.hpp"
#include "rolemine/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rolemine;

namespace {

struct CliOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_override;
  std::int64_t seed_override = -1;
  int threads_override = 0;
};

PipelineConfig resolve_config(const CliOptions& cli) {
  PipelineConfig config;
  if (!cli.config_path.empty()) config = PipelineConfig::from_file(cli.config_path);
  for (const std::string& entry : cli.overrides) {
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects key=value, got '" + entry + "'");
    config.set(trim(entry.substr(0, eq)), trim(entry.substr(eq + 1)));
  }
  if (!cli.out_override.empty()) config.out_dir = cli.out_override;
  if (cli.seed_override >= 0)
    config.seed = static_cast<std::uint64_t>(cli.seed_override);
  if (cli.threads_override > 0) config.threads = cli.threads_override;
  return config;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (content.empty() || content.back() != '\n') out << '\n';
}

void require_artifact(const fs::path& path, const std::string& producer) {
  if (!fs::exists(path))
    throw std::runtime_error("missing required artifact " + path.string() +
                             " (run '" + producer + "' first)");
}

json meta_json(const PipelineConfig& config) {
  json j;
  j["seed"] = config.seed;
  j["config"] = config.config_hash();
  return j;
}

std::vector<PostRecord> load_posts(const PipelineConfig& config, LoadReport* report) {
  if (config.corpus_path.empty())
    throw std::invalid_argument("config: 'corpus' path is not set");
  LoadResult loaded = load_corpus(config.corpus_path);
  if (report) *report = loaded.report;
  return std::move(loaded.posts);
}

std::set<std::string> read_retained(const fs::path& path) {
  const json j = json::parse(read_file(path));
  std::set<std::string> retained;
  for (const auto& account : j.at("accounts"))
    retained.insert(account.get<std::string>());
  return retained;
}

fs::path features_path(const PipelineConfig& config, int window) {
  return config.out_dir / ("features_w" + std::to_string(window) + ".csv");
}

fs::path standardizer_path(const PipelineConfig& config, int window) {
  return config.out_dir / ("standardizer_w" + std::to_string(window) + ".json");
}

// ---------------------------------------------------------------------------
// ingest: load the corpus, slice windows, apply the account threshold.

int cmd_ingest(const PipelineConfig& config) {
  fs::create_directories(config.out_dir);
  LoadReport report;
  const std::vector<PostRecord> posts = load_posts(config, &report);
  const DomainRegistry registry = DomainRegistry::load(config.registry_path);
  const WindowSpec spec = config.window_spec();
  const SliceResult slices = slice_windows(posts, spec, registry);
  const ThresholdScope scope = config.per_window_threshold
                                   ? ThresholdScope::kPerWindow
                                   : ThresholdScope::kFullSpan;
  const auto link_counts =
      unique_extremist_link_counts(slices, posts, registry, scope);
  std::set<std::string> retained;
  for (const auto& [account, count] : link_counts)
    if (count >= config.min_unique_links) retained.insert(account);

  json load_json = meta_json(config);
  load_json.update(json::parse(report.to_json()));
  write_text(config.out_dir / "load_report.json", load_json.dump(2));

  json windows = meta_json(config);
  windows["assigned"] = slices.assigned;
  windows["dropped"] = slices.dropped;
  windows["windows"] = json::array();
  for (int w = 0; w < spec.window_count; ++w) {
    std::size_t post_count = 0;
    std::size_t link_posts = 0;
    std::size_t extremist_posts = 0;
    std::set<std::string> accounts;
    for (const auto& [key, activity] : slices.activities) {
      if (key.second != w) continue;
      accounts.insert(key.first);
      post_count += activity.posts.size();
      link_posts += activity.link_posts.size();
      extremist_posts += activity.extremist_link_posts.size();
    }
    windows["windows"].push_back({{"index", w},
                                  {"begin", format_utc(spec.window_begin(w))},
                                  {"end", format_utc(spec.window_end(w))},
                                  {"posts", post_count},
                                  {"accounts", accounts.size()},
                                  {"link_posts", link_posts},
                                  {"extremist_link_posts", extremist_posts}});
  }
  write_text(config.out_dir / "window_stats.json", windows.dump(2));

  json retained_json = meta_json(config);
  retained_json["threshold"] = config.min_unique_links;
  retained_json["scope"] = config.per_window_threshold ? "per_window" : "full_span";
  if (!link_counts.empty()) {
    // Percentile of the unique-link distribution, the usual basis for
    // choosing the threshold.
    std::vector<double> values;
    for (const auto& [account, count] : link_counts)
      values.push_back(static_cast<double>(count));
    retained_json["unique_links_p95"] = percentile_cutoff(values, 95.0);
  }
  retained_json["accounts"] = retained;
  write_text(config.out_dir / "retained_accounts.json", retained_json.dump(2));

  std::cerr << "ingest: loaded " << report.loaded << " posts, skipped "
            << report.skipped() << "; retained " << retained.size()
            << " accounts\n";
  return 0;
}

// ---------------------------------------------------------------------------
// featurize: one feature CSV and standardizer per window.

int cmd_featurize(const PipelineConfig& config) {
  require_artifact(config.out_dir / "retained_accounts.json", "ingest");
  const std::vector<PostRecord> posts = load_posts(config, nullptr);
  const DomainRegistry registry = DomainRegistry::load(config.registry_path);
  const Lexicon lexicon = Lexicon::load(config.lexicon_path);
  const RuleSet rules = RuleSet::load(config.patterns_path);
  const WindowSpec spec = config.window_spec();
  const SliceResult slices = slice_windows(posts, spec, registry);
  const auto retained = read_retained(config.out_dir / "retained_accounts.json");
  const std::string meta = artifact_meta(config);

  for (int w = 0; w < spec.window_count; ++w) {
    const FeatureTable table = build_feature_table(
        slices, retained, posts, lexicon, rules, spec, w, config.feature_options());
    write_feature_csv(features_path(config, w), table, meta);

    Standardizer standardizer;  // zeros when the window is too thin to fit
    if (table.vectors.size() >= 2) {
      standardizer = fit_standardizer(table.vectors);
    } else {
      std::cerr << "featurize: window " << w << " has " << table.vectors.size()
                << " accounts; standardizer left degenerate\n";
      if (w == 0)
        throw std::runtime_error(
            "featurize: window 0 needs at least 2 active retained accounts");
    }
    json sj = meta_json(config);
    sj.update(json::parse(standardizer.to_json()));
    write_text(standardizer_path(config, w), sj.dump(2));
    std::cerr << "featurize: window " << w << ": " << table.accounts.size()
              << " accounts\n";
  }
  return 0;
}

Standardizer read_standardizer(const fs::path& path) {
  return Standardizer::from_json(read_file(path));
}

// ---------------------------------------------------------------------------
// cluster: fit the role model on window 0.

int cmd_cluster(const PipelineConfig& config) {
  if (config.cluster_k < 2)
    throw std::invalid_argument("cluster.k must be at least 2");
  require_artifact(features_path(config, 0), "featurize");
  require_artifact(standardizer_path(config, 0), "featurize");
  const FeatureTable table = read_feature_csv(features_path(config, 0));
  const Standardizer standardizer = read_standardizer(standardizer_path(config, 0));
  const DataMatrix rows = standardize_table(table, standardizer);

  const KMeansResult fit =
      kmeans_fit(rows, config.cluster_k, derive_seed(config.seed, hash64("cluster")),
                 config.cluster_max_iters, config.cluster_tol);

  RoleModel model;
  model.k = config.cluster_k;
  model.centroids = fit.centroids;
  model.standardizer = standardizer;
  model.seed = config.seed;
  json mj = meta_json(config);
  mj.update(json::parse(model.to_json()));
  write_text(config.out_dir / "role_model.json", mj.dump(2));

  std::vector<std::map<std::string, int>> per_window(1);
  for (std::size_t i = 0; i < table.accounts.size(); ++i)
    per_window[0][table.accounts[i]] = fit.assignment.labels[i];
  write_assignments_csv(config.out_dir / "assignments_w0.csv", per_window,
                        artifact_meta(config));

  std::vector<std::size_t> sizes(static_cast<std::size_t>(config.cluster_k), 0);
  for (int label : fit.assignment.labels) ++sizes[static_cast<std::size_t>(label)];
  json summary = meta_json(config);
  summary["k"] = config.cluster_k;
  summary["inertia"] = fit.assignment.inertia;
  summary["silhouette"] = silhouette_score(rows, fit.assignment.labels);
  summary["cluster_sizes"] = sizes;
  write_text(config.out_dir / "cluster_summary.json", summary.dump(2));

  std::cerr << "cluster: k=" << config.cluster_k
            << " inertia=" << format_double(fit.assignment.inertia) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// elbow: distortion/inertia scan over k.

int cmd_elbow(const PipelineConfig& config) {
  require_artifact(features_path(config, 0), "featurize");
  require_artifact(standardizer_path(config, 0), "featurize");
  const FeatureTable table = read_feature_csv(features_path(config, 0));
  const Standardizer standardizer = read_standardizer(standardizer_path(config, 0));
  const DataMatrix rows = standardize_table(table, standardizer);
  const ElbowCurve curve =
      elbow_scan(rows, config.elbow_k_min, config.elbow_k_max,
                 derive_seed(config.seed, hash64("elbow")), config.elbow_n_init);
  write_elbow_csv(config.out_dir / "elbow.csv", curve, artifact_meta(config));
  std::cerr << "elbow: suggested k=" << curve.suggested_k
            << " (advisory; confirm visually)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// assign: role assignment for every window against the window-0 centroids.

int cmd_assign(const PipelineConfig& config) {
  require_artifact(config.out_dir / "role_model.json", "cluster");
  const RoleModel model =
      RoleModel::from_json(read_file(config.out_dir / "role_model.json"));

  std::vector<std::map<std::string, int>> per_window;
  for (int w = 0; w < config.window_count; ++w) {
    require_artifact(features_path(config, w), "featurize");
    const FeatureTable table = read_feature_csv(features_path(config, w));
    // Later windows are standardized with their own statistics by default,
    // which controls for corpus-wide drift; the flag reuses window 0 instead.
    Standardizer standardizer = model.standardizer;
    if (!config.reuse_first_window_standardizer && w > 0)
      standardizer = read_standardizer(standardizer_path(config, w));
    const DataMatrix rows = standardize_table(table, standardizer);
    const std::vector<int> labels = assign_to_model(rows, model);
    per_window.emplace_back();
    for (std::size_t i = 0; i < table.accounts.size(); ++i)
      per_window.back()[table.accounts[i]] = labels[i];
  }
  write_assignments_csv(config.out_dir / "assignments.csv", per_window,
                        artifact_meta(config));
  std::cerr << "assign: wrote assignments for " << config.window_count
            << " windows\n";
  return 0;
}

// ---------------------------------------------------------------------------
// dynamics: retention spans and transition matrices.

int cmd_dynamics(const PipelineConfig& config) {
  require_artifact(config.out_dir / "assignments.csv", "assign");
  require_artifact(config.out_dir / "role_model.json", "cluster");
  const RoleModel model =
      RoleModel::from_json(read_file(config.out_dir / "role_model.json"));
  auto per_window = read_assignments_csv(config.out_dir / "assignments.csv");
  per_window.resize(static_cast<std::size_t>(config.window_count));

  const auto sequences = build_sequences(per_window);
  const auto retention = retention_distribution(sequences, model.k);
  write_retention_csv(config.out_dir / "retention.csv", retention, model,
                      artifact_meta(config));

  const int dim = config.inactive_as_state ? model.k + 1 : model.k;
  std::vector<std::string> labels;
  for (int r = 0; r < model.k; ++r) labels.push_back(model.role_name(r));
  if (config.inactive_as_state) labels.push_back("inactive");

  const auto pooled =
      transition_matrix(sequences, model.k, config.inactive_as_state);
  write_matrix_csv(config.out_dir / "transitions.csv", labels, labels,
                   pooled.probabilities, artifact_meta(config));
  const auto per_pair =
      per_pair_transition_matrices(sequences, model.k, config.inactive_as_state);
  for (std::size_t pair = 0; pair < per_pair.size(); ++pair) {
    write_matrix_csv(config.out_dir / ("transitions_pair_" + std::to_string(pair) +
                                       ".csv"),
                     labels, labels, per_pair[pair].probabilities,
                     artifact_meta(config));
  }

  json summary = meta_json(config);
  summary["sequences"] = sequences.size();
  summary["excluded_inactive_start"] = retention.excluded_inactive_start;
  summary["zero_rows"] = pooled.zero_rows;
  summary["states"] = dim;
  write_text(config.out_dir / "dynamics_summary.json", summary.dump(2));
  std::cerr << "dynamics: " << sequences.size() << " sequences\n";
  return 0;
}

// ---------------------------------------------------------------------------
// hawkes: per-link fits and per-source-type influence matrices.

json em_result_json(const EmResult& result) {
  json j = json::parse(result.params.to_json());
  j["iterations"] = result.iterations;
  j["log_likelihood"] = result.log_likelihood;
  j["converged"] = result.converged;
  return j;
}

int fit_series_mode(const PipelineConfig& config, const fs::path& series_path,
                    const fs::path& truth_path) {
  fs::create_directories(config.out_dir / "hawkes_fits");
  const EventSeries series = EventSeries::from_json(read_file(series_path));
  EmConfig em;
  em.lag_horizon = config.hawkes_lag_bins;
  em.max_iters = config.hawkes_max_iters;
  em.tol = config.hawkes_tol;
  em.seed = derive_seed(config.seed, hash64("hawkes-series"));
  em.per_pair_lags = config.hawkes_per_pair_lags;
  const EmResult result = fit_em(series, em);

  json fit = meta_json(config);
  fit.update(em_result_json(result));
  fit["events"] = series.total_events();
  write_text(config.out_dir / "hawkes_fits" / "fit_000.json", fit.dump(2));

  if (!truth_path.empty()) {
    const HawkesParams truth = HawkesParams::from_json(read_file(truth_path));
    json recovery = meta_json(config);
    double max_w_err = 0.0;
    for (int i = 0; i < truth.process_count; ++i)
      for (int j = 0; j < truth.process_count; ++j)
        max_w_err = std::max(
            max_w_err,
            std::abs(result.params.weights[static_cast<std::size_t>(i)]
                                          [static_cast<std::size_t>(j)] -
                     truth.weights[static_cast<std::size_t>(i)]
                                  [static_cast<std::size_t>(j)]));
    recovery["max_weight_abs_error"] = max_w_err;
    json bg_err = json::array();
    for (std::size_t k = 0; k < truth.background_rates.size(); ++k) {
      const double t = truth.background_rates[k];
      bg_err.push_back(t > 0
                           ? std::abs(result.params.background_rates[k] - t) / t
                           : result.params.background_rates[k]);
    }
    recovery["background_rel_error"] = bg_err;
    if (!truth.per_pair() && !result.params.per_pair()) {
      double tv = 0.0;
      const std::size_t lags =
          std::max(truth.lag_pmf.size(), result.params.lag_pmf.size());
      for (std::size_t t = 0; t < lags; ++t) {
        const double a = t < truth.lag_pmf.size() ? truth.lag_pmf[t] : 0.0;
        const double b =
            t < result.params.lag_pmf.size() ? result.params.lag_pmf[t] : 0.0;
        tv += std::abs(a - b);
      }
      recovery["lag_tv_distance"] = tv / 2.0;
    }
    recovery["converged"] = result.converged;
    recovery["iterations"] = result.iterations;
    write_text(config.out_dir / "recovery_report.json", recovery.dump(2));
  }
  std::cerr << "hawkes: fitted series with " << series.total_events()
            << " events in " << result.iterations << " iterations\n";
  return 0;
}

int cmd_hawkes(const PipelineConfig& config, const std::string& series_file,
               const std::string& truth_file) {
  fs::create_directories(config.out_dir);
  if (!series_file.empty())
    return fit_series_mode(config, series_file,
                           truth_file.empty() ? fs::path() : fs::path(truth_file));

  require_artifact(config.out_dir / "assignments.csv", "assign");
  require_artifact(config.out_dir / "role_model.json", "cluster");
  const RoleModel model =
      RoleModel::from_json(read_file(config.out_dir / "role_model.json"));
  const auto per_window = read_assignments_csv(config.out_dir / "assignments.csv");
  if (per_window.empty()) throw std::runtime_error("assignments.csv is empty");
  const std::map<std::string, int>& roles = per_window[0];

  const std::vector<PostRecord> all_posts = load_posts(config, nullptr);
  const DomainRegistry registry = DomainRegistry::load(config.registry_path);
  const WindowSpec spec = config.window_spec();

  // Influence is fitted on the first window's link posts.
  std::vector<PostRecord> posts;
  for (const PostRecord& post : all_posts) {
    if (spec.window_of(post.timestamp) == 0 && !post.links.empty())
      posts.push_back(post);
  }

  std::int64_t bin_width = config.delta_t_override;
  if (bin_width <= 0) {
    const auto gaps = link_inter_arrivals(posts, roles, registry);
    if (gaps.empty())
      throw std::runtime_error("hawkes: no repeated link posts to derive a bin width");
    bin_width = choose_bin_width(gaps, config.delta_t_percentile);
  }

  const std::vector<std::string> links = select_links(
      posts, roles, registry, config.link_min_accounts, config.link_min_roles);
  if (links.empty())
    throw std::runtime_error("hawkes: no links meet the selection thresholds");

  fs::create_directories(config.out_dir / "hawkes_fits");
  EmConfig em;
  em.lag_horizon = config.hawkes_lag_bins;
  em.max_iters = config.hawkes_max_iters;
  em.tol = config.hawkes_tol;
  em.per_pair_lags = config.hawkes_per_pair_lags;

  struct FitSlot {
    LinkFit fit;
    EmResult result;
    bool ok = false;
    std::string error;
  };
  std::vector<FitSlot> slots(links.size());

  // Per-link fits are independent; seeds derive from the link so thread
  // scheduling cannot perturb results.
  std::atomic<std::size_t> cursor{0};
  const auto worker = [&]() {
    while (true) {
      const std::size_t index = cursor.fetch_add(1);
      if (index >= links.size()) break;
      FitSlot& slot = slots[index];
      try {
        const EventSeries series = build_event_series(
            links[index], posts, roles, model.k, registry, bin_width);
        EmConfig link_em = em;
        link_em.seed = derive_seed(config.seed, hash64(links[index]));
        slot.result = fit_em(series, link_em);
        slot.fit.link_url = links[index];
        slot.fit.source_type = series.source_type;
        slot.fit.params = slot.result.params;
        slot.fit.events = series.total_events();
        slot.ok = true;
      } catch (const std::exception& error) {
        slot.error = error.what();
      }
    }
  };
  const int thread_count = std::max(1, config.threads);
  if (thread_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::vector<LinkFit> fits;
  CsvWriter manifest(config.out_dir / "hawkes_fits.csv");
  manifest.write_row({artifact_meta(config)});
  manifest.write_row({"link", "file", "source_type", "events", "iterations",
                      "converged", "log_likelihood", "error"});
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const FitSlot& slot = slots[i];
    char name[32];
    std::snprintf(name, sizeof(name), "fit_%04zu.json", i);
    if (slot.ok) {
      json fit = meta_json(config);
      fit.update(em_result_json(slot.result));
      fit["link"] = links[i];
      fit["source_type"] = source_type_name(slot.fit.source_type);
      fit["events"] = slot.fit.events;
      fit["bin_width_seconds"] = bin_width;
      write_text(config.out_dir / "hawkes_fits" / name, fit.dump(2));
      manifest.write_row({links[i], name,
                          std::string(source_type_name(slot.fit.source_type)),
                          std::to_string(slot.fit.events),
                          std::to_string(slot.result.iterations),
                          slot.result.converged ? "true" : "false",
                          format_double(slot.result.log_likelihood), ""});
      fits.push_back(slot.fit);
    } else {
      manifest.write_row({links[i], name, "", "", "", "", "", slot.error});
    }
  }

  const auto reports = aggregate_influence(fits, model.k);
  std::vector<std::string> labels;
  for (int r = 0; r < model.k; ++r) labels.push_back(model.role_name(r));
  for (const InfluenceReport& report : reports) {
    const std::string type(source_type_name(report.source_type));
    write_matrix_csv(config.out_dir / ("influence_" + type + ".csv"), labels,
                     labels, report.mean_normalized_weights,
                     artifact_meta(config));
  }
  write_accounting_csv(config.out_dir / "accounting.csv",
                       event_accounting(posts, roles, registry, model.k), model,
                       artifact_meta(config));

  json summary = meta_json(config);
  summary["bin_width_seconds"] = bin_width;
  summary["lag_bins"] = config.hawkes_lag_bins;
  summary["tol"] = config.hawkes_tol;
  summary["links_selected"] = links.size();
  summary["links_fitted"] = fits.size();
  write_text(config.out_dir / "hawkes_summary.json", summary.dump(2));
  std::cerr << "hawkes: fitted " << fits.size() << "/" << links.size()
            << " links at bin width " << bin_width << "s\n";
  return 0;
}

// ---------------------------------------------------------------------------
// simulate: synthetic series plus ground truth for recovery testing.

HawkesParams default_simulation_params() {
  // Three processes, two of them mutually exciting, one pure sink; stable
  // (spectral radius 0.798) yet busy enough to exercise estimation.
  HawkesParams params;
  params.process_count = 3;
  params.background_rates = {0.01, 0.02, 0.005};
  params.weights = {{0.399, 0.399, 0.399}, {0.399, 0.399, 0.399}, {0.0, 0.0, 0.0}};
  const double p = 0.3;
  const int lags = 20;
  params.lag_pmf.resize(lags);
  double mass = 0.0;
  for (int t = 0; t < lags; ++t) {
    params.lag_pmf[static_cast<std::size_t>(t)] = p * std::pow(1.0 - p, t);
    mass += params.lag_pmf[static_cast<std::size_t>(t)];
  }
  for (double& g : params.lag_pmf) g /= mass;  // geometric, truncated
  return params;
}

int cmd_simulate(const PipelineConfig& config, const std::string& params_file,
                 std::int64_t horizon) {
  fs::create_directories(config.out_dir);
  const HawkesParams params = params_file.empty()
                                  ? default_simulation_params()
                                  : HawkesParams::from_json(read_file(params_file));
  const SimulationTrace trace =
      simulate_traced(params, horizon, derive_seed(config.seed, hash64("simulate")));

  json series = meta_json(config);
  series.update(json::parse(trace.series.to_json()));
  write_text(config.out_dir / "sim_series.json", series.dump(2));

  json truth = meta_json(config);
  truth.update(json::parse(params.to_json()));
  truth["events_per_process"] = trace.events_per_process;
  truth["background_events"] = trace.background_events;
  truth["offspring_counts"] = trace.offspring_counts;
  write_text(config.out_dir / "sim_truth.json", truth.dump(2));

  std::cerr << "simulate: " << trace.series.total_events() << " events over "
            << horizon << " bins\n";
  return 0;
}

// ---------------------------------------------------------------------------
// vif: collinearity diagnostics over a window's features.

int cmd_vif(const PipelineConfig& config, int window) {
  require_artifact(features_path(config, window), "featurize");
  const FeatureTable table = read_feature_csv(features_path(config, window));
  DataMatrix rows;
  for (const FeatureVector& v : table.vectors) {
    const auto values = v.values();
    rows.emplace_back(values.begin(), values.end());
  }
  const std::vector<double> factors = vif(rows);
  CsvWriter csv(config.out_dir / "vif.csv");
  csv.write_row({artifact_meta(config)});
  csv.write_row({"feature", "vif"});
  for (std::size_t i = 0; i < factors.size(); ++i)
    csv.write_row({std::string(FeatureVector::names()[i]), format_double(factors[i])});
  std::cerr << "vif: wrote " << factors.size() << " factors\n";
  return 0;
}

// ---------------------------------------------------------------------------
// report: robustness battery and threshold sensitivity.

int cmd_report(const PipelineConfig& config) {
  require_artifact(features_path(config, 0), "featurize");
  require_artifact(standardizer_path(config, 0), "featurize");
  require_artifact(config.out_dir / "role_model.json", "cluster");
  require_artifact(config.out_dir / "assignments.csv", "assign");

  const RoleModel model =
      RoleModel::from_json(read_file(config.out_dir / "role_model.json"));
  const FeatureTable table = read_feature_csv(features_path(config, 0));
  const Standardizer standardizer = read_standardizer(standardizer_path(config, 0));
  const DataMatrix rows = standardize_table(table, standardizer);
  const auto per_window = read_assignments_csv(config.out_dir / "assignments.csv");

  json report = meta_json(config);

  // Clustering robustness: silhouette, agreement with a hierarchical cut,
  // collinearity factors.
  const std::vector<int> kmeans_labels = assign_to_model(rows, model);
  ClusterAssignment kmeans_assignment;
  kmeans_assignment.labels = kmeans_labels;
  kmeans_assignment.k = model.k;
  report["silhouette"] = silhouette_score(rows, kmeans_labels);

  const ClusterAssignment agglo = agglomerative_fit(rows, model.k);
  const auto overlap = jaccard_overlap(kmeans_assignment, agglo);
  double overlap_mean = 0.0;
  json overlap_json = json::object();
  for (const auto& [cluster, score] : overlap) {
    overlap_json[model.role_name(cluster)] = score;
    overlap_mean += score;
  }
  if (!overlap.empty()) overlap_mean /= static_cast<double>(overlap.size());
  report["agglomerative_jaccard"] = overlap_json;
  report["agglomerative_jaccard_mean"] = overlap_mean;

  try {
    DataMatrix raw;
    for (const FeatureVector& v : table.vectors) {
      const auto values = v.values();
      raw.emplace_back(values.begin(), values.end());
    }
    const std::vector<double> factors = vif(raw);
    json vj = json::object();
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const std::string name(FeatureVector::names()[i]);
      if (std::isinf(factors[i]))
        vj[name] = "infinity";
      else
        vj[name] = factors[i];
    }
    report["vif"] = vj;
  } catch (const std::exception& error) {
    report["vif_error"] = error.what();
  }

  // Threshold sensitivity: accounts an easier threshold would admit, placed
  // onto the fitted centroids.
  if (!config.report_thresholds.empty()) {
    const std::vector<PostRecord> posts = load_posts(config, nullptr);
    const DomainRegistry registry = DomainRegistry::load(config.registry_path);
    const Lexicon lexicon = Lexicon::load(config.lexicon_path);
    const RuleSet rules = RuleSet::load(config.patterns_path);
    const WindowSpec spec = config.window_spec();
    const SliceResult slices = slice_windows(posts, spec, registry);
    const ThresholdScope scope = config.per_window_threshold
                                     ? ThresholdScope::kPerWindow
                                     : ThresholdScope::kFullSpan;

    json scans = json::array();
    CsvWriter csv(config.out_dir / "threshold_sensitivity.csv");
    csv.write_row({artifact_meta(config)});
    std::vector<std::string> header = {"threshold", "accounts_added"};
    for (int r = 0; r < model.k; ++r) header.push_back("share_" + model.role_name(r));
    csv.write_row(header);

    for (std::size_t threshold : config.report_thresholds) {
      const auto added = threshold_additions(slices, posts, registry,
                                             config.min_unique_links, threshold,
                                             scope);
      std::vector<std::size_t> per_role(static_cast<std::size_t>(model.k), 0);
      std::size_t placed = 0;
      for (const std::string& account : added) {
        const auto it = slices.activities.find({account, 0});
        if (it == slices.activities.end()) continue;  // inactive in window 0
        const FeatureVector v =
            build_feature_vector(it->second, posts, lexicon, rules, spec,
                                 config.feature_options());
        const auto z = apply_standardizer(v, standardizer);
        const DataMatrix one = {{z.begin(), z.end()}};
        ++per_role[static_cast<std::size_t>(assign_to_model(one, model)[0])];
        ++placed;
      }
      json entry;
      entry["threshold"] = threshold;
      entry["accounts_added"] = added.size();
      entry["placed"] = placed;
      std::vector<std::string> row = {std::to_string(threshold),
                                      std::to_string(added.size())};
      json shares = json::object();
      for (int r = 0; r < model.k; ++r) {
        const double share =
            placed ? static_cast<double>(per_role[static_cast<std::size_t>(r)]) /
                         static_cast<double>(placed)
                   : 0.0;
        shares[model.role_name(r)] = share;
        row.push_back(format_double(share));
      }
      entry["role_share"] = shares;
      scans.push_back(entry);
      csv.write_row(row);
    }
    report["threshold_sensitivity"] = scans;
  }

  report["windows"] = per_window.size();
  write_text(config.out_dir / "report.json", report.dump(2));
  std::cerr << "report: wrote report.json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"role mining and link-sharing influence estimation"};
  app.require_subcommand(1);

  CliOptions cli;
  app.add_option("--config", cli.config_path, "flat key=value configuration file");
  app.add_option("--set", cli.overrides, "override a config key (key=value)")
      ->take_all();
  app.add_option("--out", cli.out_override, "output directory override");
  app.add_option("--seed", cli.seed_override, "top-level seed override");
  app.add_option("--threads", cli.threads_override, "worker threads override");

  auto* ingest = app.add_subcommand("ingest", "load corpus, slice windows, threshold accounts");
  auto* featurize = app.add_subcommand("featurize", "feature vectors per account-window");
  auto* cluster = app.add_subcommand("cluster", "fit role centroids on window 0");
  auto* elbow = app.add_subcommand("elbow", "distortion scan over k");
  auto* assign = app.add_subcommand("assign", "assign every window to the fitted centroids");
  auto* dynamics = app.add_subcommand("dynamics", "retention spans and transition matrices");
  auto* hawkes = app.add_subcommand("hawkes", "fit per-link excitation models");
  std::string series_file;
  std::string truth_file;
  hawkes->add_option("--series", series_file, "fit one serialized event series instead");
  hawkes->add_option("--truth", truth_file, "ground-truth params for a recovery report");
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic event series");
  std::string params_file;
  std::int64_t horizon = 50000;
  simulate->add_option("--params", params_file, "model parameters JSON");
  simulate->add_option("--horizon", horizon, "bins to simulate");
  auto* report = app.add_subcommand("report", "robustness battery and summary");
  auto* vif_cmd = app.add_subcommand("vif", "variance inflation factors");
  int vif_window = 0;
  vif_cmd->add_option("--window", vif_window, "window index (default 0)");

  CLI11_PARSE(app, argc, argv);

  try {
    const PipelineConfig config = resolve_config(cli);
    if (ingest->parsed()) return cmd_ingest(config);
    if (featurize->parsed()) return cmd_featurize(config);
    if (cluster->parsed()) return cmd_cluster(config);
    if (elbow->parsed()) return cmd_elbow(config);
    if (assign->parsed()) return cmd_assign(config);
    if (dynamics->parsed()) return cmd_dynamics(config);
    if (hawkes->parsed()) return cmd_hawkes(config, series_file, truth_file);
    if (simulate->parsed()) return cmd_simulate(config, params_file, horizon);
    if (report->parsed()) return cmd_report(config);
    if (vif_cmd->parsed()) return cmd_vif(config, vif_window);
  } catch (const std::domain_error& error) {
    std::cerr << "numerical failure: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
