// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rolemine/clustering.hpp"
#include "rolemine/corpus.hpp"
#include "rolemine/dynamics.hpp"
#include "rolemine/features.hpp"
#include "rolemine/hawkes.hpp"
#include "rolemine/lexicon.hpp"
#include "rolemine/patterns.hpp"

namespace rolemine {

/// Everything a pipeline run needs, read from a flat key=value file with
/// command-line overrides. All randomness flows from the single seed.
struct PipelineConfig {
  std::filesystem::path corpus_path;
  std::filesystem::path registry_path;
  std::filesystem::path lexicon_path;
  std::filesystem::path patterns_path;
  std::filesystem::path out_dir = "out";

  std::int64_t window_start = 0;
  int window_months = 6;
  int window_count = 4;

  std::size_t min_unique_links = 10;
  bool per_window_threshold = false;

  int cluster_k = 5;
  int cluster_max_iters = 300;
  double cluster_tol = 1e-6;
  int elbow_k_min = 2;
  int elbow_k_max = 20;
  int elbow_n_init = 5;

  bool popularity_all_links = false;
  double popularity_epsilon = 1.0;
  bool reuse_first_window_standardizer = false;

  std::int64_t delta_t_override = 0;  // 0 derives the width from the percentile
  double delta_t_percentile = 10.0;
  int hawkes_lag_bins = 2880;
  int hawkes_max_iters = 500;
  double hawkes_tol = 1e-6;
  std::size_t link_min_accounts = 10;
  std::size_t link_min_roles = 3;
  bool hawkes_per_pair_lags = false;

  bool inactive_as_state = false;
  std::vector<std::size_t> report_thresholds;  // threshold sensitivity scan

  std::uint64_t seed = 0;
  int threads = 1;

  static PipelineConfig from_file(const std::filesystem::path& path);
  /// Applies one "key=value" override; throws on unknown keys.
  void set(const std::string& key, const std::string& value);
  /// Canonical serialization (sorted keys) backing the config hash.
  std::string canonical() const;
  /// Hex hash of the canonical serialization; embedded in artifacts.
  std::string config_hash() const;

  WindowSpec window_spec() const;
  FeatureOptions feature_options() const;
};

/// First line of every artifact: "# rolemine seed=<seed> config=<hash>".
std::string artifact_meta(const PipelineConfig& config);

/// Sorted per-window feature rows for the retained accounts active in the
/// window.
struct FeatureTable {
  int window_index = 0;
  std::vector<std::string> accounts;
  std::vector<FeatureVector> vectors;
};

FeatureTable build_feature_table(const SliceResult& slices,
                                 const std::set<std::string>& retained,
                                 const std::vector<PostRecord>& posts,
                                 const Lexicon& lexicon, const RuleSet& rules,
                                 const WindowSpec& spec, int window_index,
                                 const FeatureOptions& options);

void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table,
                       const std::string& meta);
FeatureTable read_feature_csv(const std::filesystem::path& path);

/// Standardized rows of a feature table.
DataMatrix standardize_table(const FeatureTable& table, const Standardizer& s);

void write_assignments_csv(const std::filesystem::path& path,
                           const std::vector<std::map<std::string, int>>& per_window,
                           const std::string& meta);
std::vector<std::map<std::string, int>> read_assignments_csv(
    const std::filesystem::path& path);

void write_matrix_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels,
                      const std::vector<std::vector<double>>& matrix,
                      const std::string& meta);

void write_elbow_csv(const std::filesystem::path& path, const ElbowCurve& curve,
                     const std::string& meta);

void write_retention_csv(const std::filesystem::path& path,
                         const RetentionReport& report, const RoleModel& model,
                         const std::string& meta);

/// Account-keyed Jaccard overlap; throws when the account sets differ.
std::map<int, double> jaccard_overlap_by_account(
    const std::map<std::string, int>& a, const std::map<std::string, int>& b);

/// Per-source-type link posting accounting: distinct labeled domains seen,
/// unique links, events and the per-role event share.
struct SourceTypeAccounting {
  SourceType source_type = SourceType::kOther;
  std::size_t domains_present = 0;
  std::size_t unique_links = 0;
  std::int64_t events = 0;
  std::vector<double> role_event_share;  // length K
};

std::vector<SourceTypeAccounting> event_accounting(
    const std::vector<PostRecord>& posts, const std::map<std::string, int>& roles,
    const DomainRegistry& registry, int process_count);

void write_accounting_csv(const std::filesystem::path& path,
                          const std::vector<SourceTypeAccounting>& rows,
                          const RoleModel& model, const std::string& meta);

}  // namespace rolemine
