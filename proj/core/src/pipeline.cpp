// Apache License, Version 2.0, refer to LICENSE.txt

#include "rolemine/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rolemine/civil.hpp"
#include "rolemine/io.hpp"
#include "rolemine/rng.hpp"

namespace rolemine {

namespace {

bool parse_bool(const std::string& value) {
  const std::string v = to_lower(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config: expected a boolean, got '" + value + "'");
}

std::int64_t parse_i64(const std::string& value) {
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw std::invalid_argument("config: expected an integer, got '" + value + "'");
  return out;
}

double parse_f64(const std::string& value) {
  double out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw std::invalid_argument("config: expected a number, got '" + value + "'");
  return out;
}

}  // namespace

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  PipelineConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected key=value");
    config.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return config;
}

void PipelineConfig::set(const std::string& key, const std::string& value) {
  if (key == "corpus") corpus_path = value;
  else if (key == "registry") registry_path = value;
  else if (key == "lexicon") lexicon_path = value;
  else if (key == "patterns") patterns_path = value;
  else if (key == "out") out_dir = value;
  else if (key == "window.start") {
    const auto parsed = parse_utc_timestamp(value);
    if (!parsed) throw std::invalid_argument("config: bad window.start '" + value + "'");
    window_start = *parsed;
  } else if (key == "window.months") window_months = static_cast<int>(parse_i64(value));
  else if (key == "window.count") window_count = static_cast<int>(parse_i64(value));
  else if (key == "threshold.min_unique_links")
    min_unique_links = static_cast<std::size_t>(parse_i64(value));
  else if (key == "threshold.per_window") per_window_threshold = parse_bool(value);
  else if (key == "cluster.k") cluster_k = static_cast<int>(parse_i64(value));
  else if (key == "cluster.max_iters") cluster_max_iters = static_cast<int>(parse_i64(value));
  else if (key == "cluster.tol") cluster_tol = parse_f64(value);
  else if (key == "elbow.k_min") elbow_k_min = static_cast<int>(parse_i64(value));
  else if (key == "elbow.k_max") elbow_k_max = static_cast<int>(parse_i64(value));
  else if (key == "elbow.n_init") elbow_n_init = static_cast<int>(parse_i64(value));
  else if (key == "features.popularity_all_links") popularity_all_links = parse_bool(value);
  else if (key == "features.popularity_epsilon") popularity_epsilon = parse_f64(value);
  else if (key == "features.reuse_t1_standardizer")
    reuse_first_window_standardizer = parse_bool(value);
  else if (key == "hawkes.delta_t") delta_t_override = parse_i64(value);
  else if (key == "hawkes.percentile") delta_t_percentile = parse_f64(value);
  else if (key == "hawkes.lag_bins") hawkes_lag_bins = static_cast<int>(parse_i64(value));
  else if (key == "hawkes.max_iters") hawkes_max_iters = static_cast<int>(parse_i64(value));
  else if (key == "hawkes.tol") hawkes_tol = parse_f64(value);
  else if (key == "hawkes.min_accounts")
    link_min_accounts = static_cast<std::size_t>(parse_i64(value));
  else if (key == "hawkes.min_roles")
    link_min_roles = static_cast<std::size_t>(parse_i64(value));
  else if (key == "hawkes.per_pair_lags") hawkes_per_pair_lags = parse_bool(value);
  else if (key == "dynamics.inactive_as_state") inactive_as_state = parse_bool(value);
  else if (key == "report.thresholds") {
    report_thresholds.clear();
    for (const std::string& piece : split_trimmed(value, ',')) {
      if (piece.empty()) continue;
      report_thresholds.push_back(static_cast<std::size_t>(parse_i64(piece)));
    }
  } else if (key == "seed") seed = static_cast<std::uint64_t>(parse_i64(value));
  else if (key == "threads") threads = static_cast<int>(parse_i64(value));
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

std::string PipelineConfig::canonical() const {
  std::ostringstream out;
  out << "cluster.k=" << cluster_k << '\n'
      << "cluster.max_iters=" << cluster_max_iters << '\n'
      << "cluster.tol=" << format_double(cluster_tol) << '\n'
      << "corpus=" << corpus_path.string() << '\n'
      << "dynamics.inactive_as_state=" << (inactive_as_state ? 1 : 0) << '\n'
      << "elbow.k_max=" << elbow_k_max << '\n'
      << "elbow.k_min=" << elbow_k_min << '\n'
      << "elbow.n_init=" << elbow_n_init << '\n'
      << "features.popularity_all_links=" << (popularity_all_links ? 1 : 0) << '\n'
      << "features.popularity_epsilon=" << format_double(popularity_epsilon) << '\n'
      << "features.reuse_t1_standardizer="
      << (reuse_first_window_standardizer ? 1 : 0) << '\n'
      << "hawkes.delta_t=" << delta_t_override << '\n'
      << "hawkes.lag_bins=" << hawkes_lag_bins << '\n'
      << "hawkes.max_iters=" << hawkes_max_iters << '\n'
      << "hawkes.min_accounts=" << link_min_accounts << '\n'
      << "hawkes.min_roles=" << link_min_roles << '\n'
      << "hawkes.per_pair_lags=" << (hawkes_per_pair_lags ? 1 : 0) << '\n'
      << "hawkes.percentile=" << format_double(delta_t_percentile) << '\n'
      << "hawkes.tol=" << format_double(hawkes_tol) << '\n'
      << "lexicon=" << lexicon_path.string() << '\n'
      << "patterns=" << patterns_path.string() << '\n'
      << "registry=" << registry_path.string() << '\n'
      << "report.thresholds=";
  for (std::size_t i = 0; i < report_thresholds.size(); ++i) {
    if (i) out << ',';
    out << report_thresholds[i];
  }
  out << '\n'
      << "seed=" << seed << '\n'
      << "threshold.min_unique_links=" << min_unique_links << '\n'
      << "threshold.per_window=" << (per_window_threshold ? 1 : 0) << '\n'
      << "window.count=" << window_count << '\n'
      << "window.months=" << window_months << '\n'
      << "window.start=" << window_start << '\n';
  return out.str();
}

std::string PipelineConfig::config_hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash64(canonical())));
  return buf;
}

WindowSpec PipelineConfig::window_spec() const {
  WindowSpec spec;
  spec.start = window_start;
  spec.window_months = window_months;
  spec.window_count = window_count;
  return spec;
}

FeatureOptions PipelineConfig::feature_options() const {
  FeatureOptions options;
  options.popularity_denominator = popularity_all_links
                                       ? PopularityDenominator::kAllLinkPosts
                                       : PopularityDenominator::kRestOfLinkPosts;
  options.popularity_epsilon = popularity_epsilon;
  return options;
}

std::string artifact_meta(const PipelineConfig& config) {
  return "# rolemine seed=" + std::to_string(config.seed) +
         " config=" + config.config_hash();
}

FeatureTable build_feature_table(const SliceResult& slices,
                                 const std::set<std::string>& retained,
                                 const std::vector<PostRecord>& posts,
                                 const Lexicon& lexicon, const RuleSet& rules,
                                 const WindowSpec& spec, int window_index,
                                 const FeatureOptions& options) {
  FeatureTable table;
  table.window_index = window_index;
  for (const auto& [key, activity] : slices.activities) {
    if (key.second != window_index) continue;
    if (!retained.count(key.first)) continue;
    table.accounts.push_back(key.first);
    table.vectors.push_back(
        build_feature_vector(activity, posts, lexicon, rules, spec, options));
  }
  return table;
}

void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table,
                       const std::string& meta) {
  CsvWriter csv(path);
  csv.write_row({meta});
  std::vector<std::string> header = {"account_id", "window_index"};
  for (std::string_view name : FeatureVector::names()) header.emplace_back(name);
  csv.write_row(header);
  for (std::size_t i = 0; i < table.accounts.size(); ++i) {
    std::vector<std::string> row = {table.accounts[i],
                                    std::to_string(table.window_index)};
    for (double v : table.vectors[i].values()) row.push_back(format_double(v));
    csv.write_row(row);
  }
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  // Fields written by CsvWriter; quoting only appears around account ids.
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

}  // namespace

FeatureTable read_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open feature csv: " + path.string());
  FeatureTable table;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_row(line);
    if (fields.size() != 2 + FeatureVector::kDim)
      throw std::runtime_error("feature csv: wrong column count in " + path.string());
    table.accounts.push_back(fields[0]);
    table.window_index = static_cast<int>(parse_i64(fields[1]));
    std::array<double, FeatureVector::kDim> values{};
    for (std::size_t i = 0; i < FeatureVector::kDim; ++i)
      values[i] = parse_f64(fields[2 + i]);
    table.vectors.push_back(FeatureVector::from_values(values));
  }
  return table;
}

DataMatrix standardize_table(const FeatureTable& table, const Standardizer& s) {
  DataMatrix rows;
  rows.reserve(table.vectors.size());
  for (const FeatureVector& v : table.vectors) {
    const auto z = apply_standardizer(v, s);
    rows.emplace_back(z.begin(), z.end());
  }
  return rows;
}

void write_assignments_csv(const std::filesystem::path& path,
                           const std::vector<std::map<std::string, int>>& per_window,
                           const std::string& meta) {
  CsvWriter csv(path);
  csv.write_row({meta});
  csv.write_row({"account_id", "window_index", "cluster"});
  for (std::size_t w = 0; w < per_window.size(); ++w) {
    for (const auto& [account, cluster] : per_window[w]) {
      csv.write_row({account, std::to_string(w), std::to_string(cluster)});
    }
  }
}

std::vector<std::map<std::string, int>> read_assignments_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open assignments csv: " + path.string());
  std::vector<std::map<std::string, int>> per_window;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_row(line);
    if (fields.size() != 3)
      throw std::runtime_error("assignments csv: wrong column count");
    const auto window = static_cast<std::size_t>(parse_i64(fields[1]));
    if (per_window.size() <= window) per_window.resize(window + 1);
    per_window[window][fields[0]] = static_cast<int>(parse_i64(fields[2]));
  }
  return per_window;
}

void write_matrix_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels,
                      const std::vector<std::vector<double>>& matrix,
                      const std::string& meta) {
  CsvWriter csv(path);
  csv.write_row({meta});
  std::vector<std::string> header = {"role"};
  header.insert(header.end(), col_labels.begin(), col_labels.end());
  csv.write_row(header);
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    std::vector<std::string> row = {row_labels[i]};
    for (double v : matrix[i]) row.push_back(format_double(v));
    csv.write_row(row);
  }
}

void write_elbow_csv(const std::filesystem::path& path, const ElbowCurve& curve,
                     const std::string& meta) {
  CsvWriter csv(path);
  csv.write_row({meta});
  csv.write_row({"k", "distortion", "inertia"});
  for (const ElbowPoint& point : curve.points) {
    csv.write_row({std::to_string(point.k), format_double(point.distortion),
                   format_double(point.inertia)});
  }
}

void write_retention_csv(const std::filesystem::path& path,
                         const RetentionReport& report, const RoleModel& model,
                         const std::string& meta) {
  CsvWriter csv(path);
  csv.write_row({meta});
  csv.write_row({"role", "span", "proportion"});
  for (const auto& [role, proportions] : report.proportions) {
    for (std::size_t span = 0; span < proportions.size(); ++span) {
      csv.write_row({model.role_name(role), std::to_string(span + 1),
                     format_double(proportions[span])});
    }
  }
}

std::map<int, double> jaccard_overlap_by_account(
    const std::map<std::string, int>& a, const std::map<std::string, int>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("jaccard_overlap: differing account sets");
  ClusterAssignment ca;
  ClusterAssignment cb;
  for (const auto& [account, cluster] : a) {
    const auto it = b.find(account);
    if (it == b.end())
      throw std::invalid_argument("jaccard_overlap: differing account sets");
    ca.labels.push_back(cluster);
    cb.labels.push_back(it->second);
  }
  return jaccard_overlap(ca, cb);
}

std::vector<SourceTypeAccounting> event_accounting(
    const std::vector<PostRecord>& posts, const std::map<std::string, int>& roles,
    const DomainRegistry& registry, int process_count) {
  struct Bucket {
    std::set<std::string> domains;
    std::set<std::string> links;
    std::int64_t events = 0;
    std::vector<std::int64_t> per_role;
  };
  std::map<SourceType, Bucket> buckets;

  for (const PostRecord& post : posts) {
    const auto role = roles.find(post.account_id);
    if (role == roles.end()) continue;
    std::set<std::string> seen;
    for (const std::string& link : post.links) {
      if (!seen.insert(link).second) continue;
      const SourceType type = registry.classify(link);
      if (type == SourceType::kOther) continue;
      auto& bucket = buckets[type];
      if (bucket.per_role.empty())
        bucket.per_role.assign(static_cast<std::size_t>(process_count), 0);
      const auto host = normalize_url(link);
      if (host) bucket.domains.insert(host->host);
      bucket.links.insert(link);
      ++bucket.events;
      if (role->second >= 0 && role->second < process_count)
        ++bucket.per_role[static_cast<std::size_t>(role->second)];
    }
  }

  std::vector<SourceTypeAccounting> rows;
  for (const auto& [type, bucket] : buckets) {
    SourceTypeAccounting row;
    row.source_type = type;
    row.domains_present = bucket.domains.size();
    row.unique_links = bucket.links.size();
    row.events = bucket.events;
    row.role_event_share.assign(static_cast<std::size_t>(process_count), 0.0);
    if (bucket.events > 0) {
      for (std::size_t r = 0; r < row.role_event_share.size(); ++r)
        row.role_event_share[r] = static_cast<double>(bucket.per_role[r]) /
                                  static_cast<double>(bucket.events);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_accounting_csv(const std::filesystem::path& path,
                          const std::vector<SourceTypeAccounting>& rows,
                          const RoleModel& model, const std::string& meta) {
  CsvWriter csv(path);
  csv.write_row({meta});
  std::vector<std::string> header = {"source_type", "domains_present",
                                     "unique_links", "events"};
  for (int r = 0; r < model.k; ++r) header.push_back("share_" + model.role_name(r));
  csv.write_row(header);
  for (const SourceTypeAccounting& row : rows) {
    std::vector<std::string> fields = {std::string(source_type_name(row.source_type)),
                                       std::to_string(row.domains_present),
                                       std::to_string(row.unique_links),
                                       std::to_string(row.events)};
    for (double share : row.role_event_share) fields.push_back(format_double(share));
    csv.write_row(fields);
  }
}

}  // namespace rolemine
