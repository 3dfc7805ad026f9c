// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rolemine {

/// One timestamped post by an account. Non-link posts are kept; they feed
/// denominator counts downstream.
struct PostRecord {
  std::string post_id;
  std::string account_id;
  std::int64_t timestamp = 0;  // epoch seconds, UTC
  std::string text;
  std::vector<std::string> links;
  std::int64_t likes = 0;
  std::int64_t shares = 0;
  std::int64_t comments = 0;
};

enum class SourceType { kExtremist, kBiased, kFakeNews, kConspiracy, kOther };

/// Lowercase wire name ("extremist", "biased", "fake", "conspiracy", "other").
std::string_view source_type_name(SourceType type);
std::optional<SourceType> source_type_from_name(std::string_view name);

/// Normalized pieces of a URL used for registry matching: lowercase host with
/// scheme, port and a leading "www." removed, plus the path (no query or
/// fragment).
struct UrlParts {
  std::string host;
  std::string path;
};
std::optional<UrlParts> normalize_url(std::string_view url);

/// Maps link domains (optionally with a path prefix for generic hosts) to
/// source types. The longest matching pattern wins; bare domains also match
/// their subdomains; path-prefix entries match at path segment boundaries.
class DomainRegistry {
 public:
  /// Throws std::invalid_argument on a duplicate pattern.
  void add(std::string_view pattern, SourceType type);

  /// One "pattern<TAB>source_type" entry per line; '#' starts a comment.
  static DomainRegistry load(const std::filesystem::path& path);

  struct Classification {
    SourceType type = SourceType::kOther;
    bool parsed = true;
  };
  Classification classify_detail(std::string_view url) const;
  SourceType classify(std::string_view url) const { return classify_detail(url).type; }

  std::size_t size() const { return count_; }

 private:
  struct Entry {
    std::string path;  // "" for bare domains
    SourceType type = SourceType::kOther;
  };
  std::unordered_map<std::string, std::vector<Entry>> by_host_;
  std::size_t count_ = 0;
};

/// Pure classification of one URL against a registry.
inline SourceType classify_link(std::string_view url, const DomainRegistry& registry) {
  return registry.classify(url);
}

/// Contiguous, non-overlapping analysis windows measured in UTC calendar
/// months. Window boundaries are half-open: [begin, end).
struct WindowSpec {
  std::int64_t start = 0;   // epoch seconds of the first window's begin
  int window_months = 6;
  int window_count = 4;

  std::int64_t window_begin(int index) const;
  std::int64_t window_end(int index) const;
  /// Index of the window containing the timestamp, or -1.
  int window_of(std::int64_t timestamp) const;
  /// Begin of calendar-month bucket `month` (0-based) inside a window.
  std::int64_t month_begin(int window_index, int month) const;
};

/// Per (account, window) activity. Post references are indices into the
/// corpus vector the slice was computed from.
struct AccountWindowActivity {
  std::string account_id;
  int window_index = 0;
  std::vector<std::size_t> posts;
  std::vector<std::size_t> link_posts;            // posts with >= 1 link
  std::vector<std::size_t> extremist_link_posts;  // >= 1 extremist link
};

struct SliceResult {
  /// Keyed (account_id, window_index); std::map keeps iteration and hence
  /// all downstream output deterministic.
  std::map<std::pair<std::string, int>, AccountWindowActivity> activities;
  std::size_t assigned = 0;
  std::size_t dropped = 0;
};

/// Assigns every post to at most one window. assigned + dropped equals the
/// input size.
SliceResult slice_windows(const std::vector<PostRecord>& posts,
                          const WindowSpec& spec,
                          const DomainRegistry& registry);

enum class ThresholdScope {
  kFullSpan,   // distinct extremist URLs over all windows combined
  kPerWindow,  // retained when any single window meets the threshold
};

/// Distinct extremist-classified URLs per account. Under kPerWindow the
/// count is the account's best single window.
std::map<std::string, std::size_t> unique_extremist_link_counts(
    const SliceResult& slices, const std::vector<PostRecord>& posts,
    const DomainRegistry& registry,
    ThresholdScope scope = ThresholdScope::kFullSpan);

/// Accounts whose count of distinct extremist-classified URLs meets the
/// threshold (default scope: full span).
std::set<std::string> apply_account_threshold(
    const SliceResult& slices, const std::vector<PostRecord>& posts,
    const DomainRegistry& registry, std::size_t min_unique_extremist_links,
    ThresholdScope scope = ThresholdScope::kFullSpan);

/// Accounts that a lower threshold admits beyond a higher one; exactly the
/// set difference retained(lower) \ retained(higher).
std::set<std::string> threshold_additions(
    const SliceResult& slices, const std::vector<PostRecord>& posts,
    const DomainRegistry& registry, std::size_t higher_threshold,
    std::size_t lower_threshold, ThresholdScope scope = ThresholdScope::kFullSpan);

/// Linear-interpolation percentile over the order statistics.
/// percentile is in [0, 100]; throws std::invalid_argument on empty input.
double percentile_cutoff(std::vector<double> values, double percentile);

struct LoadReport {
  std::size_t loaded = 0;
  std::size_t skipped_parse = 0;      // line is not a JSON object
  std::size_t skipped_invalid = 0;    // missing/ill-typed required fields
  std::size_t skipped_duplicate = 0;  // repeated post_id
  std::size_t skipped() const {
    return skipped_parse + skipped_invalid + skipped_duplicate;
  }
  std::string to_json() const;
};

struct LoadResult {
  std::vector<PostRecord> posts;
  LoadReport report;
};

/// Loads a line-delimited corpus (one JSON object per line; fields post_id,
/// account_id, timestamp, text, links, likes, shares, comments; unknown
/// fields ignored). Bad lines are skipped and counted; an unreadable file
/// throws std::runtime_error.
LoadResult load_corpus(const std::filesystem::path& path);

}  // namespace rolemine
