// Apache License, Version 2.0, refer to LICENSE.txt

#include "rolemine/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "rolemine/civil.hpp"
#include "rolemine/io.hpp"

namespace rolemine {

using nlohmann::json;

std::string_view source_type_name(SourceType type) {
  switch (type) {
    case SourceType::kExtremist: return "extremist";
    case SourceType::kBiased: return "biased";
    case SourceType::kFakeNews: return "fake";
    case SourceType::kConspiracy: return "conspiracy";
    case SourceType::kOther: return "other";
  }
  return "other";
}

std::optional<SourceType> source_type_from_name(std::string_view name) {
  if (name == "extremist") return SourceType::kExtremist;
  if (name == "biased") return SourceType::kBiased;
  if (name == "fake") return SourceType::kFakeNews;
  if (name == "conspiracy") return SourceType::kConspiracy;
  if (name == "other") return SourceType::kOther;
  return std::nullopt;
}

std::optional<UrlParts> normalize_url(std::string_view url) {
  std::string s = trim(url);
  if (s.empty()) return std::nullopt;

  // Strip "scheme://" or a protocol-relative "//".
  const std::size_t scheme_pos = s.find("://");
  if (scheme_pos != std::string::npos) {
    s.erase(0, scheme_pos + 3);
  } else if (s.rfind("//", 0) == 0) {
    s.erase(0, 2);
  }

  const std::size_t authority_end = s.find_first_of("/?#");
  std::string authority = s.substr(0, authority_end);
  std::string rest =
      authority_end == std::string::npos ? std::string() : s.substr(authority_end);

  // Drop userinfo and port.
  const std::size_t at = authority.rfind('@');
  if (at != std::string::npos) authority.erase(0, at + 1);
  const std::size_t colon = authority.rfind(':');
  if (colon != std::string::npos &&
      authority.find_first_not_of("0123456789", colon + 1) == std::string::npos) {
    authority.erase(colon);
  }

  std::string host = to_lower(authority);
  if (host.rfind("www.", 0) == 0) host.erase(0, 4);
  if (host.empty() || host.find_first_of(" \t") != std::string::npos)
    return std::nullopt;

  std::string path = rest;
  const std::size_t query = path.find_first_of("?#");
  if (query != std::string::npos) path.erase(query);
  while (path.size() > 1 && path.back() == '/') path.pop_back();
  if (path == "/") path.clear();

  return UrlParts{std::move(host), std::move(path)};
}

namespace {

// A prefix match that only succeeds at path segment boundaries, so the
// pattern "/site/x" does not claim "/site/xy".
bool path_prefix_matches(const std::string& pattern, const std::string& path) {
  if (pattern.empty()) return true;
  if (path.size() < pattern.size()) return false;
  if (path.compare(0, pattern.size(), pattern) != 0) return false;
  return path.size() == pattern.size() || path[pattern.size()] == '/';
}

}  // namespace

void DomainRegistry::add(std::string_view pattern, SourceType type) {
  auto parts = normalize_url(pattern);
  if (!parts) throw std::invalid_argument("registry pattern is not a valid domain: " +
                                          std::string(pattern));
  auto& entries = by_host_[parts->host];
  for (const auto& e : entries) {
    if (e.path == parts->path)
      throw std::invalid_argument("duplicate registry pattern: " + std::string(pattern));
  }
  entries.push_back(Entry{parts->path, type});
  ++count_;
}

DomainRegistry DomainRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open registry file: " + path.string());
  DomainRegistry registry;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t tab = stripped.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected pattern<TAB>source_type");
    const std::string pattern = trim(stripped.substr(0, tab));
    const std::string type_name = to_lower(trim(stripped.substr(tab + 1)));
    const auto type = source_type_from_name(type_name);
    if (!type || *type == SourceType::kOther)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": unknown source type '" + type_name + "'");
    registry.add(pattern, *type);
  }
  return registry;
}

DomainRegistry::Classification DomainRegistry::classify_detail(
    std::string_view url) const {
  const auto parts = normalize_url(url);
  if (!parts) return Classification{SourceType::kOther, false};

  SourceType best = SourceType::kOther;
  std::size_t best_len = 0;
  bool found = false;

  // Walk the host suffixes at dot boundaries so bare-domain entries also
  // match subdomains.
  std::string_view host = parts->host;
  while (true) {
    const auto it = by_host_.find(std::string(host));
    if (it != by_host_.end()) {
      for (const auto& entry : it->second) {
        if (!entry.path.empty() && host.size() != parts->host.size())
          continue;  // path-prefix entries are anchored to their exact host
        if (!path_prefix_matches(entry.path, parts->path)) continue;
        const std::size_t len = host.size() + entry.path.size();
        if (!found || len > best_len) {
          found = true;
          best_len = len;
          best = entry.type;
        }
      }
    }
    const std::size_t dot = host.find('.');
    if (dot == std::string_view::npos) break;
    host.remove_prefix(dot + 1);
  }
  return Classification{best, true};
}

std::int64_t WindowSpec::window_begin(int index) const {
  return add_months_utc(start, index * window_months);
}

std::int64_t WindowSpec::window_end(int index) const {
  return add_months_utc(start, (index + 1) * window_months);
}

int WindowSpec::window_of(std::int64_t timestamp) const {
  if (timestamp < window_begin(0)) return -1;
  for (int i = 0; i < window_count; ++i) {
    if (timestamp < window_end(i)) return i;
  }
  return -1;
}

std::int64_t WindowSpec::month_begin(int window_index, int month) const {
  return add_months_utc(start, window_index * window_months + month);
}

SliceResult slice_windows(const std::vector<PostRecord>& posts,
                          const WindowSpec& spec, const DomainRegistry& registry) {
  if (spec.window_count <= 0 || spec.window_months <= 0)
    throw std::invalid_argument("window spec must have positive count and length");

  SliceResult result;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    const PostRecord& post = posts[i];
    const int w = spec.window_of(post.timestamp);
    if (w < 0) {
      ++result.dropped;
      continue;
    }
    ++result.assigned;
    auto& activity = result.activities[{post.account_id, w}];
    if (activity.posts.empty()) {
      activity.account_id = post.account_id;
      activity.window_index = w;
    }
    activity.posts.push_back(i);
    if (!post.links.empty()) {
      activity.link_posts.push_back(i);
      const bool extremist = std::any_of(
          post.links.begin(), post.links.end(), [&](const std::string& link) {
            return registry.classify(link) == SourceType::kExtremist;
          });
      if (extremist) activity.extremist_link_posts.push_back(i);
    }
  }
  return result;
}

std::map<std::string, std::size_t> unique_extremist_link_counts(
    const SliceResult& slices, const std::vector<PostRecord>& posts,
    const DomainRegistry& registry, ThresholdScope scope) {
  // Distinct extremist URL strings per account (full span) or per
  // (account, window).
  std::map<std::string, std::unordered_set<std::string>> full_span;
  std::map<std::pair<std::string, int>, std::unordered_set<std::string>> per_window;

  for (const auto& [key, activity] : slices.activities) {
    for (std::size_t idx : activity.extremist_link_posts) {
      for (const std::string& link : posts[idx].links) {
        if (registry.classify(link) != SourceType::kExtremist) continue;
        if (scope == ThresholdScope::kFullSpan) {
          full_span[activity.account_id].insert(link);
        } else {
          per_window[key].insert(link);
        }
      }
    }
  }

  std::map<std::string, std::size_t> counts;
  if (scope == ThresholdScope::kFullSpan) {
    for (const auto& [account, urls] : full_span) counts[account] = urls.size();
  } else {
    for (const auto& [key, urls] : per_window) {
      auto& best = counts[key.first];
      best = std::max(best, urls.size());
    }
  }
  return counts;
}

std::set<std::string> apply_account_threshold(
    const SliceResult& slices, const std::vector<PostRecord>& posts,
    const DomainRegistry& registry, std::size_t min_unique_extremist_links,
    ThresholdScope scope) {
  if (min_unique_extremist_links == 0)
    throw std::invalid_argument("account threshold must be positive");
  std::set<std::string> retained;
  for (const auto& [account, count] :
       unique_extremist_link_counts(slices, posts, registry, scope)) {
    if (count >= min_unique_extremist_links) retained.insert(account);
  }
  return retained;
}

std::set<std::string> threshold_additions(
    const SliceResult& slices, const std::vector<PostRecord>& posts,
    const DomainRegistry& registry, std::size_t higher_threshold,
    std::size_t lower_threshold, ThresholdScope scope) {
  if (lower_threshold > higher_threshold)
    throw std::invalid_argument("lower_threshold must not exceed higher_threshold");
  const auto base = apply_account_threshold(slices, posts, registry,
                                            higher_threshold, scope);
  const auto wide = apply_account_threshold(slices, posts, registry,
                                            lower_threshold, scope);
  std::set<std::string> added;
  std::set_difference(wide.begin(), wide.end(), base.begin(), base.end(),
                      std::inserter(added, added.begin()));
  return added;
}

double percentile_cutoff(std::vector<double> values, double percentile) {
  if (values.empty())
    throw std::invalid_argument("percentile_cutoff: empty input");
  if (percentile < 0.0 || percentile > 100.0)
    throw std::invalid_argument("percentile_cutoff: percentile outside [0,100]");
  std::sort(values.begin(), values.end());
  const double rank = percentile / 100.0 * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(rank));
  if (lo == hi) return values[lo];
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::string LoadReport::to_json() const {
  json j;
  j["loaded"] = loaded;
  j["skipped"] = skipped();
  j["skipped_parse"] = skipped_parse;
  j["skipped_invalid"] = skipped_invalid;
  j["skipped_duplicate"] = skipped_duplicate;
  return j.dump(2);
}

namespace {

bool parse_post_line(const std::string& line, PostRecord& out, bool& parse_error) {
  parse_error = false;
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    parse_error = true;
    return false;
  }
  if (!j.contains("post_id") || !j["post_id"].is_string()) return false;
  if (!j.contains("account_id") || !j["account_id"].is_string()) return false;
  if (!j.contains("timestamp") || !j["timestamp"].is_number_integer()) return false;

  PostRecord post;
  post.post_id = j["post_id"].get<std::string>();
  post.account_id = j["account_id"].get<std::string>();
  post.timestamp = j["timestamp"].get<std::int64_t>();
  if (post.timestamp < 0 || post.post_id.empty() || post.account_id.empty())
    return false;

  if (j.contains("text")) {
    if (!j["text"].is_string()) return false;
    post.text = j["text"].get<std::string>();
  }
  if (j.contains("links")) {
    if (!j["links"].is_array()) return false;
    for (const auto& item : j["links"]) {
      if (!item.is_string()) return false;
      post.links.push_back(item.get<std::string>());
    }
  }
  const auto read_count = [&](const char* name, std::int64_t& value) {
    if (!j.contains(name)) return true;
    if (!j[name].is_number_integer()) return false;
    value = j[name].get<std::int64_t>();
    return value >= 0;
  };
  if (!read_count("likes", post.likes)) return false;
  if (!read_count("shares", post.shares)) return false;
  if (!read_count("comments", post.comments)) return false;

  out = std::move(post);
  return true;
}

}  // namespace

LoadResult load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path.string());

  LoadResult result;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    PostRecord post;
    bool parse_error = false;
    if (!parse_post_line(line, post, parse_error)) {
      if (parse_error)
        ++result.report.skipped_parse;
      else
        ++result.report.skipped_invalid;
      continue;
    }
    if (!seen_ids.insert(post.post_id).second) {
      ++result.report.skipped_duplicate;
      continue;
    }
    result.posts.push_back(std::move(post));
    ++result.report.loaded;
  }
  return result;
}

}  // namespace rolemine
