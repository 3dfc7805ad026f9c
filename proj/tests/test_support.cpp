// Apache License, Version 2.0, refer to LICENSE.txt

#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "rolemine/civil.hpp"
#include "rolemine/rng.hpp"

namespace rolemine::testutil {

using nlohmann::json;

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("ari: label vectors must match");
  std::map<std::pair<int, int>, double> cells;
  std::map<int, double> rows;
  std::map<int, double> cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cells[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  const auto choose2 = [](double n) { return n * (n - 1.0) / 2.0; };
  double sum_cells = 0.0;
  for (const auto& [key, n] : cells) sum_cells += choose2(n);
  double sum_rows = 0.0;
  for (const auto& [key, n] : rows) sum_rows += choose2(n);
  double sum_cols = 0.0;
  for (const auto& [key, n] : cols) sum_cols += choose2(n);
  const double total = choose2(static_cast<double>(a.size()));
  const double expected = sum_rows * sum_cols / total;
  const double max_index = (sum_rows + sum_cols) / 2.0;
  if (max_index == expected) return 1.0;
  return (sum_cells - expected) / (max_index - expected);
}

Blobs make_blobs(int per_cluster, int k, int dim, double separation,
                 std::uint64_t seed) {
  if (k > dim) throw std::invalid_argument("make_blobs: k must be <= dim");
  Blobs blobs;
  Rng rng(seed);
  const double scale = separation / std::sqrt(2.0);
  for (int c = 0; c < k; ++c) {
    for (int i = 0; i < per_cluster; ++i) {
      std::vector<double> point(static_cast<std::size_t>(dim), 0.0);
      for (int d = 0; d < dim; ++d)
        point[static_cast<std::size_t>(d)] = rng.next_gaussian();
      point[static_cast<std::size_t>(c)] += scale;
      blobs.points.push_back(std::move(point));
      blobs.labels.push_back(c);
    }
  }
  return blobs;
}

double brute_force_silhouette(const DataMatrix& points,
                              const std::vector<int>& labels) {
  const std::size_t n = points.size();
  const auto dist = [&](std::size_t i, std::size_t j) {
    double sum = 0.0;
    for (std::size_t d = 0; d < points[i].size(); ++d) {
      const double diff = points[i][d] - points[j][d];
      sum += diff * diff;
    }
    return std::sqrt(sum);
  };
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::map<int, double> sums;
    std::map<int, std::size_t> sizes;
    for (std::size_t j = 0; j < n; ++j) {
      ++sizes[labels[j]];
      if (j != i) sums[labels[j]] += dist(i, j);
    }
    if (sizes[labels[i]] == 1) continue;
    const double a = sums[labels[i]] / static_cast<double>(sizes[labels[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [cluster, size] : sizes) {
      if (cluster == labels[i]) continue;
      b = std::min(b, sums[cluster] / static_cast<double>(size));
    }
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

std::filesystem::path repo_data_dir() { return ROLEMINE_DATA_DIR; }

std::filesystem::path default_lexicon_path() {
  return repo_data_dir() / "lexicons" / "core.lex";
}

std::filesystem::path default_patterns_path() {
  return repo_data_dir() / "patterns" / "default.rules";
}

std::filesystem::path fresh_temp_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("rolemine_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

namespace {

struct Archetype {
  int posts_per_window;
  double link_prob;            // share of posts carrying a link
  double extremist_prob;       // among link posts
  double solicitation_prob;    // phrase template rates
  double opinion_prob;
  double drive_probs[6];       // injustice, achievement, group, anger, risk, reward
  double likes_mean;
  double extremist_boost;      // reaction multiplier on extremist posts
  double late_month_weight;    // >1 skews posting toward later months
};

const Archetype kArchetypes[5] = {
    // heavy distributors of extremist links
    {30, 0.75, 0.85, 0.10, 0.15, {0.30, 0.10, 0.10, 0.10, 0.30, 0.10}, 18.0, 2.0, 1.0},
    // solicitation-driven accounts
    {24, 0.70, 0.60, 0.60, 0.10, {0.10, 0.10, 0.40, 0.10, 0.10, 0.20}, 12.0, 1.5, 1.0},
    // anger-forward accounts
    {22, 0.65, 0.45, 0.05, 0.15, {0.15, 0.05, 0.10, 0.55, 0.15, 0.05}, 8.0, 1.8, 0.6},
    // opinionated accounts on an engagement upswing
    {18, 0.65, 0.30, 0.10, 0.60, {0.10, 0.45, 0.15, 0.10, 0.05, 0.40}, 6.0, 1.0, 1.8},
    // fringe, low-volume accounts
    {10, 0.60, 0.20, 0.05, 0.05, {0.05, 0.05, 0.05, 0.05, 0.05, 0.05}, 3.0, 0.7, 1.0},
};

const char* kSolicitationTemplates[] = {
    "Please donate to the fundraiser today.",
    "Sign the petition before the deadline.",
    "Will you call your senator about this?",
    "Contact us about the meeting.",
    "You should join the rally downtown.",
};

const char* kOpinionTemplates[] = {
    "We believe the plan fails everyone.",
    "I think the crisis keeps growing.",
    "They should answer for this.",
    "My opinion stays the same.",
    "Leaders must act on the vote.",
};

const char* kDriveWords[6][3] = {
    {"justice", "unfair", "rights"},      // injustice
    {"achieve", "success", "win"},        // achievement
    {"we", "our", "us"},                  // group identity
    {"angry", "rage", "hate"},            // anger
    {"crisis", "danger", "risk"},         // risk
    {"reward", "benefit", "bonus"},       // reward
};

const char* kFiller[] = {"report", "story",  "update", "road",   "local",
                         "page",   "read",   "photo",  "house",  "market",
                         "town",   "game",   "music",  "river",  "letter",
                         "window", "garden", "coffee", "bridge", "paper"};

std::string make_text(Rng& rng, const Archetype& profile) {
  std::string text;
  if (rng.next_double() < profile.solicitation_prob) {
    text += kSolicitationTemplates[rng.next_index(5)];
    text += ' ';
  }
  if (rng.next_double() < profile.opinion_prob) {
    text += kOpinionTemplates[rng.next_index(5)];
    text += ' ';
  }
  const std::size_t words = 8 + rng.next_index(8);
  for (std::size_t w = 0; w < words; ++w) {
    text += kFiller[rng.next_index(std::size(kFiller))];
    text += ' ';
  }
  for (int cat = 0; cat < 6; ++cat) {
    if (rng.next_double() < profile.drive_probs[cat]) {
      text += kDriveWords[cat][rng.next_index(3)];
      text += ' ';
    }
  }
  if (!text.empty()) text.pop_back();
  return text;
}

}  // namespace

FixturePaths write_fixture_corpus(const std::filesystem::path& dir,
                                  std::uint64_t seed, int accounts) {
  std::filesystem::create_directories(dir);
  FixturePaths paths;
  paths.corpus = dir / "corpus.jsonl";
  paths.registry = dir / "registry.tsv";

  {
    std::ofstream registry(paths.registry);
    for (int i = 0; i < 10; ++i)
      registry << "ex" << i << ".example.com\textremist\n";
    for (int i = 0; i < 4; ++i)
      registry << "bias" << i << ".example.org\tbiased\n";
    for (int i = 0; i < 4; ++i)
      registry << "fake" << i << ".example.org\tfake\n";
    for (int i = 0; i < 4; ++i)
      registry << "consp" << i << ".example.org\tconspiracy\n";
    registry << "pages.example.net/org/unit\textremist\n";
  }

  const std::int64_t start = *parse_utc_timestamp("2018-01-01");
  WindowSpec spec;
  spec.start = start;
  spec.window_months = 6;
  spec.window_count = 4;

  Rng rng(derive_seed(seed, hash64("fixture")));
  std::ofstream corpus(paths.corpus);
  std::size_t post_counter = 0;
  std::size_t unique_link_counter = 0;

  const auto emit = [&](const std::string& account, std::int64_t ts,
                        const std::string& text, std::vector<std::string> links,
                        long likes, long shares, long comments) {
    json j;
    char pid[16];
    std::snprintf(pid, sizeof(pid), "p%07zu", post_counter++);
    j["post_id"] = pid;
    j["account_id"] = account;
    j["timestamp"] = ts;
    j["text"] = text;
    j["links"] = links;
    j["likes"] = likes;
    j["shares"] = shares;
    j["comments"] = comments;
    corpus << j.dump() << "\n";
  };

  std::vector<std::string> account_ids;
  for (int i = 0; i < accounts; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "acct%03d", i);
    account_ids.emplace_back(buf);
    paths.archetypes[buf] = i % 5;
  }

  for (int i = 0; i < accounts; ++i) {
    const std::string& account = account_ids[static_cast<std::size_t>(i)];
    const Archetype& profile = kArchetypes[i % 5];
    for (int w = 0; w < spec.window_count; ++w) {
      // Month choice skewed by the archetype's engagement trend.
      std::vector<double> month_weights(6);
      double weight_total = 0.0;
      for (int m = 0; m < 6; ++m) {
        month_weights[static_cast<std::size_t>(m)] =
            std::pow(profile.late_month_weight, m);
        weight_total += month_weights[static_cast<std::size_t>(m)];
      }
      const auto pick_timestamp = [&]() {
        double r = rng.next_double() * weight_total;
        int month = 0;
        for (; month < 5; ++month) {
          r -= month_weights[static_cast<std::size_t>(month)];
          if (r <= 0) break;
        }
        const std::int64_t begin = spec.month_begin(w, month);
        const std::int64_t end = spec.month_begin(w, month + 1);
        return begin + static_cast<std::int64_t>(
                           rng.next_double() *
                           static_cast<double>(end - begin - 1));
      };

      const int posts = profile.posts_per_window +
                        static_cast<int>(rng.next_index(5));
      for (int p = 0; p < posts; ++p) {
        std::vector<std::string> links;
        bool extremist = false;
        if (rng.next_double() < profile.link_prob) {
          if (rng.next_double() < profile.extremist_prob) {
            extremist = true;
            links.push_back("https://ex" + std::to_string(rng.next_index(10)) +
                            ".example.com/p/" + std::to_string(unique_link_counter++));
          } else {
            const double mix = rng.next_double();
            if (mix < 0.25)
              links.push_back("https://bias" + std::to_string(rng.next_index(4)) +
                              ".example.org/a/" + std::to_string(unique_link_counter++));
            else if (mix < 0.40)
              links.push_back("https://fake" + std::to_string(rng.next_index(4)) +
                              ".example.org/a/" + std::to_string(unique_link_counter++));
            else if (mix < 0.55)
              links.push_back("https://consp" + std::to_string(rng.next_index(4)) +
                              ".example.org/a/" + std::to_string(unique_link_counter++));
            else
              links.push_back("https://other" + std::to_string(rng.next_index(6)) +
                              ".example.com/a/" + std::to_string(unique_link_counter++));
          }
        }
        const double boost = extremist ? profile.extremist_boost : 1.0;
        emit(account, pick_timestamp(), make_text(rng, profile), links,
             rng.next_poisson(profile.likes_mean * boost),
             rng.next_poisson(profile.likes_mean * boost * 0.4),
             rng.next_poisson(profile.likes_mean * boost * 0.25));
      }

      // Baseline engagement so every account clears the unique-link
      // threshold over the full span.
      for (int extra = 0; extra < 3; ++extra) {
        emit(account, pick_timestamp(), make_text(rng, profile),
             {"https://ex" + std::to_string(rng.next_index(10)) +
              ".example.com/p/" + std::to_string(unique_link_counter++)},
             rng.next_poisson(profile.likes_mean),
             rng.next_poisson(profile.likes_mean * 0.4),
             rng.next_poisson(profile.likes_mean * 0.25));
      }
    }
  }

  // Fringe accounts below the unique-link threshold; they surface only in
  // threshold sensitivity scans.
  for (int i = 0; i < 40; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "fringe%02d", i);
    const std::string account = buf;
    const int unique_links = 4 + i % 6;  // 4..9, all under the default 10
    for (int n = 0; n < unique_links; ++n) {
      const int w = n % spec.window_count;
      const std::int64_t ts =
          spec.window_begin(w) + 5000 + 1000 * n + static_cast<std::int64_t>(rng.next_index(900));
      emit(account, ts, make_text(rng, kArchetypes[4]),
           {"https://ex" + std::to_string(rng.next_index(10)) + ".example.com/p/" +
            std::to_string(unique_link_counter++)},
           rng.next_poisson(2.0), rng.next_poisson(1.0), rng.next_poisson(0.5));
    }
  }

  // Window-0 cascades: links reshared by many accounts across archetypes in
  // quick succession, dense enough to qualify for influence fitting.
  const char* kCascadeHosts[4] = {"ex3.example.com", "bias1.example.org",
                                  "fake2.example.org", "consp0.example.org"};
  for (int cascade = 0; cascade < 16; ++cascade) {
    const std::string url = std::string("https://") + kCascadeHosts[cascade % 4] +
                            "/cascade/" + std::to_string(cascade);
    const std::int64_t base =
        spec.month_begin(0, 1 + static_cast<int>(rng.next_index(4))) +
        static_cast<std::int64_t>(rng.next_index(20 * 86400));
    const std::size_t participants = 12 + rng.next_index(6);
    std::int64_t ts = base;
    for (std::size_t p = 0; p < participants; ++p) {
      // Round-robin over archetypes keeps every cascade spread across roles.
      const int account_index =
          static_cast<int>((p * 5 + rng.next_index(5)) % static_cast<std::size_t>(accounts));
      ts += 20 + static_cast<std::int64_t>(280.0 * rng.next_double() * rng.next_double());
      const Archetype& profile = kArchetypes[account_index % 5];
      emit(account_ids[static_cast<std::size_t>(account_index)], ts,
           make_text(rng, profile), {url},
           rng.next_poisson(profile.likes_mean),
           rng.next_poisson(profile.likes_mean * 0.4),
           rng.next_poisson(profile.likes_mean * 0.25));
    }
  }

  return paths;
}

}  // namespace rolemine::testutil
