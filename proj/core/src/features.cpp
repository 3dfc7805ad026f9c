// Apache License, Version 2.0, refer to LICENSE.txt

#include "rolemine/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "rolemine/text.hpp"

namespace rolemine {

using nlohmann::json;

const std::array<std::string_view, FeatureVector::kDim>& FeatureVector::names() {
  static const std::array<std::string_view, kDim> kNames = {
      "injustice",      "achievement",   "group_identity",
      "anger",          "risk",          "reward",
      "extremist_link_proportion",       "likes_ratio",
      "shares_ratio",   "comments_ratio", "trend",
      "opinions",       "solicitation"};
  return kNames;
}

std::array<double, FeatureVector::kDim> FeatureVector::values() const {
  return {injustice,      achievement,  group_identity, anger,
          risk,           reward,       extremist_link_proportion,
          likes_ratio,    shares_ratio, comments_ratio, trend,
          opinions,       solicitation};
}

FeatureVector FeatureVector::from_values(const std::array<double, kDim>& v) {
  FeatureVector f;
  f.injustice = v[0];
  f.achievement = v[1];
  f.group_identity = v[2];
  f.anger = v[3];
  f.risk = v[4];
  f.reward = v[5];
  f.extremist_link_proportion = v[6];
  f.likes_ratio = v[7];
  f.shares_ratio = v[8];
  f.comments_ratio = v[9];
  f.trend = v[10];
  f.opinions = v[11];
  f.solicitation = v[12];
  return f;
}

std::array<double, 6> drive_features(const AccountWindowActivity& activity,
                                     const std::vector<PostRecord>& posts,
                                     const Lexicon& lexicon) {
  std::array<const LexiconCategory*, 6> categories{};
  for (std::size_t i = 0; i < kDriveCategories.size(); ++i) {
    categories[i] = lexicon.find(kDriveCategories[i]);
    if (!categories[i])
      throw std::invalid_argument("lexicon is missing drive category: " +
                                  std::string(kDriveCategories[i]));
  }

  std::array<double, 6> result{};
  std::size_t total_tokens = 0;
  std::array<std::size_t, 6> matches{};
  for (std::size_t idx : activity.extremist_link_posts) {
    for (const RawToken& token : tokenize(posts[idx].text)) {
      ++total_tokens;
      for (std::size_t i = 0; i < categories.size(); ++i) {
        if (categories[i]->matches(token.lower)) ++matches[i];
      }
    }
  }
  if (total_tokens == 0) return result;
  for (std::size_t i = 0; i < matches.size(); ++i)
    result[i] = static_cast<double>(matches[i]) / static_cast<double>(total_tokens);
  return result;
}

double extremist_link_proportion(const AccountWindowActivity& activity) {
  if (activity.link_posts.empty()) return 0.0;
  return static_cast<double>(activity.extremist_link_posts.size()) /
         static_cast<double>(activity.link_posts.size());
}

std::array<double, 3> popularity_ratios(const AccountWindowActivity& activity,
                                        const std::vector<PostRecord>& posts,
                                        PopularityDenominator denominator,
                                        double epsilon) {
  std::unordered_set<std::size_t> extremist(activity.extremist_link_posts.begin(),
                                            activity.extremist_link_posts.end());
  std::array<double, 3> ext_sum{};
  std::array<double, 3> rest_sum{};
  std::size_t ext_n = 0;
  std::size_t rest_n = 0;
  for (std::size_t idx : activity.link_posts) {
    const PostRecord& post = posts[idx];
    const std::array<double, 3> reactions = {static_cast<double>(post.likes),
                                             static_cast<double>(post.shares),
                                             static_cast<double>(post.comments)};
    const bool is_ext = extremist.count(idx) > 0;
    if (is_ext) {
      ++ext_n;
      for (std::size_t i = 0; i < 3; ++i) ext_sum[i] += reactions[i];
    }
    const bool in_denominator =
        denominator == PopularityDenominator::kAllLinkPosts || !is_ext;
    if (in_denominator) {
      ++rest_n;
      for (std::size_t i = 0; i < 3; ++i) rest_sum[i] += reactions[i];
    }
  }

  std::array<double, 3> result = {1.0, 1.0, 1.0};
  if (ext_n == 0 || rest_n == 0) return result;
  for (std::size_t i = 0; i < 3; ++i) {
    const double ext_mean = ext_sum[i] / static_cast<double>(ext_n);
    const double rest_mean = rest_sum[i] / static_cast<double>(rest_n);
    result[i] = (ext_mean + epsilon) / (rest_mean + epsilon);
  }
  return result;
}

double monthly_trend(const AccountWindowActivity& activity,
                     const std::vector<PostRecord>& posts,
                     const WindowSpec& spec) {
  const int months = spec.window_months;
  if (months < 2)
    throw std::invalid_argument("monthly_trend: window spans fewer than 2 months");

  std::vector<double> counts(static_cast<std::size_t>(months), 0.0);
  for (std::size_t idx : activity.extremist_link_posts) {
    const std::int64_t ts = posts[idx].timestamp;
    // Month buckets follow the same calendar arithmetic as the windows.
    for (int m = months - 1; m >= 0; --m) {
      if (ts >= spec.month_begin(activity.window_index, m)) {
        counts[static_cast<std::size_t>(m)] += 1.0;
        break;
      }
    }
  }

  // Closed-form OLS slope against month index 1..m.
  const double n = static_cast<double>(months);
  const double x_mean = (n + 1.0) / 2.0;
  double y_mean = 0.0;
  for (double c : counts) y_mean += c;
  y_mean /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (int m = 0; m < months; ++m) {
    const double dx = static_cast<double>(m + 1) - x_mean;
    sxy += dx * (counts[static_cast<std::size_t>(m)] - y_mean);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::array<double, 2> strategy_proportions(const AccountWindowActivity& activity,
                                           const std::vector<PostRecord>& posts,
                                           const Lexicon& lexicon,
                                           const RuleSet& rules) {
  if (activity.extremist_link_posts.empty()) return {0.0, 0.0};
  std::size_t with_opinion = 0;
  std::size_t with_solicitation = 0;
  for (std::size_t idx : activity.extremist_link_posts) {
    const StrategyFlags flags = strategy_flags(posts[idx].text, lexicon, rules);
    if (flags.has_opinion) ++with_opinion;
    if (flags.has_solicitation) ++with_solicitation;
  }
  const double n = static_cast<double>(activity.extremist_link_posts.size());
  return {static_cast<double>(with_opinion) / n,
          static_cast<double>(with_solicitation) / n};
}

FeatureVector build_feature_vector(const AccountWindowActivity& activity,
                                   const std::vector<PostRecord>& posts,
                                   const Lexicon& lexicon, const RuleSet& rules,
                                   const WindowSpec& spec,
                                   const FeatureOptions& options) {
  FeatureVector f;
  const auto drives = drive_features(activity, posts, lexicon);
  f.injustice = drives[0];
  f.achievement = drives[1];
  f.group_identity = drives[2];
  f.anger = drives[3];
  f.risk = drives[4];
  f.reward = drives[5];
  f.extremist_link_proportion = extremist_link_proportion(activity);
  const auto ratios = popularity_ratios(activity, posts,
                                        options.popularity_denominator,
                                        options.popularity_epsilon);
  f.likes_ratio = ratios[0];
  f.shares_ratio = ratios[1];
  f.comments_ratio = ratios[2];
  f.trend = monthly_trend(activity, posts, spec);
  const auto strategies = strategy_proportions(activity, posts, lexicon, rules);
  f.opinions = strategies[0];
  f.solicitation = strategies[1];
  return f;
}

std::string Standardizer::to_json() const {
  json j;
  j["means"] = means;
  j["stds"] = stds;
  return j.dump(2);
}

Standardizer Standardizer::from_json(std::string_view text) {
  const json j = json::parse(text);
  Standardizer s;
  const auto& means = j.at("means");
  const auto& stds = j.at("stds");
  if (means.size() != FeatureVector::kDim || stds.size() != FeatureVector::kDim)
    throw std::runtime_error("standardizer: wrong dimension count");
  for (std::size_t i = 0; i < FeatureVector::kDim; ++i) {
    s.means[i] = means[i].get<double>();
    s.stds[i] = stds[i].get<double>();
  }
  return s;
}

Standardizer fit_standardizer(const std::vector<FeatureVector>& vectors) {
  if (vectors.size() < 2)
    throw std::invalid_argument("fit_standardizer: need at least 2 vectors");
  Standardizer s;
  const double n = static_cast<double>(vectors.size());
  for (const FeatureVector& v : vectors) {
    const auto values = v.values();
    for (std::size_t i = 0; i < FeatureVector::kDim; ++i) s.means[i] += values[i];
  }
  for (std::size_t i = 0; i < FeatureVector::kDim; ++i) s.means[i] /= n;
  for (const FeatureVector& v : vectors) {
    const auto values = v.values();
    for (std::size_t i = 0; i < FeatureVector::kDim; ++i) {
      const double d = values[i] - s.means[i];
      s.stds[i] += d * d;
    }
  }
  for (std::size_t i = 0; i < FeatureVector::kDim; ++i) {
    s.stds[i] = std::sqrt(s.stds[i] / n);
    // Numerically constant dimensions fall under the zero-variance rule.
    if (s.stds[i] < 1e-12 * std::max(1.0, std::abs(s.means[i]))) s.stds[i] = 0.0;
  }
  return s;
}

std::array<double, FeatureVector::kDim> apply_standardizer(const FeatureVector& v,
                                                           const Standardizer& s) {
  std::array<double, FeatureVector::kDim> out{};
  const auto values = v.values();
  for (std::size_t i = 0; i < FeatureVector::kDim; ++i) {
    out[i] = s.stds[i] > 0 ? (values[i] - s.means[i]) / s.stds[i] : 0.0;
  }
  return out;
}

}  // namespace rolemine
