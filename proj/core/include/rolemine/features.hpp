// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "rolemine/corpus.hpp"
#include "rolemine/lexicon.hpp"
#include "rolemine/patterns.hpp"

namespace rolemine {

/// The 13 behavioral dimensions computed per (account, window).
struct FeatureVector {
  double injustice = 0;
  double achievement = 0;
  double group_identity = 0;
  double anger = 0;
  double risk = 0;
  double reward = 0;
  double extremist_link_proportion = 0;
  double likes_ratio = 1;
  double shares_ratio = 1;
  double comments_ratio = 1;
  double trend = 0;
  double opinions = 0;
  double solicitation = 0;

  static constexpr std::size_t kDim = 13;
  static const std::array<std::string_view, kDim>& names();
  std::array<double, kDim> values() const;
  static FeatureVector from_values(const std::array<double, kDim>& v);
};

/// Lexicon categories backing the six drive dimensions, in vector order.
constexpr std::array<std::string_view, 6> kDriveCategories = {
    "injustice", "achievement", "group_identity", "anger", "risk", "reward"};

/// Pooled category proportions over the text of all extremist-link posts in
/// the window (total matches / total tokens, not a per-post average). All
/// zeros when the window has no extremist-link posts.
std::array<double, 6> drive_features(const AccountWindowActivity& activity,
                                     const std::vector<PostRecord>& posts,
                                     const Lexicon& lexicon);

/// |extremist link posts| / |link posts|; 0 without link posts.
double extremist_link_proportion(const AccountWindowActivity& activity);

enum class PopularityDenominator {
  kRestOfLinkPosts,  // non-extremist link posts
  kAllLinkPosts,
};

/// Reaction ratios (likes, shares, comments): mean over extremist-link posts
/// vs the denominator group, smoothed additively by epsilon. Neutral 1.0 when
/// either side is empty.
std::array<double, 3> popularity_ratios(
    const AccountWindowActivity& activity, const std::vector<PostRecord>& posts,
    PopularityDenominator denominator = PopularityDenominator::kRestOfLinkPosts,
    double epsilon = 1.0);

/// Least-squares slope of extremist-link posts per calendar month against
/// month index 1..m. Throws when the window spans fewer than 2 months.
double monthly_trend(const AccountWindowActivity& activity,
                     const std::vector<PostRecord>& posts,
                     const WindowSpec& spec);

/// Fractions of extremist-link posts whose text carries opinion /
/// solicitation patterns; (0,0) without extremist-link posts.
std::array<double, 2> strategy_proportions(const AccountWindowActivity& activity,
                                           const std::vector<PostRecord>& posts,
                                           const Lexicon& lexicon,
                                           const RuleSet& rules);

struct FeatureOptions {
  PopularityDenominator popularity_denominator =
      PopularityDenominator::kRestOfLinkPosts;
  double popularity_epsilon = 1.0;
};

FeatureVector build_feature_vector(const AccountWindowActivity& activity,
                                   const std::vector<PostRecord>& posts,
                                   const Lexicon& lexicon, const RuleSet& rules,
                                   const WindowSpec& spec,
                                   const FeatureOptions& options = {});

/// Per-dimension z-scoring statistics (population moments).
struct Standardizer {
  std::array<double, FeatureVector::kDim> means{};
  std::array<double, FeatureVector::kDim> stds{};  // 0 marks a constant dimension

  std::string to_json() const;
  static Standardizer from_json(std::string_view text);
};

/// Fits population mean/std per dimension; needs at least 2 vectors.
Standardizer fit_standardizer(const std::vector<FeatureVector>& vectors);

/// (v - mean) / std per dimension; constant dimensions standardize to 0.
std::array<double, FeatureVector::kDim> apply_standardizer(
    const FeatureVector& v, const Standardizer& s);

}  // namespace rolemine
