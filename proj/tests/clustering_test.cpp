// Apache License, Version 2.0, refer to LICENSE.txt

#include "rolemine/clustering.hpp"

#include <cmath>
#include <limits>
#include <set>

#include <gtest/gtest.h>

#include "rolemine/rng.hpp"
#include "test_support.hpp"

using namespace rolemine;
using rolemine::testutil::adjusted_rand_index;
using rolemine::testutil::make_blobs;

TEST(KMeans, KOneGivesTheMean) {
  const DataMatrix points = {{1, 2}, {3, 4}, {5, 0}};
  const KMeansResult fit = kmeans_fit(points, 1, 42);
  ASSERT_EQ(fit.centroids.size(), 1u);
  EXPECT_NEAR(fit.centroids[0][0], 3.0, 1e-12);
  EXPECT_NEAR(fit.centroids[0][1], 2.0, 1e-12);
}

TEST(KMeans, SeparatesTwoPairs) {
  const DataMatrix points = {{0, 0}, {0.1, 0}, {10, 10}, {10.1, 10}};
  const KMeansResult fit = kmeans_fit(points, 2, 7);
  EXPECT_EQ(fit.assignment.labels[0], fit.assignment.labels[1]);
  EXPECT_EQ(fit.assignment.labels[2], fit.assignment.labels[3]);
  EXPECT_NE(fit.assignment.labels[0], fit.assignment.labels[2]);
}

TEST(KMeans, RecoversPlantedBlobs) {
  const auto blobs = make_blobs(60, 5, 13, 6.0, 11);
  const KMeansResult fit = kmeans_fit(blobs.points, 5, 3);
  EXPECT_GE(adjusted_rand_index(fit.assignment.labels, blobs.labels), 0.95);
}

TEST(KMeans, DeterministicBitForBit) {
  const auto blobs = make_blobs(40, 4, 13, 5.0, 9);
  const KMeansResult a = kmeans_fit(blobs.points, 4, 1234);
  const KMeansResult b = kmeans_fit(blobs.points, 4, 1234);
  ASSERT_EQ(a.centroids.size(), b.centroids.size());
  for (std::size_t c = 0; c < a.centroids.size(); ++c)
    for (std::size_t d = 0; d < a.centroids[c].size(); ++d)
      EXPECT_EQ(a.centroids[c][d], b.centroids[c][d]);
  EXPECT_EQ(a.assignment.labels, b.assignment.labels);
  EXPECT_EQ(a.assignment.inertia, b.assignment.inertia);
}

TEST(KMeans, CanonicalLabelsDescendBySize) {
  // 6 points near the origin, 3 near (10, 10): cluster 0 must be the big one.
  const DataMatrix points = {{0, 0},  {0.1, 0},  {0, 0.1},   {0.2, 0.1},
                             {0.1, 0.1}, {0, 0.2}, {10, 10}, {10, 10.1},
                             {10.1, 10}};
  const KMeansResult fit = kmeans_fit(points, 2, 5);
  std::size_t zero_count = 0;
  for (int label : fit.assignment.labels) zero_count += label == 0;
  EXPECT_EQ(zero_count, 6u);
}

TEST(KMeans, ErrorsWhenFewerVectorsThanClusters) {
  EXPECT_THROW(kmeans_fit({{1, 1}}, 2, 0), std::invalid_argument);
  EXPECT_THROW(kmeans_fit({}, 1, 0), std::invalid_argument);
}

TEST(Elbow, ZeroInertiaAtNClusters) {
  const DataMatrix points = {{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  const ElbowCurve curve = elbow_scan(points, 2, 10, 3, 2);
  EXPECT_EQ(curve.points.back().k, 4);
  EXPECT_NEAR(curve.points.back().inertia, 0.0, 1e-12);
}

TEST(Elbow, SuggestsPlantedK) {
  const auto blobs = make_blobs(50, 5, 13, 6.0, 21);
  const ElbowCurve curve = elbow_scan(blobs.points, 2, 10, 17, 3);
  EXPECT_EQ(curve.suggested_k, 5);
  // Inertia is non-increasing over k on this data.
  for (std::size_t i = 1; i < curve.points.size(); ++i)
    EXPECT_LE(curve.points[i].inertia, curve.points[i - 1].inertia + 1e-9);
}

TEST(Silhouette, TightFarBlobsScoreNearOne) {
  const auto blobs = make_blobs(10, 2, 4, 50.0, 5);
  EXPECT_GT(silhouette_score(blobs.points, blobs.labels), 0.9);
}

TEST(Silhouette, MatchesBruteForceOracle) {
  const auto blobs = make_blobs(7, 3, 3, 2.0, 33);  // overlapping blobs
  const double mine = silhouette_score(blobs.points, blobs.labels);
  const double oracle = testutil::brute_force_silhouette(blobs.points, blobs.labels);
  EXPECT_NEAR(mine, oracle, 1e-9);
}

TEST(Silhouette, IdenticalPointsDegenerateToZero) {
  const DataMatrix points = {{1, 1}, {1, 1}, {1, 1}, {1, 1}};
  const std::vector<int> labels = {0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(silhouette_score(points, labels), 0.0);
}

TEST(Silhouette, DegenerateInputsThrow) {
  EXPECT_THROW(silhouette_score({{1, 1}}, {0}), std::invalid_argument);
  EXPECT_THROW(silhouette_score({{1, 1}, {2, 2}}, {0, 0}), std::invalid_argument);
}

TEST(Agglomerative, SeparatesTwoPairs) {
  const DataMatrix points = {{0, 0}, {0.2, 0}, {9, 9}, {9.2, 9}};
  const ClusterAssignment fit = agglomerative_fit(points, 2);
  EXPECT_EQ(fit.labels[0], fit.labels[1]);
  EXPECT_EQ(fit.labels[2], fit.labels[3]);
  EXPECT_NE(fit.labels[0], fit.labels[2]);
}

TEST(Agglomerative, KEqualsNGivesSingletons) {
  const DataMatrix points = {{0, 0}, {1, 0}, {2, 0}};
  const ClusterAssignment fit = agglomerative_fit(points, 3);
  std::set<int> labels(fit.labels.begin(), fit.labels.end());
  EXPECT_EQ(labels.size(), 3u);
  EXPECT_NEAR(fit.inertia, 0.0, 1e-12);
}

TEST(Agglomerative, RecoversPlantedBlobs) {
  const auto blobs = make_blobs(200, 5, 13, 6.0, 11);
  const ClusterAssignment fit = agglomerative_fit(blobs.points, 5);
  EXPECT_GE(adjusted_rand_index(fit.labels, blobs.labels), 0.95);
}

TEST(Agglomerative, AgreesWithKMeansOnSeparatedData) {
  const auto blobs = make_blobs(200, 5, 13, 6.0, 11);
  const ClusterAssignment agglo = agglomerative_fit(blobs.points, 5);
  const KMeansResult kmeans = kmeans_fit(blobs.points, 5, 3);
  EXPECT_GE(adjusted_rand_index(agglo.labels, kmeans.assignment.labels), 0.95);
}

TEST(Jaccard, IdenticalAssignmentsScoreOne) {
  ClusterAssignment a;
  a.labels = {0, 0, 1, 1, 2, 2};
  a.k = 3;
  const auto scores = jaccard_overlap(a, a);
  ASSERT_EQ(scores.size(), 3u);
  for (const auto& [cluster, score] : scores) EXPECT_DOUBLE_EQ(score, 1.0);
}

TEST(Jaccard, SwappedHalvesScoreOneThird) {
  // Two clusters of two accounts each; one account swaps either way.
  ClusterAssignment a;
  a.labels = {0, 0, 1, 1};
  a.k = 2;
  ClusterAssignment b;
  b.labels = {0, 1, 0, 1};
  b.k = 2;
  const auto scores = jaccard_overlap(a, b);
  ASSERT_EQ(scores.size(), 2u);
  EXPECT_DOUBLE_EQ(scores.at(0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(scores.at(1), 1.0 / 3.0);
}

TEST(Jaccard, MatchingIsOptimalNotGreedy) {
  // a0 vs b0: inter 2, union 6 -> 1/3; a0 vs b1: 2/4 -> 1/2.
  // a1 vs b0: 2/4 -> 1/2; a1 vs b1: 0/6 -> 0.
  // The optimal total picks a0->b1 and a1->b0 (1.0 total, 0.5 each);
  // greedy by best a0 edge would strand a1 at 0.
  ClusterAssignment a;
  a.labels = {0, 0, 0, 0, 1, 1};
  a.k = 2;
  ClusterAssignment b;
  b.labels = {0, 0, 1, 1, 0, 0};
  b.k = 2;
  const auto scores = jaccard_overlap(a, b);
  EXPECT_DOUBLE_EQ(scores.at(0), 0.5);
  EXPECT_DOUBLE_EQ(scores.at(1), 0.5);
}

TEST(Jaccard, MatchedScoreMultisetIsSymmetric) {
  Rng rng(99);
  ClusterAssignment a;
  ClusterAssignment b;
  a.k = 4;
  b.k = 4;
  for (int i = 0; i < 60; ++i) {
    a.labels.push_back(static_cast<int>(rng.next_index(4)));
    b.labels.push_back(static_cast<int>(rng.next_index(4)));
  }
  const auto ab = jaccard_overlap(a, b);
  const auto ba = jaccard_overlap(b, a);
  std::multiset<double> forward;
  std::multiset<double> backward;
  for (const auto& [cluster, score] : ab) forward.insert(score);
  for (const auto& [cluster, score] : ba) backward.insert(score);
  ASSERT_EQ(forward.size(), backward.size());
  auto in_forward = forward.begin();
  for (double score : backward) {
    EXPECT_NEAR(score, *in_forward, 1e-12);
    ++in_forward;
  }
}

TEST(Jaccard, DifferingRowCountsThrow) {
  ClusterAssignment a;
  a.labels = {0, 1};
  ClusterAssignment b;
  b.labels = {0, 1, 1};
  EXPECT_THROW(jaccard_overlap(a, b), std::invalid_argument);
}

TEST(Vif, DuplicatedDimensionIsInfinite) {
  Rng rng(3);
  DataMatrix rows;
  for (int i = 0; i < 50; ++i) {
    const double x = rng.next_gaussian();
    rows.push_back({x, x, rng.next_gaussian()});
  }
  const auto factors = vif(rows);
  EXPECT_TRUE(std::isinf(factors[0]));
  EXPECT_TRUE(std::isinf(factors[1]));
  EXPECT_FALSE(std::isinf(factors[2]));
}

TEST(Vif, IndependentDimensionsNearOne) {
  Rng rng(8);
  DataMatrix rows;
  for (int i = 0; i < 10000; ++i) {
    std::vector<double> row(13);
    for (auto& v : row) v = rng.next_gaussian();
    rows.push_back(std::move(row));
  }
  for (double factor : vif(rows)) {
    EXPECT_GE(factor, 1.0);
    EXPECT_LE(factor, 1.2);
  }
}

TEST(Vif, TwoVariableClosedForm) {
  Rng rng(21);
  DataMatrix rows;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  const int n = 400;
  for (int i = 0; i < n; ++i) {
    const double x = rng.next_gaussian();
    const double y = x + 0.3 * rng.next_gaussian();
    rows.push_back({x, y});
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  const double num = n * sxy - sx * sy;
  const double r2 = num * num / ((n * sxx - sx * sx) * (n * syy - sy * sy));
  const double expected = 1.0 / (1.0 - r2);
  const auto factors = vif(rows);
  EXPECT_NEAR(factors[0], expected, 1e-6 * expected);
  EXPECT_NEAR(factors[1], expected, 1e-6 * expected);
}

TEST(Vif, ConstantDimensionThrowsNamingIt) {
  DataMatrix rows;
  Rng rng(4);
  for (int i = 0; i < 30; ++i)
    rows.push_back({rng.next_gaussian(), 5.0, rng.next_gaussian()});
  try {
    vif(rows);
    FAIL() << "expected an exception";
  } catch (const std::invalid_argument& error) {
    EXPECT_NE(std::string(error.what()).find("dimension 1"), std::string::npos);
  }
}

TEST(Vif, RequiresEnoughRows) {
  const DataMatrix rows = {{1, 2}, {2, 3}, {3, 5}};
  EXPECT_THROW(vif(rows), std::invalid_argument);
}

TEST(AssignToModel, ExactAndTieBreaks) {
  RoleModel model;
  model.k = 4;
  model.centroids = {{0, 0}, {2, 0}, {4, 0}, {6, 0}};
  EXPECT_EQ(assign_to_model({{4, 0}}, model)[0], 2);
  // Equidistant between centroids 0 and 1: lowest index wins.
  EXPECT_EQ(assign_to_model({{1, 0}}, model)[0], 0);
  EXPECT_THROW(assign_to_model({{1, 0, 0}}, model), std::invalid_argument);
}

TEST(AssignToModel, ReproducesKMeansAssignmentOnFitData) {
  const auto blobs = make_blobs(30, 3, 6, 5.0, 61);
  const KMeansResult fit = kmeans_fit(blobs.points, 3, 19);
  RoleModel model;
  model.k = 3;
  model.centroids = fit.centroids;
  EXPECT_EQ(assign_to_model(blobs.points, model), fit.assignment.labels);
}

TEST(RoleModel, JsonRoundTrip) {
  RoleModel model;
  model.k = 2;
  model.seed = 99;
  model.centroids = {{1.5, -2.25, 0.0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
                     {0.5, 3.75, 1.0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}};
  model.labels[0] = "distributors";
  const RoleModel restored = RoleModel::from_json(model.to_json());
  EXPECT_EQ(restored.k, 2);
  EXPECT_EQ(restored.seed, 99u);
  EXPECT_EQ(restored.centroids, model.centroids);
  EXPECT_EQ(restored.labels.at(0), "distributors");
  EXPECT_EQ(restored.role_name(1), "role1");
}
