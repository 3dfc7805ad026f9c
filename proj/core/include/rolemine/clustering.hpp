// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rolemine/features.hpp"

namespace rolemine {

/// Row-major data matrix; all rows share one dimension.
using DataMatrix = std::vector<std::vector<double>>;

struct ClusterAssignment {
  std::vector<int> labels;  // one cluster index per input row
  int k = 0;
  double inertia = 0.0;  // sum of squared distances to assigned centroids
};

struct KMeansResult {
  DataMatrix centroids;  // canonical order: descending cluster size
  ClusterAssignment assignment;
};

/// Lloyd iterations from a D^2-sampled seeding. Deterministic for a given
/// (vectors, k, seed): identical runs give bit-identical centroids. Empty
/// clusters are repaired by stealing the point currently farthest from its
/// centroid. Cluster indices are canonicalized by descending cluster size.
KMeansResult kmeans_fit(const DataMatrix& vectors, int k, std::uint64_t seed,
                        int max_iters = 300, double tol = 1e-6);

struct ElbowPoint {
  int k = 0;
  double distortion = 0.0;  // mean squared distance to assigned centroid
  double inertia = 0.0;     // sum of squared distances
};

struct ElbowCurve {
  std::vector<ElbowPoint> points;
  int suggested_k = 0;  // advisory: argmax of the distortion second difference
};

/// Scans k over [k_min, k_max], keeping the best of n_init seeded runs per k.
ElbowCurve elbow_scan(const DataMatrix& vectors, int k_min = 2, int k_max = 20,
                      std::uint64_t seed = 0, int n_init = 5);

/// Mean silhouette over points: (b - a) / max(a, b) with a the mean
/// intra-cluster distance and b the smallest mean distance to another
/// cluster; defined as 0 for degenerate points (singleton cluster or a=b=0).
double silhouette_score(const DataMatrix& vectors, const std::vector<int>& labels);

/// Bottom-up Ward clustering via the Lance-Williams update, cut at k
/// clusters. Deterministic (index-order tie-breaking); O(n^2) memory.
ClusterAssignment agglomerative_fit(const DataMatrix& vectors, int k);

/// Matches clusters of `b` one-to-one onto clusters of `a` by
/// maximum-total-Jaccard assignment and reports the per-pair Jaccard
/// |intersection| / |union|, keyed by the cluster index in `a`. Both
/// assignments must cover the same rows.
std::map<int, double> jaccard_overlap(const ClusterAssignment& a,
                                      const ClusterAssignment& b);

/// Variance inflation factors: dimension j is OLS-regressed (with intercept)
/// on the remaining dimensions, VIF_j = 1 / (1 - R^2_j). Perfect collinearity
/// reports +infinity. Throws on a constant dimension, naming it.
std::vector<double> vif(const DataMatrix& vectors);

/// Nearest-centroid assignment (Euclidean); ties go to the lowest index.
std::vector<int> assign_to_centroids(const DataMatrix& vectors,
                                     const DataMatrix& centroids);

/// A fitted role model: centroids in standardized space plus the statistics
/// that place new vectors into that space.
struct RoleModel {
  int k = 0;
  DataMatrix centroids;
  Standardizer standardizer;
  std::uint64_t seed = 0;
  std::map<int, std::string> labels;  // optional human-assigned role names

  std::string role_name(int cluster) const;  // label or "role<index>"
  std::string to_json() const;
  static RoleModel from_json(std::string_view text);
};

inline std::vector<int> assign_to_model(const DataMatrix& vectors,
                                        const RoleModel& model) {
  return assign_to_centroids(vectors, model.centroids);
}

}  // namespace rolemine
