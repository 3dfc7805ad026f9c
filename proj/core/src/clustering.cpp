// Apache License, Version 2.0, refer to LICENSE.txt

#include "rolemine/clustering.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>
#include <json.hpp>

#include "rolemine/rng.hpp"

namespace rolemine {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t matrix_dim(const DataMatrix& vectors) {
  if (vectors.empty()) throw std::invalid_argument("empty data matrix");
  const std::size_t d = vectors[0].size();
  if (d == 0) throw std::invalid_argument("zero-dimensional data matrix");
  for (const auto& row : vectors) {
    if (row.size() != d)
      throw std::invalid_argument("ragged data matrix: inconsistent row sizes");
  }
  return d;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

int nearest_centroid(const std::vector<double>& point, const DataMatrix& centroids,
                     double* best_out = nullptr) {
  int best = 0;
  double best_d = kInf;
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = sq_dist(point, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  if (best_out) *best_out = best_d;
  return best;
}

DataMatrix seed_centroids(const DataMatrix& vectors, int k, Rng& rng) {
  const std::size_t n = vectors.size();
  DataMatrix centers;
  centers.reserve(static_cast<std::size_t>(k));
  centers.push_back(vectors[rng.next_index(n)]);

  std::vector<double> min_d2(n, kInf);
  while (centers.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      min_d2[i] = std::min(min_d2[i], sq_dist(vectors[i], centers.back()));
      total += min_d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      // D^2 sampling: draw proportionally to squared distance.
      const double r = rng.next_double() * total;
      double running = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        running += min_d2[i];
        if (running >= r) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.next_index(n);  // all points coincide with a center
    }
    centers.push_back(vectors[pick]);
  }
  return centers;
}

// Relabels clusters by descending size (ties: original index) and reorders
// the centroids to match.
void canonicalize(KMeansResult& result) {
  const int k = result.assignment.k;
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
  for (int label : result.assignment.labels) ++sizes[static_cast<std::size_t>(label)];
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return sizes[static_cast<std::size_t>(a)] > sizes[static_cast<std::size_t>(b)];
  });
  std::vector<int> remap(static_cast<std::size_t>(k));
  DataMatrix new_centroids(static_cast<std::size_t>(k));
  for (int new_label = 0; new_label < k; ++new_label) {
    const int old_label = order[static_cast<std::size_t>(new_label)];
    remap[static_cast<std::size_t>(old_label)] = new_label;
    new_centroids[static_cast<std::size_t>(new_label)] =
        std::move(result.centroids[static_cast<std::size_t>(old_label)]);
  }
  result.centroids = std::move(new_centroids);
  for (int& label : result.assignment.labels)
    label = remap[static_cast<std::size_t>(label)];
}

}  // namespace

KMeansResult kmeans_fit(const DataMatrix& vectors, int k, std::uint64_t seed,
                        int max_iters, double tol) {
  const std::size_t d = matrix_dim(vectors);
  const std::size_t n = vectors.size();
  if (k < 1) throw std::invalid_argument("kmeans_fit: k must be >= 1");
  if (n < static_cast<std::size_t>(k))
    throw std::invalid_argument("kmeans_fit: fewer vectors than clusters");

  Rng rng(seed);
  DataMatrix centroids = seed_centroids(vectors, k, rng);
  std::vector<int> labels(n, 0);

#ifndef NDEBUG
  double prev_inertia = kInf;
#endif

  for (int iter = 0; iter < max_iters; ++iter) {
    // Assignment step.
    double inertia = 0.0;
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      double dist = 0.0;
      labels[i] = nearest_centroid(vectors[i], centroids, &dist);
      inertia += dist;
      ++sizes[static_cast<std::size_t>(labels[i])];
    }
#ifndef NDEBUG
    assert(inertia <= prev_inertia + 1e-9 && "kmeans inertia must not increase");
    prev_inertia = inertia;
#endif

    // Empty clusters steal the point farthest from its current centroid.
    for (int c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] > 0) continue;
      double worst = -1.0;
      std::size_t worst_idx = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto owner = static_cast<std::size_t>(labels[i]);
        if (sizes[owner] <= 1) continue;  // do not create another empty cluster
        const double dist = sq_dist(vectors[i], centroids[owner]);
        if (dist > worst) {
          worst = dist;
          worst_idx = i;
        }
      }
      if (worst < 0.0) continue;  // all donors are singletons; leave empty
      --sizes[static_cast<std::size_t>(labels[worst_idx])];
      labels[worst_idx] = c;
      ++sizes[static_cast<std::size_t>(c)];
#ifndef NDEBUG
      prev_inertia = kInf;  // repair may bump the measured sum transiently
#endif
    }

    // Update step.
    DataMatrix next(static_cast<std::size_t>(k), std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      auto& acc = next[static_cast<std::size_t>(labels[i])];
      for (std::size_t j = 0; j < d; ++j) acc[j] += vectors[i][j];
    }
    double max_shift = 0.0;
    for (int c = 0; c < k; ++c) {
      const auto uc = static_cast<std::size_t>(c);
      if (sizes[uc] == 0) continue;  // keep the previous centroid
      for (std::size_t j = 0; j < d; ++j)
        next[uc][j] /= static_cast<double>(sizes[uc]);
      max_shift = std::max(max_shift, std::sqrt(sq_dist(next[uc], centroids[uc])));
      centroids[uc] = std::move(next[uc]);
    }
    if (max_shift < tol) break;
  }

  // Final pass keeps the returned assignment consistent with the returned
  // centroids (nearest centroid, ties to the lowest index).
  KMeansResult result;
  result.centroids = std::move(centroids);
  result.assignment.k = k;
  result.assignment.labels.resize(n);
  result.assignment.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dist = 0.0;
    result.assignment.labels[i] = nearest_centroid(vectors[i], result.centroids, &dist);
    result.assignment.inertia += dist;
  }
  canonicalize(result);
  return result;
}

ElbowCurve elbow_scan(const DataMatrix& vectors, int k_min, int k_max,
                      std::uint64_t seed, int n_init) {
  const std::size_t n = vectors.size();
  matrix_dim(vectors);
  if (k_min < 1 || k_max < k_min)
    throw std::invalid_argument("elbow_scan: bad k range");
  k_max = std::min<int>(k_max, static_cast<int>(n));
  if (n_init < 1) throw std::invalid_argument("elbow_scan: n_init must be >= 1");

  ElbowCurve curve;
  for (int k = k_min; k <= k_max; ++k) {
    double best_inertia = kInf;
    for (int attempt = 0; attempt < n_init; ++attempt) {
      const std::uint64_t run_seed =
          derive_seed(seed, (static_cast<std::uint64_t>(k) << 16) |
                                static_cast<std::uint64_t>(attempt));
      const KMeansResult fit = kmeans_fit(vectors, k, run_seed);
      best_inertia = std::min(best_inertia, fit.assignment.inertia);
    }
    curve.points.push_back(
        {k, best_inertia / static_cast<double>(n), best_inertia});
  }

  curve.suggested_k = k_min;
  double best_bend = -kInf;
  for (std::size_t i = 1; i + 1 < curve.points.size(); ++i) {
    const double bend = curve.points[i - 1].distortion -
                        2.0 * curve.points[i].distortion +
                        curve.points[i + 1].distortion;
    if (bend > best_bend) {
      best_bend = bend;
      curve.suggested_k = curve.points[i].k;
    }
  }
  return curve;
}

double silhouette_score(const DataMatrix& vectors, const std::vector<int>& labels) {
  matrix_dim(vectors);
  const std::size_t n = vectors.size();
  if (labels.size() != n)
    throw std::invalid_argument("silhouette_score: labels/vectors size mismatch");
  if (n < 2) throw std::invalid_argument("silhouette_score: need at least 2 points");

  const int k = 1 + *std::max_element(labels.begin(), labels.end());
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
  for (int label : labels) {
    if (label < 0) throw std::invalid_argument("silhouette_score: negative label");
    ++sizes[static_cast<std::size_t>(label)];
  }
  const std::size_t populated = static_cast<std::size_t>(
      std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }));
  if (populated < 2)
    throw std::invalid_argument("silhouette_score: need at least 2 clusters");

  double total = 0.0;
  std::vector<double> cluster_dist(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(cluster_dist.begin(), cluster_dist.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      cluster_dist[static_cast<std::size_t>(labels[j])] +=
          std::sqrt(sq_dist(vectors[i], vectors[j]));
    }
    const auto own = static_cast<std::size_t>(labels[i]);
    if (sizes[own] == 1) continue;  // s(i) = 0 by convention
    const double a = cluster_dist[own] / static_cast<double>(sizes[own] - 1);
    double b = kInf;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      if (c == own || sizes[c] == 0) continue;
      b = std::min(b, cluster_dist[c] / static_cast<double>(sizes[c]));
    }
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

ClusterAssignment agglomerative_fit(const DataMatrix& vectors, int k) {
  const std::size_t d = matrix_dim(vectors);
  const std::size_t n = vectors.size();
  if (k < 1) throw std::invalid_argument("agglomerative_fit: k must be >= 1");
  if (n < static_cast<std::size_t>(k))
    throw std::invalid_argument("agglomerative_fit: fewer vectors than clusters");

  // Ward merge costs for singletons; Lance-Williams keeps them current.
  std::vector<double> dist(n * n, kInf);
  const auto at = [&](std::size_t i, std::size_t j) -> double& {
    return dist[i * n + j];
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = sq_dist(vectors[i], vectors[j]) / 2.0;
      at(i, j) = w;
      at(j, i) = w;
    }
  }

  std::vector<bool> active(n, true);
  std::vector<double> size(n, 1.0);
  std::vector<std::vector<int>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {static_cast<int>(i)};

  std::vector<std::size_t> nn(n, 0);
  std::vector<double> nn_dist(n, kInf);
  const auto recompute_nn = [&](std::size_t i) {
    nn_dist[i] = kInf;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      if (at(i, j) < nn_dist[i]) {
        nn_dist[i] = at(i, j);
        nn[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) recompute_nn(i);

  std::size_t clusters = n;
  while (clusters > static_cast<std::size_t>(k)) {
    std::size_t best = n;
    double best_dist = kInf;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i] && nn_dist[i] < best_dist) {
        best_dist = nn_dist[i];
        best = i;
      }
    }
    std::size_t i = best;
    std::size_t j = nn[best];
    if (j < i) std::swap(i, j);

    const double dij = at(i, j);
    for (std::size_t l = 0; l < n; ++l) {
      if (!active[l] || l == i || l == j) continue;
      const double updated = ((size[i] + size[l]) * at(i, l) +
                              (size[j] + size[l]) * at(j, l) - size[l] * dij) /
                             (size[i] + size[j] + size[l]);
      at(i, l) = updated;
      at(l, i) = updated;
    }
    active[j] = false;
    size[i] += size[j];
    members[i].insert(members[i].end(), members[j].begin(), members[j].end());
    members[j].clear();
    --clusters;

    recompute_nn(i);
    for (std::size_t l = 0; l < n; ++l) {
      if (!active[l] || l == i) continue;
      if (nn[l] == i || nn[l] == j) {
        recompute_nn(l);
      } else if (at(i, l) < nn_dist[l]) {
        nn_dist[l] = at(i, l);
        nn[l] = i;
      }
    }
  }

  // Canonical labels: descending size, ties by smallest member index.
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i)
    if (active[i]) roots.push_back(i);
  std::stable_sort(roots.begin(), roots.end(), [&](std::size_t a, std::size_t b) {
    if (members[a].size() != members[b].size())
      return members[a].size() > members[b].size();
    return *std::min_element(members[a].begin(), members[a].end()) <
           *std::min_element(members[b].begin(), members[b].end());
  });

  ClusterAssignment assignment;
  assignment.k = k;
  assignment.labels.assign(n, 0);
  DataMatrix means(static_cast<std::size_t>(k), std::vector<double>(d, 0.0));
  for (std::size_t label = 0; label < roots.size(); ++label) {
    for (int idx : members[roots[label]]) {
      assignment.labels[static_cast<std::size_t>(idx)] = static_cast<int>(label);
      for (std::size_t c = 0; c < d; ++c)
        means[label][c] += vectors[static_cast<std::size_t>(idx)][c];
    }
    const double count = static_cast<double>(members[roots[label]].size());
    for (std::size_t c = 0; c < d; ++c) means[label][c] /= count;
  }
  assignment.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    assignment.inertia +=
        sq_dist(vectors[i], means[static_cast<std::size_t>(assignment.labels[i])]);
  return assignment;
}

namespace {

// Hungarian algorithm (potentials form) for a maximum-weight one-to-one
// assignment; pads rectangular inputs to square with zero weight.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight) {
  const int rows = static_cast<int>(weight.size());
  const int cols = rows ? static_cast<int>(weight[0].size()) : 0;
  const int m = std::max(rows, cols);
  std::vector<std::vector<double>> cost(
      static_cast<std::size_t>(m) + 1,
      std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      cost[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(j) + 1] =
          -weight[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

  std::vector<double> u(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(m) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);
  for (int i = 1; i <= m; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m) + 1, kInf);
    std::vector<bool> used(static_cast<std::size_t>(m) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost[static_cast<std::size_t>(i0)][static_cast<std::size_t>(j)] -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> match(static_cast<std::size_t>(rows), -1);
  for (int j = 1; j <= m; ++j) {
    const int i = p[static_cast<std::size_t>(j)];
    if (i >= 1 && i <= rows && j <= cols)
      match[static_cast<std::size_t>(i) - 1] = j - 1;
  }
  return match;
}

}  // namespace

std::map<int, double> jaccard_overlap(const ClusterAssignment& a,
                                      const ClusterAssignment& b) {
  if (a.labels.size() != b.labels.size() || a.labels.empty())
    throw std::invalid_argument("jaccard_overlap: assignments cover different rows");

  const int ka = a.k > 0 ? a.k : 1 + *std::max_element(a.labels.begin(), a.labels.end());
  const int kb = b.k > 0 ? b.k : 1 + *std::max_element(b.labels.begin(), b.labels.end());
  std::vector<std::vector<double>> inter(
      static_cast<std::size_t>(ka), std::vector<double>(static_cast<std::size_t>(kb), 0.0));
  std::vector<double> size_a(static_cast<std::size_t>(ka), 0.0);
  std::vector<double> size_b(static_cast<std::size_t>(kb), 0.0);
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    const auto la = static_cast<std::size_t>(a.labels[i]);
    const auto lb = static_cast<std::size_t>(b.labels[i]);
    inter[la][lb] += 1.0;
    size_a[la] += 1.0;
    size_b[lb] += 1.0;
  }
  std::vector<std::vector<double>> jaccard(
      static_cast<std::size_t>(ka), std::vector<double>(static_cast<std::size_t>(kb), 0.0));
  for (std::size_t i = 0; i < jaccard.size(); ++i) {
    for (std::size_t j = 0; j < jaccard[i].size(); ++j) {
      const double uni = size_a[i] + size_b[j] - inter[i][j];
      jaccard[i][j] = uni > 0.0 ? inter[i][j] / uni : 0.0;
    }
  }

  const std::vector<int> match = max_weight_assignment(jaccard);
  std::map<int, double> scores;
  for (std::size_t i = 0; i < match.size(); ++i) {
    if (match[i] < 0) continue;
    scores[static_cast<int>(i)] = jaccard[i][static_cast<std::size_t>(match[i])];
  }
  return scores;
}

std::vector<double> vif(const DataMatrix& vectors) {
  const std::size_t d = matrix_dim(vectors);
  const std::size_t n = vectors.size();
  if (d < 2) throw std::invalid_argument("vif: need at least 2 dimensions");
  if (n < d + 2)
    throw std::invalid_argument("vif: need at least dim + 2 observations");

  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vectors[i][j];

  std::vector<double> result(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    const Eigen::VectorXd y = m.col(static_cast<Eigen::Index>(j));
    const double mean = y.mean();
    const double sst = (y.array() - mean).square().sum();
    if (sst == 0.0)
      throw std::invalid_argument("vif: dimension " + std::to_string(j) +
                                  " is constant");

    Eigen::MatrixXd design(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    design.col(0).setOnes();
    Eigen::Index col = 1;
    for (std::size_t o = 0; o < d; ++o) {
      if (o == j) continue;
      design.col(col++) = m.col(static_cast<Eigen::Index>(o));
    }
    const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
    const double ssr = (y - design * beta).squaredNorm();
    const double one_minus_r2 = ssr / sst;
    result[j] = one_minus_r2 <= 1e-12 ? kInf : 1.0 / one_minus_r2;
  }
  return result;
}

std::vector<int> assign_to_centroids(const DataMatrix& vectors,
                                     const DataMatrix& centroids) {
  const std::size_t d = matrix_dim(vectors);
  if (centroids.empty() || centroids[0].size() != d)
    throw std::invalid_argument("assign_to_centroids: dimension mismatch");
  std::vector<int> labels(vectors.size(), 0);
  for (std::size_t i = 0; i < vectors.size(); ++i)
    labels[i] = nearest_centroid(vectors[i], centroids);
  return labels;
}

std::string RoleModel::role_name(int cluster) const {
  const auto it = labels.find(cluster);
  if (it != labels.end()) return it->second;
  return "role" + std::to_string(cluster);
}

std::string RoleModel::to_json() const {
  json j;
  j["k"] = k;
  j["seed"] = seed;
  j["centroids"] = centroids;
  j["standardizer"]["means"] = standardizer.means;
  j["standardizer"]["stds"] = standardizer.stds;
  if (!labels.empty()) {
    json lj = json::object();
    for (const auto& [cluster, name] : labels) lj[std::to_string(cluster)] = name;
    j["labels"] = lj;
  }
  return j.dump(2);
}

RoleModel RoleModel::from_json(std::string_view text) {
  const json j = json::parse(text);
  RoleModel model;
  model.k = j.at("k").get<int>();
  model.seed = j.at("seed").get<std::uint64_t>();
  model.centroids = j.at("centroids").get<DataMatrix>();
  const auto& s = j.at("standardizer");
  const auto means = s.at("means").get<std::vector<double>>();
  const auto stds = s.at("stds").get<std::vector<double>>();
  if (means.size() != FeatureVector::kDim || stds.size() != FeatureVector::kDim)
    throw std::runtime_error("role model: wrong standardizer dimension");
  std::copy(means.begin(), means.end(), model.standardizer.means.begin());
  std::copy(stds.begin(), stds.end(), model.standardizer.stds.begin());
  if (j.contains("labels")) {
    for (const auto& [key, value] : j.at("labels").items())
      model.labels[std::stoi(key)] = value.get<std::string>();
  }
  if (model.k <= 0 || model.centroids.size() != static_cast<std::size_t>(model.k))
    throw std::runtime_error("role model: centroid count does not match k");
  return model;
}

}  // namespace rolemine
