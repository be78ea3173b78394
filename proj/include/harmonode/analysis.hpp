#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "harmonode/descriptor.hpp"

namespace harmonode {

/// Low-dimensional coordinates that best preserve a distance matrix.
struct Embedding {
  int dimension = 0;
  std::vector<NodeId> ids;
  Eigen::MatrixXd coordinates;      // rows = nodes, cols = dimension
  std::vector<double> eigenvalues;  // top `dimension`, non-increasing, unclamped
  /// sqrt(sum (d_ij - e_ij)^2 / sum d_ij^2) over pairs i < j.
  double stress = 0.0;
  /// |most negative eigenvalue| / largest eigenvalue; 0 when none is negative.
  double negative_ratio = 0.0;
  bool negative_eigenvalues_clamped = false;  // negative_ratio > 1e-6
};

/// Classical (Torgerson) scaling. Each axis is oriented so its
/// largest-magnitude coordinate is positive. Requires 1 <= k < n.
Embedding classical_mds(const DistanceMatrix& distances, int k);

struct BoundingSphere {
  Eigen::VectorXd center;
  double radius = 0.0;
  std::vector<std::size_t> support;  // indices of points carrying weight
  int iterations = 0;
  bool converged = true;
};

struct MinBallOptions {
  double tol = 1e-7;  // radius within (1 + tol) of the minimum
  int max_iter = 200000;
};

/// Minimum enclosing ball of the rows of `points`.
///
/// Frank-Wolfe iteration with away steps on the dual simplex problem (the
/// Badoiu-Clarkson core-set scheme with exact line search). Stops once the
/// farthest point lies within (1 + tol) of the dual lower bound, which
/// certifies the radius. Deterministic for a fixed row order.
BoundingSphere min_enclosing_ball(const Eigen::MatrixXd& points, const MinBallOptions& options = {});

/// Feature vectors stacked as rows. Throws on inconsistent lengths.
Eigen::MatrixXd stack(std::span<const FeatureVector> vectors);

/// Radius of the minimum enclosing ball of the feature vectors. Only
/// meaningful when comparing designs analyzed with the same options.
double complexity_score(std::span<const FeatureVector> vectors, const MinBallOptions& options = {});

inline constexpr int kDefaultClusters = 10;

struct KMeansOptions {
  int k = kDefaultClusters;
  std::uint64_t seed = 0;
  int max_iter = 300;
  int restarts = 10;
};

/// Clusters numbered by increasing bounding radius, ties by lowest member id.
struct ClusterAssignment {
  int k = 0;
  std::vector<NodeId> ids;
  std::vector<int> labels;  // per point, in [0, k)
  Eigen::MatrixXd centroids;  // row c = centroid of cluster c
  std::vector<BoundingSphere> spheres;
  std::vector<std::vector<std::size_t>> members;  // point indices per cluster
  double inertia = 0.0;  // within-cluster sum of squares
  /// Objective after each Lloyd iteration of the winning restart.
  std::vector<double> objective_history;
};

/// k-means++ seeding, Lloyd iterations to a fixpoint, best of `restarts`.
/// Throws std::invalid_argument when k exceeds the number of distinct points.
ClusterAssignment kmeans(const Eigen::MatrixXd& points, std::span<const NodeId> ids,
                         const KMeansOptions& options = {});
ClusterAssignment kmeans(std::span<const FeatureVector> vectors, const KMeansOptions& options = {});

}  // namespace harmonode
