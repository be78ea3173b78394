#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "harmonode/analysis.hpp"
#include "helpers.hpp"

using namespace harmonode;

namespace {

DistanceMatrix from_points(const Eigen::MatrixXd& p) {
  DistanceMatrix d;
  d.values.resize(p.rows(), p.rows());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    d.ids.push_back(static_cast<NodeId>(i + 1));
    for (Eigen::Index j = 0; j < p.rows(); ++j) d.values(i, j) = (p.row(i) - p.row(j)).norm();
  }
  return d;
}

// Smallest ball through every subset of at most d+1 points, center in the
// subset's affine hull, that contains all points.
double enumerated_min_radius(const Eigen::MatrixXd& p) {
  const auto n = static_cast<int>(p.rows());
  const auto d = static_cast<int>(p.cols());
  double best = INFINITY;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    if (static_cast<int>(s.size()) > d + 1) continue;
    Eigen::VectorXd center = p.row(s[0]).transpose();
    if (s.size() > 1) {
      const auto m = static_cast<Eigen::Index>(s.size() - 1);
      Eigen::MatrixXd a(d, m);
      for (Eigen::Index k = 0; k < m; ++k) a.col(k) = (p.row(s[static_cast<std::size_t>(k + 1)]) - p.row(s[0])).transpose();
      // c = p0 + A x with |c - p_k|^2 = |c - p0|^2  =>  (A^T A) x = diag(A^T A) / 2
      const Eigen::MatrixXd g = a.transpose() * a;
      const Eigen::VectorXd rhs = 0.5 * g.diagonal();
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
      if (!lu.isInvertible()) continue;
      center += a * lu.solve(rhs);
    }
    double r = 0.0;
    for (int i : s) r = std::max(r, (p.row(i).transpose() - center).norm());
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = (p.row(i).transpose() - center).norm() <= r * (1 + 1e-12) + 1e-15;
    if (ok) best = std::min(best, r);
  }
  return best;
}

}  // namespace

TEST(Analysis, MdsReproducesPlanarDistances) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd p(12, 2);
    for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = n(rng);
    const DistanceMatrix d = from_points(p);
    const Embedding e = classical_mds(d, 2);
    const DistanceMatrix back = from_points(e.coordinates);
    for (Eigen::Index i = 0; i < 12; ++i)
      for (Eigen::Index j = i + 1; j < 12; ++j)
        EXPECT_LE(std::abs(back.values(i, j) - d.values(i, j)), 1e-8 * d.values(i, j));
    EXPECT_LE(e.stress, 1e-10);
    EXPECT_GE(e.eigenvalues[0], e.eigenvalues[1]);
    EXPECT_FALSE(e.negative_eigenvalues_clamped);
  }
}

TEST(Analysis, MdsAxesHaveFixedSign) {
  Eigen::MatrixXd p(4, 2);
  p << 0, 0, 4, 0, 0, 1, 4, 1;
  const Embedding e = classical_mds(from_points(p), 2);
  for (int c = 0; c < 2; ++c) {
    Eigen::Index arg;
    e.coordinates.col(c).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(e.coordinates(arg, c), 0.0);
  }
  const Embedding again = classical_mds(from_points(p), 2);
  EXPECT_EQ(again.coordinates, e.coordinates);
}

TEST(Analysis, MdsFlagsNonEuclideanInput) {
  DistanceMatrix d;
  d.ids = {1, 2, 3, 4};
  d.values.resize(4, 4);
  // Triangle-violating "distances".
  d.values << 0, 1, 1, 5, 1, 0, 1, 1, 1, 1, 0, 1, 5, 1, 1, 0;
  const Embedding e = classical_mds(d, 2);
  EXPECT_TRUE(e.negative_eigenvalues_clamped);
  EXPECT_GT(e.negative_ratio, 1e-6);
}

TEST(Analysis, MdsDimensionChecked) {
  Eigen::MatrixXd p(3, 2);
  p << 0, 0, 1, 0, 0, 1;
  EXPECT_THROW(classical_mds(from_points(p), 3), std::invalid_argument);
  EXPECT_THROW(classical_mds(from_points(p), 0), std::invalid_argument);
}

TEST(Analysis, MinBallMatchesEnumerationIn3d) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> count(1, 8);
  for (int trial = 0; trial < 60; ++trial) {
    Eigen::MatrixXd p(count(rng), 3);
    for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = u(rng);
    const BoundingSphere b = min_enclosing_ball(p);
    const double oracle = enumerated_min_radius(p);
    EXPECT_TRUE(b.converged);
    EXPECT_NEAR(b.radius, oracle, 1e-6 * std::max(oracle, 1e-12)) << "trial " << trial;
    for (Eigen::Index i = 0; i < p.rows(); ++i) EXPECT_LE((p.row(i).transpose() - b.center).norm(), b.radius * (1 + 1e-9) + 1e-15);
  }
}

TEST(Analysis, MinBallSimpleCases) {
  Eigen::MatrixXd one(1, 4);
  one << 1, 2, 3, 4;
  EXPECT_EQ(min_enclosing_ball(one).radius, 0.0);

  Eigen::MatrixXd two(2, 3);
  two << 0, 0, 0, 2, 0, 0;
  const auto b = min_enclosing_ball(two);
  EXPECT_NEAR(b.radius, 1.0, 1e-7);
  EXPECT_NEAR(b.center.x(), 1.0, 1e-7);

  Eigen::MatrixXd same(3, 2);
  same << 1, 1, 1, 1, 1, 1;
  EXPECT_EQ(min_enclosing_ball(same).radius, 0.0);
  EXPECT_THROW(min_enclosing_ball(Eigen::MatrixXd(0, 3)), std::invalid_argument);
}

TEST(Analysis, MinBallScalesAndTranslates) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  Eigen::MatrixXd p(30, 17);
  for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = n(rng);
  const double r = min_enclosing_ball(p).radius;
  EXPECT_NEAR(min_enclosing_ball(3.5 * p).radius, 3.5 * r, 1e-6 * 3.5 * r);
  Eigen::MatrixXd shifted = p.rowwise() + Eigen::RowVectorXd::Constant(17, 100.0);
  EXPECT_NEAR(min_enclosing_ball(shifted).radius, r, 1e-6 * r);
}

TEST(Analysis, ComplexityScoreOfOneVectorIsZero) {
  const std::vector<FeatureVector> one{{1, "default", {3, 2, 1}}};
  EXPECT_EQ(complexity_score(one), 0.0);
  const std::vector<FeatureVector> bad{{1, "default", {3, 2, 1}}, {2, "default", {1}}};
  EXPECT_THROW(complexity_score(bad), std::invalid_argument);
}

TEST(Analysis, KMeansRecoversSeparatedBlobs) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 0.05);
  const std::vector<Eigen::Vector2d> centers{{0, 0}, {10, 0}, {0, 10}};
  Eigen::MatrixXd p(30, 2);
  std::vector<NodeId> ids;
  for (int i = 0; i < 30; ++i) {
    p.row(i) = (centers[static_cast<std::size_t>(i % 3)] + Eigen::Vector2d(n(rng), n(rng))).transpose();
    ids.push_back(i + 1);
  }
  KMeansOptions o;
  o.k = 3;
  const ClusterAssignment a = kmeans(p, ids, o);
  for (int i = 3; i < 30; ++i) EXPECT_EQ(a.labels[static_cast<std::size_t>(i)], a.labels[static_cast<std::size_t>(i % 3)]);
  EXPECT_NE(a.labels[0], a.labels[1]);
  EXPECT_NE(a.labels[1], a.labels[2]);
  for (std::size_t h = 1; h < a.objective_history.size(); ++h)
    EXPECT_LE(a.objective_history[h], a.objective_history[h - 1] * (1 + 1e-12));
  EXPECT_DOUBLE_EQ(a.inertia, a.objective_history.back());
  for (int c = 1; c < a.k; ++c) EXPECT_LE(a.spheres[static_cast<std::size_t>(c - 1)].radius, a.spheres[static_cast<std::size_t>(c)].radius);
}

TEST(Analysis, KMeansIsDeterministicPerSeed) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  Eigen::MatrixXd p(40, 5);
  for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = n(rng);
  std::vector<NodeId> ids(40);
  for (int i = 0; i < 40; ++i) ids[static_cast<std::size_t>(i)] = i;
  KMeansOptions o;
  o.k = 4;
  const auto a = kmeans(p, ids, o), b = kmeans(p, ids, o);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.centroids, b.centroids);
}

TEST(Analysis, KMeansSingleClusterIsTheMean) {
  Eigen::MatrixXd p(3, 2);
  p << 0, 0, 2, 0, 1, 3;
  const std::vector<NodeId> ids{1, 2, 3};
  KMeansOptions o;
  o.k = 1;
  const auto a = kmeans(p, ids, o);
  EXPECT_NEAR(a.centroids(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(a.centroids(0, 1), 1.0, 1e-15);
}

TEST(Analysis, KMeansRejectsTooManyClusters) {
  Eigen::MatrixXd p(4, 2);
  p << 0, 0, 0, 0, 1, 1, 1, 1;
  const std::vector<NodeId> ids{1, 2, 3, 4};
  KMeansOptions o;
  o.k = 3;
  EXPECT_THROW(kmeans(p, ids, o), std::invalid_argument);
  o.k = 2;
  const auto a = kmeans(p, ids, o);
  EXPECT_EQ(a.labels[0], a.labels[1]);
  EXPECT_EQ(a.spheres[0].radius, 0.0);
}

TEST(Analysis, ClusterOrderTieBrokenByLowestMember) {
  // Two zero-radius clusters: the one holding id 1 comes first.
  Eigen::MatrixXd p(4, 1);
  p << 5, 0, 5, 0;
  const std::vector<NodeId> ids{1, 2, 3, 4};
  KMeansOptions o;
  o.k = 2;
  const auto a = kmeans(p, ids, o);
  EXPECT_EQ(a.labels, (std::vector<int>{0, 1, 0, 1}));
}
