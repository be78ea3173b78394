#include "harmonode/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "harmonode/parallel.hpp"

namespace harmonode {

Embedding classical_mds(const DistanceMatrix& distances, int k) {
  const Eigen::Index n = distances.size();
  if (k < 1 || k >= n)
    throw std::invalid_argument("classical_mds: target dimension must satisfy 1 <= k < n (k = " +
                                std::to_string(k) + ", n = " + std::to_string(n) + ")");
  const Eigen::MatrixXd d2 = distances.values.array().square().matrix();
  // B = -1/2 J D^2 J with J = I - 11^T/n, expanded as row/column centering.
  const Eigen::VectorXd row_mean = d2.rowwise().mean();
  const double grand_mean = d2.mean();
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      b(i, j) = -0.5 * (d2(i, j) - row_mean[i] - row_mean[j] + grand_mean);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  if (eig.info() != Eigen::Success) throw std::runtime_error("classical_mds: eigensolver failed");
  const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
  const Eigen::MatrixXd& vectors = eig.eigenvectors();

  Embedding out;
  out.dimension = k;
  out.ids = distances.ids;
  out.coordinates.resize(n, k);
  const double largest = values[n - 1];
  for (int c = 0; c < k; ++c) {
    const Eigen::Index src = n - 1 - c;
    const double lambda = values[src];
    out.eigenvalues.push_back(lambda);
    Eigen::VectorXd axis = vectors.col(src) * std::sqrt(std::max(lambda, 0.0));
    Eigen::Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis[arg] < 0.0) axis = -axis;
    out.coordinates.col(c) = axis;
  }
  if (values[0] < 0.0 && largest > 0.0) out.negative_ratio = -values[0] / largest;
  out.negative_eigenvalues_clamped = out.negative_ratio > 1e-6;

  double err = 0.0, total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const double dij = distances.values(i, j);
      const double eij = (out.coordinates.row(i) - out.coordinates.row(j)).norm();
      err += (dij - eij) * (dij - eij);
      total += dij * dij;
    }
  }
  out.stress = total > 0.0 ? std::sqrt(err / total) : 0.0;
  return out;
}

BoundingSphere min_enclosing_ball(const Eigen::MatrixXd& points, const MinBallOptions& options) {
  const Eigen::Index n = points.rows();
  if (n == 0) throw std::invalid_argument("min_enclosing_ball: no points");
  if (!(options.tol > 0.0)) throw std::invalid_argument("min_enclosing_ball: tol must be positive");

  // Work relative to the centroid for better conditioning.
  const Eigen::RowVectorXd origin = points.colwise().mean();
  const Eigen::MatrixXd p = points.rowwise() - origin;

  BoundingSphere out;
  auto farthest_from = [&](const Eigen::RowVectorXd& x, Eigen::Index& arg) {
    return (p.rowwise() - x).rowwise().squaredNorm().maxCoeff(&arg);
  };
  Eigen::Index a = 0, b = 0;
  farthest_from(p.row(0), a);
  const double spread = farthest_from(p.row(a), b);
  if (!(spread > 0.0)) {
    out.center = points.row(0).transpose();
    out.radius = 0.0;
    out.support = {0};
    return out;
  }

  Eigen::VectorXd weight = Eigen::VectorXd::Zero(n);
  weight[a] = 0.5;
  weight[b] = 0.5;
  const double bound = (1.0 + options.tol) * (1.0 + options.tol) - 1.0;
  Eigen::RowVectorXd center;
  Eigen::VectorXd dist2;
  out.converged = false;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    out.iterations = iter;
    center = weight.transpose() * p;
    dist2 = (p.rowwise() - center).rowwise().squaredNorm();
    const double dual = weight.dot(dist2);

    Eigen::Index far = 0;
    const double far2 = dist2.maxCoeff(&far);
    const double up = far2 / dual - 1.0;
    if (up <= bound) {
      out.converged = true;
      break;
    }
    Eigen::Index near = -1;
    double near2 = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (weight[i] > 0.0 && dist2[i] < near2) {
        near2 = dist2[i];
        near = i;
      }
    }
    const double down = 1.0 - near2 / dual;
    if (up >= down) {
      const double step = up / (2.0 * (1.0 + up));
      weight *= 1.0 - step;
      weight[far] += step;
    } else {
      const double wz = weight[near];
      const double step = std::min(down / (2.0 * (1.0 - down)), wz / (1.0 - wz));
      weight *= 1.0 + step;
      weight[near] -= step;
      if (step == wz / (1.0 - wz) || weight[near] < 0.0) weight[near] = 0.0;
    }
  }
  center = weight.transpose() * p;
  dist2 = (p.rowwise() - center).rowwise().squaredNorm();
  out.radius = std::sqrt(dist2.maxCoeff());
  out.center = (center + origin).transpose();
  for (Eigen::Index i = 0; i < n; ++i)
    if (weight[i] > 0.0) out.support.push_back(static_cast<std::size_t>(i));
  return out;
}

Eigen::MatrixXd stack(std::span<const FeatureVector> vectors) {
  if (vectors.empty()) return {};
  const auto d = static_cast<Eigen::Index>(vectors.front().components.size());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(vectors.size()), d);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (static_cast<Eigen::Index>(vectors[i].components.size()) != d)
      throw std::invalid_argument("stack: inconsistent feature vector lengths");
    m.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::RowVectorXd>(vectors[i].components.data(), d);
  }
  return m;
}

double complexity_score(std::span<const FeatureVector> vectors, const MinBallOptions& options) {
  if (vectors.empty()) throw std::invalid_argument("complexity_score: no feature vectors");
  return min_enclosing_ball(stack(vectors), options).radius;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t count_distinct(const Eigen::MatrixXd& points) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(points.rows()));
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
      if (points(a, c) != points(b, c)) return points(a, c) < points(b, c);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), less);
  std::size_t distinct = order.empty() ? 0 : 1;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (less(order[i - 1], order[i])) ++distinct;
  return distinct;
}

struct LloydRun {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;
  double inertia = 0.0;
  std::vector<double> history;
};

// Nearest centroid per point, ties to the lowest index; returns the objective.
double assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
              std::vector<int>& labels, Eigen::VectorXd& cost) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
    cost[i] = best_d;
    total += best_d;
  }
  return total;
}

LloydRun lloyd(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int max_iter) {
  const Eigen::Index n = points.rows();
  std::mt19937_64 rng(seed);

  // k-means++ seeding.
  Eigen::MatrixXd centroids(k, points.cols());
  const auto first = static_cast<Eigen::Index>(uniform01(rng) * static_cast<double>(n));
  centroids.row(0) = points.row(std::min(first, n - 1));
  Eigen::VectorXd closest = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = closest.sum();
    const double target = uniform01(rng) * total;
    Eigen::Index pick = -1;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (closest[i] <= 0.0) continue;
      acc += closest[i];
      pick = i;
      if (acc > target) break;
    }
    centroids.row(c) = points.row(pick);
    closest = closest.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }

  LloydRun run;
  run.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd cost(n);
  for (int iter = 0; iter < max_iter; ++iter) {
    assign(points, centroids, labels, cost);
    bool fixpoint = labels == run.labels;

    // An empty cluster takes the point farthest from its centroid.
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      Eigen::Index far = 0;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto li = static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]);
        if (counts[li] > 1 && cost[i] > far_d) {
          far_d = cost[i];
          far = i;
        }
      }
      --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
      labels[static_cast<std::size_t>(far)] = c;
      counts[static_cast<std::size_t>(c)] = 1;
      cost[far] = 0.0;
      fixpoint = false;
    }
    run.labels = labels;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    for (Eigen::Index i = 0; i < n; ++i) sums.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
    for (int c = 0; c < k; ++c) centroids.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];

    double objective = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      objective += (points.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
    run.history.push_back(objective);
    if (fixpoint) break;
  }
  run.centroids = centroids;
  run.inertia = run.history.back();
  return run;
}

}  // namespace

ClusterAssignment kmeans(const Eigen::MatrixXd& points, std::span<const NodeId> ids,
                         const KMeansOptions& options) {
  const Eigen::Index n = points.rows();
  if (static_cast<Eigen::Index>(ids.size()) != n)
    throw std::invalid_argument("kmeans: id count does not match point count");
  if (options.k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (options.restarts < 1 || options.max_iter < 1)
    throw std::invalid_argument("kmeans: restarts and max_iter must be >= 1");
  const std::size_t distinct = count_distinct(points);
  if (static_cast<std::size_t>(options.k) > distinct)
    throw std::invalid_argument("kmeans: k = " + std::to_string(options.k) + " exceeds the " +
                                std::to_string(distinct) + " distinct feature vectors");

  std::vector<LloydRun> runs(static_cast<std::size_t>(options.restarts));
  parallel_for(runs.size(), [&](std::size_t r) {
    runs[r] = lloyd(points, options.k, splitmix64(options.seed + 0x632BE59BD9B4E019ULL * r),
                    options.max_iter);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].inertia < runs[best].inertia) best = r;
  LloydRun& run = runs[best];

  const auto k = static_cast<std::size_t>(options.k);
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < run.labels.size(); ++i)
    members[static_cast<std::size_t>(run.labels[i])].push_back(i);
  std::vector<BoundingSphere> spheres(k);
  std::vector<NodeId> lowest(k, std::numeric_limits<NodeId>::max());
  for (std::size_t c = 0; c < k; ++c) {
    Eigen::MatrixXd sub(static_cast<Eigen::Index>(members[c].size()), points.cols());
    for (std::size_t j = 0; j < members[c].size(); ++j) {
      sub.row(static_cast<Eigen::Index>(j)) = points.row(static_cast<Eigen::Index>(members[c][j]));
      lowest[c] = std::min(lowest[c], ids[members[c][j]]);
    }
    spheres[c] = min_enclosing_ball(sub);
    for (auto& s : spheres[c].support) s = members[c][s];
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (spheres[a].radius != spheres[b].radius) return spheres[a].radius < spheres[b].radius;
    return lowest[a] < lowest[b];
  });
  std::vector<int> relabel(k);
  for (std::size_t r = 0; r < k; ++r) relabel[order[r]] = static_cast<int>(r);

  ClusterAssignment out;
  out.k = options.k;
  out.ids.assign(ids.begin(), ids.end());
  out.labels.resize(run.labels.size());
  for (std::size_t i = 0; i < run.labels.size(); ++i)
    out.labels[i] = relabel[static_cast<std::size_t>(run.labels[i])];
  out.centroids.resize(options.k, points.cols());
  for (std::size_t r = 0; r < k; ++r) {
    out.centroids.row(static_cast<Eigen::Index>(r)) = run.centroids.row(static_cast<Eigen::Index>(order[r]));
    out.spheres.push_back(spheres[order[r]]);
    out.members.push_back(members[order[r]]);
  }
  out.inertia = run.inertia;
  out.objective_history = run.history;
  return out;
}

ClusterAssignment kmeans(std::span<const FeatureVector> vectors, const KMeansOptions& options) {
  std::vector<NodeId> ids;
  ids.reserve(vectors.size());
  for (const auto& v : vectors) ids.push_back(v.node);
  return kmeans(stack(vectors), ids, options);
}

}  // namespace harmonode
