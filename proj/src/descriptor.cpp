#include "harmonode/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "harmonode/parallel.hpp"

namespace harmonode {

namespace {

constexpr double kPi = std::numbers::pi;

// Wraps an angle difference into (-pi, pi].
double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

double amplitude(const DemandEntry& e, AmplitudeMode mode) {
  return mode == AmplitudeMode::magnitude ? e.magnitude : e.signed_value();
}

struct Bump {
  double theta, phi, amplitude;
  Point3 direction;
};

std::vector<Bump> bumps(const ForceFunctionSpec& spec) {
  std::vector<Bump> out;
  out.reserve(spec.demand.entries.size());
  for (const auto& e : spec.demand.entries) {
    const auto [theta, phi] = to_spherical(e.direction);
    out.push_back({theta, phi, amplitude(e, spec.amplitude), e.direction.normalized()});
  }
  return out;
}

double evaluate(const std::vector<Bump>& bs, double delta, Kernel kernel, double theta, double phi,
                const Point3& point) {
  double sum = 0.0;
  for (const auto& b : bs) {
    double d2;
    if (kernel == Kernel::coordinate) {
      const double dt = theta - b.theta;
      const double dp = wrap_angle(phi - b.phi);
      d2 = dt * dt + dp * dp;
    } else {
      const double g = std::acos(std::clamp(point.dot(b.direction), -1.0, 1.0));
      d2 = g * g;
    }
    sum += b.amplitude * std::exp(-delta * d2);
  }
  return sum;
}

void check_spec(const ForceFunctionSpec& spec) {
  if (!(spec.delta > 0.0) || !std::isfinite(spec.delta))
    throw std::invalid_argument("force function: delta must be positive");
}

}  // namespace

std::string_view to_string(Kernel kernel) {
  return kernel == Kernel::coordinate ? "coordinate" : "geodesic";
}

std::string_view to_string(AmplitudeMode mode) {
  return mode == AmplitudeMode::magnitude ? "magnitude" : "signed";
}

Kernel parse_kernel(std::string_view text) {
  if (text == "coordinate") return Kernel::coordinate;
  if (text == "geodesic") return Kernel::geodesic;
  throw std::invalid_argument("unknown kernel '" + std::string(text) + "'");
}

AmplitudeMode parse_amplitude(std::string_view text) {
  if (text == "magnitude") return AmplitudeMode::magnitude;
  if (text == "signed") return AmplitudeMode::signed_value;
  throw std::invalid_argument("unknown amplitude mode '" + std::string(text) + "'");
}

std::pair<double, double> to_spherical(const Point3& direction) {
  const Point3 u = direction.normalized();
  return {std::acos(std::clamp(u.z(), -1.0, 1.0)), std::atan2(u.y(), u.x())};
}

Point3 from_spherical(double theta, double phi) {
  const double s = std::sin(theta);
  return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

double evaluate_force_function(const ForceFunctionSpec& spec, double theta, double phi) {
  check_spec(spec);
  return evaluate(bumps(spec), spec.delta, spec.kernel, theta, phi, from_spherical(theta, phi));
}

SphericalSamples build_force_function(const ForceFunctionSpec& spec, const GridPtr& grid) {
  check_spec(spec);
  const auto bs = bumps(spec);
  SphericalSamples s{grid, Eigen::MatrixXd::Zero(grid->n_theta, grid->n_phi)};
  if (bs.empty()) return s;
  for (int j = 0; j < grid->n_theta; ++j) {
    const double theta = grid->theta[static_cast<std::size_t>(j)];
    for (int k = 0; k < grid->n_phi; ++k) {
      const double phi = grid->phi[static_cast<std::size_t>(k)];
      s.values(j, k) = evaluate(bs, spec.delta, spec.kernel, theta, phi, from_spherical(theta, phi));
    }
  }
  return s;
}

GridPtr descriptor_grid(const DescriptorOptions& options) {
  return build_grid(options.l_max, options.oversample);
}

FeatureVector feature_vector(const NodalDemand& demand, const DescriptorOptions& options,
                             const GridPtr& grid) {
  const ForceFunctionSpec spec{demand, options.delta, options.kernel, options.amplitude};
  FeatureVector fv;
  fv.node = demand.node;
  fv.load_case = demand.load_case;
  fv.components = frequency_energies(expand(build_force_function(spec, grid), options.l_max));
  return fv;
}

std::vector<FeatureVector> feature_vectors(std::span<const NodalDemand> demands,
                                           const DescriptorOptions& options) {
  const GridPtr grid = descriptor_grid(options);
  std::vector<FeatureVector> out(demands.size());
  parallel_for(demands.size(),
               [&](std::size_t i) { out[i] = feature_vector(demands[i], options, grid); });
  return out;
}

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("distance: length mismatch (" + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sum);
}

double distance(const FeatureVector& a, const FeatureVector& b) {
  return distance(a.components, b.components);
}

DistanceMatrix distance_matrix(std::span<const FeatureVector> vectors) {
  if (vectors.empty()) throw std::invalid_argument("distance_matrix: no vectors");
  const auto n = static_cast<Eigen::Index>(vectors.size());
  for (const auto& v : vectors)
    if (v.components.size() != vectors.front().components.size())
      throw std::invalid_argument("distance_matrix: inconsistent vector lengths");
  DistanceMatrix d;
  d.ids.reserve(vectors.size());
  for (const auto& v : vectors) d.ids.push_back(v.node);
  d.values = Eigen::MatrixXd::Zero(n, n);
  parallel_for(vectors.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < i; ++j) {
      d.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          distance(vectors[i], vectors[j]);
    }
  });
  d.values.triangularView<Eigen::StrictlyUpper>() = d.values.transpose();
  return d;
}

std::vector<FeatureMatrix> assemble_feature_matrices(
    std::span<const std::vector<FeatureVector>> per_case) {
  std::vector<FeatureMatrix> out;
  if (per_case.empty()) return out;
  const auto& first = per_case.front();
  out.resize(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) out[i].node = first[i].node;
  for (const auto& vectors : per_case) {
    if (vectors.size() != first.size())
      throw std::invalid_argument("assemble_feature_matrices: node count differs between cases");
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (vectors[i].node != out[i].node)
        throw std::invalid_argument("assemble_feature_matrices: node order differs between cases");
      if (vectors[i].components.size() != first[i].components.size())
        throw std::invalid_argument("assemble_feature_matrices: inconsistent l_max");
      out[i].load_cases.push_back(vectors[i].load_case);
      out[i].rows.push_back(vectors[i].components);
    }
  }
  return out;
}

double feature_matrix_distance(const FeatureMatrix& a, const FeatureMatrix& b) {
  if (a.load_cases != b.load_cases || a.rows.size() != b.rows.size())
    throw std::invalid_argument("feature_matrix_distance: load case sets differ");
  double sum = 0.0;
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    const double d = distance(a.rows[r], b.rows[r]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

DistanceMatrix distance_matrix(std::span<const FeatureMatrix> matrices) {
  if (matrices.empty()) throw std::invalid_argument("distance_matrix: no feature matrices");
  const auto n = static_cast<Eigen::Index>(matrices.size());
  DistanceMatrix d;
  for (const auto& m : matrices) d.ids.push_back(m.node);
  d.values = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      d.values(i, j) = d.values(j, i) = feature_matrix_distance(
          matrices[static_cast<std::size_t>(i)], matrices[static_cast<std::size_t>(j)]);
  return d;
}

Point3 slerp(const Point3& from, const Point3& to, double t) {
  const Point3 a = from.normalized();
  const Point3 b = to.normalized();
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  if (c < -1.0 + 1e-12) throw std::invalid_argument("slerp: antipodal endpoints define no unique arc");
  const double omega = std::acos(c);
  if (omega < 1e-15) return a;
  const double s = std::sin(omega);
  return (std::sin((1.0 - t) * omega) / s * a + std::sin(t * omega) / s * b).normalized();
}

NodalDemand equilibrium_perturbation(const NodalDemand& demand, std::size_t moving_entry,
                                     const Point3& target_direction, double t,
                                     const Point3& applied) {
  if (moving_entry >= demand.entries.size())
    throw std::out_of_range("equilibrium_perturbation: moving entry out of range");
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("equilibrium_perturbation: t must lie in [0, 1]");

  NodalDemand out = demand;
  auto& moved = out.entries[moving_entry];
  moved.direction = slerp(moved.direction, target_direction, t);

  const auto n = static_cast<Eigen::Index>(out.entries.size());
  Eigen::Matrix3Xd u(3, n);
  Eigen::VectorXd m0(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& e = out.entries[static_cast<std::size_t>(i)];
    u.col(i) = e.direction;
    m0[i] = e.signed_value();
  }
  const Eigen::Vector3d rhs = -applied - u * m0;
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(u);
  const Eigen::VectorXd change = cod.solve(rhs);
  const Eigen::VectorXd m = m0 + change;

  const double scale = std::max(applied.norm(), m0.cwiseAbs().maxCoeff());
  const double residual = (u * m + applied).norm();
  if (residual > 1e-9 * std::max(scale, 1e-300))
    throw std::domain_error("equilibrium_perturbation: directions cannot equilibrate the applied load "
                            "(rank-deficient direction set)");

  for (Eigen::Index i = 0; i < n; ++i) {
    auto& e = out.entries[static_cast<std::size_t>(i)];
    e.magnitude = std::abs(m[i]);
    e.sense = m[i] < 0.0 ? Sense::compression : Sense::tension;
  }
  return out;
}

std::vector<FeatureVector> model_feature_vectors(const TrussModel& model,
                                                 const AnalysisResult& result,
                                                 const DemandOptions& demand_options,
                                                 const DescriptorOptions& options) {
  const auto demands = extract_demands(model, result, demand_options);
  return feature_vectors(demands, options);
}

}  // namespace harmonode
