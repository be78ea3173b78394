#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "harmonode/fea.hpp"
#include "harmonode/harmonics.hpp"

namespace harmonode {

inline constexpr double kDefaultDelta = 20.0;

/// Shape of each force's bump on the sphere.
///  - coordinate: exp(-delta * ((theta - theta_i)^2 + dphi^2)), dphi wrapped to (-pi, pi]
///  - geodesic:   exp(-delta * g^2), g the great-circle angle to the force
/// Only the geodesic kernel is isotropic, so only it gives exact rotation
/// invariance of the feature vector.
enum class Kernel { coordinate, geodesic };

/// Bump height: |N| for every force, or +|N| tension / -|N| compression.
enum class AmplitudeMode { magnitude, signed_value };

std::string_view to_string(Kernel kernel);
std::string_view to_string(AmplitudeMode mode);
Kernel parse_kernel(std::string_view text);
AmplitudeMode parse_amplitude(std::string_view text);

struct DescriptorOptions {
  double delta = kDefaultDelta;
  int l_max = kDefaultLmax;
  Kernel kernel = Kernel::geodesic;
  AmplitudeMode amplitude = AmplitudeMode::magnitude;
  double oversample = kDefaultOversample;
};

struct ForceFunctionSpec {
  NodalDemand demand;
  double delta = kDefaultDelta;
  Kernel kernel = Kernel::geodesic;
  AmplitudeMode amplitude = AmplitudeMode::magnitude;
};

/// (theta from +z, phi from +x) of a direction in global axes.
std::pair<double, double> to_spherical(const Point3& direction);
Point3 from_spherical(double theta, double phi);

/// Sum of Gaussian bumps, evaluated at one point of the sphere.
double evaluate_force_function(const ForceFunctionSpec& spec, double theta, double phi);

/// Force function sampled on every point of `grid`.
SphericalSamples build_force_function(const ForceFunctionSpec& spec, const GridPtr& grid);

/// Rotation-invariant node signature: energy of each degree 0..l_max.
struct FeatureVector {
  NodeId node = 0;
  std::string load_case;
  std::vector<double> components;
};

/// Grid to use for `options` (l_max and oversample).
GridPtr descriptor_grid(const DescriptorOptions& options);

FeatureVector feature_vector(const NodalDemand& demand, const DescriptorOptions& options,
                             const GridPtr& grid);

/// Feature vectors for many demands, computed in parallel, same order.
std::vector<FeatureVector> feature_vectors(std::span<const NodalDemand> demands,
                                           const DescriptorOptions& options);

/// Euclidean distance. Throws std::invalid_argument on length mismatch.
double distance(std::span<const double> a, std::span<const double> b);
double distance(const FeatureVector& a, const FeatureVector& b);

/// Symmetric pairwise distances with zero diagonal. `ids[i]` labels row i.
struct DistanceMatrix {
  std::vector<NodeId> ids;
  Eigen::MatrixXd values;

  Eigen::Index size() const { return values.rows(); }
};

DistanceMatrix distance_matrix(std::span<const FeatureVector> vectors);

/// One node's feature vectors across load cases, rows in `load_cases` order.
struct FeatureMatrix {
  NodeId node = 0;
  std::vector<std::string> load_cases;
  std::vector<std::vector<double>> rows;
};

/// Groups per-case vector lists (each ordered identically by node) into one
/// matrix per node. Throws if the lists disagree on nodes or lengths.
std::vector<FeatureMatrix> assemble_feature_matrices(
    std::span<const std::vector<FeatureVector>> per_case);

/// Frobenius-style distance over all concatenated components.
double feature_matrix_distance(const FeatureMatrix& a, const FeatureMatrix& b);

DistanceMatrix distance_matrix(std::span<const FeatureMatrix> matrices);

/// Point at parameter t in [0, 1] along the shorter great-circle arc from
/// `from` to `to` (both unit). Throws for antipodal endpoints.
Point3 slerp(const Point3& from, const Point3& to, double t);

/// Moves entry `moving_entry` along the arc toward `target_direction` and
/// re-solves every signed magnitude as the minimum-norm change restoring
/// sum(m_i u_i) + applied = 0. Throws std::domain_error if the directions
/// cannot equilibrate `applied`.
NodalDemand equilibrium_perturbation(const NodalDemand& demand, std::size_t moving_entry,
                                     const Point3& target_direction, double t,
                                     const Point3& applied);

/// Member demands and feature vectors of every node for one solved case.
std::vector<FeatureVector> model_feature_vectors(const TrussModel& model,
                                                 const AnalysisResult& result,
                                                 const DemandOptions& demand_options,
                                                 const DescriptorOptions& options);

}  // namespace harmonode
