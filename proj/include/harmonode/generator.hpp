#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "harmonode/analysis.hpp"
#include "harmonode/descriptor.hpp"
#include "harmonode/fea.hpp"
#include "harmonode/model.hpp"

namespace harmonode {

/// Square-on-square offset double-layer grid.
///
/// Top layer: nx x ny nodes on a `bay` grid centred on the origin, at height
/// depth + h(x, y) where h interpolates `control_heights` (Catmull-Rom in
/// both directions; rows run along x, columns along y; spans the plan).
/// Bottom layer: (nx-1) x (ny-1) nodes at z = 0 under the top-cell centres.
///
/// Node ids: top (i, j) -> 1 + j*nx + i; bottom (i, j) -> 1 + nx*ny + j*(nx-1) + i.
/// Element ids run from 1 in this order: top chords along x, top chords
/// along y, bottom chords along x, bottom chords along y, then four
/// diagonals per bottom node (to the top nodes at (i,j), (i+1,j), (i,j+1),
/// (i+1,j+1)). Element count:
///   (nx-1)ny + nx(ny-1) + (nx-2)(ny-1) + (nx-1)(ny-2) + 4(nx-1)(ny-1).
/// Every support is pinned in x, y and z. Each top node gets
/// `load_per_top_node` in `load_case`.
struct GridTrussParams {
  int nx = 11;
  int ny = 9;
  double bay = 1.0;    // m
  double depth = 1.0;  // m
  Eigen::MatrixXd control_heights;  // empty means flat
  std::vector<NodeId> supports;
  Point3 load_per_top_node{0.0, 0.0, -10e3};
  std::string load_case{kDefaultLoadCase};
  double area = 1e-3;              // m^2, initial section
  double youngs_modulus = 200e9;   // Pa
  std::optional<double> enclosure_area;  // defaults to the plan area
  std::string name = "grid-truss";
};

NodeId top_node_id(const GridTrussParams& p, int i, int j);
NodeId bottom_node_id(const GridTrussParams& p, int i, int j);
std::size_t grid_truss_node_count(int nx, int ny);
std::size_t grid_truss_element_count(int nx, int ny);

/// Builds the model. Throws std::invalid_argument on invalid params.
TrussModel generate_grid_truss(const GridTrussParams& params);

/// A parametric family: the free parameters are the control heights of the
/// half plan y <= 0, mirrored to y > 0, so every member is symmetric about
/// the xz plane. Parameter p maps to control (p / half_cols, p % half_cols).
struct DesignFamily {
  GridTrussParams base;
  int control_rows = 3;
  int control_cols = 4;
  std::vector<std::pair<double, double>> bounds;  // one per free parameter

  int parameter_count() const { return control_rows * ((control_cols + 1) / 2); }
  GridTrussParams instantiate(std::span<const double> parameters) const;
};

/// The desk-scale roof family used by the sweep: 11 x 9 top grid (179
/// nodes, 640 members), four pinned bottom supports, six free heights in
/// [-0.5, 1.5] m.
DesignFamily default_family();

struct SampleSet {
  std::size_t n_samples = 0;
  std::vector<std::pair<double, double>> bounds;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> samples;  // n_samples x dims
};

/// One sample per stratum per dimension, strata paired by seeded random
/// permutations, a uniform offset inside each stratum.
SampleSet latin_hypercube(std::size_t n, std::span<const std::pair<double, double>> bounds,
                          std::uint64_t seed);

struct PipelineConfig {
  SizingParams sizing;
  DemandOptions demands;
  DescriptorOptions descriptor;
  MinBallOptions ball;
  /// Per-design artifacts go to <artifact_dir>/design_XXXX/ when non-empty.
  std::string artifact_dir;
};

struct SweepRecord {
  std::size_t sample_id = 0;
  std::vector<double> parameters;
  double mass = 0.0;
  std::optional<double> mass_per_area;
  double complexity_radius = 0.0;
  std::string status;  // "ok", "not_converged" or "error: ..."
  std::string feature_path;
  std::vector<FeatureVector> features;
};

/// Generate, size, solve, describe and score one design.
SweepRecord evaluate_design(const DesignFamily& family, std::span<const double> parameters,
                            const PipelineConfig& config, std::size_t sample_id = 0);

/// Runs evaluate_design over every sample (in parallel, output in sample
/// order). A failing sample is recorded with an error status.
std::vector<SweepRecord> sweep(const DesignFamily& family, const SampleSet& samples,
                               const PipelineConfig& config);

/// Columns: sample_id, p0..pN, mass_kg, mass_per_area, complexity_radius, solver_status.
void write_sweep_csv(std::span<const SweepRecord> records, std::size_t parameter_count,
                     std::ostream& out);

}  // namespace harmonode
