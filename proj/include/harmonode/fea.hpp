#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "harmonode/model.hpp"

namespace harmonode {

/// Stiffness matrix is singular at a free degree of freedom (mechanism or
/// insufficient supports), or the load case is empty.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear static response of a truss to one load case.
///
/// Vectors are parallel to the model arrays: `displacements[i]` belongs to
/// `model.nodes[i]`, `axial_forces[i]` to `model.elements[i]`, `reactions[i]`
/// to `model.supports[i]`. Axial force is positive in tension.
struct AnalysisResult {
  std::string load_case;
  std::vector<Point3> displacements;
  std::vector<double> axial_forces;
  std::vector<Point3> reactions;
  double residual_norm = 0.0;  // ||K_ff u_f - f_f||
  double applied_norm = 0.0;   // ||f|| over all applied loads
};

AnalysisResult solve(const TrussModel& model, std::string_view load_case);

/// Solves every load case in `model.load_cases()` order.
std::vector<AnalysisResult> solve_all(const TrussModel& model);

/// Net applied load per node for one case, parallel to `model.nodes`.
std::vector<Point3> nodal_loads(const TrussModel& model, std::string_view load_case);

enum class Sense { tension, compression };
enum class DemandSource { member, applied_load, reaction };

std::string_view to_string(Sense sense);

/// One force acting on a node, described by where it crosses the node's unit
/// sphere.
struct DemandEntry {
  Point3 direction = Point3::UnitX();  // unit vector from the node
  double magnitude = 0.0;              // N, >= 0
  Sense sense = Sense::tension;
  DemandSource source = DemandSource::member;
  int source_id = 0;  // element id, or node id for loads and reactions

  /// +magnitude for tension, -magnitude for compression.
  double signed_value() const { return sense == Sense::tension ? magnitude : -magnitude; }
};

struct NodalDemand {
  NodeId node = 0;
  std::string load_case;
  std::vector<DemandEntry> entries;
};

struct DemandOptions {
  bool include_applied_loads = false;
  bool include_reactions = false;
};

/// Per-node force demands, ordered by node id. Member entries point from the
/// node toward the other end of the member for both senses.
std::vector<NodalDemand> extract_demands(const TrussModel& model, const AnalysisResult& result,
                                         const DemandOptions& options = {});

struct SizingParams {
  double yield_stress = 345e6;  // Pa
  double safety_factor = 1.67;
  double min_area = 400e-6;  // m^2
  double density = 7850.0;   // kg/m^3
  int max_iter = 50;
  double tol = 1e-6;  // max relative area change
  /// Cases whose force envelope drives sizing; empty means all cases.
  std::vector<std::string> load_cases;
};

struct SizingResult {
  TrussModel model;
  double mass = 0.0;  // kg
  int iterations = 0;
  bool converged = false;
  std::optional<double> mass_per_area;  // kg/m^2, when enclosure_area is set
};

/// Fully-stressed design loop: solve, resize each member to carry its
/// envelope force at the allowable stress, repeat until areas settle.
SizingResult size_members(const TrussModel& model, const SizingParams& params = {});

double total_mass(const TrussModel& model, double density);

}  // namespace harmonode
