#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace harmonode {

/// Cartesian point or vector in SI units (m for positions, N for forces).
using Point3 = Eigen::Vector3d;

using NodeId = int;
using ElementId = int;

/// Name of the load case used when a load does not specify one.
inline constexpr std::string_view kDefaultLoadCase = "default";

struct TrussNode {
  NodeId id = 0;
  Point3 position = Point3::Zero();
};

struct TrussElement {
  ElementId id = 0;
  NodeId start = 0;
  NodeId end = 0;
  double area = 0.0;            // m^2
  double youngs_modulus = 0.0;  // Pa
};

struct Support {
  NodeId node = 0;
  std::array<bool, 3> fixed{true, true, true};
};

struct PointLoad {
  NodeId node = 0;
  Point3 force = Point3::Zero();
  std::string load_case{kDefaultLoadCase};
};

/// Pin-jointed spatial truss: the structural problem statement.
///
/// Immutable once built by the caller; every downstream module takes it by
/// const reference.
struct TrussModel {
  std::string name;
  std::optional<double> enclosure_area;  // m^2
  std::vector<TrussNode> nodes;
  std::vector<TrussElement> elements;
  std::vector<Support> supports;
  std::vector<PointLoad> loads;

  /// Position of each node id in `nodes`. Duplicate ids keep the first.
  std::unordered_map<NodeId, std::size_t> node_index() const;

  /// Load case identifiers in order of first appearance.
  std::vector<std::string> load_cases() const;

  /// Element length, assuming both end nodes exist.
  double element_length(const TrussElement& e) const;
};

bool operator==(const TrussNode& a, const TrussNode& b);
bool operator==(const TrussElement& a, const TrussElement& b);
bool operator==(const Support& a, const Support& b);
bool operator==(const PointLoad& a, const PointLoad& b);
bool operator==(const TrussModel& a, const TrussModel& b);

enum class EntityKind { node, element, support, load, model };

std::string_view to_string(EntityKind kind);

/// One broken invariant. `path` is the JSON path of the offending field.
struct Violation {
  EntityKind kind = EntityKind::model;
  int entity_id = 0;     // node/element id; node id for supports and loads
  std::size_t index = 0; // position in the owning array
  std::string path;
  std::string message;
};

/// Every violated invariant, ordered by entity kind then id. Empty when valid.
std::vector<Violation> validate(const TrussModel& model);

/// Malformed JSON input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : std::runtime_error(what), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// Well-formed JSON that does not describe a valid truss.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct ReadResult {
  TrussModel model;
  std::vector<std::string> warnings;  // unknown fields, by JSON path
};

/// Parses a `.truss.json` document. The returned model always validates.
ReadResult read_model(std::string_view json);

/// Serializes with keys in the documented order (see docs/schema.md).
std::string write_model(const TrussModel& model);

ReadResult load_model_file(const std::string& path);
void save_model_file(const TrussModel& model, const std::string& path);

}  // namespace harmonode
