#include "harmonode/export.hpp"

#include <charconv>
#include <ostream>
#include <stdexcept>

#include "harmonode/csv.hpp"

namespace harmonode {

namespace {

std::vector<std::string> vec3(const Point3& p) {
  return {format_double(p.x()), format_double(p.y()), format_double(p.z())};
}

template <class T>
T parse_number(const std::string& s, std::size_t row) {
  T value{};
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size())
    throw std::runtime_error("feature CSV row " + std::to_string(row) + ": bad number '" + s + "'");
  return value;
}

}  // namespace

void write_displacements_csv(const TrussModel& model, const AnalysisResult& result,
                             std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"node_id", "load_case", "ux", "uy", "uz"});
  for (std::size_t i = 0; i < model.nodes.size(); ++i) {
    std::vector<std::string> row{std::to_string(model.nodes[i].id), result.load_case};
    for (auto& v : vec3(result.displacements[i])) row.push_back(std::move(v));
    csv.row(row);
  }
}

void write_forces_csv(const TrussModel& model, const AnalysisResult& result, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"element_id", "load_case", "start", "end", "axial_force", "sense"});
  for (std::size_t e = 0; e < model.elements.size(); ++e) {
    const auto& el = model.elements[e];
    const double n = result.axial_forces[e];
    csv.row({std::to_string(el.id), result.load_case, std::to_string(el.start),
             std::to_string(el.end), format_double(n),
             std::string(to_string(n < 0.0 ? Sense::compression : Sense::tension))});
  }
}

void write_reactions_csv(const TrussModel& model, const AnalysisResult& result, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"node_id", "load_case", "rx", "ry", "rz"});
  for (std::size_t s = 0; s < model.supports.size(); ++s) {
    std::vector<std::string> row{std::to_string(model.supports[s].node), result.load_case};
    for (auto& v : vec3(result.reactions[s])) row.push_back(std::move(v));
    csv.row(row);
  }
}

void write_feature_vectors_csv(std::span<const FeatureVector> vectors, std::ostream& out) {
  CsvWriter csv(out);
  const std::size_t width = vectors.empty() ? 0 : vectors.front().components.size();
  std::vector<std::string> header{"node_id", "load_case"};
  for (std::size_t l = 0; l < width; ++l) header.push_back("fv_" + std::to_string(l));
  csv.row(header);
  for (const auto& v : vectors) {
    std::vector<std::string> row{std::to_string(v.node), v.load_case};
    for (double c : v.components) row.push_back(format_double(c));
    csv.row(row);
  }
}

namespace {

std::vector<FeatureVector> features_from_table(const CsvTable& table) {
  if (table.empty() || table.front().size() < 2 || table.front()[0] != "node_id")
    throw std::runtime_error("feature CSV: missing node_id header");
  const std::size_t width = table.front().size();
  std::vector<FeatureVector> out;
  for (std::size_t r = 1; r < table.size(); ++r) {
    const auto& row = table[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != width)
      throw std::runtime_error("feature CSV row " + std::to_string(r) + ": expected " +
                               std::to_string(width) + " fields, got " + std::to_string(row.size()));
    FeatureVector v;
    v.node = parse_number<int>(row[0], r);
    v.load_case = row[1];
    for (std::size_t c = 2; c < width; ++c) v.components.push_back(parse_number<double>(row[c], r));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::vector<FeatureVector> parse_feature_vectors_csv(std::string_view text) {
  return features_from_table(parse_csv(text));
}

std::vector<FeatureVector> read_feature_vectors_csv(const std::string& path) {
  return features_from_table(read_csv_file(path));
}

void write_distance_matrix_csv(const DistanceMatrix& d, std::ostream& out) {
  CsvWriter csv(out);
  std::vector<std::string> header{"node_id"};
  for (NodeId id : d.ids) header.push_back(std::to_string(id));
  csv.row(header);
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    std::vector<std::string> row{std::to_string(d.ids[static_cast<std::size_t>(i)])};
    for (Eigen::Index j = 0; j < d.size(); ++j) row.push_back(format_double(d.values(i, j)));
    csv.row(row);
  }
}

void write_embedding_csv(const Embedding& e, std::ostream& out) {
  CsvWriter csv(out);
  std::vector<std::string> header{"node_id"};
  for (int c = 0; c < e.dimension; ++c) header.push_back("x" + std::to_string(c));
  csv.row(header);
  for (Eigen::Index i = 0; i < e.coordinates.rows(); ++i) {
    std::vector<std::string> row{std::to_string(e.ids[static_cast<std::size_t>(i)])};
    for (int c = 0; c < e.dimension; ++c) row.push_back(format_double(e.coordinates(i, c)));
    csv.row(row);
  }
}

void write_clusters_csv(const ClusterAssignment& a, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"node_id", "cluster"});
  for (std::size_t i = 0; i < a.labels.size(); ++i)
    csv.row({std::to_string(a.ids[i]), std::to_string(a.labels[i])});
}

void write_cluster_summary_csv(const ClusterAssignment& a, std::ostream& out) {
  CsvWriter csv(out);
  std::vector<std::string> header{"cluster", "size", "radius"};
  for (Eigen::Index c = 0; c < a.centroids.cols(); ++c) header.push_back("centroid_" + std::to_string(c));
  csv.row(header);
  for (int c = 0; c < a.k; ++c) {
    const auto cs = static_cast<std::size_t>(c);
    std::vector<std::string> row{std::to_string(c), std::to_string(a.members[cs].size()),
                                 format_double(a.spheres[cs].radius)};
    for (Eigen::Index j = 0; j < a.centroids.cols(); ++j) row.push_back(format_double(a.centroids(c, j)));
    csv.row(row);
  }
}

}  // namespace harmonode
