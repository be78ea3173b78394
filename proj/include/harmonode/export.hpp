#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "harmonode/analysis.hpp"
#include "harmonode/descriptor.hpp"
#include "harmonode/fea.hpp"

namespace harmonode {

// CSV exports. Every table has a header row; numbers use the shortest
// round-trip representation, so identical inputs give identical bytes.

void write_displacements_csv(const TrussModel& model, const AnalysisResult& result, std::ostream& out);
void write_forces_csv(const TrussModel& model, const AnalysisResult& result, std::ostream& out);
void write_reactions_csv(const TrussModel& model, const AnalysisResult& result, std::ostream& out);

/// node_id, load_case, fv_0 .. fv_lmax
void write_feature_vectors_csv(std::span<const FeatureVector> vectors, std::ostream& out);

/// Inverse of write_feature_vectors_csv. Throws std::runtime_error on
/// malformed rows or inconsistent lengths.
std::vector<FeatureVector> read_feature_vectors_csv(const std::string& path);
std::vector<FeatureVector> parse_feature_vectors_csv(std::string_view text);

/// node_id followed by one column per node id.
void write_distance_matrix_csv(const DistanceMatrix& d, std::ostream& out);

/// node_id, x0 .. x{k-1}
void write_embedding_csv(const Embedding& e, std::ostream& out);

/// node_id, cluster
void write_clusters_csv(const ClusterAssignment& a, std::ostream& out);

/// cluster, size, radius, centroid components
void write_cluster_summary_csv(const ClusterAssignment& a, std::ostream& out);

}  // namespace harmonode
