#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "harmonode/descriptor.hpp"

namespace harmonode::svg {

// Self-contained SVG documents (XML declaration, no external references).

/// Grayscale distance heatmap: 0 is white, the largest entry black.
std::string heatmap(const DistanceMatrix& d, const std::string& title);

struct Circle {
  Eigen::Vector2d center;
  double radius = 0.0;
};

struct ScatterSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> point_labels;  // tooltips, optional
  std::vector<int> groups;                // palette index per point, optional
  std::optional<Circle> circle;           // drawn with equal axis scaling
  bool equal_aspect = false;
};

/// Scatter of the first two columns of `xy`.
std::string scatter(const Eigen::MatrixXd& xy, const ScatterSpec& spec);

/// One polyline per row across the columns, colored by `groups`.
std::string parallel_coordinates(const Eigen::MatrixXd& rows, const std::vector<int>& groups,
                                 const std::vector<std::string>& axis_labels, const std::string& title);

/// Categorical color for group g (cycles after ten).
std::string palette(int g);

/// Escapes &, <, >, " and ' for XML text and attributes.
std::string escape(const std::string& text);

}  // namespace harmonode::svg
