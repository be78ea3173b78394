#include "harmonode/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "harmonode/csv.hpp"

namespace harmonode::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 520.0;
constexpr double kMargin = 60.0;

// Fixed-precision coordinates keep the output short and stable.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", std::abs(v) < 5e-3 ? 0.0 : v);
  return buf;
}

void open(std::ostringstream& s, double w, double h, const std::string& title) {
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
    << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h) << "\" font-family=\"sans-serif\">\n"
    << "<title>" << escape(title) << "</title>\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
    << "<text x=\"" << num(w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(title)
    << "</text>\n";
}

std::string gray(double t) {
  const int v = static_cast<int>(std::lround(255.0 * (1.0 - std::clamp(t, 0.0, 1.0))));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", v, v, v);
  return buf;
}

struct Range {
  double lo = 0.0, hi = 1.0;
  void pad() {
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

}  // namespace

std::string escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string palette(int g) {
  static constexpr std::array<const char*, 10> colors{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                       "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  const auto n = static_cast<int>(colors.size());
  return colors[static_cast<std::size_t>(((g % n) + n) % n)];
}

std::string heatmap(const DistanceMatrix& d, const std::string& title) {
  const auto n = d.size();
  const double side = 460.0;
  const double cell = n > 0 ? side / static_cast<double>(n) : side;
  const double max = n > 0 ? d.values.maxCoeff() : 0.0;
  std::ostringstream s;
  open(s, side + 2 * kMargin, side + 2 * kMargin, title);
  s << "<g shape-rendering=\"crispEdges\">\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = d.values(i, j);
      s << "<rect x=\"" << num(kMargin + cell * static_cast<double>(j)) << "\" y=\""
        << num(kMargin + cell * static_cast<double>(i)) << "\" width=\"" << num(cell) << "\" height=\""
        << num(cell) << "\" fill=\"" << gray(max > 0 ? v / max : 0.0) << "\"><title>"
        << d.ids[static_cast<std::size_t>(i)] << " - " << d.ids[static_cast<std::size_t>(j)] << ": "
        << format_double(v) << "</title></rect>\n";
    }
  }
  s << "</g>\n<rect x=\"" << num(kMargin) << "\" y=\"" << num(kMargin) << "\" width=\"" << num(side)
    << "\" height=\"" << num(side) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
  s << "<text x=\"" << num(kMargin) << "\" y=\"" << num(side + kMargin + 20)
    << "\" font-size=\"11\">white = 0, black = " << format_double(max) << "</text>\n</svg>\n";
  return s.str();
}

std::string scatter(const Eigen::MatrixXd& xy, const ScatterSpec& spec) {
  const auto n = xy.rows();
  Range rx, ry;
  if (n > 0) {
    rx = {xy.col(0).minCoeff(), xy.col(0).maxCoeff()};
    ry = {xy.cols() > 1 ? xy.col(1).minCoeff() : 0.0, xy.cols() > 1 ? xy.col(1).maxCoeff() : 0.0};
  }
  if (spec.circle) {
    const auto& c = *spec.circle;
    rx = {std::min(rx.lo, c.center.x() - c.radius), std::max(rx.hi, c.center.x() + c.radius)};
    ry = {std::min(ry.lo, c.center.y() - c.radius), std::max(ry.hi, c.center.y() + c.radius)};
  }
  rx.pad();
  ry.pad();
  const double pw = kWidth - 2 * kMargin, ph = kHeight - 2 * kMargin;
  double sx = pw / (rx.hi - rx.lo), sy = ph / (ry.hi - ry.lo);
  if (spec.equal_aspect || spec.circle) sx = sy = std::min(sx, sy);
  const double ox = kMargin + 0.5 * (pw - sx * (rx.hi - rx.lo));
  const double oy = kMargin + 0.5 * (ph - sy * (ry.hi - ry.lo));
  auto X = [&](double x) { return ox + sx * (x - rx.lo); };
  auto Y = [&](double y) { return kHeight - oy - sy * (y - ry.lo); };

  std::ostringstream s;
  open(s, kWidth, kHeight, spec.title);
  s << "<rect x=\"" << num(kMargin) << "\" y=\"" << num(kMargin) << "\" width=\"" << num(pw) << "\" height=\""
    << num(ph) << "\" fill=\"none\" stroke=\"#999999\"/>\n";
  s << "<text x=\"" << num(kWidth / 2) << "\" y=\"" << num(kHeight - 18) << "\" text-anchor=\"middle\" font-size=\"12\">"
    << escape(spec.x_label) << " [" << format_double(rx.lo) << ", " << format_double(rx.hi) << "]</text>\n";
  s << "<text x=\"18\" y=\"" << num(kHeight / 2) << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 18 "
    << num(kHeight / 2) << ")\">" << escape(spec.y_label) << " [" << format_double(ry.lo) << ", "
    << format_double(ry.hi) << "]</text>\n";
  if (spec.circle) {
    s << "<circle cx=\"" << num(X(spec.circle->center.x())) << "\" cy=\"" << num(Y(spec.circle->center.y()))
      << "\" r=\"" << num(sx * spec.circle->radius) << "\" fill=\"none\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/>\n";
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const std::string color = k < spec.groups.size() ? palette(spec.groups[k]) : "#1f77b4";
    s << "<circle cx=\"" << num(X(xy(i, 0))) << "\" cy=\"" << num(Y(xy.cols() > 1 ? xy(i, 1) : 0.0))
      << "\" r=\"4\" fill=\"" << color << "\" fill-opacity=\"0.8\">";
    if (k < spec.point_labels.size()) s << "<title>" << escape(spec.point_labels[k]) << "</title>";
    s << "</circle>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string parallel_coordinates(const Eigen::MatrixXd& rows, const std::vector<int>& groups,
                                 const std::vector<std::string>& axis_labels, const std::string& title) {
  const auto dims = rows.cols();
  const double pw = kWidth - 2 * kMargin, ph = kHeight - 2 * kMargin;
  std::ostringstream s;
  open(s, kWidth, kHeight, title);
  if (dims == 0) {
    s << "</svg>\n";
    return s.str();
  }
  // Shared vertical scale so component magnitudes stay comparable.
  const double hi = rows.size() > 0 ? std::max(rows.maxCoeff(), 0.0) : 1.0;
  const double lo = rows.size() > 0 ? std::min(rows.minCoeff(), 0.0) : 0.0;
  const double span = hi > lo ? hi - lo : 1.0;
  auto X = [&](Eigen::Index j) {
    return dims > 1 ? kMargin + pw * static_cast<double>(j) / static_cast<double>(dims - 1) : kWidth / 2;
  };
  auto Y = [&](double v) { return kMargin + ph * (1.0 - (v - lo) / span); };
  for (Eigen::Index j = 0; j < dims; ++j) {
    s << "<line x1=\"" << num(X(j)) << "\" y1=\"" << num(kMargin) << "\" x2=\"" << num(X(j)) << "\" y2=\""
      << num(kMargin + ph) << "\" stroke=\"#cccccc\"/>\n";
    const auto k = static_cast<std::size_t>(j);
    s << "<text x=\"" << num(X(j)) << "\" y=\"" << num(kMargin + ph + 16) << "\" text-anchor=\"middle\" font-size=\"10\">"
      << escape(k < axis_labels.size() ? axis_labels[k] : std::to_string(j)) << "</text>\n";
  }
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    s << "<polyline fill=\"none\" stroke-opacity=\"0.6\" stroke=\""
      << (k < groups.size() ? palette(groups[k]) : "#1f77b4") << "\" points=\"";
    for (Eigen::Index j = 0; j < dims; ++j) s << (j ? " " : "") << num(X(j)) << ',' << num(Y(rows(i, j)));
    s << "\"/>\n";
  }
  s << "<text x=\"" << num(kMargin - 6) << "\" y=\"" << num(kMargin) << "\" text-anchor=\"end\" font-size=\"10\">"
    << format_double(hi) << "</text>\n";
  s << "<text x=\"" << num(kMargin - 6) << "\" y=\"" << num(kMargin + ph) << "\" text-anchor=\"end\" font-size=\"10\">"
    << format_double(lo) << "</text>\n</svg>\n";
  return s.str();
}

}  // namespace harmonode::svg
