#include "harmonode/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <stdexcept>

#include "harmonode/csv.hpp"
#include "harmonode/export.hpp"
#include "harmonode/parallel.hpp"

namespace harmonode {

namespace {

// Catmull-Rom through equally spaced values, end segments use a repeated
// end point. Position is the rational a / b of the span.
double catmull_rom(std::span<const double> c, long a, long b) {
  const auto m = static_cast<long>(c.size());
  if (m == 1) return c[0];
  const double s = static_cast<double>(a) * static_cast<double>(m - 1) / static_cast<double>(b);
  const long i = std::clamp(static_cast<long>(std::floor(s)), 0L, m - 2);
  const double t = s - static_cast<double>(i);
  auto at = [&](long k) { return c[static_cast<std::size_t>(std::clamp(k, 0L, m - 1))]; };
  const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  const double t2 = t * t, t3 = t2 * t;
  return 0.5 * (2.0 * p1 + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2 +
                (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t3);
}

// Evaluates forward and mirrored and averages, so symmetric controls give
// bit-identical values at mirrored positions.
double catmull_rom_symmetrized(std::span<const double> c, long a, long b) {
  std::vector<double> reversed(c.rbegin(), c.rend());
  return 0.5 * (catmull_rom(c, a, b) + catmull_rom(reversed, b - a, b));
}

double top_height(const Eigen::MatrixXd& controls, int i, int j, int nx, int ny) {
  if (controls.size() == 0) return 0.0;
  std::vector<double> along_x(static_cast<std::size_t>(controls.rows()));
  std::vector<double> row(static_cast<std::size_t>(controls.cols()));
  for (Eigen::Index r = 0; r < controls.rows(); ++r) {
    for (Eigen::Index c = 0; c < controls.cols(); ++c) row[static_cast<std::size_t>(c)] = controls(r, c);
    along_x[static_cast<std::size_t>(r)] = catmull_rom_symmetrized(row, j, ny - 1);
  }
  return catmull_rom(along_x, i, nx - 1);
}

void check_params(const GridTrussParams& p) {
  if (p.nx < 2 || p.ny < 2) throw std::invalid_argument("grid truss: nx and ny must be >= 2");
  if (!(p.bay > 0.0) || !std::isfinite(p.bay)) throw std::invalid_argument("grid truss: bay must be positive");
  if (!(p.depth > 0.0) || !std::isfinite(p.depth))
    throw std::invalid_argument("grid truss: depth must be positive");
  if (p.supports.empty()) throw std::invalid_argument("grid truss: supports must be non-empty");
  if (!p.control_heights.allFinite()) throw std::invalid_argument("grid truss: non-finite control height");
  if (!(p.area > 0.0) || !(p.youngs_modulus > 0.0))
    throw std::invalid_argument("grid truss: area and modulus must be positive");
  const auto count = static_cast<NodeId>(grid_truss_node_count(p.nx, p.ny));
  for (NodeId s : p.supports)
    if (s < 1 || s > count) throw std::invalid_argument("grid truss: support id " + std::to_string(s) + " does not exist");
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

NodeId top_node_id(const GridTrussParams& p, int i, int j) { return 1 + j * p.nx + i; }

NodeId bottom_node_id(const GridTrussParams& p, int i, int j) {
  return 1 + p.nx * p.ny + j * (p.nx - 1) + i;
}

std::size_t grid_truss_node_count(int nx, int ny) {
  return static_cast<std::size_t>(nx * ny + (nx - 1) * (ny - 1));
}

std::size_t grid_truss_element_count(int nx, int ny) {
  return static_cast<std::size_t>((nx - 1) * ny + nx * (ny - 1) + (nx - 2) * (ny - 1) +
                                  (nx - 1) * (ny - 2) + 4 * (nx - 1) * (ny - 1));
}

TrussModel generate_grid_truss(const GridTrussParams& p) {
  check_params(p);
  TrussModel m;
  m.name = p.name;
  m.enclosure_area = p.enclosure_area ? *p.enclosure_area : (p.nx - 1) * (p.ny - 1) * p.bay * p.bay;

  const double cx = 0.5 * (p.nx - 1), cy = 0.5 * (p.ny - 1);
  for (int j = 0; j < p.ny; ++j)
    for (int i = 0; i < p.nx; ++i)
      m.nodes.push_back({top_node_id(p, i, j),
                         Point3((i - cx) * p.bay, (j - cy) * p.bay,
                                p.depth + top_height(p.control_heights, i, j, p.nx, p.ny))});
  for (int j = 0; j + 1 < p.ny; ++j)
    for (int i = 0; i + 1 < p.nx; ++i)
      m.nodes.push_back({bottom_node_id(p, i, j), Point3((i + 0.5 - cx) * p.bay, (j + 0.5 - cy) * p.bay, 0.0)});

  ElementId next = 1;
  auto add = [&](NodeId a, NodeId b) { m.elements.push_back({next++, a, b, p.area, p.youngs_modulus}); };
  for (int j = 0; j < p.ny; ++j)
    for (int i = 0; i + 1 < p.nx; ++i) add(top_node_id(p, i, j), top_node_id(p, i + 1, j));
  for (int j = 0; j + 1 < p.ny; ++j)
    for (int i = 0; i < p.nx; ++i) add(top_node_id(p, i, j), top_node_id(p, i, j + 1));
  for (int j = 0; j + 1 < p.ny; ++j)
    for (int i = 0; i + 2 < p.nx; ++i) add(bottom_node_id(p, i, j), bottom_node_id(p, i + 1, j));
  for (int j = 0; j + 2 < p.ny; ++j)
    for (int i = 0; i + 1 < p.nx; ++i) add(bottom_node_id(p, i, j), bottom_node_id(p, i, j + 1));
  for (int j = 0; j + 1 < p.ny; ++j) {
    for (int i = 0; i + 1 < p.nx; ++i) {
      const NodeId b = bottom_node_id(p, i, j);
      add(b, top_node_id(p, i, j));
      add(b, top_node_id(p, i + 1, j));
      add(b, top_node_id(p, i, j + 1));
      add(b, top_node_id(p, i + 1, j + 1));
    }
  }

  for (NodeId s : p.supports) m.supports.push_back({s, {true, true, true}});
  for (int j = 0; j < p.ny; ++j)
    for (int i = 0; i < p.nx; ++i) m.loads.push_back({top_node_id(p, i, j), p.load_per_top_node, p.load_case});
  return m;
}

GridTrussParams DesignFamily::instantiate(std::span<const double> parameters) const {
  if (static_cast<int>(parameters.size()) != parameter_count())
    throw std::invalid_argument("design family expects " + std::to_string(parameter_count()) +
                                " parameters, got " + std::to_string(parameters.size()));
  const int half = (control_cols + 1) / 2;
  GridTrussParams p = base;
  p.control_heights.resize(control_rows, control_cols);
  for (int r = 0; r < control_rows; ++r) {
    for (int c = 0; c < half; ++c) {
      const double v = parameters[static_cast<std::size_t>(r * half + c)];
      p.control_heights(r, c) = v;
      p.control_heights(r, control_cols - 1 - c) = v;
    }
  }
  return p;
}

DesignFamily default_family() {
  DesignFamily f;
  GridTrussParams& p = f.base;
  p.nx = 11;
  p.ny = 9;
  p.bay = 1.0;
  p.depth = 1.0;
  p.name = "roof-family";
  p.supports = {bottom_node_id(p, 1, 2), bottom_node_id(p, 1, 5), bottom_node_id(p, 8, 2),
                bottom_node_id(p, 8, 5)};
  f.control_rows = 3;
  f.control_cols = 4;
  f.bounds.assign(static_cast<std::size_t>(f.parameter_count()), {-0.5, 1.5});
  return f;
}

SampleSet latin_hypercube(std::size_t n, std::span<const std::pair<double, double>> bounds,
                          std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("latin_hypercube: need at least one sample");
  if (bounds.empty()) throw std::invalid_argument("latin_hypercube: need at least one dimension");
  for (const auto& [lo, hi] : bounds)
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw std::invalid_argument("latin_hypercube: each bound needs finite lo < hi");

  SampleSet set;
  set.n_samples = n;
  set.bounds.assign(bounds.begin(), bounds.end());
  set.seed = seed;
  set.samples.assign(n, std::vector<double>(bounds.size()));
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> perm(n);
  for (std::size_t d = 0; d < bounds.size(); ++d) {
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n - 1; i > 0; --i) {
      const auto j = std::min(i, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i + 1)));
      std::swap(perm[i], perm[j]);
    }
    const auto [lo, hi] = bounds[d];
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (static_cast<double>(perm[i]) + uniform01(rng)) / static_cast<double>(n);
      set.samples[i][d] = std::min(hi, lo + (hi - lo) * u);
    }
  }
  return set;
}

SweepRecord evaluate_design(const DesignFamily& family, std::span<const double> parameters,
                            const PipelineConfig& config, std::size_t sample_id) {
  SweepRecord rec;
  rec.sample_id = sample_id;
  rec.parameters.assign(parameters.begin(), parameters.end());
  try {
    const TrussModel model = generate_grid_truss(family.instantiate(parameters));
    const SizingResult sized = size_members(model, config.sizing);
    const std::string load_case =
        config.sizing.load_cases.empty() ? sized.model.load_cases().front() : config.sizing.load_cases.front();
    const AnalysisResult result = solve(sized.model, load_case);
    rec.features = model_feature_vectors(sized.model, result, config.demands, config.descriptor);
    rec.mass = sized.mass;
    rec.mass_per_area = sized.mass_per_area;
    rec.complexity_radius = complexity_score(rec.features, config.ball);
    rec.status = sized.converged ? "ok" : "not_converged";

    if (!config.artifact_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof name, "design_%04zu", sample_id);
      const auto dir = std::filesystem::path(config.artifact_dir) / name;
      std::filesystem::create_directories(dir);
      rec.feature_path = (dir / "feature_vectors.csv").string();
      std::ofstream fv(rec.feature_path, std::ios::binary);
      write_feature_vectors_csv(rec.features, fv);
      save_model_file(sized.model, (dir / "model.truss.json").string());
    }
  } catch (const std::exception& e) {
    rec.status = std::string("error: ") + e.what();
  }
  return rec;
}

std::vector<SweepRecord> sweep(const DesignFamily& family, const SampleSet& samples,
                               const PipelineConfig& config) {
  std::vector<SweepRecord> records(samples.samples.size());
  parallel_for(records.size(),
               [&](std::size_t i) { records[i] = evaluate_design(family, samples.samples[i], config, i); });
  return records;
}

void write_sweep_csv(std::span<const SweepRecord> records, std::size_t parameter_count,
                     std::ostream& out) {
  CsvWriter csv(out);
  std::vector<std::string> header{"sample_id"};
  for (std::size_t p = 0; p < parameter_count; ++p) header.push_back("p" + std::to_string(p));
  for (const char* h : {"mass_kg", "mass_per_area", "complexity_radius", "solver_status"}) header.emplace_back(h);
  csv.row(header);
  for (const auto& r : records) {
    std::vector<std::string> row{std::to_string(r.sample_id)};
    for (std::size_t p = 0; p < parameter_count; ++p)
      row.push_back(p < r.parameters.size() ? format_double(r.parameters[p]) : "");
    const bool ok = r.status.rfind("error", 0) != 0;
    row.push_back(ok ? format_double(r.mass) : "");
    row.push_back(ok && r.mass_per_area ? format_double(*r.mass_per_area) : "");
    row.push_back(ok ? format_double(r.complexity_radius) : "");
    row.push_back(r.status);
    csv.row(row);
  }
}

}  // namespace harmonode
