#include "harmonode/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ios>
#include <iostream>
#include <sstream>

#include "harmonode/analysis.hpp"
#include "harmonode/csv.hpp"
#include "harmonode/export.hpp"
#include "harmonode/fea.hpp"
#include "harmonode/harmonics.hpp"
#include "harmonode/model.hpp"
#include "harmonode/svg.hpp"

namespace harmonode::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path out_path(const RunConfig& c, const std::string& name) { return fs::path(c.out_dir) / name; }

void ensure_out_dir(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec || !fs::is_directory(c.out_dir)) throw UsageError("cannot create output directory " + c.out_dir);
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot write " + path.string());
  body(f);
  if (!f) throw std::ios_base::failure("write failed: " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, [&](std::ostream& o) { o << text; });
}

// One table for several cases: header once, then each case's rows.
void write_cases(const fs::path& path, const TrussModel& model, const std::vector<AnalysisResult>& results,
                 void (*writer)(const TrussModel&, const AnalysisResult&, std::ostream&)) {
  write_file(path, [&](std::ostream& o) {
    for (std::size_t i = 0; i < results.size(); ++i) {
      std::ostringstream part;
      writer(model, results[i], part);
      const std::string s = part.str();
      o << (i == 0 ? s : s.substr(s.find('\n') + 1));
    }
  });
}

const std::string& single_input(const RunConfig& c) {
  if (c.inputs.size() != 1) throw UsageError(c.subcommand + ": expected exactly one input path");
  if (!fs::exists(c.inputs.front())) throw UsageError("no such file: " + c.inputs.front());
  return c.inputs.front();
}

TrussModel load(const std::string& path, std::ostream& err) {
  auto [model, warnings] = load_model_file(path);
  for (const auto& w : warnings) err << "warning: " << path << ": " << w << '\n';
  return model;
}

std::vector<std::string> selected_cases(const RunConfig& c, const std::vector<std::string>& available) {
  if (!c.load_case) return available;
  if (std::find(available.begin(), available.end(), *c.load_case) == available.end())
    throw UsageError("unknown load case '" + *c.load_case + "'");
  return {*c.load_case};
}

bool is_csv(const std::string& path) {
  auto ext = fs::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return ext == ".csv";
}

// Feature vectors grouped per load case, each list in node order.
struct FeatureInput {
  std::vector<std::string> cases;
  std::vector<std::vector<FeatureVector>> per_case;
};

FeatureInput features_from_model(const RunConfig& c, const TrussModel& model) {
  FeatureInput in;
  in.cases = selected_cases(c, model.load_cases());
  for (const auto& lc : in.cases)
    in.per_case.push_back(model_feature_vectors(model, solve(model, lc), c.demands, c.descriptor));
  return in;
}

FeatureInput load_features(const RunConfig& c, std::ostream& err) {
  const std::string& path = single_input(c);
  if (!is_csv(path)) return features_from_model(c, load(path, err));
  FeatureInput in;
  for (auto& v : read_feature_vectors_csv(path)) {
    auto it = std::find(in.cases.begin(), in.cases.end(), v.load_case);
    if (it == in.cases.end()) {
      in.cases.push_back(v.load_case);
      in.per_case.emplace_back();
      it = in.cases.end() - 1;
    }
    in.per_case[static_cast<std::size_t>(it - in.cases.begin())].push_back(std::move(v));
  }
  if (in.cases.empty()) throw std::runtime_error(path + ": no feature vectors");
  if (c.load_case) {
    const auto sel = selected_cases(c, in.cases);
    const auto idx = static_cast<std::size_t>(std::find(in.cases.begin(), in.cases.end(), sel.front()) - in.cases.begin());
    in = FeatureInput{{in.cases[idx]}, {in.per_case[idx]}};
  }
  return in;
}

// One point per node: the feature vector, or all cases concatenated.
struct NodePoints {
  std::vector<NodeId> ids;
  Eigen::MatrixXd rows;
  std::vector<std::string> labels;  // per column
  DistanceMatrix distances;
};

NodePoints node_points(const FeatureInput& in) {
  NodePoints p;
  if (in.per_case.size() == 1) {
    const auto& fvs = in.per_case.front();
    p.rows = stack(fvs);
    for (const auto& v : fvs) p.ids.push_back(v.node);
    for (Eigen::Index l = 0; l < p.rows.cols(); ++l) p.labels.push_back("fv_" + std::to_string(l));
    p.distances = distance_matrix(fvs);
    return p;
  }
  const auto matrices = assemble_feature_matrices(in.per_case);
  const auto width = matrices.front().rows.front().size();
  p.rows.resize(static_cast<Eigen::Index>(matrices.size()), static_cast<Eigen::Index>(width * in.cases.size()));
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    p.ids.push_back(matrices[i].node);
    Eigen::Index col = 0;
    for (const auto& row : matrices[i].rows)
      for (double v : row) p.rows(static_cast<Eigen::Index>(i), col++) = v;
  }
  for (const auto& lc : in.cases)
    for (std::size_t l = 0; l < width; ++l) p.labels.push_back(lc + ":fv_" + std::to_string(l));
  p.distances = distance_matrix(matrices);
  return p;
}

std::vector<std::string> id_labels(const std::vector<NodeId>& ids) {
  std::vector<std::string> out;
  for (NodeId id : ids) out.push_back("node " + std::to_string(id));
  return out;
}

// 2D layout for plots: classical MDS when possible, else the first columns.
Eigen::MatrixXd plane_layout(const NodePoints& p) {
  if (p.distances.size() >= 3 && p.distances.values.maxCoeff() > 0.0)
    return classical_mds(p.distances, 2).coordinates;
  Eigen::MatrixXd xy = Eigen::MatrixXd::Zero(p.rows.rows(), 2);
  for (Eigen::Index c = 0; c < std::min<Eigen::Index>(2, p.rows.cols()); ++c) xy.col(c) = p.rows.col(c);
  return xy;
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw SchemaError(key, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw SchemaError(key, "expected an integer");
  return j.get<int>();
}

}  // namespace

DesignFamily parse_family(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!j.is_object()) throw SchemaError("$", "expected an object");
  DesignFamily f = default_family();
  GridTrussParams& p = f.base;
  bool bounds_given = false;
  for (const auto& [key, v] : j.items()) {
    const std::string path = "$." + key;
    if (key == "name") {
      if (!v.is_string()) throw SchemaError(path, "expected a string");
      p.name = v.get<std::string>();
    } else if (key == "nx") p.nx = get_int(v, path);
    else if (key == "ny") p.ny = get_int(v, path);
    else if (key == "bay") p.bay = get_number(v, path);
    else if (key == "depth") p.depth = get_number(v, path);
    else if (key == "area") p.area = get_number(v, path);
    else if (key == "youngs_modulus") p.youngs_modulus = get_number(v, path);
    else if (key == "enclosure_area") p.enclosure_area = get_number(v, path);
    else if (key == "load_case") {
      if (!v.is_string()) throw SchemaError(path, "expected a string");
      p.load_case = v.get<std::string>();
    } else if (key == "load_per_top_node") {
      if (!v.is_array() || v.size() != 3) throw SchemaError(path, "expected [fx, fy, fz]");
      for (int a = 0; a < 3; ++a) p.load_per_top_node[a] = get_number(v[static_cast<std::size_t>(a)], path);
    } else if (key == "supports") {
      if (!v.is_array() || v.empty()) throw SchemaError(path, "expected a non-empty array of node ids");
      p.supports.clear();
      for (const auto& s : v) p.supports.push_back(get_int(s, path));
    } else if (key == "control_rows") f.control_rows = get_int(v, path);
    else if (key == "control_cols") f.control_cols = get_int(v, path);
    else if (key == "bounds") {
      if (!v.is_array() || v.empty()) throw SchemaError(path, "expected an array of [lo, hi]");
      f.bounds.clear();
      for (const auto& b : v) {
        if (!b.is_array() || b.size() != 2) throw SchemaError(path, "expected [lo, hi]");
        f.bounds.emplace_back(get_number(b[0], path), get_number(b[1], path));
      }
      bounds_given = true;
    } else {
      throw SchemaError(path, "unknown key");
    }
  }
  if (f.control_rows < 1 || f.control_cols < 1) throw SchemaError("$", "control grid needs at least one row and column");
  const auto count = static_cast<std::size_t>(f.parameter_count());
  if (f.bounds.size() == 1 && count > 1) f.bounds.assign(count, f.bounds.front());
  if (!bounds_given && f.bounds.size() != count) f.bounds.assign(count, {-0.5, 1.5});
  if (f.bounds.size() != count)
    throw SchemaError("$.bounds", "expected " + std::to_string(count) + " bounds, got " + std::to_string(f.bounds.size()));
  for (const auto& [lo, hi] : f.bounds)
    if (!(lo < hi)) throw SchemaError("$.bounds", "each bound needs lo < hi");
  try {
    generate_grid_truss(f.instantiate(std::vector<double>(count, 0.0)));
  } catch (const std::invalid_argument& e) {
    throw SchemaError("$", e.what());
  }
  return f;
}

DesignFamily load_family(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_family(buf.str());
}

void check(const RunConfig& c) {
  if (!(c.descriptor.delta > 0.0)) throw UsageError("--delta must be positive");
  if (c.descriptor.l_max < 0) throw UsageError("--lmax must be >= 0");
  if (!(c.descriptor.oversample >= 1.0)) throw UsageError("--oversample must be >= 1");
  if (c.k < 1) throw UsageError("--k must be >= 1");
  if (c.dimension < 1) throw UsageError("--dim must be >= 1");
  if (c.n_samples < 1) throw UsageError("--n must be >= 1");
}

int cmd_analyze(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const TrussModel model = load(single_input(c), err);
  const auto cases = selected_cases(c, model.load_cases());
  if (cases.empty()) throw SolverError("model has no loads");
  std::vector<AnalysisResult> results;
  for (const auto& lc : cases) results.push_back(solve(model, lc));
  ensure_out_dir(c);
  write_cases(out_path(c, "displacements.csv"), model, results, write_displacements_csv);
  write_cases(out_path(c, "forces.csv"), model, results, write_forces_csv);
  write_cases(out_path(c, "reactions.csv"), model, results, write_reactions_csv);
  for (const auto& r : results)
    out << "case " << r.load_case << ": residual " << format_double(r.residual_norm) << " of applied "
        << format_double(r.applied_norm) << '\n';
  return kOk;
}

int cmd_descriptors(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const TrussModel model = load(single_input(c), err);
  const auto cases = selected_cases(c, model.load_cases());
  if (cases.empty()) throw SolverError("model has no loads");
  ensure_out_dir(c);
  std::vector<FeatureVector> all;
  const GridPtr grid = descriptor_grid(c.descriptor);
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const AnalysisResult result = solve(model, cases[ci]);
    auto fvs = model_feature_vectors(model, result, c.demands, c.descriptor);
    all.insert(all.end(), fvs.begin(), fvs.end());
    if (!c.expansions) continue;
    const fs::path dir = out_path(c, "expansions");
    fs::create_directories(dir);
    for (const auto& demand : extract_demands(model, result, c.demands)) {
      const ForceFunctionSpec spec{demand, c.descriptor.delta, c.descriptor.kernel, c.descriptor.amplitude};
      const auto expansion = expand(build_force_function(spec, grid), c.descriptor.l_max);
      write_file(dir / ("node_" + std::to_string(demand.node) + "_case" + std::to_string(ci) + ".csv"),
                 [&](std::ostream& o) { write_expansion_csv(expansion, o); });
    }
  }
  write_file(out_path(c, "feature_vectors.csv"), [&](std::ostream& o) { write_feature_vectors_csv(all, o); });
  out << all.size() << " feature vectors, " << c.descriptor.l_max + 1 << " components each\n";
  return kOk;
}

int cmd_distances(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const NodePoints p = node_points(load_features(c, err));
  ensure_out_dir(c);
  write_file(out_path(c, "distances.csv"), [&](std::ostream& o) { write_distance_matrix_csv(p.distances, o); });
  write_text(out_path(c, "distances.svg"), svg::heatmap(p.distances, "Distance matrix"));
  out << p.distances.size() << " nodes, max distance " << format_double(p.distances.values.maxCoeff()) << '\n';
  return kOk;
}

int cmd_mds(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const NodePoints p = node_points(load_features(c, err));
  const Embedding e = classical_mds(p.distances, c.dimension);
  ensure_out_dir(c);
  write_file(out_path(c, "embedding.csv"), [&](std::ostream& o) { write_embedding_csv(e, o); });
  svg::ScatterSpec spec{"MDS embedding", "x0", c.dimension > 1 ? "x1" : "", id_labels(e.ids), {}, {}, true};
  Eigen::MatrixXd xy = Eigen::MatrixXd::Zero(e.coordinates.rows(), 2);
  xy.leftCols(std::min(2, c.dimension)) = e.coordinates.leftCols(std::min(2, c.dimension));
  if (c.circle) {
    const BoundingSphere ball = min_enclosing_ball(xy);
    spec.circle = svg::Circle{ball.center.head<2>(), ball.radius};
    out << "plane radius " << format_double(ball.radius) << ", full radius "
        << format_double(min_enclosing_ball(p.rows).radius) << '\n';
  }
  write_text(out_path(c, "embedding.svg"), svg::scatter(xy, spec));
  out << "stress " << format_double(e.stress) << '\n';
  if (e.negative_eigenvalues_clamped)
    err << "warning: negative eigenvalues clamped (ratio " << format_double(e.negative_ratio) << ")\n";
  return kOk;
}

int cmd_cluster(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const NodePoints p = node_points(load_features(c, err));
  KMeansOptions opts;
  opts.k = c.k;
  opts.seed = c.seed;
  const ClusterAssignment a = kmeans(p.rows, p.ids, opts);
  ensure_out_dir(c);
  write_file(out_path(c, "clusters.csv"), [&](std::ostream& o) { write_clusters_csv(a, o); });
  write_file(out_path(c, "cluster_summary.csv"), [&](std::ostream& o) { write_cluster_summary_csv(a, o); });
  svg::ScatterSpec spec{"Clusters (by increasing radius)", "x0", "x1", id_labels(p.ids), a.labels, {}, true};
  write_text(out_path(c, "clusters.svg"), svg::scatter(plane_layout(p), spec));
  write_text(out_path(c, "parallel_coordinates.svg"),
             svg::parallel_coordinates(p.rows, a.labels, p.labels, "Feature vectors by cluster"));
  for (int k = 0; k < a.k; ++k)
    out << "cluster " << k << ": " << a.members[static_cast<std::size_t>(k)].size() << " nodes, radius "
        << format_double(a.spheres[static_cast<std::size_t>(k)].radius) << '\n';
  return kOk;
}

int cmd_complexity(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const FeatureInput in = load_features(c, err);
  const NodePoints p = node_points(in);
  const BoundingSphere ball = min_enclosing_ball(p.rows);
  ensure_out_dir(c);
  write_file(out_path(c, "summary.csv"), [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"input", "load_cases", "nodes", "dimension", "complexity_radius", "converged"});
    std::string cases;
    for (const auto& lc : in.cases) cases += (cases.empty() ? "" : ";") + lc;
    csv.row({fs::path(c.inputs.front()).filename().string(), cases, std::to_string(p.rows.rows()),
             std::to_string(p.rows.cols()), format_double(ball.radius), ball.converged ? "true" : "false"});
  });
  out << "complexity_radius " << format_double(ball.radius) << '\n';
  return kOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.inputs.empty()) throw UsageError("sweep takes no positional inputs; use --family");
  if (!c.family_path.empty() && !fs::exists(c.family_path)) throw UsageError("no such file: " + c.family_path);
  const DesignFamily family = c.family_path.empty() ? default_family() : load_family(c.family_path);
  const SampleSet samples = latin_hypercube(c.n_samples, family.bounds, c.seed);
  ensure_out_dir(c);
  PipelineConfig config;
  config.demands = c.demands;
  config.descriptor = c.descriptor;
  if (c.artifacts) config.artifact_dir = out_path(c, "designs").string();
  const auto records = sweep(family, samples, config);
  const auto n_params = static_cast<std::size_t>(family.parameter_count());
  write_file(out_path(c, "sweep.csv"), [&](std::ostream& o) { write_sweep_csv(records, n_params, o); });

  std::vector<std::size_t> plotted;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].status.rfind("error", 0) != 0) plotted.push_back(i);
  Eigen::MatrixXd xy(static_cast<Eigen::Index>(plotted.size()), 2);
  svg::ScatterSpec spec{"Material quantity vs complexity", "mass per area (kg/m2)", "complexity radius", {}, {}, {}, false};
  for (std::size_t r = 0; r < plotted.size(); ++r) {
    const auto& rec = records[plotted[r]];
    xy(static_cast<Eigen::Index>(r), 0) = rec.mass_per_area.value_or(rec.mass);
    xy(static_cast<Eigen::Index>(r), 1) = rec.complexity_radius;
    spec.point_labels.push_back("sample " + std::to_string(rec.sample_id));
  }
  write_text(out_path(c, "sweep.svg"), svg::scatter(xy, spec));

  std::size_t failed = 0;
  for (const auto& r : records) {
    if (r.status == "ok") continue;
    err << "sample " << r.sample_id << ": " << r.status << '\n';
    failed += r.status.rfind("error", 0) == 0;
  }
  out << records.size() << " designs, " << failed << " failed\n";
  return kOk;
}

int cmd_generate(const RunConfig& c, std::ostream& out, std::ostream&) {
  if (!c.family_path.empty() && !fs::exists(c.family_path)) throw UsageError("no such file: " + c.family_path);
  const DesignFamily family = c.family_path.empty() ? default_family() : load_family(c.family_path);
  std::vector<double> params = c.parameters;
  if (params.empty()) params.assign(static_cast<std::size_t>(family.parameter_count()), 0.0);
  if (params.size() != static_cast<std::size_t>(family.parameter_count()))
    throw UsageError("--params expects " + std::to_string(family.parameter_count()) + " values");
  const TrussModel model = generate_grid_truss(family.instantiate(params));
  ensure_out_dir(c);
  save_model_file(model, out_path(c, "model.truss.json").string());
  out << model.nodes.size() << " nodes, " << model.elements.size() << " elements\n";
  return kOk;
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  static const std::vector<std::pair<std::string, int (*)(const RunConfig&, std::ostream&, std::ostream&)>> table{
      {"analyze", cmd_analyze},       {"descriptors", cmd_descriptors}, {"distances", cmd_distances},
      {"mds", cmd_mds},               {"cluster", cmd_cluster},         {"complexity", cmd_complexity},
      {"sweep", cmd_sweep},           {"generate", cmd_generate}};
  try {
    check(c);
    for (const auto& [name, fn] : table)
      if (name == c.subcommand) return fn(c, out, err);
    throw UsageError("unknown subcommand '" + c.subcommand + "'");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Truss node force descriptors and design sweeps", "harmonode"};
  app.require_subcommand(1);
  RunConfig c;
  std::string kernel = "geodesic", amplitude = "magnitude";

  auto add_input = [&](CLI::App* s) { s->add_option("input", c.inputs, "Model (.truss.json) or feature CSV")->required(); };
  auto add_out = [&](CLI::App* s) { s->add_option("--out,-o", c.out_dir, "Output directory")->capture_default_str(); };
  auto add_case = [&](CLI::App* s) { s->add_option("--load-case", c.load_case, "Use only this load case"); };
  auto add_descriptor = [&](CLI::App* s) {
    s->add_option("--delta", c.descriptor.delta, "Gaussian sharpness")->capture_default_str();
    s->add_option("--lmax", c.descriptor.l_max, "Highest harmonic degree")->capture_default_str();
    s->add_option("--kernel", kernel, "Bump shape")->check(CLI::IsMember({"coordinate", "geodesic"}))->capture_default_str();
    s->add_option("--amplitude", amplitude, "Bump height")->check(CLI::IsMember({"magnitude", "signed"}))->capture_default_str();
    s->add_option("--oversample", c.descriptor.oversample, "Quadrature oversampling factor")->capture_default_str();
    s->add_flag("--include-loads", c.demands.include_applied_loads, "Add applied loads to each node's demand");
    s->add_flag("--include-reactions", c.demands.include_reactions, "Add support reactions to each node's demand");
  };

  auto* analyze = app.add_subcommand("analyze", "Solve a model: displacements, forces, reactions");
  add_input(analyze), add_out(analyze), add_case(analyze);

  auto* descriptors = app.add_subcommand("descriptors", "Per-node feature vectors");
  add_input(descriptors), add_out(descriptors), add_case(descriptors), add_descriptor(descriptors);
  descriptors->add_flag("--expansions", c.expansions, "Also write per-node coefficient files");

  auto* distances = app.add_subcommand("distances", "Distance matrix and heatmap");
  add_input(distances), add_out(distances), add_case(distances), add_descriptor(distances);

  auto* mds = app.add_subcommand("mds", "Classical MDS embedding and scatter");
  add_input(mds), add_out(mds), add_case(mds), add_descriptor(mds);
  mds->add_option("--dim", c.dimension, "Embedding dimension")->capture_default_str();
  mds->add_flag("!--no-circle", c.circle, "Omit the bounding circle overlay");

  auto* cluster = app.add_subcommand("cluster", "k-means clustering of nodes");
  add_input(cluster), add_out(cluster), add_case(cluster), add_descriptor(cluster);
  cluster->add_option("--k", c.k, "Number of clusters")->capture_default_str();
  cluster->add_option("--seed", c.seed, "Random seed")->capture_default_str();

  auto* complexity = app.add_subcommand("complexity", "Minimal bounding hypersphere radius");
  add_input(complexity), add_out(complexity), add_case(complexity), add_descriptor(complexity);

  auto* sweep_cmd = app.add_subcommand("sweep", "Latin hypercube sweep of a design family");
  add_out(sweep_cmd), add_descriptor(sweep_cmd);
  sweep_cmd->add_option("--family", c.family_path, "Family params JSON (default: built-in roof family)");
  sweep_cmd->add_option("--n", c.n_samples, "Number of samples")->capture_default_str();
  sweep_cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  sweep_cmd->add_flag("!--no-artifacts", c.artifacts, "Skip per-design files");

  auto* generate = app.add_subcommand("generate", "Write one family member as a model file");
  add_out(generate);
  generate->add_option("--family", c.family_path, "Family params JSON");
  generate->add_option("--params", c.parameters, "Free parameter values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  c.descriptor.kernel = parse_kernel(kernel);
  c.descriptor.amplitude = parse_amplitude(amplitude);
  return dispatch(c, out, err);
}

}  // namespace harmonode::cli
