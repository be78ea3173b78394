#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "harmonode/analysis.hpp"
#include "harmonode/descriptor.hpp"
#include "harmonode/fea.hpp"
#include "harmonode/generator.hpp"
#include "harmonode/harmonics.hpp"
#include "harmonode/model.hpp"

namespace py = pybind11;
using namespace harmonode;

namespace {

Eigen::MatrixXd points_of(const std::vector<Point3>& v) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(v.size()), 3);
  for (std::size_t i = 0; i < v.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = v[i].transpose();
  return out;
}

DescriptorOptions descriptor_options(double delta, int l_max, const std::string& kernel, const std::string& amplitude,
                                     double oversample) {
  DescriptorOptions o;
  o.delta = delta;
  o.l_max = l_max;
  o.kernel = parse_kernel(kernel);
  o.amplitude = parse_amplitude(amplitude);
  o.oversample = oversample;
  return o;
}

// Feature vectors as (node ids, load cases, matrix).
py::tuple feature_table(const std::vector<FeatureVector>& fvs) {
  std::vector<NodeId> ids;
  std::vector<std::string> cases;
  for (const auto& f : fvs) {
    ids.push_back(f.node);
    cases.push_back(f.load_case);
  }
  return py::make_tuple(ids, cases, stack(fvs));
}

std::vector<FeatureVector> rows_to_features(const Eigen::MatrixXd& m) {
  std::vector<FeatureVector> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto& f = out[static_cast<std::size_t>(i)];
    f.node = static_cast<NodeId>(i);
    for (Eigen::Index j = 0; j < m.cols(); ++j) f.components.push_back(m(i, j));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_harmonode, m) {
  m.doc() = "Spherical-harmonic descriptors of truss nodal force demands";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<TrussModel>(m, "TrussModel")
      .def_readonly("name", &TrussModel::name)
      .def_readonly("enclosure_area", &TrussModel::enclosure_area)
      .def_property_readonly("node_ids",
                             [](const TrussModel& t) {
                               std::vector<NodeId> ids;
                               for (const auto& n : t.nodes) ids.push_back(n.id);
                               return ids;
                             })
      .def_property_readonly("positions",
                             [](const TrussModel& t) {
                               std::vector<Point3> p;
                               for (const auto& n : t.nodes) p.push_back(n.position);
                               return points_of(p);
                             })
      .def_property_readonly("areas",
                             [](const TrussModel& t) {
                               std::vector<double> a;
                               for (const auto& e : t.elements) a.push_back(e.area);
                               return a;
                             })
      .def_property_readonly("element_count", [](const TrussModel& t) { return t.elements.size(); })
      .def("load_cases", &TrussModel::load_cases)
      .def("to_json", [](const TrussModel& t) { return write_model(t); })
      .def("__repr__", [](const TrussModel& t) {
        return "<TrussModel '" + t.name + "' nodes=" + std::to_string(t.nodes.size()) +
               " elements=" + std::to_string(t.elements.size()) + ">";
      });

  m.def("read_model", [](const std::string& json) { return read_model(json).model; }, py::arg("json"),
        "Parse and validate a .truss.json document.");
  m.def("load_model", [](const std::string& path) { return load_model_file(path).model; }, py::arg("path"));
  m.def("validate", [](const TrussModel& t) {
    std::vector<std::string> out;
    for (const auto& v : validate(t)) out.push_back(v.path + ": " + v.message);
    return out;
  });

  m.def(
      "solve",
      [](const TrussModel& t, const std::string& load_case) {
        const AnalysisResult r = solve(t, load_case);
        py::dict d;
        d["load_case"] = r.load_case;
        d["displacements"] = points_of(r.displacements);
        d["axial_forces"] = r.axial_forces;
        d["reactions"] = points_of(r.reactions);
        d["residual_norm"] = r.residual_norm;
        d["applied_norm"] = r.applied_norm;
        return d;
      },
      py::arg("model"), py::arg("load_case") = std::string(kDefaultLoadCase));

  m.def(
      "size_members",
      [](const TrussModel& t, double yield_stress, double safety_factor, double min_area, double density) {
        SizingParams p;
        p.yield_stress = yield_stress;
        p.safety_factor = safety_factor;
        p.min_area = min_area;
        p.density = density;
        const SizingResult r = size_members(t, p);
        py::dict d;
        d["model"] = r.model;
        d["mass"] = r.mass;
        d["iterations"] = r.iterations;
        d["converged"] = r.converged;
        d["mass_per_area"] = r.mass_per_area;
        return d;
      },
      py::arg("model"), py::arg("yield_stress") = 345e6, py::arg("safety_factor") = 1.67,
      py::arg("min_area") = 400e-6, py::arg("density") = 7850.0);

  m.def(
      "feature_vectors",
      [](const TrussModel& t, const std::string& load_case, double delta, int l_max, const std::string& kernel,
         const std::string& amplitude, double oversample, bool include_loads, bool include_reactions) {
        py::gil_scoped_release release;
        const auto fvs = model_feature_vectors(t, solve(t, load_case), {include_loads, include_reactions},
                                               descriptor_options(delta, l_max, kernel, amplitude, oversample));
        py::gil_scoped_acquire acquire;
        return feature_table(fvs);
      },
      py::arg("model"), py::arg("load_case") = std::string(kDefaultLoadCase), py::arg("delta") = kDefaultDelta,
      py::arg("l_max") = kDefaultLmax, py::arg("kernel") = "geodesic", py::arg("amplitude") = "magnitude",
      py::arg("oversample") = kDefaultOversample, py::arg("include_loads") = false,
      py::arg("include_reactions") = false,
      "Solve one load case and return (node_ids, load_cases, features) with one feature row per node.");

  m.def(
      "demand_feature_vector",
      [](const Eigen::MatrixXd& directions, const std::vector<double>& signed_values, double delta, int l_max,
         const std::string& kernel, const std::string& amplitude) {
        if (directions.cols() != 3 || static_cast<std::size_t>(directions.rows()) != signed_values.size())
          throw std::invalid_argument("directions must be n x 3 with one value per row");
        NodalDemand d;
        for (Eigen::Index i = 0; i < directions.rows(); ++i) {
          const double v = signed_values[static_cast<std::size_t>(i)];
          d.entries.push_back({Point3(directions.row(i).transpose()).normalized(), std::abs(v),
                               v < 0 ? Sense::compression : Sense::tension, DemandSource::member,
                               static_cast<int>(i + 1)});
        }
        const DescriptorOptions o = descriptor_options(delta, l_max, kernel, amplitude, kDefaultOversample);
        return feature_vector(d, o, descriptor_grid(o)).components;
      },
      py::arg("directions"), py::arg("values"), py::arg("delta") = kDefaultDelta, py::arg("l_max") = kDefaultLmax,
      py::arg("kernel") = "geodesic", py::arg("amplitude") = "magnitude",
      "Feature vector of a single node from force directions and signed magnitudes (tension positive).");

  m.def("real_sph_harm", &real_sph_harm, py::arg("l"), py::arg("m"), py::arg("theta"), py::arg("phi"));

  m.def(
      "distance_matrix",
      [](const Eigen::MatrixXd& features) { return distance_matrix(rows_to_features(features)).values; },
      py::arg("features"));

  m.def(
      "classical_mds",
      [](const Eigen::MatrixXd& distances, int k) {
        DistanceMatrix d;
        d.values = distances;
        for (Eigen::Index i = 0; i < distances.rows(); ++i) d.ids.push_back(static_cast<NodeId>(i));
        const Embedding e = classical_mds(d, k);
        py::dict out;
        out["coordinates"] = e.coordinates;
        out["eigenvalues"] = e.eigenvalues;
        out["stress"] = e.stress;
        out["negative_eigenvalues_clamped"] = e.negative_eigenvalues_clamped;
        return out;
      },
      py::arg("distances"), py::arg("k") = 2);

  m.def(
      "min_enclosing_ball",
      [](const Eigen::MatrixXd& points, double tol) {
        MinBallOptions o;
        o.tol = tol;
        const BoundingSphere b = min_enclosing_ball(points, o);
        return py::make_tuple(b.center, b.radius);
      },
      py::arg("points"), py::arg("tol") = 1e-7, "Returns (center, radius).");

  m.def(
      "complexity_score", [](const Eigen::MatrixXd& features) { return complexity_score(rows_to_features(features)); },
      py::arg("features"));

  m.def(
      "kmeans",
      [](const Eigen::MatrixXd& points, int k, std::uint64_t seed) {
        std::vector<NodeId> ids(static_cast<std::size_t>(points.rows()));
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<NodeId>(i);
        KMeansOptions o;
        o.k = k;
        o.seed = seed;
        const ClusterAssignment a = kmeans(points, ids, o);
        std::vector<double> radii;
        for (const auto& s : a.spheres) radii.push_back(s.radius);
        py::dict out;
        out["labels"] = a.labels;
        out["centroids"] = a.centroids;
        out["radii"] = radii;
        out["inertia"] = a.inertia;
        return out;
      },
      py::arg("points"), py::arg("k") = kDefaultClusters, py::arg("seed") = 0);

  m.def(
      "generate",
      [](const std::vector<double>& parameters) { return generate_grid_truss(default_family().instantiate(parameters)); },
      py::arg("parameters"), "Instance of the default roof family from its six control heights.");

  m.def(
      "latin_hypercube",
      [](std::size_t n, const std::vector<std::pair<double, double>>& bounds, std::uint64_t seed) {
        return latin_hypercube(n, bounds, seed).samples;
      },
      py::arg("n"), py::arg("bounds"), py::arg("seed") = 0);

  m.def(
      "evaluate_design",
      [](const std::vector<double>& parameters) {
        PipelineConfig c;
        SweepRecord r;
        {
          py::gil_scoped_release release;
          r = evaluate_design(default_family(), parameters, c);
        }
        py::dict out;
        out["mass"] = r.mass;
        out["mass_per_area"] = r.mass_per_area;
        out["complexity_radius"] = r.complexity_radius;
        out["status"] = r.status;
        return out;
      },
      py::arg("parameters"), "Size, solve and score one design of the default roof family.");
}
