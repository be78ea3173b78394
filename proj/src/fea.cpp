#include "harmonode/fea.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "harmonode/parallel.hpp"

namespace harmonode {

namespace {

constexpr double kPivotTolerance = 1e-12;
constexpr const char* kAxisNames[3] = {"ux", "uy", "uz"};

struct DofMap {
  std::vector<int> free_index;  // per global dof, -1 when restrained
  std::vector<int> global_of_free;
};

DofMap map_dofs(const TrussModel& model, const std::unordered_map<NodeId, std::size_t>& index) {
  DofMap map;
  map.free_index.assign(3 * model.nodes.size(), 0);
  for (const auto& s : model.supports) {
    const std::size_t n = index.at(s.node);
    for (int k = 0; k < 3; ++k)
      if (s.fixed[k]) map.free_index[3 * n + k] = -1;
  }
  for (std::size_t g = 0; g < map.free_index.size(); ++g) {
    if (map.free_index[g] == 0) {
      map.free_index[g] = static_cast<int>(map.global_of_free.size());
      map.global_of_free.push_back(static_cast<int>(g));
    }
  }
  return map;
}

// In-place Cholesky of the lower triangle. Throws on a pivot below
// kPivotTolerance times the largest diagonal entry.
void factorize(Eigen::MatrixXd& a, const std::vector<int>& global_of_free,
               const TrussModel& model) {
  const Eigen::Index n = a.rows();
  const double max_diag = n > 0 ? a.diagonal().maxCoeff() : 0.0;
  const double threshold = kPivotTolerance * max_diag;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double pivot = a(k, k);
    if (!(pivot > threshold)) {
      const int g = global_of_free[static_cast<std::size_t>(k)];
      throw SolverError("singular stiffness matrix: near-zero pivot at node " +
                        std::to_string(model.nodes[static_cast<std::size_t>(g / 3)].id) + " " +
                        kAxisNames[g % 3] + " (pivot " + std::to_string(pivot) + ")");
    }
    const double l = std::sqrt(pivot);
    a(k, k) = l;
    const Eigen::Index m = n - k - 1;
    if (m == 0) break;
    a.col(k).tail(m) /= l;
    a.bottomRightCorner(m, m).selfadjointView<Eigen::Lower>().rankUpdate(a.col(k).tail(m), -1.0);
  }
}

Eigen::VectorXd cholesky_solve(const Eigen::MatrixXd& l, const Eigen::VectorXd& b) {
  Eigen::VectorXd y = l.triangularView<Eigen::Lower>().solve(b);
  return l.triangularView<Eigen::Lower>().transpose().solve(y);
}

}  // namespace

std::string_view to_string(Sense sense) {
  return sense == Sense::tension ? "tension" : "compression";
}

std::vector<Point3> nodal_loads(const TrussModel& model, std::string_view load_case) {
  const auto index = model.node_index();
  std::vector<Point3> f(model.nodes.size(), Point3::Zero());
  for (const auto& l : model.loads)
    if (l.load_case == load_case) f[index.at(l.node)] += l.force;
  return f;
}

AnalysisResult solve(const TrussModel& model, std::string_view load_case) {
  if (std::none_of(model.loads.begin(), model.loads.end(),
                   [&](const PointLoad& l) { return l.load_case == load_case; }))
    throw SolverError("no loads in load case '" + std::string(load_case) + "'");

  const auto index = model.node_index();
  const DofMap dofs = map_dofs(model, index);
  const auto nf = static_cast<Eigen::Index>(dofs.global_of_free.size());
  const std::vector<Point3> loads = nodal_loads(model, load_case);

  struct ElementGeometry {
    std::size_t a, b;
    Point3 axis;  // unit, start -> end
    double stiffness;  // EA/L
  };
  std::vector<ElementGeometry> geometry;
  geometry.reserve(model.elements.size());
  for (const auto& e : model.elements) {
    const std::size_t a = index.at(e.start), b = index.at(e.end);
    const Point3 d = model.nodes[b].position - model.nodes[a].position;
    const double length = d.norm();
    geometry.push_back({a, b, d / length, e.area * e.youngs_modulus / length});
  }

  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nf, nf);
  for (const auto& g : geometry) {
    const Eigen::Matrix3d kk = g.stiffness * g.axis * g.axis.transpose();
    const std::size_t ends[2] = {g.a, g.b};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double sign = i == j ? 1.0 : -1.0;
        for (int r = 0; r < 3; ++r) {
          const int fr = dofs.free_index[3 * ends[i] + r];
          if (fr < 0) continue;
          for (int c = 0; c < 3; ++c) {
            const int fc = dofs.free_index[3 * ends[j] + c];
            if (fc < 0) continue;
            k(fr, fc) += sign * kk(r, c);
          }
        }
      }
    }
  }

  Eigen::VectorXd f(nf);
  for (Eigen::Index i = 0; i < nf; ++i) {
    const int g = dofs.global_of_free[static_cast<std::size_t>(i)];
    f[i] = loads[static_cast<std::size_t>(g / 3)][g % 3];
  }

  Eigen::VectorXd u_free = Eigen::VectorXd::Zero(nf);
  if (nf > 0) {
    Eigen::MatrixXd factor = k;
    factorize(factor, dofs.global_of_free, model);
    u_free = cholesky_solve(factor, f);
    // One step of iterative refinement.
    const Eigen::VectorXd r = f - k.selfadjointView<Eigen::Lower>() * u_free;
    u_free += cholesky_solve(factor, r);
  }

  AnalysisResult result;
  result.load_case = std::string(load_case);
  result.displacements.assign(model.nodes.size(), Point3::Zero());
  for (Eigen::Index i = 0; i < nf; ++i) {
    const int g = dofs.global_of_free[static_cast<std::size_t>(i)];
    result.displacements[static_cast<std::size_t>(g / 3)][g % 3] = u_free[i];
  }

  // Net force each node receives from the members, in global axes.
  std::vector<Point3> internal(model.nodes.size(), Point3::Zero());
  result.axial_forces.reserve(geometry.size());
  for (const auto& g : geometry) {
    const double n =
        g.stiffness * (result.displacements[g.b] - result.displacements[g.a]).dot(g.axis);
    result.axial_forces.push_back(n);
    internal[g.a] += n * g.axis;
    internal[g.b] -= n * g.axis;
  }

  double residual2 = 0.0, applied2 = 0.0;
  for (std::size_t i = 0; i < model.nodes.size(); ++i) {
    applied2 += loads[i].squaredNorm();
    const Point3 imbalance = internal[i] + loads[i];
    for (int c = 0; c < 3; ++c)
      if (dofs.free_index[3 * i + c] >= 0) residual2 += imbalance[c] * imbalance[c];
  }
  result.residual_norm = std::sqrt(residual2);
  result.applied_norm = std::sqrt(applied2);

  result.reactions.reserve(model.supports.size());
  std::vector<bool> reported(model.nodes.size(), false);
  for (const auto& s : model.supports) {
    const std::size_t n = index.at(s.node);
    Point3 r = Point3::Zero();
    // A node listed in several supports reports its reaction once.
    if (!reported[n]) {
      reported[n] = true;
      const Point3 imbalance = internal[n] + loads[n];
      for (int c = 0; c < 3; ++c)
        if (dofs.free_index[3 * n + c] < 0) r[c] = -imbalance[c];
    }
    result.reactions.push_back(r);
  }
  return result;
}

std::vector<AnalysisResult> solve_all(const TrussModel& model) {
  const auto cases = model.load_cases();
  std::vector<AnalysisResult> results(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) { results[i] = solve(model, cases[i]); });
  return results;
}

std::vector<NodalDemand> extract_demands(const TrussModel& model, const AnalysisResult& result,
                                         const DemandOptions& options) {
  const auto index = model.node_index();
  std::vector<NodalDemand> demands(model.nodes.size());
  for (std::size_t i = 0; i < model.nodes.size(); ++i) {
    demands[i].node = model.nodes[i].id;
    demands[i].load_case = result.load_case;
  }

  for (std::size_t e = 0; e < model.elements.size(); ++e) {
    const auto& el = model.elements[e];
    const std::size_t a = index.at(el.start), b = index.at(el.end);
    const double n = result.axial_forces[e];
    const Sense sense = n < 0.0 ? Sense::compression : Sense::tension;
    const Point3 axis = (model.nodes[b].position - model.nodes[a].position).normalized();
    demands[a].entries.push_back({axis, std::abs(n), sense, DemandSource::member, el.id});
    demands[b].entries.push_back({-axis, std::abs(n), sense, DemandSource::member, el.id});
  }

  auto add_vector = [&](std::size_t n, const Point3& v, DemandSource source) {
    const double magnitude = v.norm();
    if (!(magnitude > 0.0)) return;
    demands[n].entries.push_back({v / magnitude, magnitude, Sense::tension, source,
                                  model.nodes[n].id});
  };
  if (options.include_applied_loads) {
    const auto loads = nodal_loads(model, result.load_case);
    for (std::size_t n = 0; n < loads.size(); ++n) add_vector(n, loads[n], DemandSource::applied_load);
  }
  if (options.include_reactions) {
    for (std::size_t s = 0; s < model.supports.size(); ++s)
      add_vector(index.at(model.supports[s].node), result.reactions[s], DemandSource::reaction);
  }

  std::stable_sort(demands.begin(), demands.end(),
                   [](const NodalDemand& x, const NodalDemand& y) { return x.node < y.node; });
  return demands;
}

double total_mass(const TrussModel& model, double density) {
  const auto index = model.node_index();
  double mass = 0.0;
  for (const auto& e : model.elements) {
    const double length =
        (model.nodes[index.at(e.end)].position - model.nodes[index.at(e.start)].position).norm();
    mass += density * e.area * length;
  }
  return mass;
}

SizingResult size_members(const TrussModel& model, const SizingParams& params) {
  if (!(params.yield_stress > 0.0) || !(params.safety_factor > 0.0) || !(params.min_area > 0.0) ||
      !(params.density >= 0.0) || params.max_iter < 1 || !(params.tol >= 0.0))
    throw std::invalid_argument("size_members: invalid sizing parameters");

  const std::vector<std::string> cases =
      params.load_cases.empty() ? model.load_cases() : params.load_cases;
  if (cases.empty()) throw SolverError("size_members: model has no load cases");

  SizingResult out;
  out.model = model;
  const double allowable = params.yield_stress / params.safety_factor;
  for (int iter = 1; iter <= params.max_iter; ++iter) {
    std::vector<double> envelope(out.model.elements.size(), 0.0);
    for (const auto& c : cases) {
      const AnalysisResult r = solve(out.model, c);
      for (std::size_t e = 0; e < envelope.size(); ++e)
        envelope[e] = std::max(envelope[e], std::abs(r.axial_forces[e]));
    }
    double change = 0.0;
    for (std::size_t e = 0; e < envelope.size(); ++e) {
      auto& area = out.model.elements[e].area;
      const double sized = std::max(params.min_area, envelope[e] / allowable);
      change = std::max(change, std::abs(sized - area) / area);
      area = sized;
    }
    out.iterations = iter;
    if (change <= params.tol) {
      out.converged = true;
      break;
    }
  }
  out.mass = total_mass(out.model, params.density);
  if (model.enclosure_area) out.mass_per_area = out.mass / *model.enclosure_area;
  return out;
}

}  // namespace harmonode
