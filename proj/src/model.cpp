#include "harmonode/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace harmonode {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr double kMinElementLength = 1e-9;

bool finite(const Point3& p) { return p.allFinite(); }

std::string indexed(std::string_view array, std::size_t i) {
  return std::string(array) + "[" + std::to_string(i) + "]";
}

}  // namespace

std::unordered_map<NodeId, std::size_t> TrussModel::node_index() const {
  std::unordered_map<NodeId, std::size_t> index;
  index.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i].id, i);
  return index;
}

std::vector<std::string> TrussModel::load_cases() const {
  std::vector<std::string> cases;
  for (const auto& load : loads) {
    if (std::find(cases.begin(), cases.end(), load.load_case) == cases.end())
      cases.push_back(load.load_case);
  }
  return cases;
}

double TrussModel::element_length(const TrussElement& e) const {
  const auto index = node_index();
  return (nodes[index.at(e.end)].position - nodes[index.at(e.start)].position).norm();
}

bool operator==(const TrussNode& a, const TrussNode& b) {
  return a.id == b.id && a.position == b.position;
}
bool operator==(const TrussElement& a, const TrussElement& b) {
  return a.id == b.id && a.start == b.start && a.end == b.end && a.area == b.area &&
         a.youngs_modulus == b.youngs_modulus;
}
bool operator==(const Support& a, const Support& b) {
  return a.node == b.node && a.fixed == b.fixed;
}
bool operator==(const PointLoad& a, const PointLoad& b) {
  return a.node == b.node && a.force == b.force && a.load_case == b.load_case;
}
bool operator==(const TrussModel& a, const TrussModel& b) {
  return a.name == b.name && a.enclosure_area == b.enclosure_area && a.nodes == b.nodes &&
         a.elements == b.elements && a.supports == b.supports && a.loads == b.loads;
}

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::node: return "node";
    case EntityKind::element: return "element";
    case EntityKind::support: return "support";
    case EntityKind::load: return "load";
    case EntityKind::model: return "model";
  }
  return "unknown";
}

std::vector<Violation> validate(const TrussModel& model) {
  std::vector<Violation> out;
  auto add = [&](EntityKind kind, int id, std::size_t index, std::string path,
                 std::string message) {
    out.push_back({kind, id, index, std::move(path), std::move(message)});
  };

  std::unordered_map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < model.nodes.size(); ++i) {
    const auto& n = model.nodes[i];
    if (!index.emplace(n.id, i).second)
      add(EntityKind::node, n.id, i, indexed("nodes", i) + ".id",
          "duplicate node id " + std::to_string(n.id));
    if (!finite(n.position))
      add(EntityKind::node, n.id, i, indexed("nodes", i) + ".position",
          "non-finite coordinate");
  }

  std::unordered_set<ElementId> element_ids;
  for (std::size_t i = 0; i < model.elements.size(); ++i) {
    const auto& e = model.elements[i];
    const std::string base = indexed("elements", i);
    if (!element_ids.insert(e.id).second)
      add(EntityKind::element, e.id, i, base + ".id",
          "duplicate element id " + std::to_string(e.id));
    const bool has_start = index.count(e.start) > 0;
    const bool has_end = index.count(e.end) > 0;
    if (!has_start)
      add(EntityKind::element, e.id, i, base + ".start",
          "element " + std::to_string(e.id) + " references missing node " +
              std::to_string(e.start));
    if (!has_end)
      add(EntityKind::element, e.id, i, base + ".end",
          "element " + std::to_string(e.id) + " references missing node " +
              std::to_string(e.end));
    if (e.start == e.end) {
      add(EntityKind::element, e.id, i, base + ".end", "zero-length element");
    } else if (has_start && has_end) {
      const auto& a = model.nodes[index[e.start]].position;
      const auto& b = model.nodes[index[e.end]].position;
      if (finite(a) && finite(b) && (b - a).norm() <= kMinElementLength)
        add(EntityKind::element, e.id, i, base + ".end", "zero-length element");
    }
    if (!(e.area > 0.0) || !std::isfinite(e.area))
      add(EntityKind::element, e.id, i, base + ".area", "area must be positive");
    if (!(e.youngs_modulus > 0.0) || !std::isfinite(e.youngs_modulus))
      add(EntityKind::element, e.id, i, base + ".youngs_modulus",
          "youngs_modulus must be positive");
  }

  for (std::size_t i = 0; i < model.supports.size(); ++i) {
    const auto& s = model.supports[i];
    const std::string base = indexed("supports", i);
    if (!index.count(s.node))
      add(EntityKind::support, s.node, i, base + ".node",
          "support references missing node " + std::to_string(s.node));
    if (!(s.fixed[0] || s.fixed[1] || s.fixed[2]))
      add(EntityKind::support, s.node, i, base + ".fixed", "support restrains nothing");
  }

  for (std::size_t i = 0; i < model.loads.size(); ++i) {
    const auto& l = model.loads[i];
    const std::string base = indexed("loads", i);
    if (!index.count(l.node))
      add(EntityKind::load, l.node, i, base + ".node",
          "load references missing node " + std::to_string(l.node));
    if (!finite(l.force)) add(EntityKind::load, l.node, i, base + ".force", "non-finite force");
  }

  if (model.enclosure_area && !(*model.enclosure_area > 0.0 && std::isfinite(*model.enclosure_area)))
    add(EntityKind::model, 0, 0, "enclosure_area", "enclosure_area must be positive");

  // Connectivity over elements whose endpoints exist.
  if (model.nodes.size() > 1 && index.size() == model.nodes.size()) {
    std::vector<std::size_t> parent(model.nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& e : model.elements) {
      auto a = index.find(e.start);
      auto b = index.find(e.end);
      if (a != index.end() && b != index.end()) parent[find(a->second)] = find(b->second);
    }
    const std::size_t root = find(0);
    for (std::size_t i = 1; i < model.nodes.size(); ++i) {
      if (find(i) != root) {
        add(EntityKind::model, model.nodes[i].id, i, indexed("nodes", i),
            "node " + std::to_string(model.nodes[i].id) + " is not connected to node " +
                std::to_string(model.nodes[0].id));
      }
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.entity_id < b.entity_id;
  });
  return out;
}

namespace {

class Reader {
 public:
  std::vector<std::string> warnings;

  TrussModel read(const json& doc) {
    if (!doc.is_object()) throw SchemaError("$", "top-level value must be an object");
    warn_unknown(doc, "", {"name", "enclosure_area", "nodes", "elements", "supports", "loads"});

    TrussModel m;
    if (doc.contains("name")) m.name = get_string(doc["name"], "name");
    if (doc.contains("enclosure_area") && !doc["enclosure_area"].is_null())
      m.enclosure_area = get_number(doc["enclosure_area"], "enclosure_area");

    for_each(doc, "nodes", true, [&](const json& j, const std::string& p) {
      warn_unknown(j, p, {"id", "position"});
      m.nodes.push_back({get_int(field(j, "id", p), p + ".id"),
                         get_point(field(j, "position", p), p + ".position")});
    });
    for_each(doc, "elements", true, [&](const json& j, const std::string& p) {
      warn_unknown(j, p, {"id", "start", "end", "area", "youngs_modulus"});
      TrussElement e;
      e.id = get_int(field(j, "id", p), p + ".id");
      e.start = get_int(field(j, "start", p), p + ".start");
      e.end = get_int(field(j, "end", p), p + ".end");
      e.area = get_number(field(j, "area", p), p + ".area");
      e.youngs_modulus = get_number(field(j, "youngs_modulus", p), p + ".youngs_modulus");
      m.elements.push_back(e);
    });
    for_each(doc, "supports", false, [&](const json& j, const std::string& p) {
      warn_unknown(j, p, {"node", "fixed"});
      Support s;
      s.node = get_int(field(j, "node", p), p + ".node");
      const auto& f = field(j, "fixed", p);
      if (!f.is_array() || f.size() != 3)
        throw SchemaError(p + ".fixed", "expected an array of 3 booleans");
      for (std::size_t k = 0; k < 3; ++k) {
        if (!f[k].is_boolean())
          throw SchemaError(p + ".fixed[" + std::to_string(k) + "]", "expected a boolean");
        s.fixed[k] = f[k].get<bool>();
      }
      m.supports.push_back(s);
    });
    for_each(doc, "loads", false, [&](const json& j, const std::string& p) {
      warn_unknown(j, p, {"node", "force", "load_case"});
      PointLoad l;
      l.node = get_int(field(j, "node", p), p + ".node");
      l.force = get_point(field(j, "force", p), p + ".force");
      if (j.contains("load_case")) l.load_case = get_string(j["load_case"], p + ".load_case");
      m.loads.push_back(std::move(l));
    });
    return m;
  }

 private:
  template <class F>
  void for_each(const json& doc, const char* key, bool required, F&& f) {
    if (!doc.contains(key)) {
      if (required) throw SchemaError(key, "missing required array");
      return;
    }
    const auto& arr = doc[key];
    if (!arr.is_array()) throw SchemaError(key, "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = indexed(key, i);
      if (!arr[i].is_object()) throw SchemaError(p, "expected an object");
      f(arr[i], p);
    }
  }

  void warn_unknown(const json& obj, const std::string& path,
                    std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : obj.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end())
        warnings.push_back((path.empty() ? key : path + "." + key) + ": unknown field ignored");
    }
  }

  static const json& field(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path + "." + key, "missing required field");
    return *it;
  }

  static int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
    return j.get<int>();
  }
  static double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    return j.get<double>();
  }
  static std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path, "expected a string");
    return j.get<std::string>();
  }
  static Point3 get_point(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3)
      throw SchemaError(path, "expected an array of 3 numbers");
    Point3 p;
    for (std::size_t k = 0; k < 3; ++k)
      p[static_cast<Eigen::Index>(k)] = get_number(j[k], path + "[" + std::to_string(k) + "]");
    return p;
  }
};

ordered_json point_json(const Point3& p) { return ordered_json::array({p.x(), p.y(), p.z()}); }

}  // namespace

ReadResult read_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  Reader reader;
  ReadResult result{reader.read(doc), {}};
  result.warnings = std::move(reader.warnings);
  const auto violations = validate(result.model);
  if (!violations.empty())
    throw SchemaError(violations.front().path, violations.front().message);
  return result;
}

std::string write_model(const TrussModel& model) {
  ordered_json doc;
  doc["name"] = model.name;
  if (model.enclosure_area) doc["enclosure_area"] = *model.enclosure_area;

  auto& nodes = doc["nodes"] = ordered_json::array();
  for (const auto& n : model.nodes) {
    ordered_json j;
    j["id"] = n.id;
    j["position"] = point_json(n.position);
    nodes.push_back(std::move(j));
  }
  auto& elements = doc["elements"] = ordered_json::array();
  for (const auto& e : model.elements) {
    ordered_json j;
    j["id"] = e.id;
    j["start"] = e.start;
    j["end"] = e.end;
    j["area"] = e.area;
    j["youngs_modulus"] = e.youngs_modulus;
    elements.push_back(std::move(j));
  }
  auto& supports = doc["supports"] = ordered_json::array();
  for (const auto& s : model.supports) {
    ordered_json j;
    j["node"] = s.node;
    j["fixed"] = ordered_json::array({s.fixed[0], s.fixed[1], s.fixed[2]});
    supports.push_back(std::move(j));
  }
  auto& loads = doc["loads"] = ordered_json::array();
  for (const auto& l : model.loads) {
    ordered_json j;
    j["node"] = l.node;
    j["force"] = point_json(l.force);
    j["load_case"] = l.load_case;
    loads.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

ReadResult load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_model(buf.str());
}

void save_model_file(const TrussModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << write_model(model);
}

}  // namespace harmonode
