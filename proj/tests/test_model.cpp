#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

#include "harmonode/model.hpp"
#include "helpers.hpp"

using namespace harmonode;
using testing_helpers::data_path;

namespace {

TrussModel two_bar() { return load_model_file(data_path("two_bar.truss.json")).model; }

bool has_path(const std::vector<Violation>& v, const std::string& path) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.path == path; });
}

}  // namespace

TEST(Model, FixturesLoadAndValidate) {
  for (const char* name : {"two_bar.truss.json", "single_bar.truss.json", "tripod.truss.json"}) {
    const auto r = load_model_file(data_path(name));
    EXPECT_TRUE(validate(r.model).empty()) << name;
    EXPECT_TRUE(r.warnings.empty()) << name;
  }
}

TEST(Model, LoadCasesInOrderOfFirstAppearance) {
  EXPECT_EQ(two_bar().load_cases(), (std::vector<std::string>{"gravity", "lateral"}));
}

TEST(Model, MissingLoadCaseDefaults) {
  const auto m = load_model_file(data_path("single_bar.truss.json")).model;
  ASSERT_EQ(m.loads.size(), 1u);
  EXPECT_EQ(m.loads[0].load_case, "default");
}

TEST(Model, WriteReadRoundTripIsIdentity) {
  TrussModel m = two_bar();
  m.enclosure_area = 12.5;
  m.nodes[0].position = Point3(0.1, -1.0 / 3.0, 1e-17);
  const std::string text = write_model(m);
  const TrussModel back = read_model(text).model;
  EXPECT_EQ(back, m);
  EXPECT_EQ(write_model(back), text);
}

TEST(Model, WriterKeyOrder) {
  const std::string text = write_model(two_bar());
  const auto pos = [&](const char* key) { return text.find(std::string("\"") + key + "\""); };
  EXPECT_LT(pos("name"), pos("nodes"));
  EXPECT_LT(pos("nodes"), pos("elements"));
  EXPECT_LT(pos("elements"), pos("supports"));
  EXPECT_LT(pos("supports"), pos("loads"));
  EXPECT_EQ(text.back(), '\n');
}

TEST(Model, MissingNodeReference) {
  TrussModel m = two_bar();
  m.elements[1].end = 99;
  const auto v = validate(m);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().kind, EntityKind::element);
  EXPECT_EQ(v.front().entity_id, 2);
  EXPECT_NE(v.front().message.find("missing node 99"), std::string::npos);
  EXPECT_EQ(v.front().path, "elements[1].end");
}

TEST(Model, ZeroLengthElement) {
  TrussModel m = two_bar();
  m.elements[0].end = m.elements[0].start;
  EXPECT_TRUE(has_path(validate(m), "elements[0].end"));

  TrussModel coincident = two_bar();
  coincident.nodes[2].position = coincident.nodes[0].position;
  EXPECT_TRUE(has_path(validate(coincident), "elements[0].end"));
}

TEST(Model, InvalidSectionAndSupport) {
  TrussModel m = two_bar();
  m.elements[0].area = 0.0;
  m.elements[1].youngs_modulus = -1.0;
  m.supports[2].fixed = {false, false, false};
  const auto v = validate(m);
  EXPECT_TRUE(has_path(v, "elements[0].area"));
  EXPECT_TRUE(has_path(v, "elements[1].youngs_modulus"));
  EXPECT_TRUE(has_path(v, "supports[2].fixed"));
}

TEST(Model, DuplicateIdsAndNonFinite) {
  TrussModel m = two_bar();
  m.nodes[1].id = 1;
  EXPECT_TRUE(has_path(validate(m), "nodes[1].id"));
  TrussModel n = two_bar();
  n.loads[0].force.x() = std::nan("");
  EXPECT_TRUE(has_path(validate(n), "loads[0].force"));
}

TEST(Model, DisconnectedNodeReported) {
  TrussModel m = two_bar();
  m.nodes.push_back({7, Point3(10, 10, 10)});
  const auto v = validate(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, EntityKind::model);
  EXPECT_EQ(v[0].entity_id, 7);
}

TEST(Model, ViolationsOrderedByKindThenId) {
  TrussModel m = two_bar();
  m.elements[1].area = -1;
  m.elements[0].area = -1;
  m.loads[0].node = 42;
  const auto v = validate(m);
  ASSERT_GE(v.size(), 3u);
  for (std::size_t i = 1; i < v.size(); ++i) {
    EXPECT_TRUE(v[i - 1].kind < v[i].kind ||
                (v[i - 1].kind == v[i].kind && v[i - 1].entity_id <= v[i].entity_id));
  }
}

TEST(Model, ParseErrorCarriesOffset) {
  try {
    read_model("{\"nodes\": [1, 2,, 3]}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GT(e.byte_offset(), 0u);
  }
}

TEST(Model, SchemaErrorsNameThePath) {
  try {
    read_model(R"({"nodes": [{"id": 1}], "elements": []})");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.path(), "nodes[0].position");
  }
  try {
    read_model(R"({"elements": []})");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.path(), "nodes");
  }
}

TEST(Model, InvalidModelRejectedOnRead) {
  TrussModel m = two_bar();
  m.elements[0].end = 99;
  EXPECT_THROW(read_model(write_model(m)), SchemaError);
}

TEST(Model, UnknownFieldsWarn) {
  auto doc = write_model(two_bar());
  doc.insert(1, "\n  \"colour\": \"red\",");
  const auto r = read_model(doc);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("colour"), std::string::npos);
}

TEST(Model, MissingFileThrowsIoError) {
  EXPECT_THROW(load_model_file("/nonexistent/x.truss.json"), std::ios_base::failure);
}

TEST(Model, SaveThenLoad) {
  const auto path = std::filesystem::temp_directory_path() / "harmonode_save.truss.json";
  save_model_file(two_bar(), path.string());
  EXPECT_EQ(load_model_file(path.string()).model, two_bar());
  std::filesystem::remove(path);
}
