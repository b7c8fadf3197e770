#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace carnot;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("carnot_io_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Io, TomlSubset) {
  const auto doc = parse_toml(R"(# comment
name = "h1"   # trailing comment
step = 2
layer_dims = [2, 1]
tolerance = 1e-12
flag = true
triples = [
  [1, 2, 3, "1/2"],
  [1, 3, 3, -1.5],
]

[builtin]
name = 'jet'
params = [2]
)");
  EXPECT_EQ(doc["name"], "h1");
  EXPECT_EQ(doc["step"], 2);
  EXPECT_EQ(doc["layer_dims"], json::array({2, 1}));
  EXPECT_DOUBLE_EQ(doc["tolerance"].get<double>(), 1e-12);
  EXPECT_EQ(doc["flag"], true);
  EXPECT_EQ(doc["triples"][0][3], "1/2");
  EXPECT_DOUBLE_EQ(doc["triples"][1][3].get<double>(), -1.5);
  EXPECT_EQ(doc["builtin"]["name"], "jet");
  EXPECT_EQ(doc["builtin"]["params"][0], 2);
  EXPECT_EQ(parse_toml("a.b = 1\n")["a"]["b"], 1);
  EXPECT_EQ(parse_toml("t = {x = 1, y = \"s\"}\n")["t"]["y"], "s");
}

TEST(Io, TomlErrorsCarryLineNumbers) {
  EXPECT_NE(error_of([] { parse_toml("a = 1\nb = \n"); }).find("line 2"), std::string::npos);
  EXPECT_NE(error_of([] { parse_toml("a = 1\na = 2\n"); }).find("line 2"), std::string::npos);
  EXPECT_NE(error_of([] { parse_toml("x = [1, 2\n"); }), "");
  EXPECT_NE(error_of([] { parse_toml("s = \"open\n"); }).find("line 1"), std::string::npos);
  EXPECT_THROW(parse_toml("= 3\n"), ParseError);
}

TEST(Io, ConfigFromBuiltin) {
  const auto cfg = config_from_json(parse_toml("model = \"jet\"\nseed = 5\n[builtin]\nname = \"jet\"\nparams = [3]\n"));
  EXPECT_EQ(cfg.model, ModelKind::Jet);
  EXPECT_EQ(cfg.seed, 5u);
  const auto g = build_algebra(cfg);
  EXPECT_EQ(g->dim(), 5);
  EXPECT_EQ(g->name(), jet(3)->name());
  EXPECT_EQ(config_from_json(json::parse(R"({"builtin": "heisenberg", "tolerance": 1e-6})")).tolerance, 1e-6);
}

TEST(Io, ConfigFieldErrorsNameTheField) {
  EXPECT_NE(error_of([] { config_from_json(json::parse(R"({"layer_dims": [2, 1], "step": 3})")); }).find("field 'step'"),
            std::string::npos);
  EXPECT_NE(error_of([] { config_from_json(json::parse(R"({"layer_dims": [2, "x"]})")); }).find("layer_dims[1]"),
            std::string::npos);
  EXPECT_NE(error_of([] { config_from_json(json::parse(R"({"layer_dims": [2, 1], "triples": [[1, 2, 3]]})")); })
                .find("triples[0]"),
            std::string::npos);
  EXPECT_NE(error_of([] { config_from_json(json::parse(R"({"layer_dims": [2, 1], "triples": [[1, 2, 3, "1/0"]]})")); })
                .find("triples[0][3]"),
            std::string::npos);
  EXPECT_NE(error_of([] { config_from_json(json::parse(R"({"builtin": "jet", "model": "third"})")); }).find("model"),
            std::string::npos);
  EXPECT_NE(error_of([] { config_from_json(json::parse(R"({"builtin": "jet", "seed": -1})")); }).find("seed"),
            std::string::npos);
  EXPECT_THROW(config_from_json(json::parse(R"({"name": "nothing"})")), ParseError);
  EXPECT_THROW(config_from_json(json::parse("[1]")), ParseError);
}

TEST(Io, AlgebraRoundTripsExactly) {
  for (const auto& g : {heisenberg(2), jet(3), free_nilpotent(2, 3)}) {
    const auto toml = algebra_to_toml(*g, ModelKind::SecondKind);
    const auto cfg = config_from_json(parse_toml(toml));
    EXPECT_EQ(cfg.model, ModelKind::SecondKind);
    const auto back = build_algebra(cfg);
    ASSERT_EQ(back->dim(), g->dim()) << g->name();
    EXPECT_EQ(back->layer_dims(), g->layer_dims());
    for (int i = 0; i < g->dim(); ++i)
      for (int j = 0; j < g->dim(); ++j)
        for (int k = 0; k < g->dim(); ++k) EXPECT_EQ(back->c(i, j, k), g->c(i, j, k));
    EXPECT_TRUE(validate(*back).passed());
    EXPECT_EQ(algebra_to_json(*back)["triples"], algebra_to_json(*g)["triples"]);
  }
  // Fractions stay exact strings, integers stay integers.
  const auto g = StratifiedAlgebra::from_triples({2, 1}, {{1, 2, 3, Coefficient(Rational(1, 3))}});
  const auto j = algebra_to_json(*g);
  EXPECT_EQ(j["triples"][0][3], "1/3");
  EXPECT_EQ(algebra_to_json(*heisenberg(1))["triples"][0][3], 1);
}

TEST(Io, LoadConfigPrefixesPath) {
  const auto good = write_temp("good.toml", "[builtin]\nname = \"heisenberg\"\nparams = [1]\n");
  EXPECT_EQ(build_algebra(load_config(good))->dim(), 3);
  const auto bad = write_temp("bad.toml", "layer_dims = [2, 1]\nstep = \n");
  const auto msg = error_of([&] { load_config(bad); });
  EXPECT_EQ(msg.rfind(bad, 0), 0u) << msg;
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  const auto js = write_temp("cfg.json", R"({"builtin": {"name": "jet", "params": [2]}})");
  EXPECT_EQ(build_algebra(load_config(js))->dim(), 4);
  EXPECT_THROW(load_config("/nonexistent/carnot.toml"), ParseError);
  EXPECT_THROW(load_config(write_temp("broken.json", "{")), ParseError);
}

TEST(Io, BuiltinLabels) {
  EXPECT_EQ(parse_builtin_label("free_nilpotent(3,2)"), (std::pair<std::string, std::vector<int>>{"free_nilpotent", {3, 2}}));
  EXPECT_EQ(builtin_from_label("jet(2)")->dim(), 4);
  EXPECT_THROW(parse_builtin_label("jet"), ParseError);
  EXPECT_THROW(parse_builtin_label("jet(2x)"), ParseError);
  EXPECT_THROW(builtin_from_label("nosuch(1)"), UnsupportedError);
}

TEST(Io, CoordinatesAndElements) {
  EXPECT_EQ(parse_coords("1, -2.5,3e-1"), (Vector(Eigen::Vector3d(1, -2.5, 0.3))));
  EXPECT_THROW(parse_coords("1,x"), ParseError);
  EXPECT_THROW(parse_coords(""), ParseError);
  const auto m = make_model(heisenberg(1), ModelKind::Step2Explicit);
  const GroupElement a(m, Vector(Eigen::Vector3d(0.1, 0.2, 1.0 / 3.0)));
  const auto j = element_to_json(a);
  EXPECT_EQ(j["model"], "step2");
  EXPECT_EQ(element_from_json(json::parse(j.dump()), m).coords(), a.coords());
  EXPECT_THROW(element_from_json(j, make_model(heisenberg(1), ModelKind::FirstKind)), InputError);
  EXPECT_THROW(element_from_json(json::parse(R"({"coords": 1})"), m), ParseError);
}

TEST(Io, ValidationReportJson) {
  const auto bad = StratifiedAlgebra::from_triples({2, 1, 1}, {{1, 2, 3, 1}, {1, 3, 4, 1}, {2, 3, 4, 1}, {1, 4, 1, 1}});
  const auto j = validation_to_json(validate(*bad));
  EXPECT_EQ(j["passed"], false);
  bool named = false;
  for (const auto& c : j["checks"])
    if (!c["passed"].get<bool>()) named = named || !c["offenders"].empty();
  EXPECT_TRUE(named);
}

TEST(Io, SampledMapCsvRoundTrip) {
  const auto map = sharpness_map(2, 1.0, 7);
  std::stringstream ss;
  write_sampled_map_csv(ss, map);
  const auto back = read_sampled_map_csv(ss);
  EXPECT_EQ(back.counts(), map.counts());
  EXPECT_EQ(back.lower(), map.lower());
  EXPECT_EQ(back.spacing(), map.spacing());
  EXPECT_EQ(back.model()->kind(), ModelKind::Jet);
  for (std::size_t f = 0; f < map.node_count(); ++f) EXPECT_EQ(back.values()[f], map.values()[f]);
}

TEST(Io, SampledMapCsvRowOrderAndOverrides) {
  // Rows in any order; a single spacing is broadcast to every axis.
  std::stringstream ss("i1,i2,x1,x2,x3\n1,1,1,1,1\n0,0,0,0,0\n1,0,1,0,0\n0,1,0,1,0\n");
  CsvMapOverrides ov;
  ov.model = make_model(heisenberg(1), ModelKind::FirstKind);
  ov.h = Vector::Constant(1, 0.5);
  const auto map = read_sampled_map_csv(ss, ov);
  EXPECT_EQ(map.spacing(), Vector::Constant(2, 0.5));
  EXPECT_EQ(map.value({1, 0}), (Vector(Eigen::Vector3d(1, 0, 0))));
  EXPECT_EQ(map.lower(), Vector::Zero(2));
}

TEST(Io, SampledMapCsvErrors) {
  CsvMapOverrides ov;
  ov.model = make_model(heisenberg(1), ModelKind::FirstKind);
  ov.h = Vector::Constant(1, 0.5);
  auto read = [&](const std::string& text, const CsvMapOverrides& o) {
    std::stringstream ss(text);
    return error_of([&] { read_sampled_map_csv(ss, o); });
  };
  EXPECT_NE(read("i1,x1,x2,x3\n0,0,0,0\n1,0,0\n", ov).find("csv line 3"), std::string::npos);
  EXPECT_NE(read("i1,x1,x2,x3\n0,0,0,q\n", ov).find("not a number"), std::string::npos);
  EXPECT_NE(read("i1,x1,x2,x3\n0,0,0,0\n2,0,0,0\n", ov).find("incomplete"), std::string::npos);
  EXPECT_NE(read("i1,x1,x2,x3\n0,0,0,0\n0,1,0,0\n2,0,0,0\n", ov).find("twice"), std::string::npos);
  EXPECT_NE(read("i1,x1,x2,x3\n0.5,0,0,0\n", ov).find("non-negative integer"), std::string::npos);
  EXPECT_NE(read("x1,x2,x3\n0,0,0\n", ov).find("too few columns"), std::string::npos);
  EXPECT_NE(read("i1,x1,x2,x3\n", ov).find("no data"), std::string::npos);
  EXPECT_NE(read("i1,x1,x2,x3\n0,0,0,0\n", {}).find("group"), std::string::npos);
  CsvMapOverrides no_h;
  no_h.model = ov.model;
  EXPECT_NE(read("i1,x1,x2,x3\n0,0,0,0\n", no_h).find("--h"), std::string::npos);
}
