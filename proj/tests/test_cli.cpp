#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "carnot/cli.hpp"
#include "support.hpp"

using namespace carnot;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("carnot_cli_" + name)).string();
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = temp_path(name);
  std::ofstream(path) << text;
  return path;
}

class ScopedEnv {
 public:
  ScopedEnv(const char* key, const char* value) : key_(key) { ::setenv(key, value, 1); }
  ~ScopedEnv() { ::unsetenv(key_); }

 private:
  const char* key_;
};

}  // namespace

TEST(Cli, GromovBoundIsExact) {
  const auto r = run({"--group", "heisenberg(1)", "gromov-bound"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "{\"n\":3,\"Q\":4,\"bound\":\"2/3\"}\n");
  EXPECT_EQ(run({"--group", "jet(2)", "gromov-bound"}).doc()["bound"], "1/2");
  EXPECT_EQ(run({"--group", "heisenberg(2)", "gromov-bound"}).doc()["bound"], "4/5");
}

TEST(Cli, ValidateBuiltinsAndConfigs) {
  for (std::string g : {"heisenberg(3)", "jet(4)", "free_nilpotent(2,3)"}) {
    const auto r = run({"--group", g, "validate"});
    EXPECT_EQ(r.code, 0) << g;
    EXPECT_EQ(r.doc()["passed"], true);
    EXPECT_EQ(r.doc()["worst_residual"], 0.0);
  }
  const auto bad = write_temp("grading.toml", R"(layer_dims = [2, 1]
triples = [[1, 2, 3, 1], [1, 3, 1, 1]]
)");
  const auto r = run({"--config", bad, "validate"});
  EXPECT_EQ(r.code, kExitValidation);
  const auto report = r.doc();
  EXPECT_EQ(report["passed"], false);
  bool named = false;
  for (const auto& c : report["checks"])
    if (c["name"] == "grading") named = c["offenders"].size() > 0;
  EXPECT_TRUE(named);
  const auto missing = run({"--config", temp_path("absent.toml"), "validate"});
  EXPECT_EQ(missing.code, kExitInput);
  EXPECT_EQ(missing.doc()["error"], "parse");
}

TEST(Cli, ConfigAndGroupAreExclusiveAndOneIsRequired) {
  EXPECT_EQ(run({"validate"}).code, kExitInput);
  const auto cfg = write_temp("h.toml", "[builtin]\nname = \"heisenberg\"\nparams = [1]\n");
  EXPECT_EQ(run({"--config", cfg, "--group", "jet(2)", "validate"}).code, kExitInput);
  EXPECT_EQ(run({"--config", cfg, "gromov-bound"}).doc()["bound"], "2/3");
}

TEST(Cli, GroupArithmetic) {
  EXPECT_EQ(run({"--group", "heisenberg(1)", "mul", "1,0,0", "0,1,0"}).doc()["coords"], json::array({1.0, 1.0, 0.5}));
  EXPECT_EQ(run({"--group", "heisenberg(1)", "inv", "1,2,3"}).doc()["coords"], json::array({-1.0, -2.0, -3.0}));
  EXPECT_EQ(run({"--group", "heisenberg(1)", "dilate", "2", "1,1,1"}).doc()["coords"], json::array({2.0, 2.0, 4.0}));
  const auto jet_mul = run({"--group", "jet(1)", "--model", "jet", "mul", "1,2,3", "4,5,6"}).doc();
  EXPECT_EQ(jet_mul["model"], "jet");
  // Jet law: u_0 = 3 + 6 + 2 * 4.
  EXPECT_EQ(jet_mul["coords"], json::array({5.0, 7.0, 17.0}));
  EXPECT_DOUBLE_EQ(run({"--group", "heisenberg(1)", "box", "0,0,0.25"}).doc()["box_norm"].get<double>(), 0.5);
  EXPECT_EQ(run({"--group", "heisenberg(1)", "mul", "1,0", "0,1,0"}).code, kExitInput);
  EXPECT_EQ(run({"--group", "heisenberg(1)", "dilate", "-1", "1,1,1"}).code, kExitInput);
  EXPECT_EQ(run({"--group", "heisenberg(1)", "mul", "1,x,0", "0,1,0"}).code, kExitInput);
}

TEST(Cli, CcDistance) {
  const auto r = run({"--group", "heisenberg(1)", "ccdist", "1,0,0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(r.doc()["length"].get<double>(), 1.0, 0.02);
  EXPECT_EQ(r.doc()["converged"], true);
  const auto fail = run({"--group", "heisenberg(1)", "ccdist", "0,0,1", "--restarts", "1", "--budget", "1",
                         "--segments", "1"});
  EXPECT_EQ(fail.code, kExitUnconverged);
  EXPECT_EQ(fail.doc()["converged"], false);
  const auto csv = temp_path("path.csv");
  std::filesystem::remove(csv);
  EXPECT_EQ(run({"--group", "heisenberg(1)", "ccdist", "0.5,0,0", "--path-csv", csv}).code, 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,x1,x2,x3");
}

TEST(Cli, SeedsAndThreadsAreReproducible) {
  const std::vector<std::string> base{"--group", "heisenberg(1)", "ccdist", "0.4,-0.3,0.2", "--restarts", "4"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args).doc();
  };
  const auto a = with({"--seed", "17"});
  EXPECT_EQ(a["seed"], 17);
  EXPECT_EQ(with({"--seed", "17", "--threads", "3"})["length"], a["length"]);
  {
    ScopedEnv env("CARNOT_SEED", "17");
    EXPECT_EQ(with({})["seed"], 17);
    EXPECT_EQ(with({})["length"], a["length"]);
    EXPECT_EQ(with({"--seed", "3"})["seed"], 3);
  }
  {
    ScopedEnv env("CARNOT_SEED", "not-a-seed");
    EXPECT_EQ(run(base).code, kExitInput);
  }
  const auto cfg = write_temp("seeded.toml", "seed = 9\n[builtin]\nname = \"heisenberg\"\nparams = [1]\n");
  EXPECT_EQ(run({"--config", cfg, "ccdist", "0.4,-0.3,0.2", "--restarts", "2"}).doc()["seed"], 9);
}

TEST(Cli, SampledMapPipeline) {
  const auto csv = temp_path("sharp.csv");
  ASSERT_EQ(run({"gen-map", "sharpness", "--k", "1", "--nodes", "41", "--M", "2", "--out", csv}).code, 0);
  const auto contact = run({"contact-check", csv});
  // A non-contact map is a diagnosis, not a failure.
  EXPECT_EQ(contact.code, 0);
  EXPECT_EQ(contact.doc()["weakly_contact"], false);
  EXPECT_NEAR(contact.doc()["max"].get<double>(), 1.0, 1e-12);
  const auto rel = run({"jet-relations", csv});
  EXPECT_NEAR(rel.doc()["max"].get<double>(), 1.0, 1e-12);
  const auto holder = run({"holder", csv});
  EXPECT_EQ(holder.code, 0);
  EXPECT_NEAR(holder.doc()["alpha_hat"].get<double>(), 0.5, 0.05);

  const auto lift = temp_path("lift.csv");
  ASSERT_EQ(run({"--group", "jet(2)", "--model", "jet", "gen-map", "lift", "--nodes", "41", "--h", "0.05", "--out", lift})
                .code,
            0);
  const auto ok = run({"contact-check", lift});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_EQ(ok.doc()["weakly_contact"], false);  // FD error exceeds the default threshold
  EXPECT_LE(ok.doc()["max"].get<double>(), 1e-3);

  const auto stdout_map = run({"gen-map", "jet-lift", "--k", "2", "--nodes", "5", "--h", "0.1"});
  EXPECT_EQ(stdout_map.out.rfind("# group=jet(2)", 0), 0u);
  EXPECT_EQ(run({"contact-check", temp_path("absent.csv")}).code, kExitInput);
}

TEST(Cli, Unrectifiability) {
  const auto h1 = run({"--group", "heisenberg(1)", "unrect", "--k", "2"}).doc();
  EXPECT_EQ(h1["found"], false);
  EXPECT_EQ(h1["exact"]["exists"], false);
  EXPECT_EQ(h1["purely_unrectifiable"], true);
  const auto h2 = run({"--group", "heisenberg(2)", "unrect", "--k", "2"}).doc();
  EXPECT_EQ(h2["found"], true);
  EXPECT_LE(h2["certificate"]["residual"].get<double>(), 1e-8);
  const auto j3 = run({"--group", "jet(3)", "unrect", "--k", "2", "--no-exact"}).doc();
  EXPECT_EQ(j3["found"], false);
  EXPECT_EQ(j3["probabilistic"], true);
  EXPECT_EQ(run({"--group", "jet(3)", "unrect", "--k", "9"}).code, kExitInput);
}

TEST(Cli, IsoCheck) {
  for (std::string g : {"jet(2)", "jet(3)", "heisenberg(2)"})
    for (std::string map : {"second-to-first", "first-to-second"}) {
      const auto r = run({"--group", g, "iso-check", "--map", map});
      EXPECT_EQ(r.code, 0) << g << " " << map;
      EXPECT_EQ(r.doc()["passed"], true);
      EXPECT_LE(r.doc()["leakage"].get<double>(), 1e-6);
    }
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitInput);
  EXPECT_EQ(run({"--group", "heisenberg(1)", "frobnicate"}).code, kExitInput);
  const auto help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("gromov-bound"), std::string::npos);
  const auto r = run({"--group", "heisenberg(1)", "--model", "sideways", "validate"});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("carnot: "), std::string::npos);
  EXPECT_TRUE(r.doc().contains("message"));
}
