#pragma once

// Command-line front end. run_cli() parses arguments, writes one JSON document
// to `out` and diagnostics to `err`, and returns the process exit code:
//   0 success, 1 parse/input error, 2 validation failure, 3 unconverged.

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "carnot/bch.hpp"
#include "carnot/contact_analysis.hpp"
#include "carnot/io.hpp"
#include "carnot/isomorphisms.hpp"
#include "carnot/metric.hpp"
#include "carnot/rectifiability.hpp"

namespace carnot {

enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitValidation = 2, kExitUnconverged = 3 };

namespace cli_detail {

struct Globals {
  std::string config;
  std::string group;
  std::string model;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  double tolerance = 0.0;  // 0: take the config value
  bool pretty = false;
};

struct Context {
  GroupConfig cfg;
  AlgebraPtr algebra;
  ModelPtr model;
  std::uint64_t seed = 0;
};

inline std::uint64_t resolve_seed(const Globals& g, std::uint64_t config_seed) {
  if (g.seed) return *g.seed;
  if (const char* env = std::getenv("CARNOT_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::logic_error&) {
      throw ParseError(std::string("CARNOT_SEED is not a non-negative integer: '") + env + "'");
    }
  }
  return config_seed;
}

/// Loads the group from --config or --group; the model flag overrides the config.
inline Context load_context(const Globals& g, bool required = true) {
  Context ctx;
  if (!g.config.empty() && !g.group.empty()) throw InputError("pass either --config or --group, not both");
  if (!g.config.empty()) {
    ctx.cfg = load_config(g.config);
  } else if (!g.group.empty()) {
    std::tie(ctx.cfg.builtin_name, ctx.cfg.builtin_params) = parse_builtin_label(g.group);
  } else if (required) {
    throw InputError("no group given; pass --config FILE or --group NAME(PARAMS)");
  } else {
    ctx.seed = resolve_seed(g, 0);
    return ctx;
  }
  if (!g.model.empty()) ctx.cfg.model = model_kind_from_string(g.model);
  if (g.tolerance > 0.0) ctx.cfg.tolerance = g.tolerance;
  ctx.algebra = build_algebra(ctx.cfg);
  ctx.seed = resolve_seed(g, ctx.cfg.seed);
  return ctx;
}

/// Validation failures stop every command except `validate` itself.
struct ValidationFailed {
  json report;
};

inline void require_valid(Context& ctx) {
  const ValidationReport rep = validate(*ctx.algebra, ctx.cfg.tolerance);
  if (!rep.passed()) throw ValidationFailed{validation_to_json(rep)};
  ctx.model = make_model(ctx.algebra, ctx.cfg.model);
}

inline GroupElement element_arg(const Context& ctx, const std::string& text) {
  return {ctx.model, parse_coords(text)};
}

inline SampledMap load_map(const Globals& g, const std::string& path, const std::string& h_text) {
  CsvMapOverrides ov;
  if (!g.config.empty() || !g.group.empty()) {
    Context ctx = load_context(g);
    require_valid(ctx);
    ov.model = ctx.model;
  }
  if (!h_text.empty()) ov.h = parse_coords(h_text);
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return read_sampled_map_csv(in, ov);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline json index_json(const SampledMap& map, std::size_t flat) {
  json a = json::array();
  for (int i : map.index(flat)) a.push_back(i);
  return a;
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  Globals g;
  CLI::App app{"Computations in Carnot groups", "carnot"};
  app.set_help_flag("--help", "print help");  // -h stays free for the grid spacing flag
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", g.config, "group config (.toml or .json)");
  app.add_option("--group", g.group, "builtin group, e.g. heisenberg(1), jet(2), free_nilpotent(3,2)");
  app.add_option("--model", g.model, "coordinate model: first|second|jet|step2|step3");
  app.add_option("--seed", g.seed, "RNG seed (overrides CARNOT_SEED and the config)");
  app.add_option("--threads", g.threads, "worker cap for parallel restarts")->check(CLI::PositiveNumber);
  app.add_option("--tol", g.tolerance, "validation tolerance override")->check(CLI::PositiveNumber);
  app.add_flag("--pretty", g.pretty, "indent JSON output");

  json result;
  int code = kExitOk;

  // -- algebra ---------------------------------------------------------------
  auto* validate_cmd = app.add_subcommand("validate", "check the structural constants");
  validate_cmd->callback([&] {
    Context ctx = load_context(g);
    const ValidationReport rep = validate(*ctx.algebra, ctx.cfg.tolerance);
    result = validation_to_json(rep);
    result["algebra"] = ctx.algebra->name();
    result["exact"] = ctx.algebra->is_exact();
    if (!rep.passed()) code = kExitValidation;
  });

  auto* gromov_cmd = app.add_subcommand("gromov-bound", "Hoelder exponent bound (n-1)/(Q-1) as an exact rational");
  gromov_cmd->callback([&] {
    Context ctx = load_context(g);
    require_valid(ctx);
    result = json::object();
    result["n"] = ctx.algebra->dim();
    result["Q"] = homogeneous_dimension(*ctx.algebra);
    result["bound"] = gromov_bound(*ctx.algebra).str();
  });

  // -- group operations ------------------------------------------------------
  std::string a_text, b_text;
  auto* mul_cmd = app.add_subcommand("mul", "group product a*b");
  mul_cmd->add_option("a", a_text, "comma-separated coordinates")->required();
  mul_cmd->add_option("b", b_text, "comma-separated coordinates")->required();
  mul_cmd->callback([&] {
    Context ctx = load_context(g);
    require_valid(ctx);
    result = element_to_json(multiply(element_arg(ctx, a_text), element_arg(ctx, b_text)));
  });

  auto* inv_cmd = app.add_subcommand("inv", "group inverse");
  inv_cmd->add_option("a", a_text, "comma-separated coordinates")->required();
  inv_cmd->callback([&] {
    Context ctx = load_context(g);
    require_valid(ctx);
    result = element_to_json(inverse(element_arg(ctx, a_text)));
  });

  double eps = 1.0;
  auto* dilate_cmd = app.add_subcommand("dilate", "dilation delta_eps(a)");
  dilate_cmd->add_option("eps", eps, "positive factor")->required();
  dilate_cmd->add_option("a", a_text, "comma-separated coordinates")->required();
  dilate_cmd->callback([&] {
    Context ctx = load_context(g);
    require_valid(ctx);
    result = element_to_json(dilate(DilationFactor(eps), element_arg(ctx, a_text)));
  });

  auto* box_cmd = app.add_subcommand("box", "box quasi-norm of a, or quasi-distance between a and b");
  box_cmd->add_option("a", a_text, "comma-separated coordinates")->required();
  box_cmd->add_option("b", b_text, "comma-separated coordinates");
  box_cmd->callback([&] {
    Context ctx = load_context(g);
    require_valid(ctx);
    const GroupElement a = element_arg(ctx, a_text);
    result = json::object();
    if (b_text.empty()) {
      result["box_norm"] = box_norm(a);
    } else {
      result["box_distance"] = box_quasi_distance(a, element_arg(ctx, b_text));
    }
  });

  // -- metric ----------------------------------------------------------------
  CcOptions cc;
  std::string path_csv;
  auto* cc_cmd = app.add_subcommand("ccdist", "upper bound on the CC distance by a piecewise-constant control");
  cc_cmd->add_option("b", b_text, "target coordinates")->required();
  cc_cmd->add_option("--from", a_text, "start coordinates (default: identity)");
  cc_cmd->add_option("--segments", cc.segments, "control segments")->check(CLI::PositiveNumber);
  cc_cmd->add_option("--substeps", cc.substeps, "RK4 steps per segment")->check(CLI::PositiveNumber);
  cc_cmd->add_option("--restarts", cc.restarts, "random restarts")->check(CLI::PositiveNumber);
  cc_cmd->add_option("--budget", cc.budget, "search sweeps per restart")->check(CLI::PositiveNumber);
  cc_cmd->add_option("--threshold", cc.threshold, "accepted endpoint box residual")->check(CLI::PositiveNumber);
  cc_cmd->add_option("--path-csv", path_csv, "write the path samples (t, coordinates) here");
  cc_cmd->callback([&] {
    Context ctx = load_context(g);
    require_valid(ctx);
    const GroupElement a = a_text.empty() ? GroupElement::identity(ctx.model) : element_arg(ctx, a_text);
    const GroupElement b = element_arg(ctx, b_text);
    cc.seed = ctx.seed;
    cc.threads = g.threads;
    const CcEstimate est = cc_upper_bound(a, b, cc);
    result = json::object();
    result["length"] = est.length;
    result["residual"] = est.endpoint_residual;
    result["converged"] = est.converged;
    result["seed"] = est.seed;
    result["segments"] = est.path.segments();
    result["lambda"] = est.lambda;
    if (!path_csv.empty()) {
      std::ofstream f(path_csv);
      if (!f) throw InputError("cannot write '" + path_csv + "'");
      write_path_csv(f, est.path);
      result["path_csv"] = path_csv;
    }
    if (!est.converged) code = kExitUnconverged;
  });

  // -- sampled maps ----------------------------------------------------------
  std::string csv, h_text;
  double contact_tol = 1e-6;
  auto* contact_cmd = app.add_subcommand("contact-check", "weak-contact residuals of a sampled map");
  contact_cmd->add_option("csv", csv, "sampled map CSV")->required();
  contact_cmd->add_option("--h", h_text, "grid spacing (one value or one per axis)");
  contact_cmd->add_option("--threshold", contact_tol, "residual below which the map counts as horizontal");
  contact_cmd->callback([&] {
    const SampledMap map = load_map(g, csv, h_text);
    const WeakContactReport rep = weak_contact_report(map);
    result = json::object();
    result["group"] = map.model()->algebra().name();
    result["model"] = to_string(map.model()->kind());
    result["interior_nodes"] = rep.nodes.size();
    result["max"] = rep.max;
    result["median"] = rep.median;
    result["p95"] = rep.p95;
    result["worst_node"] = index_json(map, rep.worst_node);
    result["worst_axis"] = rep.worst_axis + 1;
    result["form_max"] = vector_to_json(rep.form_max);
    result["threshold"] = contact_tol;
    result["weakly_contact"] = rep.max <= contact_tol;
  });

  auto* jet_cmd = app.add_subcommand("jet-relations", "defects of the relations forced on maps into a jet space");
  jet_cmd->add_option("csv", csv, "sampled map CSV")->required();
  jet_cmd->add_option("--h", h_text, "grid spacing (one value or one per axis)");
  jet_cmd->callback([&] {
    const SampledMap map = load_map(g, csv, h_text);
    const JetRelationReport rep = jet_forced_relations(map);
    result = json::object();
    result["group"] = map.model()->algebra().name();
    result["interior_nodes"] = rep.nodes.size();
    result["max"] = rep.max;
    result["axis_max"] = vector_to_json(rep.axis_max);
    result["relation_max"] = vector_to_json(rep.relation_max);
  });

  HolderOptions hopt;
  std::string metric = "box";
  auto* holder_cmd = app.add_subcommand("holder", "fit a Hoelder exponent to a sampled map");
  holder_cmd->add_option("csv", csv, "sampled map CSV")->required();
  holder_cmd->add_option("--h", h_text, "grid spacing (one value or one per axis)");
  holder_cmd->add_option("--metric", metric, "target distance")->check(CLI::IsMember({"box", "cc"}));
  holder_cmd->add_option("--bins", hopt.bins, "log-spaced distance bins")->check(CLI::PositiveNumber);
  holder_cmd->add_option("--quantile", hopt.quantile, "per-bin envelope quantile")->check(CLI::Range(0.0, 1.0));
  holder_cmd->add_option("--max-scale", hopt.max_scale, "largest domain distance used")->check(CLI::PositiveNumber);
  holder_cmd->add_option("--min-cells", hopt.min_cells, "smallest domain distance in grid cells");
  holder_cmd->add_option("--cc-pairs", hopt.cc_pairs, "pair cap for the cc metric")->check(CLI::PositiveNumber);
  holder_cmd->callback([&] {
    const SampledMap map = load_map(g, csv, h_text);
    hopt.metric = metric == "cc" ? HolderMetric::Cc : HolderMetric::Box;
    hopt.seed = load_context(g, false).seed;
    hopt.cc.seed = hopt.seed;
    hopt.cc.threads = g.threads;
    const HolderFit fit = holder_fit(map, hopt);
    result = json::object();
    result["alpha_hat"] = fit.alpha_hat;
    result["alpha_stderr"] = fit.alpha_stderr;
    result["constant_hat"] = fit.constant_hat;
    result["metric"] = metric;
    result["pairs"] = fit.pair_count;
    result["bins_used"] = fit.bins_used;
    result["scale_min"] = fit.scale_min;
    result["scale_max"] = fit.scale_max;
    result["seed"] = fit.seed;
  });

  // -- unrectifiability ------------------------------------------------------
  int k = 2;
  SearchOptions sopt;
  bool no_exact = false;
  auto* unrect_cmd = app.add_subcommand("unrect", "search for a k-dimensional horizontal subalgebra");
  unrect_cmd->add_option("--k", k, "subalgebra dimension")->required();
  unrect_cmd->add_option("--restarts", sopt.restarts, "seeded restarts")->check(CLI::PositiveNumber);
  unrect_cmd->add_flag("--no-exact", no_exact, "skip the exact two-plane decision");
  unrect_cmd->callback([&] {
    Context ctx = load_context(g);
    require_valid(ctx);
    sopt.seed = ctx.seed;
    sopt.exact_fallback = !no_exact;
    const SubalgebraSearch s = horizontal_subalgebra_search(*ctx.algebra, k, sopt);
    result = json::object();
    result["algebra"] = ctx.algebra->name();
    result["k"] = k;
    result["found"] = s.found;
    result["probabilistic"] = s.probabilistic();
    result["best_residual"] = s.best_residual;
    result["restarts"] = s.restarts;
    result["seed"] = s.seed;
    if (s.certificate) {
      result["certificate"] = {{"basis", matrix_to_json(s.certificate->basis)},
                               {"residual", s.certificate->residual}};
    }
    if (s.exact) {
      result["exact"] = {{"exists", s.exact->exists}, {"method", s.exact->method}};
      result["purely_unrectifiable"] = !s.exact->exists;
    }
  });

  // -- isomorphisms ----------------------------------------------------------
  std::string map_name = "second-to-first";
  std::size_t samples = 200;
  auto* iso_cmd = app.add_subcommand("iso-check", "check a coordinate change is a graded group isomorphism");
  iso_cmd->add_option("--map", map_name, "map to check")->check(CLI::IsMember({"second-to-first", "first-to-second"}));
  iso_cmd->add_option("--samples", samples, "random sample count")->check(CLI::PositiveNumber);
  iso_cmd->callback([&] {
    Context ctx = load_context(g);
    require_valid(ctx);
    const GroupMap m = map_name == "second-to-first" ? second_to_first_map(ctx.algebra) : first_to_second_map(ctx.algebra);
    const auto pts = sample_box_ball(*ctx.algebra, samples, ctx.seed);
    const double hom = check_homomorphism(m, pts);
    const double dil = check_dilation_commutation(m, pts, {0.1, 0.5, 2.0, 10.0});
    const double rt = check_round_trip(m, pts);
    const LeakageReport leak = strata_preservation_check(m);
    result = json::object();
    result["map"] = m.name;
    result["algebra"] = ctx.algebra->name();
    result["samples"] = samples;
    result["seed"] = ctx.seed;
    result["homomorphism"] = hom;
    result["dilation_commutation"] = dil;
    result["round_trip"] = rt;
    result["leakage"] = leak.leakage;
    result["block_norms"] = matrix_to_json(leak.block_norms);
    const bool ok = hom <= 1e-9 && dil <= 1e-9 && rt <= 1e-9 && leak.leakage <= 1e-6;
    result["passed"] = ok;
    if (!ok) code = kExitValidation;
  });

  // -- synthetic maps --------------------------------------------------------
  std::string kind, out_path;
  int nodes = 0, jet_k = 2;
  double M = 2.0, half_width = 0.5, spacing = 0.0;
  auto* gen_cmd = app.add_subcommand("gen-map", "write a built-in test map as CSV");
  gen_cmd->add_option("kind", kind, "map family")
      ->required()
      ->check(CLI::IsMember({"sharpness", "identity", "jet-lift", "lift", "vertical"}));
  gen_cmd->add_option("--nodes", nodes, "nodes per axis")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--k", jet_k, "jet order for sharpness and jet-lift")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--M", M, "half-width of the sharpness square")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--half-width", half_width, "half-width of the identity-map box")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--h", spacing, "parameter spacing of curve maps")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out", out_path, "output CSV (default: stdout)");
  gen_cmd->callback([&] {
    auto need_model = [&] {
      Context ctx = load_context(g);
      require_valid(ctx);
      return ctx.model;
    };
    std::optional<SampledMap> map;
    if (kind == "sharpness") {
      map = sharpness_map(jet_k, M, nodes ? nodes : 161);
    } else if (kind == "identity") {
      map = identity_map(need_model(), half_width, nodes ? nodes : 12);
    } else if (kind == "jet-lift") {
      map = jet_lift_map(jet_k, nodes ? nodes : 201, spacing > 0 ? spacing : 1e-2);
    } else if (kind == "lift") {
      map = horizontal_lift_map(need_model(), nodes ? nodes : 201, spacing > 0 ? spacing : 1e-2);
    } else {
      map = vertical_line_map(need_model(), nodes ? nodes : 201, spacing > 0 ? spacing : 1e-2);
    }
    if (out_path.empty()) {
      write_sampled_map_csv(out, *map);
      code = -1;  // CSV already written
      return;
    }
    std::ofstream f(out_path);
    if (!f) throw InputError("cannot write '" + out_path + "'");
    write_sampled_map_csv(f, *map);
    result = json::object();
    result["kind"] = kind;
    result["group"] = map->model()->algebra().name();
    result["nodes"] = map->node_count();
    result["out"] = out_path;
  });

  auto fail = [&](int exit_code, const std::string& type, const std::string& msg) {
    err << "carnot: " << msg << "\n";
    json e = {{"error", type}, {"message", msg}};
    out << e.dump() << "\n";
    return exit_code;
  };

  std::vector<const char*> argv;
  argv.push_back("carnot");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail(kExitInput, "usage", e.what());
  } catch (const ValidationFailed& v) {
    err << "carnot: structural constants fail validation\n";
    out << (g.pretty ? v.report.dump(2) : v.report.dump()) << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    return fail(kExitInput, "parse", e.what());
  } catch (const InputError& e) {
    return fail(kExitInput, "input", e.what());
  } catch (const UnsupportedError& e) {
    return fail(kExitInput, "unsupported", e.what());
  } catch (const BoundaryError& e) {
    return fail(kExitInput, "boundary", e.what());
  } catch (const NumericError& e) {
    return fail(kExitUnconverged, "numeric", e.what());
  } catch (const Error& e) {
    return fail(kExitInput, "error", e.what());
  } catch (const std::exception& e) {
    return fail(kExitInput, "error", e.what());
  }
  if (code == -1) return kExitOk;
  out << (g.pretty ? result.dump(2) : result.dump()) << "\n";
  return code;
}

}  // namespace carnot
