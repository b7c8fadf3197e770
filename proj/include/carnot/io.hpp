#pragma once

// Config files, element and report serialisation, sampled-map CSV.
//
// Configs are TOML or JSON. The TOML reader covers the subset configs need:
// comments, [tables] and [dotted.tables], bare/quoted keys, strings, integers,
// floats, booleans, (nested, multi-line) arrays and inline tables.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "carnot/contact_analysis.hpp"
#include "carnot/group_models.hpp"
#include "carnot/lie_core.hpp"

namespace carnot {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// TOML subset

namespace detail {

class TomlReader {
 public:
  explicit TomlReader(std::string text) : s_(std::move(text)) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_ws_comments_newlines();
      if (eof()) break;
      if (peek() == '[') {
        ++pos_;
        if (peek() == '[') fail("arrays of tables are not supported");
        skip_inline_ws();
        const auto path = parse_key_path();
        skip_inline_ws();
        expect(']');
        table = &root;
        for (const auto& k : path) {
          json& next = (*table)[k];
          if (next.is_null()) next = json::object();
          if (!next.is_object()) fail("key '" + k + "' is not a table");
          table = &next;
        }
        end_of_line();
        continue;
      }
      const auto path = parse_key_path();
      skip_inline_ws();
      expect('=');
      skip_inline_ws();
      json value = parse_value();
      json* target = table;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        json& next = (*target)[path[i]];
        if (next.is_null()) next = json::object();
        if (!next.is_object()) fail("key '" + path[i] + "' is not a table");
        target = &next;
      }
      if (target->contains(path.back())) fail("duplicate key '" + path.back() + "'");
      (*target)[path.back()] = std::move(value);
      end_of_line();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i)
      if (s_[i] == '\n') ++line;
    throw ParseError("line " + std::to_string(line) + ": " + msg);
  }
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void skip_inline_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++pos_;
  }
  void skip_ws_comments_newlines() {
    while (!eof()) {
      skip_inline_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        ++pos_;
        continue;
      }
      break;
    }
  }
  void end_of_line() {
    skip_inline_ws();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (!eof() && peek() != '\n') fail("unexpected trailing characters");
  }

  std::vector<std::string> parse_key_path() {
    std::vector<std::string> path;
    while (true) {
      skip_inline_ws();
      if (peek() == '"' || peek() == '\'') {
        path.push_back(parse_string());
      } else {
        const std::size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) ++pos_;
        if (pos_ == start) fail("expected a key");
        path.push_back(s_.substr(start, pos_ - start));
      }
      skip_inline_ws();
      if (peek() != '.') break;
      ++pos_;
    }
    return path;
  }

  std::string parse_string() {
    const char quote = peek();
    ++pos_;
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = s_[pos_++];
      if (c == quote) break;
      if (c == '\\' && quote == '"') {
        const char e = s_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
        continue;
      }
      out += c;
    }
    return out;
  }

  json parse_value() {
    const char c = peek();
    if (c == '"' || c == '\'') return parse_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    const std::size_t start = pos_;
    while (!eof() && peek() != ',' && peek() != ']' && peek() != '}' && peek() != '#' && peek() != '\n' &&
           peek() != '\r' && peek() != ' ' && peek() != '\t')
      ++pos_;
    std::string tok = s_.substr(start, pos_ - start);
    if (tok.empty()) fail("expected a value");
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::string clean;
    for (char ch : tok)
      if (ch != '_') clean += ch;
    const bool is_float = clean.find_first_of(".eE") != std::string::npos || clean == "inf" || clean == "nan";
    if (!is_float) {
      std::int64_t v = 0;
      const char* b = clean.data() + (clean[0] == '+' ? 1 : 0);
      auto [p, ec] = std::from_chars(b, clean.data() + clean.size(), v);
      if (ec == std::errc{} && p == clean.data() + clean.size()) return v;
      fail("invalid value '" + tok + "'");
    }
    try {
      std::size_t used = 0;
      const double d = std::stod(clean, &used);
      if (used != clean.size()) fail("invalid number '" + tok + "'");
      return d;
    } catch (const std::logic_error&) {
      fail("invalid number '" + tok + "'");
    }
  }

  json parse_array() {
    expect('[');
    json arr = json::array();
    while (true) {
      skip_ws_comments_newlines();
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      arr.push_back(parse_value());
      skip_ws_comments_newlines();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      fail("expected ',' or ']' in array");
    }
  }

  json parse_inline_table() {
    expect('{');
    json obj = json::object();
    skip_inline_ws();
    if (peek() == '}') {
      ++pos_;
      return obj;
    }
    while (true) {
      const auto path = parse_key_path();
      skip_inline_ws();
      expect('=');
      skip_inline_ws();
      json* target = &obj;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) target = &(*target)[path[i]];
      (*target)[path.back()] = parse_value();
      skip_inline_ws();
      if (peek() == ',') {
        ++pos_;
        skip_inline_ws();
        continue;
      }
      expect('}');
      return obj;
    }
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline json parse_toml(const std::string& text) { return detail::TomlReader(text).parse(); }

// ---------------------------------------------------------------------------
// group configs

struct GroupConfig {
  std::string builtin_name;  // empty for explicit constants
  std::vector<int> builtin_params;
  std::vector<int> layer_dims;
  std::vector<StructureTriple> triples;
  std::vector<std::string> labels;
  std::string name = "custom";
  ModelKind model = ModelKind::FirstKind;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
};

namespace detail {

[[noreturn]] inline void field_error(const std::string& field, const std::string& msg) {
  throw ParseError("field '" + field + "': " + msg);
}

inline int json_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) field_error(field, "expected an integer");
  return v.get<int>();
}

/// Number, or a string "p/q" / "p" kept exactly.
inline Coefficient json_coefficient(const json& v, const std::string& field) {
  if (v.is_string()) {
    try {
      return Coefficient(Rational::parse(v.get<std::string>()));
    } catch (const Error& e) {
      field_error(field, e.what());
    }
  }
  if (v.is_number_integer()) return Coefficient(Rational(v.get<std::int64_t>()));
  if (v.is_number()) return Coefficient(v.get<double>());
  field_error(field, "expected a number or a \"p/q\" string");
}

}  // namespace detail

inline GroupConfig config_from_json(const json& doc) {
  using detail::field_error;
  if (!doc.is_object()) throw ParseError("config must be a table/object");
  GroupConfig cfg;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) field_error("name", "expected a string");
    cfg.name = doc["name"].get<std::string>();
  }
  if (doc.contains("model")) {
    if (!doc["model"].is_string()) field_error("model", "expected a string");
    try {
      cfg.model = model_kind_from_string(doc["model"].get<std::string>());
    } catch (const InputError& e) {
      field_error("model", e.what());
    }
  }
  if (doc.contains("tolerance")) {
    if (!doc["tolerance"].is_number() || !(doc["tolerance"].get<double>() > 0.0))
      field_error("tolerance", "expected a positive number");
    cfg.tolerance = doc["tolerance"].get<double>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() || doc["seed"].get<std::int64_t>() < 0)
      field_error("seed", "expected a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }

  if (doc.contains("builtin")) {
    const json& b = doc["builtin"];
    if (b.is_string()) {
      cfg.builtin_name = b.get<std::string>();
    } else if (b.is_object()) {
      if (!b.contains("name") || !b["name"].is_string()) field_error("builtin.name", "expected a string");
      cfg.builtin_name = b["name"].get<std::string>();
      if (b.contains("params")) {
        if (!b["params"].is_array()) field_error("builtin.params", "expected an array of integers");
        for (std::size_t i = 0; i < b["params"].size(); ++i)
          cfg.builtin_params.push_back(detail::json_int(b["params"][i], "builtin.params[" + std::to_string(i) + "]"));
      }
    } else {
      field_error("builtin", "expected a table with name/params");
    }
    return cfg;
  }

  if (!doc.contains("layer_dims")) throw ParseError("config needs either 'builtin' or 'layer_dims' + 'triples'");
  const json& ld = doc["layer_dims"];
  if (!ld.is_array() || ld.empty()) field_error("layer_dims", "expected a non-empty array of positive integers");
  for (std::size_t i = 0; i < ld.size(); ++i) {
    const int d = detail::json_int(ld[i], "layer_dims[" + std::to_string(i) + "]");
    if (d <= 0) field_error("layer_dims[" + std::to_string(i) + "]", "layer dimension must be positive");
    cfg.layer_dims.push_back(d);
  }
  if (doc.contains("step")) {
    const int step = detail::json_int(doc["step"], "step");
    if (step != static_cast<int>(cfg.layer_dims.size())) {
      field_error("step", "step " + std::to_string(step) + " disagrees with " + std::to_string(cfg.layer_dims.size()) +
                              " layer_dims entries");
    }
  }
  if (doc.contains("triples")) {
    const json& tr = doc["triples"];
    if (!tr.is_array()) field_error("triples", "expected an array of [i, j, k, value]");
    for (std::size_t t = 0; t < tr.size(); ++t) {
      const std::string f = "triples[" + std::to_string(t) + "]";
      if (!tr[t].is_array() || tr[t].size() != 4) field_error(f, "expected [i, j, k, value]");
      StructureTriple st{detail::json_int(tr[t][0], f + "[0]"), detail::json_int(tr[t][1], f + "[1]"),
                         detail::json_int(tr[t][2], f + "[2]"), detail::json_coefficient(tr[t][3], f + "[3]")};
      cfg.triples.push_back(st);
    }
  }
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array()) field_error("labels", "expected an array of strings");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) field_error("labels", "expected an array of strings");
      cfg.labels.push_back(l.get<std::string>());
    }
  }
  return cfg;
}

inline json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  if (is_json) {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  try {
    return parse_toml(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline GroupConfig load_config(const std::string& path) {
  try {
    return config_from_json(read_document(path));
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw ParseError(path + ": " + msg);
  }
}

/// Builds the algebra; does not validate it.
inline AlgebraPtr build_algebra(const GroupConfig& cfg) {
  if (!cfg.builtin_name.empty()) return builtin(cfg.builtin_name, cfg.builtin_params);
  return StratifiedAlgebra::from_triples(cfg.layer_dims, cfg.triples, cfg.name, cfg.labels);
}

/// "jet(2)", "heisenberg(1)", "abelian(3)", "free_nilpotent(3,2)" -> (name, params).
inline std::pair<std::string, std::vector<int>> parse_builtin_label(const std::string& label) {
  const auto open = label.find('(');
  if (open == std::string::npos || label.back() != ')') throw ParseError("not a builtin label: '" + label + "'");
  std::vector<int> params;
  std::stringstream ss(label.substr(open + 1, label.size() - open - 2));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    try {
      params.push_back(std::stoi(tok, &used));
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw ParseError("bad builtin parameter '" + tok + "' in '" + label + "'");
  }
  return {label.substr(0, open), params};
}

inline AlgebraPtr builtin_from_label(const std::string& label) {
  const auto [name, params] = parse_builtin_label(label);
  return builtin(name, params);
}

/// Structural constants as "p/q" strings when exact, shortest round-trip floats otherwise.
inline json algebra_to_json(const StratifiedAlgebra& g) {
  json doc;
  doc["name"] = g.name();
  doc["step"] = g.step();
  doc["layer_dims"] = g.layer_dims();
  json tr = json::array();
  for (const auto& t : g.upper_triples()) {
    json v = !t.value.exact ? json(t.value.value)
             : t.value.exact->den() == 1 ? json(t.value.exact->num())
                                        : json(t.value.exact->str());
    tr.push_back(json::array({t.i, t.j, t.k, v}));
  }
  doc["triples"] = tr;
  if (!g.labels().empty()) doc["labels"] = g.labels();
  return doc;
}

namespace detail {
inline std::string toml_scalar(const json& v) {
  if (v.is_string()) return json(v.get<std::string>()).dump();
  return v.dump();
}
}  // namespace detail

inline std::string algebra_to_toml(const StratifiedAlgebra& g, ModelKind model = ModelKind::FirstKind) {
  const json doc = algebra_to_json(g);
  std::ostringstream os;
  os << "name = " << detail::toml_scalar(doc["name"]) << "\n";
  os << "model = \"" << to_string(model) << "\"\n";
  os << "step = " << g.step() << "\n";
  os << "layer_dims = " << doc["layer_dims"].dump() << "\n";
  if (doc.contains("labels")) os << "labels = " << doc["labels"].dump() << "\n";
  os << "triples = [\n";
  for (const auto& t : doc["triples"]) {
    os << "  [" << t[0].dump() << ", " << t[1].dump() << ", " << t[2].dump() << ", " << detail::toml_scalar(t[3])
       << "],\n";
  }
  os << "]\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// elements and reports

/// "1,2.5,-3" -> vector.
inline Vector parse_coords(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::logic_error&) {
      throw ParseError("not a number: '" + tok + "' in '" + text + "'");
    }
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
    if (used != tok.size()) throw ParseError("not a number: '" + tok + "' in '" + text + "'");
    vals.push_back(v);
  }
  if (vals.empty()) throw ParseError("empty coordinate list");
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

inline json vector_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline json matrix_to_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vector_to_json(m.row(i).transpose()));
  return a;
}

inline json element_to_json(const GroupElement& a) {
  json j;
  j["model"] = to_string(a.kind());
  j["algebra"] = a.algebra().name();
  j["coords"] = vector_to_json(a.coords());
  return j;
}

inline GroupElement element_from_json(const json& j, const ModelPtr& model) {
  if (!j.is_object() || !j.contains("coords") || !j["coords"].is_array()) {
    throw ParseError("element must be an object with a 'coords' array");
  }
  if (j.contains("model") && model_kind_from_string(j["model"].get<std::string>()) != model->kind()) {
    throw InputError("element is tagged '" + j["model"].get<std::string>() + "' but the model is '" +
                     to_string(model->kind()) + "'");
  }
  Vector v(static_cast<Eigen::Index>(j["coords"].size()));
  for (std::size_t i = 0; i < j["coords"].size(); ++i) {
    if (!j["coords"][i].is_number()) throw ParseError("element coordinate " + std::to_string(i) + " is not a number");
    v[static_cast<Eigen::Index>(i)] = j["coords"][i].get<double>();
  }
  return {model, v};
}

inline json validation_to_json(const ValidationReport& rep) {
  json j;
  j["passed"] = rep.passed();
  j["tolerance"] = rep.tolerance;
  j["worst_residual"] = rep.worst_residual();
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    cj["worst_residual"] = c.worst_residual;
    json off = json::array();
    for (const auto& t : c.offenders) off.push_back(json::array({t[0], t[1], t[2]}));
    cj["offenders"] = off;
    if (!c.detail.empty()) cj["detail"] = c.detail;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  return j;
}

// ---------------------------------------------------------------------------
// sampled maps as CSV
//
//   # group=jet(2)
//   # model=jet
//   # lower=-2,-2
//   # h=0.1,0.1
//   i1,i2,x1,x2,x3,x4
//   0,0,0,-2,-2,0
//   ...

inline void write_sampled_map_csv(std::ostream& os, const SampledMap& map) {
  const auto& m = *map.model();
  auto list = [](const Vector& v) {
    std::ostringstream s;
    s.precision(17);
    for (Eigen::Index i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
    return s.str();
  };
  os << "# group=" << m.algebra().name() << "\n";
  os << "# model=" << to_string(m.kind()) << "\n";
  os << "# lower=" << list(map.lower()) << "\n";
  os << "# h=" << list(map.spacing()) << "\n";
  for (int a = 1; a <= map.domain_dim(); ++a) os << "i" << a << ",";
  for (int i = 1; i <= m.dim(); ++i) os << "x" << i << (i < m.dim() ? "," : "\n");
  os.precision(17);
  for (std::size_t f = 0; f < map.node_count(); ++f) {
    for (int idx : map.index(f)) os << idx << ",";
    const Vector& v = map.values()[f];
    for (int i = 0; i < m.dim(); ++i) os << v[i] << (i + 1 < m.dim() ? "," : "\n");
  }
}

struct CsvMapOverrides {
  ModelPtr model;                 // required unless the file names a builtin group
  std::optional<Vector> h;        // grid spacing
  std::optional<Vector> lower;
};

inline SampledMap read_sampled_map_csv(std::istream& is, const CsvMapOverrides& ov = {}) {
  std::map<std::string, std::string> meta;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  std::vector<std::vector<double>> rows;
  std::size_t columns = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        key.erase(0, key.find_first_not_of(' '));
        meta[key] = line.substr(eq + 1);
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
      if (std::isalpha(static_cast<unsigned char>(line[0]))) continue;  // column names
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        row.push_back(std::stod(tok));
      } catch (const std::logic_error&) {
        throw ParseError("csv line " + std::to_string(lineno) + ": not a number '" + tok + "'");
      }
    }
    if (row.size() != columns) {
      throw ParseError("csv line " + std::to_string(lineno) + ": expected " + std::to_string(columns) + " fields, got " +
                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("csv has no data rows");

  ModelPtr model = ov.model;
  if (!model) {
    if (!meta.count("group")) throw ParseError("csv does not name its group; pass a config");
    const ModelKind kind = meta.count("model") ? model_kind_from_string(meta["model"]) : ModelKind::FirstKind;
    model = make_model(builtin_from_label(meta["group"]), kind);
  }
  const int n = model->dim();
  if (static_cast<int>(columns) <= n) throw ParseError("csv has too few columns for a group of dimension " + std::to_string(n));
  const int k = static_cast<int>(columns) - n;

  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (const auto& r : rows)
    for (int a = 0; a < k; ++a) {
      const double idx = r[static_cast<std::size_t>(a)];
      if (idx < 0 || idx != std::floor(idx)) throw ParseError("csv grid index must be a non-negative integer");
      counts[static_cast<std::size_t>(a)] = std::max(counts[static_cast<std::size_t>(a)], static_cast<int>(idx) + 1);
    }

  auto meta_vector = [&](const std::string& key) -> std::optional<Vector> {
    if (!meta.count(key)) return std::nullopt;
    return parse_coords(meta[key]);
  };
  std::optional<Vector> h = ov.h ? ov.h : meta_vector("h");
  std::optional<Vector> lower = ov.lower ? ov.lower : meta_vector("lower");
  if (!h) throw ParseError("csv has no grid spacing; pass --h");
  if (h->size() == 1 && k > 1) h = Vector::Constant(k, (*h)[0]);
  if (h->size() != k) throw ParseError("grid spacing has " + std::to_string(h->size()) + " entries for " + std::to_string(k) + " axes");
  if (!lower) lower = Vector::Zero(k);

  std::size_t total = 1;
  for (int c : counts) total *= static_cast<std::size_t>(c);
  if (rows.size() != total) {
    throw ParseError("csv grid is incomplete: " + std::to_string(rows.size()) + " rows for " + std::to_string(total) +
                     " nodes");
  }
  std::vector<Vector> values(total);
  std::vector<char> seen(total, 0);
  SampledMap shape(model, counts, *lower, *h, std::vector<Vector>(total, Vector::Zero(n)));
  for (const auto& r : rows) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) idx[static_cast<std::size_t>(a)] = static_cast<int>(r[static_cast<std::size_t>(a)]);
    const std::size_t f = shape.flat(idx);
    if (seen[f]) throw ParseError("csv lists a grid node twice");
    seen[f] = 1;
    values[f] = Eigen::Map<const Vector>(r.data() + k, n);
  }
  return {model, counts, *lower, *h, std::move(values)};
}

}  // namespace carnot
