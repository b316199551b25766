#pragma once

// Reader and writer for scenario files.
//
// The format is a small TOML subset: `key = value` pairs, `[table]` and
// `[[array-of-tables]]` headers, `#` comments, and single-line values
// (integers, floats, "strings", booleans, and possibly nested arrays).
// Sections: [echelons], [simulation], [economics], [[node]], [[route]],
// [[demand]]. `save_scenario` writes the schema with units in comments.

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "echelon/scenario.hpp"

namespace echelon {

class ParseError : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

namespace toml {

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::int64_t, double, std::string, bool, Array> data;
};

struct Table {
  std::vector<std::pair<std::string, Value>> entries;
  int line = 0;

  const Value* find(std::string_view key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return &v;
    return nullptr;
  }
};

struct Document {
  Table root;
  std::map<std::string, Table> tables;
  std::map<std::string, std::vector<Table>> arrays;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::string_view strip_comment(std::string_view s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

class ValueParser {
 public:
  ValueParser(std::string_view text, int line, std::string key) : text_(text), line_(line), key_(std::move(key)) {}

  Value parse_all() {
    Value v = parse();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters after value");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("line " + std::to_string(line_) + ": key '" + key_ + "': " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  Value parse() {
    skip_ws();
    if (pos_ >= text_.size()) fail("missing value");
    const char c = text_[pos_];
    if (c == '[') return parse_array();
    if (c == '"') return parse_string();
    return parse_scalar();
  }

  Value parse_array() {
    ++pos_;
    Array items;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return Value{std::move(items)};
    }
    for (;;) {
      items.push_back(parse());
      skip_ws();
      if (pos_ >= text_.size()) fail("unterminated array");
      if (text_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ']') {
          ++pos_;
          break;
        }
        continue;
      }
      if (text_[pos_] == ']') {
        ++pos_;
        break;
      }
      fail("expected ',' or ']' in array");
    }
    return Value{std::move(items)};
  }

  Value parse_string() {
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out.push_back(text_[pos_++]);
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    return Value{std::move(out)};
  }

  Value parse_scalar() {
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != ',' && text_[end] != ']' && text_[end] != ' ' && text_[end] != '\t')
      ++end;
    const std::string_view tok = text_.substr(pos_, end - pos_);
    pos_ = end;
    if (tok == "true") return Value{true};
    if (tok == "false") return Value{false};
    const bool is_float = tok.find_first_of(".eEni") != std::string_view::npos;
    std::string_view digits = tok;
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    if (is_float) {
      double d = 0.0;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
      if (ec != std::errc() || p != digits.data() + digits.size()) fail("malformed number '" + std::string(tok) + "'");
      return Value{d};
    }
    std::int64_t i = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), i);
    if (ec != std::errc() || p != digits.data() + digits.size()) fail("malformed value '" + std::string(tok) + "'");
    return Value{i};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
  std::string key_;
};

inline bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

}  // namespace detail

inline Document parse(std::istream& in) {
  Document doc;
  Table* current = &doc.root;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    if (line.starts_with("[[")) {
      if (!line.ends_with("]]")) throw ParseError("line " + std::to_string(line_no) + ": malformed array-of-tables header");
      const std::string name(detail::trim(line.substr(2, line.size() - 4)));
      auto& vec = doc.arrays[name];
      vec.emplace_back();
      vec.back().line = line_no;
      current = &vec.back();
      continue;
    }
    if (line.starts_with("[")) {
      if (!line.ends_with("]")) throw ParseError("line " + std::to_string(line_no) + ": malformed table header");
      const std::string name(detail::trim(line.substr(1, line.size() - 2)));
      if (doc.tables.count(name)) throw ParseError("line " + std::to_string(line_no) + ": duplicate table [" + name + "]");
      current = &doc.tables[name];
      current->line = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    if (!detail::valid_key(key)) throw ParseError("line " + std::to_string(line_no) + ": invalid key '" + key + "'");
    if (current->find(key)) throw ParseError("line " + std::to_string(line_no) + ": key '" + key + "': duplicate key");
    detail::ValueParser vp(detail::trim(line.substr(eq + 1)), line_no, key);
    current->entries.emplace_back(key, vp.parse_all());
  }
  return doc;
}

}  // namespace toml

// ---------------------------------------------------------------------------

namespace detail {

class TableReader {
 public:
  TableReader(const toml::Table& t, std::string path) : table_(t), path_(std::move(path)) {}

  bool has(std::string_view key) const { return table_.find(key) != nullptr; }

  std::int64_t integer(std::string_view key) const {
    const toml::Value& v = require(key);
    if (auto p = std::get_if<std::int64_t>(&v.data)) return *p;
    fail(key, "expected an integer");
  }

  double real(std::string_view key) const { return as_real(require(key), key); }

  std::optional<double> optional_real(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return real(key);
  }

  std::string string(std::string_view key) const {
    const toml::Value& v = require(key);
    if (auto p = std::get_if<std::string>(&v.data)) return *p;
    fail(key, "expected a string");
  }

  std::vector<NodeId> ids(std::string_view key) const { return as_ids(require(key), key); }

  std::vector<std::vector<NodeId>> id_lists(std::string_view key) const {
    const toml::Value& v = require(key);
    const auto* arr = std::get_if<toml::Array>(&v.data);
    if (!arr) fail(key, "expected an array of arrays");
    std::vector<std::vector<NodeId>> out;
    for (const auto& inner : *arr) out.push_back(as_ids(inner, key));
    return out;
  }

  std::vector<double> reals(std::string_view key) const {
    const toml::Value& v = require(key);
    const auto* arr = std::get_if<toml::Array>(&v.data);
    if (!arr) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : *arr) out.push_back(as_real(x, key));
    return out;
  }

  void reject_unknown(std::initializer_list<std::string_view> known) const {
    for (const auto& [k, v] : table_.entries) {
      bool ok = false;
      for (auto kk : known) ok = ok || kk == k;
      if (!ok) fail(k, "unknown key");
    }
  }

 private:
  [[noreturn]] void fail(std::string_view key, const std::string& what) const {
    throw ParseError(path_ + "." + std::string(key) + ": " + what + " (table at line " + std::to_string(table_.line) + ")");
  }

  const toml::Value& require(std::string_view key) const {
    const toml::Value* v = table_.find(key);
    if (!v) fail(key, "missing required key");
    return *v;
  }

  double as_real(const toml::Value& v, std::string_view key) const {
    if (auto p = std::get_if<double>(&v.data)) return *p;
    if (auto p = std::get_if<std::int64_t>(&v.data)) return static_cast<double>(*p);
    fail(key, "expected a number");
  }

  std::vector<NodeId> as_ids(const toml::Value& v, std::string_view key) const {
    const auto* arr = std::get_if<toml::Array>(&v.data);
    if (!arr) fail(key, "expected an array of node ids");
    std::vector<NodeId> out;
    for (const auto& x : *arr) {
      auto p = std::get_if<std::int64_t>(&x.data);
      if (!p) fail(key, "node ids must be integers");
      out.push_back(static_cast<NodeId>(*p));
    }
    return out;
  }

  const toml::Table& table_;
  std::string path_;
};

inline std::string format_real(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, p);
  if (s.find_first_of(".eni") == std::string::npos) s += ".0";
  return s;
}

template <class T>
std::string format_list(const std::vector<T>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_floating_point_v<T>) s += format_real(xs[i]);
    else s += std::to_string(xs[i]);
  }
  return s + "]";
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace detail

/// Builds a config from a parsed document without validating it.
inline ScenarioConfig scenario_from_document(const toml::Document& doc) {
  using detail::TableReader;
  ScenarioConfig cfg;
  TableReader root(doc.root, "root");
  root.reject_unknown({"name"});
  cfg.name = root.has("name") ? root.string("name") : "";

  auto table = [&](const std::string& name) -> const toml::Table& {
    auto it = doc.tables.find(name);
    if (it == doc.tables.end()) throw ParseError("missing table [" + name + "]");
    return it->second;
  };
  for (const auto& [name, t] : doc.tables)
    if (name != "echelons" && name != "simulation" && name != "economics")
      throw ParseError("unknown table [" + name + "]");
  for (const auto& [name, t] : doc.arrays)
    if (name != "node" && name != "route" && name != "demand") throw ParseError("unknown table [[" + name + "]]");

  TableReader ech(table("echelons"), "echelons");
  ech.reject_unknown({"suppliers", "manufacturers", "warehouses", "distribution_centres", "retailers", "markets"});
  cfg.echelons.suppliers = ech.ids("suppliers");
  cfg.echelons.manufacturers = ech.ids("manufacturers");
  if (ech.has("warehouses")) cfg.echelons.warehouses_by_level = ech.id_lists("warehouses");
  if (ech.has("distribution_centres")) cfg.echelons.distribution_centres = ech.ids("distribution_centres");
  cfg.echelons.retailers = ech.ids("retailers");
  cfg.echelons.markets = ech.ids("markets");

  TableReader sim(table("simulation"), "simulation");
  sim.reject_unknown({"horizon", "lead_time", "capacity", "big_m"});
  cfg.horizon = static_cast<int>(sim.integer("horizon"));
  cfg.lead_time = static_cast<int>(sim.integer("lead_time"));
  cfg.capacity = sim.integer("capacity");
  cfg.big_m = sim.real("big_m");

  TableReader eco(table("economics"), "economics");
  eco.reject_unknown({"prices", "reference_point"});
  const auto prices = eco.reals("prices");
  if (prices.size() > cfg.echelons.retailers.size())
    throw ParseError("economics.prices: more prices than retailers");
  for (std::size_t k = 0; k < prices.size(); ++k) cfg.prices[cfg.echelons.retailers[k]] = prices[k];
  const auto ref = eco.reals("reference_point");
  if (ref.size() != kNumObjectives) throw ParseError("economics.reference_point: expected 3 values");
  cfg.reference_point = ObjectiveVector::from_point(ref);

  if (auto it = doc.arrays.find("node"); it != doc.arrays.end()) {
    for (const auto& t : it->second) {
      TableReader r(t, "node");
      r.reject_unknown({"id", "initial_inventory", "holding_cost", "holding_emission", "production_cost", "yield_ratio",
                        "production_emission"});
      const auto id = static_cast<NodeId>(r.integer("id"));
      NodeParams p;
      p.initial_inventory = r.integer("initial_inventory");
      p.holding_cost = r.real("holding_cost");
      p.holding_emission = r.real("holding_emission");
      p.production_cost = r.optional_real("production_cost");
      p.yield_ratio = r.optional_real("yield_ratio");
      p.production_emission = r.optional_real("production_emission");
      if (!cfg.nodes.emplace(id, p).second) throw ParseError("node: duplicate id " + std::to_string(id));
    }
  }
  if (auto it = doc.arrays.find("route"); it != doc.arrays.end()) {
    for (const auto& t : it->second) {
      TableReader r(t, "route");
      r.reject_unknown({"from", "to", "transport_cost", "transport_emission"});
      cfg.routes.push_back({static_cast<NodeId>(r.integer("from")), static_cast<NodeId>(r.integer("to")),
                            r.real("transport_cost"), r.real("transport_emission")});
    }
  }
  if (auto it = doc.arrays.find("demand"); it != doc.arrays.end()) {
    for (const auto& t : it->second) {
      TableReader r(t, "demand");
      r.reject_unknown({"market", "distribution", "mean", "std_dev", "rate", "seasonal_amplitude", "seasonal_period"});
      const auto market = static_cast<NodeId>(r.integer("market"));
      DemandSpec d;
      const std::string kind = r.string("distribution");
      if (kind == "normal") {
        d.kind = DemandSpec::Kind::normal;
        d.mean = r.real("mean");
        d.std_dev = r.real("std_dev");
      } else if (kind == "poisson") {
        d.kind = DemandSpec::Kind::poisson;
        d.rate = r.real("rate");
      } else {
        throw ParseError("demand.distribution: expected \"normal\" or \"poisson\", got \"" + kind + "\"");
      }
      d.seasonal_amplitude = r.has("seasonal_amplitude") ? r.real("seasonal_amplitude") : 0.5;
      d.seasonal_period = r.has("seasonal_period") ? static_cast<int>(r.integer("seasonal_period")) : cfg.horizon;
      if (!cfg.demands.emplace(market, d).second) throw ParseError("demand: duplicate market " + std::to_string(market));
    }
  }
  return cfg;
}

/// Parses scenario text; throws ParseError on malformed input and
/// ValidationError when the parsed config breaks an invariant.
inline ScenarioConfig parse_scenario(std::istream& in) {
  ScenarioConfig cfg = scenario_from_document(toml::parse(in));
  require_valid(cfg);
  return cfg;
}

inline ScenarioConfig parse_scenario(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  return parse_scenario(in);
}

/// Accepts a builtin name (simple, moderate, complex) or a file path.
inline ScenarioConfig resolve_scenario(const std::string& name_or_path) {
  if (parse_builtin(name_or_path)) return builtin_scenario(name_or_path);
  return load_scenario(name_or_path);
}

inline void write_scenario(std::ostream& os, const ScenarioConfig& cfg) {
  using detail::format_list;
  using detail::format_real;
  using detail::pad;
  const auto& e = cfg.echelons;
  os << "# Supply-chain scenario. Units are given in the trailing comments.\n";
  os << "name = \"" << cfg.name << "\"\n\n";

  os << "[echelons]\n";
  os << pad("suppliers = " + format_list(e.suppliers), 40) << "# node ids\n";
  os << "manufacturers = " << format_list(e.manufacturers) << '\n';
  std::string levels = "[";
  for (std::size_t k = 0; k < e.warehouses_by_level.size(); ++k) {
    if (k) levels += ", ";
    levels += format_list(e.warehouses_by_level[k]);
  }
  levels += "]";
  os << pad("warehouses = " + levels, 40) << "# one list per warehouse level, upstream first\n";
  os << "distribution_centres = " << format_list(e.distribution_centres) << '\n';
  os << "retailers = " << format_list(e.retailers) << '\n';
  os << pad("markets = " + format_list(e.markets), 40) << "# paired positionally with retailers\n\n";

  os << "[simulation]\n";
  os << pad("horizon = " + std::to_string(cfg.horizon), 40) << "# periods\n";
  os << pad("lead_time = " + std::to_string(cfg.lead_time), 40) << "# periods from dispatch to arrival\n";
  os << pad("capacity = " + std::to_string(cfg.capacity), 40) << "# units per route per period\n";
  os << pad("big_m = " + format_real(cfg.big_m), 40) << "# penalty per unit of negative inventory\n\n";

  os << "[economics]\n";
  std::vector<double> prices;
  for (NodeId r : e.retailers) {
    auto it = cfg.prices.find(r);
    prices.push_back(it == cfg.prices.end() ? 0.0 : it->second);
  }
  os << pad("prices = " + format_list(prices), 40) << "# currency/unit, one per retailer in order\n";
  os << pad("reference_point = " + format_list(cfg.reference_point.to_point()), 40)
     << "# hypervolume reference (profit, -emission, -SL inequality)\n";

  for (const auto& [id, p] : cfg.nodes) {
    os << "\n[[node]]\n";
    os << "id = " << id << '\n';
    os << pad("initial_inventory = " + std::to_string(p.initial_inventory), 40) << "# units\n";
    os << pad("holding_cost = " + format_real(p.holding_cost), 40) << "# currency/unit/period\n";
    os << pad("holding_emission = " + format_real(p.holding_emission), 40) << "# emission/unit/period\n";
    if (p.production_cost)
      os << pad("production_cost = " + format_real(*p.production_cost), 40) << "# currency/unit\n";
    if (p.yield_ratio) os << pad("yield_ratio = " + format_real(*p.yield_ratio), 40) << "# dimensionless, (0, 1]\n";
    if (p.production_emission)
      os << pad("production_emission = " + format_real(*p.production_emission), 40) << "# emission/unit\n";
  }
  for (const auto& r : cfg.routes) {
    os << "\n[[route]]\n";
    os << "from = " << r.from << '\n';
    os << "to = " << r.to << '\n';
    os << pad("transport_cost = " + format_real(r.transport_cost), 40) << "# currency/unit/period in transit\n";
    os << pad("transport_emission = " + format_real(r.transport_emission), 40) << "# emission/unit/period in transit\n";
  }
  for (const auto& [m, d] : cfg.demands) {
    os << "\n[[demand]]\n";
    os << "market = " << m << '\n';
    if (d.kind == DemandSpec::Kind::normal) {
      os << "distribution = \"normal\"\n";
      os << pad("mean = " + format_real(d.mean), 40) << "# units/period\n";
      os << pad("std_dev = " + format_real(d.std_dev), 40) << "# units/period\n";
    } else {
      os << "distribution = \"poisson\"\n";
      os << pad("rate = " + format_real(d.rate), 40) << "# units/period\n";
    }
    os << pad("seasonal_amplitude = " + format_real(d.seasonal_amplitude), 40) << "# demand x (1 + a sin(2 pi t / P))\n";
    os << pad("seasonal_period = " + std::to_string(d.seasonal_period), 40) << "# periods\n";
  }
}

inline std::string scenario_to_string(const ScenarioConfig& cfg) {
  std::ostringstream os;
  write_scenario(os, cfg);
  return os.str();
}

inline void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write scenario file '" + path + "'");
  write_scenario(out, cfg);
}

}  // namespace echelon
