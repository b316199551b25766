#pragma once

// CSV tables, front files, episode logs and policy snapshots.

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "echelon/env.hpp"
#include "echelon/pareto.hpp"

namespace echelon {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double x) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw IoError("cannot format number");
  return {buf.data(), end};
}

inline std::string format_optional(const std::optional<double>& x) { return x ? format_double(*x) : std::string{}; }

inline double parse_double(std::string_view s) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) throw IoError("not a number: '" + std::string(s) + "'");
  return v;
}

inline std::optional<double> parse_optional(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

/// A header plus rows of raw fields. Fields never contain commas or quotes here.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw IoError("missing column '" + std::string(name) + "'");
  }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (first) {
      t.header = std::move(fields);
      first = false;
      continue;
    }
    if (fields.size() != t.header.size())
      throw IoError("row has " + std::to_string(fields.size()) + " fields, header has " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(fields));
  }
  if (first) throw IoError("empty CSV");
  return t;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_csv(in);
}

inline void write_csv(std::ostream& os, const CsvTable& t) {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << fields[i];
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

inline void write_csv(const std::filesystem::path& path, const CsvTable& t) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  write_csv(os, t);
}

// ---------------------------------------------------------------------------
// Fronts: profit, neg_emission, neg_sl_inequality, solution_id

inline CsvTable front_table(const Front& f) {
  CsvTable t{{"profit", "neg_emission", "neg_sl_inequality", "solution_id"}, {}};
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<std::string> row;
    for (double v : f.points[i]) row.push_back(format_double(v));
    row.push_back(std::to_string(f.ids[i]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline void write_front(const std::filesystem::path& path, const Front& f) { write_csv(path, front_table(f)); }

inline Front front_from_table(const CsvTable& t) {
  const std::size_t cols[] = {t.column("profit"), t.column("neg_emission"), t.column("neg_sl_inequality")};
  std::optional<std::size_t> id_col;
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == "solution_id") id_col = i;
  Front f;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    Point p;
    for (std::size_t c : cols) p.push_back(parse_double(t.rows[r][c]));
    f.push_back(std::move(p), id_col ? std::stoll(t.rows[r][*id_col]) : static_cast<std::int64_t>(r));
  }
  return f;
}

inline Front read_front(const std::filesystem::path& path) { return front_from_table(read_csv(path)); }

// ---------------------------------------------------------------------------
// Episode logs: one row per period

inline CsvTable episode_log_table(const Environment& env, const std::vector<StepInfo>& log) {
  const ScenarioConfig& cfg = env.config();
  const Topology& topo = env.topology();
  CsvTable t;
  auto& h = t.header;
  h.push_back("t");
  for (NodeId j : topo.stock_nodes) h.push_back("inv_" + std::to_string(j));
  for (const auto& r : topo.routes) h.push_back("ship_" + std::to_string(r.from) + "_" + std::to_string(r.to));
  for (const auto& r : topo.routes) h.push_back("arr_" + std::to_string(r.from) + "_" + std::to_string(r.to));
  for (NodeId m : cfg.echelons.manufacturers) h.push_back("prod_" + std::to_string(m));
  for (NodeId m : cfg.echelons.manufacturers) h.push_back("req_prod_" + std::to_string(m));
  for (const char* c : {"revenue", "PC", "TC", "IC", "E", "F"}) h.emplace_back(c);
  for (NodeId z : cfg.echelons.markets) h.push_back("sl_" + std::to_string(z));
  h.emplace_back("penalty");
  for (NodeId z : cfg.echelons.markets) h.push_back("demand_" + std::to_string(z));
  for (NodeId z : cfg.echelons.markets) h.push_back("absorbed_" + std::to_string(z));
  for (NodeId z : cfg.echelons.markets) h.push_back("demand_loss_" + std::to_string(z));
  h.emplace_back("clipped");
  for (const StepInfo& s : log) {
    std::vector<std::string> row{std::to_string(s.t)};
    auto ints = [&](const std::vector<Units>& v) {
      for (Units x : v) row.push_back(std::to_string(x));
    };
    ints(s.inventory);
    ints(s.shipments);
    ints(s.arrivals);
    ints(s.production);
    for (double x : s.requested_production) row.push_back(format_double(x));
    for (double x : {s.revenue, s.production_cost, s.transport_cost, s.inventory_cost, s.emission, s.sl_inequality})
      row.push_back(format_double(x));
    for (double x : s.service_level) row.push_back(format_double(x));
    row.push_back(format_double(s.penalty));
    ints(s.demand);
    ints(s.absorbed);
    ints(s.demand_loss);
    row.push_back(s.clipped ? "1" : "0");
    t.rows.push_back(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Policy snapshots: "ECHP", u32 version, u64 count, count little-endian doubles

inline constexpr std::uint32_t kSnapshotVersion = 1;

namespace detail {

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::is_integral_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) os.put(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF));
}

template <class T>
T get_le(std::istream& is) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    const int c = is.get();
    if (c == EOF) throw IoError("truncated policy snapshot");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return static_cast<T>(v);
}

}  // namespace detail

inline void write_snapshot(std::ostream& os, const std::vector<double>& params) {
  os.write("ECHP", 4);
  detail::put_le<std::uint32_t>(os, kSnapshotVersion);
  detail::put_le<std::uint64_t>(os, params.size());
  for (double x : params) detail::put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(x));
}

inline std::vector<double> read_snapshot(std::istream& is) {
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "ECHP", 4) != 0) throw IoError("not a policy snapshot");
  const auto version = detail::get_le<std::uint32_t>(is);
  if (version != kSnapshotVersion) throw IoError("unsupported snapshot version " + std::to_string(version));
  const auto n = detail::get_le<std::uint64_t>(is);
  std::vector<double> params;
  params.reserve(static_cast<std::size_t>(n));
  for (std::uint64_t i = 0; i < n; ++i) params.push_back(std::bit_cast<double>(detail::get_le<std::uint64_t>(is)));
  return params;
}

inline void write_snapshot(const std::filesystem::path& path, const std::vector<double>& params) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  write_snapshot(os, params);
}

inline std::vector<double> read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_snapshot(is);
}

}  // namespace echelon
