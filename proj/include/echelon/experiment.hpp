#pragma once

// Run orchestration: run directories, manifests, cross-run aggregation and
// operational reports.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "echelon/horizon_eval.hpp"
#include "echelon/io.hpp"
#include "echelon/nsga2.hpp"
#include "echelon/parallel.hpp"
#include "echelon/pareto.hpp"
#include "echelon/policy_search.hpp"
#include "echelon/scenario_io.hpp"

namespace echelon {

namespace fs = std::filesystem;
using json = nlohmann::json;

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutputCollision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { nsga2, scalarised, morld };

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::nsga2: return "nsga2";
    case Algorithm::scalarised: return "scalarised";
    case Algorithm::morld: return "morld";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "nsga2") return Algorithm::nsga2;
  if (s == "scalarised") return Algorithm::scalarised;
  if (s == "morld") return Algorithm::morld;
  throw ManifestError("unknown algorithm '" + s + "' (expected nsga2, scalarised or morld)");
}

/// FNV-1a, 64 bit, as 16 hex digits.
inline std::string fnv1a_hex(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

/// Everything needed to reproduce one run.
struct RunSpec {
  Algorithm algorithm = Algorithm::nsga2;
  std::string scenario = "simple";  // builtin name or scenario file path
  std::uint64_t seed = 0;
  Nsga2Config nsga;
  SearchConfig search;
  int weight_partitions = 5;  // scalarised baseline weights: das_dennis(3, H)
  int eum_partitions = 12;    // EUM weights: das_dennis(3, H)
  bool write_logs = true;
};

// ---------------------------------------------------------------------------
// Config overrides (JSON objects keyed by field name)

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ManifestError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ManifestError("unknown key '" + k + "' in " + where);
  }
}

template <class T>
void take(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ManifestError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline void apply_overrides(RunSpec& spec, const json& cfg) {
  detail::check_keys(cfg,
                     {"population_size", "offspring_per_generation", "crossover_probability", "crossover_eta",
                      "mutation_eta", "mutation_probability", "generations", "replications", "discount", "es_population",
                      "es_step", "es_step_decay", "iterations", "eval_episodes", "psa", "psa_delta", "shared_pool",
                      "exchange_interval", "neighbourhood_size", "hidden", "bounds_iterations", "update_passes",
                      "initial_weights", "weight_partitions", "eum_partitions", "write_logs"},
                     "config");
  using detail::take;
  auto& n = spec.nsga;
  auto& s = spec.search;
  if (spec.algorithm == Algorithm::nsga2) take(cfg, "population_size", n.population_size);
  else take(cfg, "population_size", s.population_size);
  take(cfg, "offspring_per_generation", n.offspring_per_generation);
  take(cfg, "crossover_probability", n.crossover_probability);
  take(cfg, "crossover_eta", n.crossover_eta);
  take(cfg, "mutation_eta", n.mutation_eta);
  if (cfg.contains("mutation_probability")) {
    double pm = 0.0;
    take(cfg, "mutation_probability", pm);
    n.mutation_probability = pm;
  }
  take(cfg, "generations", n.generations);
  take(cfg, "replications", n.replications);
  take(cfg, "discount", s.discount);
  take(cfg, "es_population", s.es_population);
  take(cfg, "es_step", s.es_step);
  take(cfg, "es_step_decay", s.es_step_decay);
  take(cfg, "iterations", s.iterations);
  take(cfg, "eval_episodes", s.eval_episodes);
  take(cfg, "psa", s.psa_enabled);
  take(cfg, "psa_delta", s.psa_delta);
  take(cfg, "shared_pool", s.shared_pool_enabled);
  take(cfg, "exchange_interval", s.exchange_interval);
  take(cfg, "neighbourhood_size", s.neighbourhood_size);
  take(cfg, "hidden", s.hidden);
  take(cfg, "bounds_iterations", s.bounds_iterations);
  take(cfg, "update_passes", s.update_passes);
  take(cfg, "initial_weights", s.initial_weights);
  take(cfg, "weight_partitions", spec.weight_partitions);
  take(cfg, "eum_partitions", spec.eum_partitions);
  take(cfg, "write_logs", spec.write_logs);
}

/// The effective configuration of a run, echoed as config.json.
inline json spec_to_json(const RunSpec& spec) {
  json j;
  j["algorithm"] = to_string(spec.algorithm);
  j["scenario"] = spec.scenario;
  j["seed"] = spec.seed;
  j["eum_partitions"] = spec.eum_partitions;
  j["write_logs"] = spec.write_logs;
  if (spec.algorithm == Algorithm::nsga2) {
    const auto& n = spec.nsga;
    j["population_size"] = n.population_size;
    j["offspring_per_generation"] = n.offspring_per_generation;
    j["crossover_probability"] = n.crossover_probability;
    j["crossover_eta"] = n.crossover_eta;
    j["mutation_eta"] = n.mutation_eta;
    j["mutation_probability"] = n.mutation_probability ? json(*n.mutation_probability) : json(nullptr);
    j["generations"] = n.generations;
    j["replications"] = n.replications;
  } else {
    const auto& s = spec.search;
    j["discount"] = s.discount;
    j["es_population"] = s.es_population;
    j["es_step"] = s.es_step;
    j["es_step_decay"] = s.es_step_decay;
    j["iterations"] = s.iterations;
    j["eval_episodes"] = s.eval_episodes;
    j["hidden"] = s.hidden;
    j["bounds_iterations"] = s.bounds_iterations;
    j["update_passes"] = s.update_passes;
    if (spec.algorithm == Algorithm::scalarised) {
      j["weight_partitions"] = spec.weight_partitions;
    } else {
      j["psa"] = s.psa_enabled;
      j["psa_delta"] = s.psa_delta;
      j["shared_pool"] = s.shared_pool_enabled;
      j["exchange_interval"] = s.exchange_interval;
      j["population_size"] = s.population_size;
      j["neighbourhood_size"] = s.neighbourhood_size;
      if (!s.initial_weights.empty()) j["initial_weights"] = s.initial_weights;
    }
  }
  return j;
}

// ---------------------------------------------------------------------------
// Single runs

struct RunRecord {
  fs::path directory;
  std::string manifest_hash;
  Algorithm algorithm = Algorithm::nsga2;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  Front front;
  Front archive;
  std::vector<fs::path> logs;
};

inline json metrics_to_json(const MetricsRecord& m) {
  auto opt = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
  return {{"hypervolume", m.hypervolume}, {"eum", opt(m.eum)}, {"sparsity", opt(m.sparsity)}, {"gd", opt(m.gd)},
          {"igd", opt(m.igd)},           {"ahd", opt(m.ahd)}, {"n_points", m.n_points}};
}

inline void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

inline json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

namespace detail {

inline void prepare_run_dir(const fs::path& dir, bool force) {
  if (fs::exists(dir)) {
    if (!force) throw OutputCollision("output directory " + dir.string() + " already exists (use --force to overwrite)");
    fs::remove_all(dir);
  }
  fs::create_directories(dir);
}

}  // namespace detail

/// Runs one solver and writes its directory: config.json, scenario.toml,
/// front.csv, archive.csv, history.csv, summary.json, logs/ and (for the
/// policy solvers) policies/.
inline RunRecord execute_run(const RunSpec& spec, const fs::path& dir, bool force = false, int jobs = 1) {
  const ScenarioConfig cfg = resolve_scenario(spec.scenario);
  detail::prepare_run_dir(dir, force);
  const json config = spec_to_json(spec);
  const std::string config_text = config.dump();
  write_json(dir / "config.json", config);
  save_scenario(cfg, (dir / "scenario.toml").string());

  RunRecord rec;
  rec.directory = dir;
  rec.manifest_hash = fnv1a_hex(config_text);
  rec.algorithm = spec.algorithm;
  rec.seed = spec.seed;
  const Point reference = cfg.reference_point.to_point();
  const auto eum_weights = das_dennis(kNumObjectives, static_cast<std::size_t>(spec.eum_partitions));
  const Environment env(cfg);
  const auto start = std::chrono::steady_clock::now();

  CsvTable history;
  std::map<std::int64_t, std::vector<StepInfo>> logs;
  std::map<std::int64_t, std::vector<double>> snapshots;
  std::optional<NormalisationBounds> search_bounds;

  if (spec.algorithm == Algorithm::nsga2) {
    Nsga2Config n = spec.nsga;
    n.seed = spec.seed;
    const auto traces = nsga2_traces(cfg, n);
    Nsga2Options opts;
    opts.jobs = jobs;
    opts.eum_weights = eum_weights;
    const Nsga2Result res = run_nsga2(cfg, n, traces, opts);
    rec.front = res.front;
    rec.archive = res.archive;
    history.header = {"evaluations", "hypervolume",  "sparsity", "eum",      "generation",
                      "population_hypervolume", "best_violation", "archive_size", "feasible"};
    for (const auto& r : res.history)
      history.rows.push_back({std::to_string(r.evaluations), format_double(r.hypervolume), format_optional(r.sparsity),
                              format_optional(r.eum), std::to_string(r.generation),
                              format_double(r.population_hypervolume), format_double(r.best_violation),
                              std::to_string(r.archive_size), std::to_string(r.feasible)});
    if (spec.write_logs)
      for (std::size_t i = 0; i < res.front.size(); ++i)
        logs[res.front.ids[i]] = simulate_decision(env, res.front_decisions[i], traces.front()).log;
  } else {
    SearchConfig s = spec.search;
    s.seed = spec.seed;
    SearchOptions opts;
    opts.jobs = jobs;
    opts.eum_weights = eum_weights;
    s.bounds = resolve_bounds(cfg, s, jobs);
    search_bounds = s.bounds;
    const PolicyEvaluator ev(cfg, s, evaluation_traces(cfg, s));
    auto keep = [&](std::int64_t id, const std::vector<double>& params) {
      snapshots[id] = params;
      if (spec.write_logs) logs[id] = ev.episode(Policy{ev.shape(), params}, ev.traces().front(), true).log;
    };
    history.header = {"evaluations", "hypervolume", "sparsity", "eum", "round", "archive_size", "adoptions"};
    auto add_rows = [&](const std::vector<SearchHistoryRow>& rows) {
      for (const auto& r : rows)
        history.rows.push_back({std::to_string(r.evaluations), format_double(r.hypervolume), format_optional(r.sparsity),
                                format_optional(r.eum), std::to_string(r.round), std::to_string(r.archive_size),
                                std::to_string(r.adoptions)});
    };
    if (spec.algorithm == Algorithm::scalarised) {
      const auto weights = das_dennis(kNumObjectives, static_cast<std::size_t>(spec.weight_partitions));
      const BaselineResult res = run_scalarised_baseline(cfg, s, weights, opts);
      rec.front = res.front;
      rec.archive = res.front;
      add_rows(res.history);
      for (auto id : res.front.ids) keep(id, res.solutions[static_cast<std::size_t>(id)].eval.parameters);
    } else {
      const MorldResult res = run_morld(cfg, s, opts);
      rec.front = res.archive;
      rec.archive = res.archive;
      add_rows(res.history);
      for (std::size_t i = 0; i < res.archive.size(); ++i) keep(res.archive.ids[i], res.archive_candidates[i].parameters);
    }
  }
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  write_front(dir / "front.csv", rec.front);
  write_front(dir / "archive.csv", rec.archive);
  write_csv(dir / "history.csv", history);
  if (!logs.empty()) fs::create_directories(dir / "logs");
  for (const auto& [id, log] : logs) {
    const fs::path p = dir / "logs" / ("solution_" + std::to_string(id) + ".csv");
    write_csv(p, episode_log_table(env, log));
    rec.logs.push_back(p);
  }
  if (!snapshots.empty()) fs::create_directories(dir / "policies");
  for (const auto& [id, params] : snapshots)
    write_snapshot(dir / "policies" / ("solution_" + std::to_string(id) + ".bin"), params);

  const MetricsRecord m = compute_metrics(rec.front.points, rec.front.points, reference, eum_weights);
  json summary = metrics_to_json(m);
  summary["algorithm"] = to_string(spec.algorithm);
  summary["scenario"] = spec.scenario;
  summary["seed"] = spec.seed;
  summary["manifest_hash"] = rec.manifest_hash;
  summary["wall_time_s"] = rec.wall_time_s;
  summary["archive_hypervolume"] = hypervolume(rec.archive.points, reference);
  summary["reference_point"] = reference;
  if (search_bounds) summary["normalisation_bounds"] = {{"min", search_bounds->min}, {"max", search_bounds->max}};
  write_json(dir / "summary.json", summary);
  return rec;
}

// ---------------------------------------------------------------------------
// Manifests

struct ExperimentManifest {
  std::string scenario;
  std::vector<Algorithm> algorithms;
  json config = json::object();  // overrides shared by all runs
  std::vector<std::uint64_t> seeds;
  fs::path output;
  int eum_partitions = 12;
  bool write_logs = true;
  json source;  // the manifest as read
};

inline ExperimentManifest parse_manifest(const json& j, const fs::path& base = {}) {
  detail::check_keys(j, {"scenario", "algorithm", "seeds", "output", "config", "metrics"}, "manifest");
  ExperimentManifest m;
  m.source = j;
  if (!j.contains("scenario") || !j["scenario"].is_string()) throw ManifestError("manifest needs a 'scenario' string");
  m.scenario = j["scenario"].get<std::string>();
  if (!parse_builtin(m.scenario) && fs::path(m.scenario).is_relative() && !base.empty())
    m.scenario = (base / m.scenario).string();
  if (!j.contains("algorithm")) throw ManifestError("manifest needs an 'algorithm'");
  if (j["algorithm"].is_string()) m.algorithms.push_back(parse_algorithm(j["algorithm"].get<std::string>()));
  else if (j["algorithm"].is_array())
    for (const auto& a : j["algorithm"]) {
      if (!a.is_string()) throw ManifestError("algorithm entries must be strings");
      m.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
  else throw ManifestError("'algorithm' must be a string or a list of strings");
  if (m.algorithms.empty()) throw ManifestError("manifest lists no algorithms");
  if (!j.contains("seeds") || !j["seeds"].is_array() || j["seeds"].empty())
    throw ManifestError("manifest needs a non-empty 'seeds' list");
  for (const auto& s : j["seeds"]) {
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
      throw ManifestError("seeds must be non-negative integers");
    m.seeds.push_back(s.get<std::uint64_t>());
  }
  if (std::set<std::uint64_t>(m.seeds.begin(), m.seeds.end()).size() != m.seeds.size())
    throw ManifestError("seeds must be distinct");
  if (!j.contains("output") || !j["output"].is_string()) throw ManifestError("manifest needs an 'output' directory");
  m.output = j["output"].get<std::string>();
  if (m.output.is_relative() && !base.empty()) m.output = base / m.output;
  if (j.contains("config")) m.config = j["config"];
  if (j.contains("metrics")) {
    const json& mt = j["metrics"];
    detail::check_keys(mt, {"eum_partitions", "logs"}, "metrics");
    detail::take(mt, "eum_partitions", m.eum_partitions);
    detail::take(mt, "logs", m.write_logs);
  }
  return m;
}

inline ExperimentManifest load_manifest(const fs::path& path) {
  return parse_manifest(read_json(path), path.parent_path());
}

inline fs::path run_directory(const fs::path& output, Algorithm a, std::uint64_t seed) {
  return output / (to_string(a) + "_seed" + std::to_string(seed));
}

/// Runs every (algorithm, seed) pair, up to `jobs` at a time. Refuses to
/// start if any run directory already exists, unless forced.
inline std::vector<RunRecord> run_experiment(const ExperimentManifest& m, bool force = false, int jobs = 1) {
  resolve_scenario(m.scenario);  // fail before touching the file system
  std::vector<std::pair<RunSpec, fs::path>> plan;
  for (Algorithm a : m.algorithms)
    for (std::uint64_t seed : m.seeds) {
      RunSpec spec;
      spec.algorithm = a;
      spec.scenario = m.scenario;
      spec.seed = seed;
      spec.eum_partitions = m.eum_partitions;
      spec.write_logs = m.write_logs;
      apply_overrides(spec, m.config);
      if (a == Algorithm::nsga2) spec.nsga.validate();
      else spec.search.validate();
      plan.emplace_back(std::move(spec), run_directory(m.output, a, seed));
    }
  if (!force)
    for (const auto& [spec, dir] : plan)
      if (fs::exists(dir)) throw OutputCollision("output directory " + dir.string() + " already exists (use --force)");
  fs::create_directories(m.output);
  std::vector<RunRecord> records(plan.size());
  const bool across = jobs > 1 && plan.size() > 1;
  parallel_for(plan.size(), across ? jobs : 1,
               [&](std::size_t i) { records[i] = execute_run(plan[i].first, plan[i].second, force, across ? 1 : jobs); });
  return records;
}

// ---------------------------------------------------------------------------
// Aggregation

struct AggregateRow {
  std::string run;
  std::string algorithm;
  std::uint64_t seed = 0;
  MetricsRecord metrics;
};

struct AggregateReport {
  Front truth;
  std::vector<AggregateRow> rows;
};

/// Run directories given directly or found one level below the given paths.
inline std::vector<fs::path> find_run_dirs(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> dirs;
  for (const auto& p : inputs) {
    if (fs::exists(p / "front.csv")) {
      dirs.push_back(p);
      continue;
    }
    if (!fs::is_directory(p)) continue;
    std::vector<fs::path> found;
    for (const auto& entry : fs::directory_iterator(p))
      if (entry.is_directory() && fs::exists(entry.path() / "front.csv")) found.push_back(entry.path());
    std::sort(found.begin(), found.end());
    dirs.insert(dirs.end(), found.begin(), found.end());
  }
  return dirs;
}

/// Estimates the true front from every run, recomputes each run's indicators
/// against it with shared normalisation bounds, and writes report.csv plus
/// plotdata/{hypervolume,sparsity,eum}.csv into `out`.
inline AggregateReport aggregate(const std::vector<fs::path>& inputs, const fs::path& out) {
  const auto dirs = find_run_dirs(inputs);
  if (dirs.empty()) throw IoError("no fronts found");
  std::vector<Front> fronts;
  std::vector<json> summaries;
  for (const auto& d : dirs) {
    fronts.push_back(read_front(d / "front.csv"));
    summaries.push_back(fs::exists(d / "summary.json") ? read_json(d / "summary.json") : json::object());
  }
  Point reference;
  for (const auto& s : summaries)
    if (s.contains("reference_point")) {
      reference = s["reference_point"].get<Point>();
      break;
    }
  if (reference.empty()) throw IoError("no summary.json with a reference_point found");
  for (const auto& s : summaries)
    if (s.contains("reference_point") && s["reference_point"].get<Point>() != reference)
      throw IoError("runs use different reference points and cannot be aggregated");

  AggregateReport rep;
  rep.truth = estimate_true_front(fronts);
  std::vector<Point> all;
  for (const auto& f : fronts) all.insert(all.end(), f.points.begin(), f.points.end());
  const NormalisationBounds nb = bounds_of({&all}, reference.size());
  const auto weights = das_dennis(kNumObjectives, 12);

  CsvTable report{{"run", "algorithm", "seed", "hv", "eum", "sparsity", "gd", "igd", "ahd", "n_points"}, {}};
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    AggregateRow row;
    row.run = dirs[i].filename().string();
    row.algorithm = summaries[i].value("algorithm", std::string{});
    row.seed = summaries[i].value("seed", std::uint64_t{0});
    row.metrics = compute_metrics(fronts[i].points, rep.truth.points, reference, weights, nb);
    const auto& m = row.metrics;
    report.rows.push_back({row.run, row.algorithm, std::to_string(row.seed), format_double(m.hypervolume),
                           format_optional(m.eum), format_optional(m.sparsity), format_optional(m.gd),
                           format_optional(m.igd), format_optional(m.ahd), std::to_string(m.n_points)});
    rep.rows.push_back(std::move(row));
  }
  fs::create_directories(out / "plotdata");
  write_csv(out / "report.csv", report);
  write_front(out / "truth.csv", rep.truth);

  for (const char* indicator : {"hypervolume", "sparsity", "eum"}) {
    CsvTable series{{"run", "algorithm", "seed", "evaluations", "value"}, {}};
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      if (!fs::exists(dirs[i] / "history.csv")) continue;
      const CsvTable h = read_csv(dirs[i] / "history.csv");
      const std::size_t ec = h.column("evaluations"), vc = h.column(indicator);
      for (const auto& r : h.rows)
        series.rows.push_back({rep.rows[i].run, rep.rows[i].algorithm, std::to_string(rep.rows[i].seed), r[ec], r[vc]});
    }
    write_csv(out / "plotdata" / (std::string(indicator) + ".csv"), series);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Operational report

struct OperationalFiles {
  fs::path manufacturing;
  fs::path inventory;
  fs::path demand_loss;
  std::size_t solutions = 0;
};

/// Long-format series per logged solution: manufacturing quantities,
/// end-of-period inventory per facility, and demand loss per market.
inline OperationalFiles operational_report(const fs::path& run_dir, const fs::path& out) {
  const fs::path logs = run_dir / "logs";
  if (!fs::is_directory(logs)) throw IoError("no logs directory in " + run_dir.string());
  std::vector<std::pair<std::int64_t, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(logs)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("solution_", 0) != 0 || entry.path().extension() != ".csv") continue;
    files.emplace_back(std::stoll(name.substr(9, name.size() - 13)), entry.path());
  }
  if (files.empty()) throw IoError("no episode logs in " + logs.string());
  std::sort(files.begin(), files.end());

  CsvTable mfg{{"solution_id", "t", "manufacturer", "quantity"}, {}};
  CsvTable inv{{"solution_id", "t", "node", "inventory"}, {}};
  CsvTable loss{{"solution_id", "t", "market", "demand", "absorbed", "demand_loss"}, {}};
  for (const auto& [id, path] : files) {
    const CsvTable log = read_csv(path);
    const std::size_t tc = log.column("t");
    const std::string sid = std::to_string(id);
    for (std::size_t c = 0; c < log.header.size(); ++c) {
      const std::string& h = log.header[c];
      for (const auto& r : log.rows) {
        if (h.rfind("prod_", 0) == 0) mfg.rows.push_back({sid, r[tc], h.substr(5), r[c]});
        else if (h.rfind("inv_", 0) == 0) inv.rows.push_back({sid, r[tc], h.substr(4), r[c]});
        else if (h.rfind("demand_loss_", 0) == 0) {
          const std::string m = h.substr(12);
          loss.rows.push_back({sid, r[tc], m, r[log.column("demand_" + m)], r[log.column("absorbed_" + m)], r[c]});
        }
      }
    }
  }
  fs::create_directories(out);
  OperationalFiles f{out / "manufacturing.csv", out / "inventory.csv", out / "demand_loss.csv", files.size()};
  write_csv(f.manufacturing, mfg);
  write_csv(f.inventory, inv);
  write_csv(f.demand_loss, loss);
  return f;
}

}  // namespace echelon
