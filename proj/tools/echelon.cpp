// Command-line front end: scenarios, demand traces, solver runs, metrics,
// aggregation and reports.
//
// Exit codes: 0 ok, 1 usage, 2 validation, 3 runtime.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "echelon/echelon.hpp"

namespace {

using namespace echelon;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kValidation = 2;
constexpr int kRuntime = 3;

Point parse_point(const std::string& text) {
  Point p;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) p.push_back(parse_double(field));
  if (p.size() != kNumObjectives) throw std::invalid_argument("--ref needs three comma-separated numbers");
  return p;
}

struct Options {
  std::string scenario = "simple";
  std::string target;
  std::uint64_t seed = 0;
  std::string out;
  int jobs = 1;
  bool force = false;
  int generations = -1;
  int population = -1;
  int offspring = -1;
  int replications = -1;
  int budget = -1;
  int weight_partitions = 5;
  int eum_partitions = 12;
  bool psa = false;
  bool shared_pool = false;
  bool no_logs = false;
  std::string config_file;
  std::string front, truth, ref;
  std::vector<std::string> inputs;
};

void print_metrics(const MetricsRecord& m) { std::cout << metrics_to_json(m).dump(2) << '\n'; }

RunSpec make_spec(Algorithm a, const Options& o) {
  RunSpec spec;
  spec.algorithm = a;
  spec.scenario = o.scenario;
  spec.seed = o.seed;
  spec.eum_partitions = o.eum_partitions;
  spec.weight_partitions = o.weight_partitions;
  spec.write_logs = !o.no_logs;
  if (!o.config_file.empty()) apply_overrides(spec, read_json(o.config_file));
  if (o.generations >= 0) spec.nsga.generations = o.generations;
  if (o.replications > 0) spec.nsga.replications = o.replications;
  if (o.offspring > 0) spec.nsga.offspring_per_generation = o.offspring;
  if (o.population > 0) (a == Algorithm::nsga2 ? spec.nsga.population_size : spec.search.population_size) = o.population;
  if (o.budget >= 0) spec.search.iterations = o.budget;
  if (o.psa) spec.search.psa_enabled = true;
  if (o.shared_pool) spec.search.shared_pool_enabled = true;
  if (a == Algorithm::nsga2) spec.nsga.validate();
  else spec.search.validate();
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-echelon supply-chain optimisation toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* scenario = app.add_subcommand("scenario", "Inspect scenario definitions");
  scenario->require_subcommand(1);
  auto* validate = scenario->add_subcommand("validate", "Validate a scenario file");
  validate->add_option("path", o.target, "Scenario file")->required();
  auto* show = scenario->add_subcommand("show", "Print a scenario in file form");
  show->add_option("scenario", o.target, "Builtin name or scenario file")->required();

  auto* demand = app.add_subcommand("demand", "Demand traces");
  demand->require_subcommand(1);
  auto* sample = demand->add_subcommand("sample", "Sample a seeded demand trace");
  sample->add_option("scenario", o.target, "Builtin name or scenario file")->required();
  sample->add_option("--seed", o.seed, "Seed");
  sample->add_option("--out", o.out, "Output CSV (stdout if omitted)");

  auto* run = app.add_subcommand("run", "Run one solver");
  run->require_subcommand(1);
  auto add_common = [&](CLI::App* c) {
    c->add_option("--scenario", o.scenario, "Builtin name or scenario file");
    c->add_option("--seed", o.seed, "Seed");
    c->add_option("--out", o.out, "Run directory")->required();
    c->add_option("--jobs", o.jobs, "Worker threads (ECHELON_JOBS overrides)");
    c->add_option("--config", o.config_file, "JSON file with config overrides");
    c->add_option("--eum-partitions", o.eum_partitions, "Das-Dennis partitions of the EUM weight set");
    c->add_flag("--force", o.force, "Overwrite an existing run directory");
    c->add_flag("--no-logs", o.no_logs, "Skip per-solution episode logs");
  };
  auto* run_nsga = run->add_subcommand("nsga2", "Constrained NSGA-II over whole-horizon decisions");
  add_common(run_nsga);
  run_nsga->add_option("--generations", o.generations, "Generations");
  run_nsga->add_option("--population", o.population, "Population size");
  run_nsga->add_option("--offspring", o.offspring, "Offspring per generation");
  run_nsga->add_option("--replications", o.replications, "Demand traces per evaluation");
  auto* run_scal = run->add_subcommand("scalarised", "Weighted-sum policy search, one ES run per weight");
  add_common(run_scal);
  run_scal->add_option("--budget", o.budget, "ES iterations per weight");
  run_scal->add_option("--weight-partitions", o.weight_partitions, "Das-Dennis partitions of the weight set");
  auto* run_morld = run->add_subcommand("morld", "Decomposition policy search");
  add_common(run_morld);
  run_morld->add_option("--budget", o.budget, "ES iterations per subproblem");
  run_morld->add_option("--population", o.population, "Number of subproblems");
  run_morld->add_flag("--psa", o.psa, "Enable weight adaptation");
  run_morld->add_flag("--shared-pool", o.shared_pool, "Enable the shared candidate pool");

  auto* metrics = app.add_subcommand("metrics", "Quality indicators");
  metrics->require_subcommand(1);
  auto* compute = metrics->add_subcommand("compute", "Indicators of a front against a reference front");
  compute->add_option("--front", o.front, "Front CSV")->required();
  compute->add_option("--truth", o.truth, "Reference front CSV")->required();
  compute->add_option("--ref", o.ref, "Hypervolume reference point, e.g. \"0,-2e5,-100\"")->required();
  compute->add_option("--eum-partitions", o.eum_partitions, "Das-Dennis partitions of the EUM weight set");

  auto* agg = app.add_subcommand("aggregate", "Cross-run report against the merged front");
  agg->add_option("inputs", o.inputs, "Run directories or directories containing runs")->required();
  agg->add_option("--out", o.out, "Output directory")->required();

  auto* report = app.add_subcommand("report", "Reports from run directories");
  report->require_subcommand(1);
  auto* operational = report->add_subcommand("operational", "Manufacturing, inventory and demand-loss series");
  operational->add_option("run", o.target, "Run directory")->required();
  operational->add_option("--out", o.out, "Output directory (default <run>/operational)");

  auto* experiment = app.add_subcommand("experiment", "Manifest-driven batches");
  experiment->require_subcommand(1);
  auto* exp_run = experiment->add_subcommand("run", "Run every (algorithm, seed) in a manifest");
  exp_run->add_option("manifest", o.target, "Manifest JSON")->required();
  exp_run->add_option("--jobs", o.jobs, "Concurrent runs (ECHELON_JOBS overrides)");
  exp_run->add_flag("--force", o.force, "Overwrite existing run directories");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const int jobs = resolve_jobs(o.jobs);
    if (validate->parsed()) {
      const ScenarioConfig cfg = load_scenario(o.target);
      std::cout << cfg.name << ": ok\n";
    } else if (show->parsed()) {
      write_scenario(std::cout, resolve_scenario(o.target));
    } else if (sample->parsed()) {
      const DemandTrace trace = sample_trace(resolve_scenario(o.target), o.seed);
      if (o.out.empty()) write_trace_csv(std::cout, trace);
      else {
        std::ofstream os(o.out);
        if (!os) throw IoError("cannot write " + o.out);
        write_trace_csv(os, trace);
      }
    } else if (run->parsed()) {
      const Algorithm a = run_nsga->parsed() ? Algorithm::nsga2
                          : run_scal->parsed() ? Algorithm::scalarised
                                               : Algorithm::morld;
      const RunRecord rec = execute_run(make_spec(a, o), o.out, o.force, jobs);
      std::cout << rec.directory.string() << ": " << rec.front.size() << " front points, hypervolume "
                << format_double(hypervolume(rec.front, resolve_scenario(o.scenario).reference_point.to_point()))
                << '\n';
    } else if (compute->parsed()) {
      const Front front = read_front(o.front);
      const Front truth = read_front(o.truth);
      print_metrics(compute_metrics(front.points, truth.points, parse_point(o.ref),
                                    das_dennis(kNumObjectives, static_cast<std::size_t>(o.eum_partitions))));
    } else if (agg->parsed()) {
      std::vector<fs::path> inputs(o.inputs.begin(), o.inputs.end());
      const AggregateReport rep = aggregate(inputs, o.out);
      std::cout << rep.rows.size() << " runs, merged front of " << rep.truth.size() << " points\n";
    } else if (operational->parsed()) {
      const fs::path out = o.out.empty() ? fs::path(o.target) / "operational" : fs::path(o.out);
      const OperationalFiles f = operational_report(o.target, out);
      std::cout << f.solutions << " solutions -> " << out.string() << '\n';
    } else if (exp_run->parsed()) {
      const auto records = run_experiment(load_manifest(o.target), o.force, jobs);
      for (const auto& r : records)
        std::cout << r.directory.string() << ": " << r.front.size() << " front points\n";
    }
  } catch (const ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kValidation;
  } catch (const ScenarioError& e) {
    std::cerr << e.what() << '\n';
    return kValidation;
  } catch (const ManifestError& e) {
    std::cerr << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
