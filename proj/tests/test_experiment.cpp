#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "echelon/echelon.hpp"
#include "oracle/toy_scenario.hpp"

using namespace echelon;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("echelon_exp_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path toy_file(const fs::path& dir) {
  auto cfg = oracle::toy_scenario();
  cfg.horizon = 4;
  const fs::path p = dir / "toy.toml";
  save_scenario(cfg, p.string());
  return p;
}

RunSpec toy_nsga(const fs::path& scenario, std::uint64_t seed) {
  RunSpec spec;
  spec.algorithm = Algorithm::nsga2;
  spec.scenario = scenario.string();
  spec.seed = seed;
  spec.nsga.population_size = 12;
  spec.nsga.offspring_per_generation = 6;
  spec.nsga.generations = 5;
  spec.eum_partitions = 4;
  return spec;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(ECHELON_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string cli_output(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "echelon_cli_stdout.txt";
  const int rc = std::system((std::string(ECHELON_CLI) + " " + args + " > " + out.string() + " 2>/dev/null").c_str());
  (void)rc;
  return slurp(out);
}

}  // namespace

TEST(Csv, FrontRoundTrip) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> g(0.0, 1e4);
  Front f;
  for (int i = 0; i < 50; ++i) f.push_back({g(gen), g(gen) * 1e-7, g(gen) / 3.0}, i * 7);
  const fs::path p = scratch("csv") / "front.csv";
  write_front(p, f);
  EXPECT_EQ(read_front(p), f);
}

TEST(Csv, RejectsRaggedRows) {
  std::istringstream in("a,b\n1,2\n3\n");
  EXPECT_THROW(read_csv(in), IoError);
  EXPECT_THROW(parse_double("1.5x"), IoError);
  EXPECT_EQ(parse_optional(""), std::nullopt);
}

TEST(Snapshot, RoundTripAndHeader) {
  const std::vector<double> params{0.0, -1.5, 3.25e-300, 1e300, -0.0};
  std::stringstream ss;
  write_snapshot(ss, params);
  const std::string bytes = ss.str();
  EXPECT_EQ(bytes.substr(0, 4), "ECHP");
  EXPECT_EQ(bytes.size(), 4u + 4u + 8u + 8u * params.size());
  EXPECT_EQ(bytes[4], 1);  // version, little-endian
  std::stringstream back(bytes);
  const auto got = read_snapshot(back);
  ASSERT_EQ(got.size(), params.size());
  for (std::size_t i = 0; i < params.size(); ++i) EXPECT_EQ(std::bit_cast<std::uint64_t>(got[i]), std::bit_cast<std::uint64_t>(params[i]));
  std::stringstream bad("XXXX");
  EXPECT_THROW(read_snapshot(bad), IoError);
  std::stringstream truncated(bytes.substr(0, 20));
  EXPECT_THROW(read_snapshot(truncated), IoError);
}

TEST(EpisodeLog, ColumnsMatchStepInfo) {
  const Environment env(builtin_scenario("simple"));
  const auto trace = sample_trace(env.config(), 1);
  const auto zero = ActionVector::zeros(env.config());
  const auto res = rollout(env, trace, [&](const std::vector<double>&, int) { return zero; }, 1.0);
  std::stringstream ss;
  write_csv(ss, episode_log_table(env, res.log));
  const CsvTable t = read_csv(ss);
  ASSERT_EQ(t.rows.size(), 100u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(parse_double(t.rows[i][t.column("IC")]), res.log[i].inventory_cost);
    const auto inv = "inv_" + std::to_string(env.topology().stock_nodes[3]);
    const auto loss = "demand_loss_" + std::to_string(env.config().echelons.markets[1]);
    EXPECT_EQ(std::stoll(t.rows[i][t.column(inv)]), res.log[i].inventory[3]);
    EXPECT_EQ(std::stoll(t.rows[i][t.column(loss)]), res.log[i].demand_loss[1]);
  }
}

TEST(Run, Nsga2SummaryMatchesMetrics) {
  const fs::path dir = scratch("nsga_simple");
  RunSpec spec;
  spec.algorithm = Algorithm::nsga2;
  spec.scenario = "simple";
  spec.seed = 7;
  spec.nsga.generations = 50;
  const RunRecord rec = execute_run(spec, dir / "run");
  for (const char* f : {"config.json", "scenario.toml", "front.csv", "archive.csv", "history.csv", "summary.json"})
    EXPECT_TRUE(fs::exists(dir / "run" / f)) << f;
  const json summary = read_json(dir / "run" / "summary.json");
  const Front front = read_front(dir / "run" / "front.csv");
  const Front archive = read_front(dir / "run" / "archive.csv");
  EXPECT_EQ(front, rec.front);
  const Point ref = builtin_scenario("simple").reference_point.to_point();
  const auto m = compute_metrics(front.points, front.points, ref, das_dennis(3, 12));
  EXPECT_NEAR(summary["hypervolume"].get<double>(), m.hypervolume, 1e-9);
  EXPECT_NEAR(summary["archive_hypervolume"].get<double>(), hypervolume(archive.points, ref), 1e-9);
  EXPECT_EQ(summary["manifest_hash"].get<std::string>(), fnv1a_hex(read_json(dir / "run" / "config.json").dump()));
  const CsvTable h = read_csv(dir / "run" / "history.csv");
  EXPECT_EQ(h.rows.size(), 51u);
  EXPECT_EQ(std::vector<std::string>(h.header.begin(), h.header.begin() + 4),
            (std::vector<std::string>{"evaluations", "hypervolume", "sparsity", "eum"}));
}

TEST(Run, CollisionAndForce) {
  const fs::path dir = scratch("collide");
  const fs::path toy = toy_file(dir);
  execute_run(toy_nsga(toy, 1), dir / "run");
  EXPECT_THROW(execute_run(toy_nsga(toy, 1), dir / "run"), OutputCollision);
  EXPECT_NO_THROW(execute_run(toy_nsga(toy, 1), dir / "run", true));
}

TEST(Run, PolicySolversWriteSnapshotsAndLogs) {
  const fs::path dir = scratch("policy_runs");
  const fs::path toy = toy_file(dir);
  for (Algorithm a : {Algorithm::scalarised, Algorithm::morld}) {
    RunSpec spec;
    spec.algorithm = a;
    spec.scenario = toy.string();
    spec.seed = 3;
    spec.weight_partitions = 1;
    spec.search.iterations = 4;
    spec.search.exchange_interval = 2;
    spec.search.es_population = 4;
    spec.search.eval_episodes = 1;
    spec.search.bounds_iterations = 2;
    spec.search.hidden = {4};
    const RunRecord rec = execute_run(spec, dir / to_string(a));
    ASSERT_FALSE(rec.front.empty()) << to_string(a);
    for (auto id : rec.front.ids) {
      const fs::path snap = dir / to_string(a) / "policies" / ("solution_" + std::to_string(id) + ".bin");
      ASSERT_TRUE(fs::exists(snap));
      const auto params = read_snapshot(snap);
      const auto cfg = load_scenario(toy.string());
      EXPECT_EQ(params.size(), policy_shape(cfg, {4}).parameter_count());
      EXPECT_TRUE(fs::exists(dir / to_string(a) / "logs" / ("solution_" + std::to_string(id) + ".csv")));
    }
    EXPECT_TRUE(read_json(dir / to_string(a) / "summary.json").contains("normalisation_bounds"));
  }
}

TEST(Manifest, TwoSeedsTwoRecords) {
  const fs::path dir = scratch("manifest");
  toy_file(dir);
  const json j = {{"scenario", "toy.toml"},
                  {"algorithm", "nsga2"},
                  {"seeds", {1, 2}},
                  {"output", "out"},
                  {"config", {{"population_size", 12}, {"offspring_per_generation", 6}, {"generations", 5}}},
                  {"metrics", {{"eum_partitions", 4}}}};
  write_json(dir / "manifest.json", j);
  const auto m = load_manifest(dir / "manifest.json");
  const auto recs = run_experiment(m, false, 2);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_NE(recs[0].front.points, recs[1].front.points);
  EXPECT_TRUE(fs::exists(dir / "out" / "nsga2_seed1" / "front.csv"));
  EXPECT_THROW(run_experiment(m), OutputCollision);
}

TEST(Manifest, Rejections) {
  const json good = {{"scenario", "simple"}, {"algorithm", "nsga2"}, {"seeds", {1}}, {"output", "x"}};
  EXPECT_NO_THROW(parse_manifest(good));
  auto bad = good;
  bad["seeds"] = json::array();
  EXPECT_THROW(parse_manifest(bad), ManifestError);
  bad = good;
  bad["colour"] = "red";
  EXPECT_THROW(parse_manifest(bad), ManifestError);
  bad = good;
  bad["algorithm"] = "ppo";
  EXPECT_THROW(parse_manifest(bad), ManifestError);
  RunSpec spec;
  EXPECT_THROW(apply_overrides(spec, {{"generatoins", 3}}), ManifestError);
}

TEST(Aggregate, SelfTruthAndDominance) {
  const fs::path dir = scratch("aggregate");
  auto fake_run = [&](const std::string& name, const std::vector<Point>& pts) {
    fs::create_directories(dir / "runs" / name);
    write_front(dir / "runs" / name / "front.csv", make_front(pts));
    write_json(dir / "runs" / name / "summary.json",
               {{"algorithm", "nsga2"}, {"seed", 1}, {"reference_point", Point{0, -10, -10}}});
    write_csv(dir / "runs" / name / "history.csv",
              CsvTable{{"evaluations", "hypervolume", "sparsity", "eum"}, {{"10", "1", "", "0.5"}}});
  };
  fake_run("a", {{4, -1, -1}, {2, -0.5, -2}});
  fake_run("b", {{3, -2, -2}});  // dominated by a's first point
  const auto single = aggregate({dir / "runs" / "a"}, dir / "agg_single");
  EXPECT_EQ(*single.rows[0].metrics.ahd, 0.0);
  const auto rep = aggregate({dir / "runs"}, dir / "agg");
  ASSERT_EQ(rep.rows.size(), 2u);
  EXPECT_EQ(*rep.rows[0].metrics.gd, 0.0);
  EXPECT_GT(*rep.rows[1].metrics.igd, 0.0);
  EXPECT_EQ(read_csv(dir / "agg" / "report.csv").rows.size(), 2u);
  EXPECT_EQ(read_front(dir / "agg" / "truth.csv").points, rep.truth.points);
  EXPECT_EQ(read_csv(dir / "agg" / "plotdata" / "hypervolume.csv").rows.size(), 2u);
  EXPECT_THROW(aggregate({dir / "nothing"}, dir / "agg2"), IoError);
}

TEST(Operational, ZeroPolicyLosesAllDemand) {
  const fs::path dir = scratch("operational");
  const Environment env(builtin_scenario("simple"));
  const auto trace = sample_trace(env.config(), 2);
  const auto zero = ActionVector::zeros(env.config());
  const auto res = rollout(env, trace, [&](const std::vector<double>&, int) { return zero; }, 1.0);
  fs::create_directories(dir / "run" / "logs");
  write_csv(dir / "run" / "logs" / "solution_0.csv", episode_log_table(env, res.log));
  const auto files = operational_report(dir / "run", dir / "out");
  EXPECT_EQ(files.solutions, 1u);
  const CsvTable loss = read_csv(files.demand_loss);
  ASSERT_EQ(loss.rows.size(), 200u);
  for (const auto& r : loss.rows) {
    EXPECT_EQ(r[loss.column("demand_loss")], r[loss.column("demand")]);
    EXPECT_GE(std::stoll(r[loss.column("demand_loss")]), 0);
  }
  EXPECT_EQ(read_csv(files.inventory).rows.size(), 400u);
  EXPECT_EQ(read_csv(files.manufacturing).rows.size(), 200u);
  EXPECT_THROW(operational_report(dir / "missing", dir / "out2"), IoError);
}

TEST(Operational, InventorySeriesReconcile) {
  const fs::path dir = scratch("operational_ledger");
  const fs::path toy = toy_file(dir);
  execute_run(toy_nsga(toy, 4), dir / "run");
  const auto files = operational_report(dir / "run", dir / "out");
  const CsvTable inv = read_csv(files.inventory);
  for (const auto& entry : fs::directory_iterator(dir / "run" / "logs")) {
    const CsvTable log = read_csv(entry.path());
    long long prev = 1000;  // manufacturer stock in the toy scenario
    for (const auto& r : log.rows) {
      const long long now = std::stoll(r[log.column("inv_2")]);
      EXPECT_EQ(now, prev + std::stoll(r[log.column("prod_2")]) - std::stoll(r[log.column("ship_2_3")]));
      prev = now;
    }
  }
  EXPECT_FALSE(inv.rows.empty());
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  const fs::path toy = toy_file(dir);
  EXPECT_EQ(cli("scenario validate " + toy.string()), 0);
  EXPECT_EQ(cli("--bogus"), 1);
  EXPECT_EQ(cli("scenario validate"), 1);
  std::string text = slurp(toy);
  text.replace(text.find("capacity = 200"), 14, "capacity = -10");
  std::ofstream(dir / "bad.toml") << text;
  EXPECT_EQ(cli("scenario validate " + (dir / "bad.toml").string()), 2);
  EXPECT_EQ(cli("scenario show nowhere.toml"), 2);
  EXPECT_EQ(cli("scenario show simple"), 0);
}

TEST(Cli, ShowRoundTripsAndSampleMatches) {
  EXPECT_EQ(cli_output("scenario show moderate"), scenario_to_string(builtin_scenario("moderate")));
  std::ostringstream expect;
  write_trace_csv(expect, sample_trace(builtin_scenario("simple"), 12));
  EXPECT_EQ(cli_output("demand sample simple --seed 12"), expect.str());
}

TEST(Cli, RunAndMetricsAgree) {
  const fs::path dir = scratch("cli_run");
  const fs::path toy = toy_file(dir);
  const std::string run = "run nsga2 --scenario " + toy.string() +
                          " --seed 2 --generations 3 --population 8 --offspring 4 --out " + (dir / "r").string();
  ASSERT_EQ(cli(run), 0);
  EXPECT_EQ(cli(run), 3);  // collision
  EXPECT_EQ(cli(run + " --force"), 0);
  const std::string metrics = cli_output("metrics compute --front " + (dir / "r" / "front.csv").string() + " --truth " +
                                         (dir / "r" / "front.csv").string() + " --ref=-1000,-1000,-1");
  const json m = json::parse(metrics);
  const json summary = read_json(dir / "r" / "summary.json");
  for (const char* k : {"hypervolume", "eum", "sparsity", "gd", "igd", "ahd", "n_points"}) EXPECT_EQ(m[k], summary[k]) << k;
  EXPECT_EQ(cli("report operational " + (dir / "r").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "r" / "operational" / "demand_loss.csv"));
  EXPECT_EQ(cli("aggregate " + (dir / "r").string() + " --out " + (dir / "agg").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "agg" / "report.csv"));
}
