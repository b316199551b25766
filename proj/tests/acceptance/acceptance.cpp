// Acceptance driver: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "echelon/echelon.hpp"
#include "oracle/brute_force.hpp"
#include "oracle/equation_totals.hpp"
#include "support.hpp"

using namespace echelon;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int n, const char* name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s criterion %d: %s [%s] (%.1fs)\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

const RouteParams& route(const ScenarioConfig& cfg, NodeId from, NodeId to) {
  for (const auto& r : cfg.routes)
    if (r.from == from && r.to == to) return r;
  throw std::out_of_range("no route " + std::to_string(from) + "->" + std::to_string(to));
}

// ---------------------------------------------------------------------------

Outcome structural() {
  std::vector<std::pair<double, double>> checks;  // (got, expected)
  auto add = [&](double got, double want) { checks.emplace_back(got, want); };
  const auto s = builtin_scenario("simple");
  const auto m = builtin_scenario("moderate");
  const auto c = builtin_scenario("complex");
  add(action_dim(s), 8), add(action_dim(m), 21), add(action_dim(c), 59);
  add(decision_dim(s), 800), add(decision_dim(m), 2100), add(decision_dim(c), 5900);
  add(s.routes.size(), 6), add(m.routes.size(), 18), add(c.routes.size(), 54);

  add(s.nodes.at(2).initial_inventory, 380), add(s.nodes.at(2).holding_cost, 0.11);
  add(*s.nodes.at(2).production_emission, 5.0126), add(*s.nodes.at(3).production_cost, 2.2);
  add(s.nodes.at(5).initial_inventory, 80), add(s.nodes.at(5).holding_cost, 0.15);
  add(route(s, 1, 2).transport_cost, 0.22), add(route(s, 1, 3).transport_emission, 0.3947);
  add(route(s, 2, 4).transport_cost, 1.055), add(route(s, 3, 5).transport_emission, 0.4290);
  add(s.prices.at(4), 20), add(s.lead_time, 2), add(s.capacity, 200);

  add(m.nodes.at(7).initial_inventory, 110), add(m.nodes.at(7).holding_cost, 0.20);
  add(*m.nodes.at(5).production_cost, 2.3), add(*m.nodes.at(5).production_emission, 5.4491);
  add(m.nodes.at(9).holding_cost, 0.30), add(route(m, 1, 5).transport_cost, 0.565);
  add(route(m, 3, 6).transport_emission, 0.0429), add(route(m, 7, 8).transport_cost, 1.64);
  add(route(m, 7, 10).transport_emission, 0.3318), add(m.prices.at(9), 21.0), add(m.prices.at(10), 20.5);

  add(c.nodes.at(4).initial_inventory, 155), add(c.nodes.at(4).holding_cost, 0.23);
  add(*c.nodes.at(7).production_emission, 6.1232), add(*c.nodes.at(8).production_cost, 2.3);
  add(c.nodes.at(19).initial_inventory, 362), add(c.nodes.at(19).holding_cost, 0.37);
  add(route(c, 2, 8).transport_cost, 1.855), add(route(c, 4, 9).transport_emission, 1.1383);
  add(route(c, 12, 15).transport_cost, 1.945), add(route(c, 14, 19).transport_emission, 0.7979);
  add(c.prices.at(c.echelons.retailers[2]), 105), add(c.demands.at(20).mean, 150);

  std::size_t bad = 0;
  for (const auto& [got, want] : checks)
    if (got != want) ++bad;
  return {bad == 0, std::to_string(checks.size() - bad) + "/" + std::to_string(checks.size()) + " exact"};
}

Outcome equivalence() {
  double worst = 0.0;
  std::size_t mismatches = 0;
  for (const char* name : {"simple", "moderate", "complex"}) {
    const auto cfg = builtin_scenario(name);
    const Environment env(cfg);
    const auto trace = sample_trace(cfg, 1);
    const std::size_t dim = action_dim(cfg);
    std::mt19937_64 gen(42);
    for (int i = 0; i < 100; ++i) {
      const auto dv = testing_support::random_dv(cfg, gen, i % 2 ? 1.0 : 0.1);
      const auto r = evaluate(dv, env, trace);
      const auto ep = rollout(
          env, trace,
          [&](const std::vector<double>&, int t) {
            const auto* p = dv.genes.data() + static_cast<std::size_t>(t) * dim;
            return ActionVector::from_flat({p, dim}, cfg.echelons.manufacturers.size());
          },
          1.0);
      if (!(r.objectives == ep.totals)) ++mismatches;
      const auto direct = oracle::equation_totals(cfg, ep.log);
      auto rel = [](double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); };
      worst = std::max({worst, rel(r.objectives.profit, direct.profit), rel(-r.objectives.neg_emission, direct.emission),
                        rel(-r.objectives.neg_sl_inequality, direct.sl_inequality)});
    }
  }
  return {mismatches == 0 && worst <= 1e-9,
          "rollout mismatches " + std::to_string(mismatches) + ", max rel err " + fmt(worst) + " (tol 1e-9)"};
}

Outcome conservation() {
  long long worst = 0;
  int episodes = 0;
  for (const char* name : {"simple", "moderate", "complex"}) {
    const auto cfg = builtin_scenario(name);
    const Environment env(cfg);
    std::mt19937_64 gen(7);
    for (int e = 0; e < 100; ++e) {
      const auto trace = sample_trace(cfg, static_cast<std::uint64_t>(100 + e));
      const auto res = rollout(
          env, trace, [&](const std::vector<double>&, int) { return testing_support::random_action(cfg, gen, 0.5); }, 1.0);
      worst = std::max(worst, std::llabs(oracle::mass_residual(cfg, res.log)));
      ++episodes;
    }
  }
  return {worst == 0, std::to_string(episodes) + " episodes, max |residual| " + std::to_string(worst)};
}

Outcome indicators() {
  std::mt19937_64 gen(2024);
  int hv_fail = 0;
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 12);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<Point> pts;
    const int n = count(gen);
    for (int i = 0; i < n; ++i) {
      Point p{std::fabs(g(gen)), std::fabs(g(gen)), std::fabs(g(gen))};
      const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
      for (auto& v : p) v = 10.0 * v / r;
      pts.push_back(p);
    }
    const double exact = hypervolume(pts, {0, 0, 0});
    const auto mc = oracle::mc_hypervolume(pts, {0, 0, 0}, 1000000, static_cast<std::uint64_t>(rep));
    if (std::fabs(exact - mc.value) > 3.0 * mc.sigma) ++hv_fail;
  }
  int filter_fail = 0;
  std::uniform_int_distribution<int> u(0, 1000);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<Point> pts(200, Point(3));
    for (auto& p : pts)
      for (auto& v : p) v = rep % 2 ? u(gen) % 21 : u(gen);
    const Front f = pareto_filter(pts);
    const auto keep = oracle::nondominated_indices(pts);
    bool ok = f.size() == keep.size();
    for (std::size_t i = 0; ok && i < keep.size(); ++i) ok = f.points[i] == pts[keep[i]];
    if (!ok) ++filter_fail;
  }
  const auto id2 = NormalisationBounds::identity(2);
  const auto d = distance_indicators({{0, 0}, {1, 0}}, {{0, 0}}, id2);
  const bool hand = eum({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}, {0.5, 0.5}}, id2) == 5.0 / 6.0 &&
                    *sparsity({{0, 1}, {1, 0}}) == 2.0 && !sparsity({{1, 1}}).has_value() &&
                    *sparsity({{0, 1}, {0.5, 0.25}, {1, 0}}) == (0.25 + 0.25 + 0.0625 + 0.5625) / 2.0 &&
                    ahd({{1, 0}, {0, 1}}, {{0, 0}}) == 1.0 && ahd({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}) == 0.0 &&
                    d.gd == std::sqrt(0.5) && d.igd == 0.0;
  return {hv_fail == 0 && filter_fail == 0 && hand,
          "HV outside 3 sigma " + std::to_string(hv_fail) + "/50, filter mismatches " + std::to_string(filter_fail) +
              "/200, hand examples " + (hand ? "exact" : "differ")};
}

Outcome das_dennis_count() {
  const auto w = das_dennis(3, 5);
  std::set<WeightVector> distinct(w.begin(), w.end());
  bool lattice = true;
  for (const auto& v : w) {
    double s = 0.0;
    for (double x : v) {
      s += x;
      lattice = lattice && std::fabs(x * 5 - std::round(x * 5)) < 1e-12;
    }
    lattice = lattice && std::fabs(s - 1.0) < 1e-12;
  }
  return {w.size() == 21 && distinct.size() == 21 && lattice, std::to_string(w.size()) + " vectors"};
}

// Runs shared by criteria 6, 7 and 10.
std::vector<Front> simple_fronts;

Outcome nsga2_elitism() {
  const auto cfg = builtin_scenario("simple");
  int violations = 0;
  std::string finals;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Nsga2Config n;
    n.seed = seed;
    n.generations = 200;
    const auto res = run_nsga2(cfg, n);
    for (std::size_t g = 1; g < res.history.size(); ++g)
      if (res.history[g].hypervolume < res.history[g - 1].hypervolume) ++violations;
    finals += (seed > 1 ? "," : "") + fmt(res.history.back().hypervolume);
    simple_fronts.push_back(res.archive);
  }
  return {violations == 0, "5 seeds x 200 generations, decreases " + std::to_string(violations) + ", final HV " + finals};
}

Outcome morld_archive() {
  const auto cfg = builtin_scenario("simple");
  int violations = 0;
  std::size_t rounds = 0;
  std::string finals;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SearchConfig s;
    s.seed = seed;
    s.psa_enabled = true;
    s.shared_pool_enabled = true;
    const auto res = run_morld(cfg, s);
    for (std::size_t r = 1; r < res.history.size(); ++r)
      if (res.history[r].hypervolume < res.history[r - 1].hypervolume) ++violations;
    rounds += res.history.size();
    finals += (seed > 1 ? "," : "") + fmt(res.history.back().hypervolume);
    simple_fronts.push_back(res.archive);
  }
  return {violations == 0,
          std::to_string(rounds) + " rounds over 5 seeds, decreases " + std::to_string(violations) + ", final HV " + finals};
}

Outcome reduction() {
  const auto cfg = builtin_scenario("simple");
  SearchConfig s;
  s.seed = 11;
  s.population_size = 1;
  s.iterations = 24;
  s.exchange_interval = 6;
  const auto morld = run_morld(cfg, s);
  const auto base = run_scalarised_baseline(cfg, s, initial_weights(s));
  const auto& a = morld.final_subproblems.at(0).eval;
  const auto& b = base.solutions.at(0).eval;
  const bool same = a.parameters == b.parameters && a.raw == b.raw && a.discounted == b.discounted &&
                    morld.bounds.min == base.bounds.min && morld.bounds.max == base.bounds.max;
  return {same, same ? "parameters and objectives bit-identical" : "results differ"};
}

Outcome pool_benefit() {
  const auto cfg = builtin_scenario("moderate");
  int wins = 0, degenerate = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SearchConfig s;
    s.seed = seed;
    s.shared_pool_enabled = false;
    const double off = run_morld(cfg, s).history.back().hypervolume;
    s.shared_pool_enabled = true;
    const double on = run_morld(cfg, s).history.back().hypervolume;
    // Both arms at zero says nothing about the pool, so it is not counted as a win.
    if (on == 0.0 && off == 0.0) ++degenerate;
    else if (on >= off) ++wins;
    detail += (seed > 1 ? "; " : "") + fmt(on) + " vs " + fmt(off);
  }
  return {wins >= 4, "pool >= no pool in " + std::to_string(wins) + "/5 (need 4), both zero in " +
                         std::to_string(degenerate) + ": " + detail};
}

Outcome tradeoff_direction() {
  if (simple_fronts.empty()) return {false, "no runs from criteria 6-7"};
  const Front merged = estimate_true_front(simple_fronts);
  const std::size_t n = merged.size();
  if (n < 3) return {false, "merged front has " + std::to_string(n) + " points"};
  double mx = 0, my = 0;
  for (const auto& p : merged.points) mx += p[0], my += -p[1];
  mx /= n, my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (const auto& p : merged.points) {
    const double dx = p[0] - mx, dy = -p[1] - my;
    sxy += dx * dy, sxx += dx * dx, syy += dy * dy;
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return {r > 0.5, "pearson(profit, emission) = " + fmt(r) + " over " + std::to_string(n) + " points (need > 0.5)"};
}

Outcome psa_arithmetic() {
  const WeightVector w{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const auto out = psa_adapt(w, {0.6, 0.4, 0.4}, {{0.6, 0.4, 0.4}, {0.5, 0.5, 0.5}}, NormalisationBounds::identity(3), 1.05);
  const WeightVector want{0.3553, 0.3224, 0.3224};
  bool ok = true;
  for (int b = 0; b < 3; ++b) ok = ok && std::fabs(out[b] - want[b]) < 5e-5;
  return {ok, "(" + fmt(out[0]) + ", " + fmt(out[1]) + ", " + fmt(out[2]) + ")"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "echelon_acceptance_determinism";
  fs::remove_all(root);
  std::string detail;
  bool all = true;
  for (Algorithm a : {Algorithm::nsga2, Algorithm::scalarised, Algorithm::morld}) {
    RunSpec spec;
    spec.algorithm = a;
    spec.scenario = "simple";
    spec.seed = 5;
    spec.write_logs = false;
    spec.nsga.generations = 20;
    spec.weight_partitions = 1;
    spec.search.iterations = 12;
    spec.search.es_population = 8;
    spec.search.eval_episodes = 2;
    spec.search.exchange_interval = 4;
    spec.search.psa_enabled = a == Algorithm::morld;
    spec.search.shared_pool_enabled = a == Algorithm::morld;
    std::vector<std::string> bytes;
    for (auto [tag, jobs] : {std::pair{"a", 1}, std::pair{"b", 1}, std::pair{"c", 8}}) {
      const fs::path dir = root / (to_string(a) + "_" + tag);
      execute_run(spec, dir, false, jobs);
      bytes.push_back(slurp(dir / "front.csv"));
    }
    const bool same = bytes[0] == bytes[1] && bytes[0] == bytes[2] && !bytes[0].empty();
    all = all && same;
    detail += (detail.empty() ? "" : ", ") + to_string(a) + (same ? " identical" : " differs");
  }
  fs::remove_all(root);
  return {all, detail};
}

}  // namespace

int main() {
  criterion(1, "structural fidelity of builtin scenarios", structural);
  criterion(2, "horizon evaluation equals rollout and equation totals", equivalence);
  criterion(3, "integer mass balance over random episodes", conservation);
  criterion(4, "indicator oracles", indicators);
  criterion(5, "das_dennis(3,5) count", das_dennis_count);
  criterion(6, "NSGA-II archive hypervolume is non-decreasing", nsga2_elitism);
  criterion(7, "MORLD archive hypervolume is non-decreasing", morld_archive);
  criterion(8, "single-subproblem MORLD reduces to the scalarised baseline", reduction);
  criterion(9, "shared pool does not lower final hypervolume", pool_benefit);
  criterion(10, "profit and emission rise together on the merged front", tradeoff_direction);
  criterion(11, "PSA weight arithmetic", psa_arithmetic);
  criterion(12, "bit-identical fronts across runs and job counts", determinism);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
