#include "hkale/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace hkale;

namespace {

struct Flags {
  std::string config;
  std::string cache_dir;
  std::uint64_t seed = 7;
  std::string family = "A";
  int k = 1;
  std::string out;
  std::string zeta;
  std::string solution;
  std::string csv;
  int n = 1000;
  std::string strategy = "design";
  int pairs = 3;
  int max_iter = 500;
};

PipelineConfig make_config(const CLI::App& app, const Flags& f) {
  PipelineConfig cfg;
  if (!f.config.empty()) cfg = config_from_json(read_json_file(f.config));
  Json over;
  auto given = [&](const char* name) {
    auto seen = [name](const CLI::App* a) {
      const auto* opt = a->get_option_no_throw(name);
      return opt && opt->count() > 0;
    };
    if (seen(&app)) return true;
    for (const auto* sub : app.get_subcommands()) {
      if (seen(sub)) return true;
    }
    return false;
  };
  if (given("--family")) over["family"] = f.family;
  if (given("--k")) over["k"] = f.k;
  if (given("--seed")) over["seed"] = f.seed;
  if (given("--cache-dir")) over["cache_dir"] = f.cache_dir;
  if (given("--n")) over["sample_size"] = f.n;
  if (given("--strategy")) over["strategy"] = f.strategy;
  if (given("--pairs")) over["gauge_pairs"] = f.pairs;
  if (given("--max-iter")) over["max_iter"] = f.max_iter;
  if (!f.zeta.empty()) over["zeta"] = read_json_file(f.zeta);
  cfg = config_from_json(over, cfg);
  cfg.validate();
  return cfg;
}

int finish(Json j, const std::string& out, std::uint64_t seed) {
  if (!j.contains("seed")) j["seed"] = seed;
  if (!out.empty()) write_json_file(out, j);
  std::cout << j.dump(2) << "\n";
  return all_checks_pass(j) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperkähler quotient toolkit: finite SU(2) subgroups, McKay data, moment maps and ALE metric samples"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "JSON config file; command-line flags override it");
  app.add_option("--cache-dir", f.cache_dir, "Directory for cached group/McKay/basis data");
  app.add_option("--seed", f.seed, "Pipeline seed");
  app.add_option("--family", f.family, "A, D, E6, E7 or E8");
  app.add_option("--k", f.k, "Rank parameter for A_k (k >= 1) and D_k (k >= 2)");
  app.fallthrough();

  auto* group = app.add_subcommand("group", "Build Γ and verify the group axioms");
  auto* mckay = app.add_subcommand("mckay", "Irreducible decomposition and McKay graph");
  auto* basis = app.add_subcommand("basis", "Invariant basis of M and the gauge algebra");
  auto* zeta = app.add_subcommand("zeta-check", "Good-set test for ζ");
  auto* solve = app.add_subcommand("solve", "Solve μ(p) = ζ and write the solution");
  auto* metric = app.add_subcommand("metric", "Horizontal frame and hyperkähler checks at a solution");
  auto* gauge = app.add_subcommand("gauge-verify", "Section-space identities on a sphere sample");
  auto* run = app.add_subcommand("run", "Full pipeline");

  for (auto* sub : {zeta, solve, run}) sub->add_option("--zeta", f.zeta, "ζ file {\"coeffs\": 3 x (r+1)}");
  for (auto* sub : {group, mckay, basis, zeta, solve, metric, gauge, run}) {
    sub->add_option("--out", f.out, "Write the JSON output here as well");
  }
  for (auto* sub : {solve, run}) sub->add_option("--max-iter", f.max_iter, "Solver iteration cap");
  metric->add_option("--solution", f.solution, "Solution file written by solve")->required();
  for (auto* sub : {metric, run}) sub->add_option("--csv", f.csv, "Metric sample CSV output");
  for (auto* sub : {gauge, run}) {
    sub->add_option("--n", f.n, "Sphere sample size (>= 100)");
    sub->add_option("--strategy", f.strategy, "design or uniform-random");
    sub->add_option("--pairs", f.pairs, "Random pairs in M to test");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig cfg = make_config(app, f);
    const std::string label = cfg.label.str();

    if (group->parsed()) {
      const FiniteSubgroup g = build_group(cfg.label, cfg.tol);
      return finish(group_stage(g, cfg.tol, stage_seed(cfg.seed, "group")), f.out, cfg.seed);
    }
    if (mckay->parsed()) {
      const FiniteSubgroup g = build_group(cfg.label, cfg.tol);
      const McKayData m = mckay_graph(g, cfg.tol);
      return finish(mckay_stage(g, m), f.out, cfg.seed);
    }

    if (run->parsed()) {
      if (!f.out.empty()) cfg.report_path = f.out;
      if (!f.csv.empty()) cfg.metric_csv_path = f.csv;
      const RunReport rep = run_pipeline(cfg);
      std::cout << rep.to_json().dump(2) << "\n";
      return rep.pass ? 0 : 1;
    }

    const CachedModule cached = load_or_build(cfg.label, cfg.cache_dir, cfg.tol);
    const FlatModule& m = cached.module;

    if (basis->parsed()) return finish(basis_stage(m, cfg.tol, stage_seed(cfg.seed, "basis")), f.out, cfg.seed);
    if (zeta->parsed()) return finish(goodness_stage(resolve_zeta(cfg, m.mckay), m.mckay, cfg.tol), f.out, cfg.seed);
    if (solve->parsed()) {
      const Zeta z = resolve_zeta(cfg, m.mckay);
      const SolveResult res = solve_moment(m, z, stage_seed(cfg.seed, "solve"), cfg.solver);
      const Json sol = solution_to_json(cfg.label, cfg.seed, z, res);
      if (!f.out.empty()) write_json_file(f.out, sol);
      Json j = {{"label", label}, {"seed", cfg.seed}, {"solve", solve_stage(m, z, res, cfg.tol)}};
      std::cout << j.dump(2) << "\n";
      return all_checks_pass(j) ? 0 : 1;
    }
    if (metric->parsed()) {
      const Json sj = read_json_file(f.solution);
      const SolveResult res = solution_from_json(sj, m);
      const Zeta z = Zeta::traceless(zeta_from_json(sj.at("zeta")).coeffs, m.mckay.marks);
      Json j = {{"label", label}, {"seed", cfg.seed}, {"goodness", goodness_stage(z, m.mckay, cfg.tol)}};
      MetricSample sample;
      j["metric"] = metric_stage(m, res, cfg.tol, stage_seed(cfg.seed, "metric"), &sample);
      if (!f.csv.empty()) emit_metric_csv(sample, f.csv);
      return finish(j, f.out, cfg.seed);
    }
    Json j = {{"config", to_json(cfg)}, {"gauge", gauge_stage(m, cfg, nullptr)}};
    j["pass"] = all_checks_pass(j);
    return finish(j, f.out, cfg.seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
