#pragma once

#include "hkale/gauge_bridge.hpp"
#include "hkale/serialize.hpp"
#include "hkale/solver.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace hkale {

struct PipelineConfig {
  GroupLabel label{Family::A, 1};
  std::optional<RMatrix> zeta;  // 3 x (r+1); drawn from the "zeta" stage stream when absent
  SolverOptions solver;
  Tolerances tol;
  int sample_size = 1000;
  SampleStrategy strategy = SampleStrategy::Design;
  int gauge_pairs = 3;
  /// Γ-relabeling check runs only when sample_size·|Γ| stays below this.
  int max_closed_points = 30000;
  std::uint64_t seed = 7;
  std::filesystem::path cache_dir;
  std::filesystem::path report_path;
  std::filesystem::path metric_csv_path;

  /// Throws InvalidArgument on non-positive tolerances or sizes.
  void validate() const;
};

/// Fields present in `j` override `base`. Keys: family, k, zeta, seed,
/// max_iter, damping, sample_size, strategy, gauge_pairs, cache_dir,
/// report, metric_csv, tolerances{...}.
PipelineConfig config_from_json(const Json& j, PipelineConfig base = {});
Json to_json(const PipelineConfig& cfg);

/// Independent stream per stage: FNV-1a of the stage label seeded by the
/// pipeline seed.
std::uint64_t stage_seed(std::uint64_t seed, const std::string& stage);

/// {"name", "value", "tolerance", "pass"} with `pass` = value <= tolerance
/// unless given.
Json check_entry(const std::string& name, double value, double tolerance);
Json check_entry(const std::string& name, double value, double tolerance, bool pass);
/// True when every "checks" array below `j` is all-pass.
bool all_checks_pass(const Json& j);

struct RunReport {
  Json body;     // deterministic given the config
  Json timings;  // wall-clock seconds per stage, cache status
  bool pass = false;

  Json to_json() const;
};

// Individual stages, shared by run_pipeline and the CLI subcommands.
Json group_stage(const FiniteSubgroup& g, const Tolerances& tol, std::uint64_t seed);
Json mckay_stage(const FiniteSubgroup& g, const McKayData& m);
Json basis_stage(const FlatModule& m, const Tolerances& tol, std::uint64_t seed);
Zeta resolve_zeta(const PipelineConfig& cfg, const McKayData& m);
Json goodness_stage(const Zeta& z, const McKayData& m, const Tolerances& tol);
Json solve_stage(const FlatModule& m, const Zeta& z, const SolveResult& res, const Tolerances& tol);
Json metric_stage(const FlatModule& m, const SolveResult& res, const Tolerances& tol,
                  std::uint64_t seed, MetricSample* sample_out = nullptr);
Json gauge_stage(const FlatModule& m, const PipelineConfig& cfg, const MatrixPair* solution);

/// group → mckay → basis → goodness → solve → frame/metric → gauge.
/// A bad ζ flags goodness = false and skips the frame and metric stages.
/// Module errors are rethrown with the stage name prepended.
RunReport run_pipeline(const PipelineConfig& cfg);

/// Header "matrix,row,c0,c1,c2,c3", then four rows each for gram, Iq, Jq,
/// Kq, written with 17 significant digits.
std::string metric_csv(const MetricSample& s);
void emit_metric_csv(const MetricSample& s, const std::filesystem::path& path);
MetricSample parse_metric_csv(const std::string& text);
MetricSample read_metric_csv(const std::filesystem::path& path);

/// sol.json layout: family, k, seed, zeta, point, coords, residual,
/// iterations, converged.
Json solution_to_json(const GroupLabel& label, std::uint64_t seed, const Zeta& z,
                      const SolveResult& res);
SolveResult solution_from_json(const Json& j, const FlatModule& m);

}  // namespace hkale
