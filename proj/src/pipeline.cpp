#include "hkale/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace hkale {

namespace fs = std::filesystem;

namespace {

using TolField = double Tolerances::*;

const std::vector<std::pair<const char*, TolField>>& tolerance_fields() {
  static const std::vector<std::pair<const char*, TolField>> fields = {
      {"group_dedup_grid", &Tolerances::group_dedup_grid},
      {"unitarity", &Tolerances::unitarity},
      {"cayley_check", &Tolerances::cayley_check},
      {"mckay_rounding", &Tolerances::mckay_rounding},
      {"isotypic_reconstruction", &Tolerances::isotypic_reconstruction},
      {"membership", &Tolerances::membership},
      {"orthonormality", &Tolerances::orthonormality},
      {"commutation", &Tolerances::commutation},
      {"moment_commutation", &Tolerances::moment_commutation},
      {"good_zeta", &Tolerances::good_zeta},
      {"converged_residual", &Tolerances::converged_residual},
      {"stop_residual", &Tolerances::stop_residual},
      {"stabilizer", &Tolerances::stabilizer},
      {"kernel_cut", &Tolerances::kernel_cut},
      {"projection_defect", &Tolerances::projection_defect},
      {"quaternion_relations", &Tolerances::quaternion_relations},
  };
  return fields;
}

Json num(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

Json matrix_rows(const IMatrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    std::vector<int> row(m.cols());
    for (int c = 0; c < m.cols(); ++c) row[c] = m(r, c);
    rows.push_back(row);
  }
  return rows;
}

RVector random_coords(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  RVector c(n);
  for (int k = 0; k < n; ++k) c(k) = normal(rng);
  return c / c.norm();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
auto in_stage(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), "stage '" + stage + "': " + e.what());
  }
}

}  // namespace

void PipelineConfig::validate() const {
  for (const auto& [name, field] : tolerance_fields()) {
    if (!(tol.*field > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, std::string("tolerance '") + name + "' must be positive");
    }
  }
  if (solver.max_iter <= 0) throw Error(ErrorKind::InvalidArgument, "max_iter must be positive");
  if (!(solver.damping_init > 0.0)) throw Error(ErrorKind::InvalidArgument, "damping must be positive");
  if (sample_size < 100) throw Error(ErrorKind::InvalidArgument, "sample size must be at least 100");
  if (gauge_pairs < 1) throw Error(ErrorKind::InvalidArgument, "gauge_pairs must be at least 1");
  if (label.family == Family::A && label.k < 1) throw Error(ErrorKind::InvalidArgument, "A_k needs k >= 1");
  if (label.family == Family::D && label.k < 2) throw Error(ErrorKind::InvalidArgument, "D_k needs k >= 2");
}

PipelineConfig config_from_json(const Json& j, PipelineConfig cfg) {
  try {
    if (j.contains("family")) {
      cfg.label.family = parse_family(j.at("family").get<std::string>());
      if (cfg.label.family != Family::A && cfg.label.family != Family::D) cfg.label.k = 0;
    }
    if (j.contains("k")) cfg.label.k = j.at("k").get<int>();
    if (j.contains("zeta")) cfg.zeta = zeta_from_json(j.at("zeta")).coeffs;
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("max_iter")) cfg.solver.max_iter = j.at("max_iter").get<int>();
    if (j.contains("damping")) cfg.solver.damping_init = j.at("damping").get<double>();
    if (j.contains("sample_size")) cfg.sample_size = j.at("sample_size").get<int>();
    if (j.contains("strategy")) cfg.strategy = parse_strategy(j.at("strategy").get<std::string>());
    if (j.contains("gauge_pairs")) cfg.gauge_pairs = j.at("gauge_pairs").get<int>();
    if (j.contains("cache_dir")) cfg.cache_dir = j.at("cache_dir").get<std::string>();
    if (j.contains("report")) cfg.report_path = j.at("report").get<std::string>();
    if (j.contains("metric_csv")) cfg.metric_csv_path = j.at("metric_csv").get<std::string>();
    if (j.contains("tolerances")) {
      for (const auto& [name, field] : tolerance_fields()) {
        if (j.at("tolerances").contains(name)) cfg.tol.*field = j.at("tolerances").at(name).get<double>();
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("bad config: ") + e.what());
  }
  cfg.solver.converged_residual = cfg.tol.converged_residual;
  cfg.solver.stop_residual = cfg.tol.stop_residual;
  return cfg;
}

Json to_json(const PipelineConfig& cfg) {
  Json j;
  j["family"] = family_name(cfg.label.family);
  j["k"] = cfg.label.k;
  j["label"] = cfg.label.str();
  j["zeta"] = cfg.zeta ? to_json(Zeta{*cfg.zeta}) : Json(nullptr);
  j["seed"] = cfg.seed;
  j["max_iter"] = cfg.solver.max_iter;
  j["damping"] = cfg.solver.damping_init;
  j["sample_size"] = cfg.sample_size;
  j["strategy"] = strategy_name(cfg.strategy);
  j["gauge_pairs"] = cfg.gauge_pairs;
  Json tol;
  for (const auto& [name, field] : tolerance_fields()) tol[name] = cfg.tol.*field;
  j["tolerances"] = std::move(tol);
  return j;
}

std::uint64_t stage_seed(std::uint64_t seed, const std::string& stage) {
  return fnv1a(stage, fnv1a(&seed, sizeof seed));
}

Json check_entry(const std::string& name, double value, double tolerance) {
  return check_entry(name, value, tolerance, value <= tolerance);
}

Json check_entry(const std::string& name, double value, double tolerance, bool pass) {
  return {{"name", name}, {"value", num(value)}, {"tolerance", num(tolerance)}, {"pass", pass}};
}

bool all_checks_pass(const Json& j) {
  if (j.is_object()) {
    for (const auto& [key, v] : j.items()) {
      if (key == "checks" && v.is_array()) {
        for (const auto& c : v) {
          if (!c.value("pass", false)) return false;
        }
      } else if (!all_checks_pass(v)) {
        return false;
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (!all_checks_pass(v)) return false;
    }
  }
  return true;
}

Json RunReport::to_json() const {
  Json j = body;
  j["timings"] = timings;
  return j;
}

Json group_stage(const FiniteSubgroup& g, const Tolerances& tol, std::uint64_t seed) {
  const GroupReport rep = verify_group(g, tol, static_cast<unsigned>(seed));
  Json checks = Json::array();
  for (const auto& c : rep.checks) checks.push_back(check_entry(c.name, c.value, c.tolerance, c.pass));
  return {{"label", g.label.str()},
          {"order", g.order()},
          {"expected_order", expected_order(g.label)},
          {"class_count", rep.class_count},
          {"contains_minus_identity", g.contains_minus_identity()},
          {"checks", std::move(checks)}};
}

Json mckay_stage(const FiniteSubgroup& g, const McKayData& m) {
  const Tolerances& tol = default_tolerances();
  int sum_sq = 0;
  for (int n : m.marks) sum_sq += n * n;
  Eigen::VectorXi marks = Eigen::Map<const Eigen::VectorXi>(m.marks.data(), m.marks.size());
  const double null_defect = (m.cartan_ext * marks).cwiseAbs().sum();
  const bool iso = graphs_isomorphic(m.adjacency, affine_template(m.label));
  const int roots = static_cast<int>(m.roots.size());
  Json checks = Json::array();
  checks.push_back(check_entry("sum_marks_squared_equals_order", std::abs(sum_sq - g.order()), 0.0));
  checks.push_back(check_entry("adjacency_rounding", m.rounding_residual, tol.mckay_rounding));
  checks.push_back(check_entry("extended_cartan_null_vector", null_defect, 0.0));
  checks.push_back(check_entry("matches_affine_template", iso ? 0.0 : 1.0, 0.0));
  checks.push_back(
      check_entry("root_count", std::abs(roots - expected_root_count(m.label)), 0.0));
  checks.push_back(check_entry("isotypic_reconstruction", m.isotypic.reconstruction_error,
                               tol.isotypic_reconstruction));
  return {{"dynkin", m.label.str()},
          {"rank", m.r},
          {"marks", m.marks},
          {"adjacency", matrix_rows(m.adjacency)},
          {"root_count", roots},
          {"checks", std::move(checks)}};
}

Json basis_stage(const FlatModule& m, const Tolerances& tol, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double membership = 0.0;
  for (int t = 0; t < 4; ++t) {
    membership = std::max(membership,
                          membership_defect(m.basis.assemble(random_coords(m.real_dim(), rng)), m.rep));
  }
  Json j;
  j["dim_M"] = m.real_dim();
  j["expected_dim_M"] = 4 * m.order();
  j["dim_f"] = m.alg.dim_f();
  j["dim_ft"] = m.alg.dim_ft();
  Json checks = Json::array();
  checks.push_back(check_entry("dim_M_equals_4_order", std::abs(m.real_dim() - 4 * m.order()), 0.0));
  checks.push_back(check_entry("dim_f_equals_order", std::abs(m.alg.dim_f() - m.order()), 0.0));
  checks.push_back(check_entry("orthonormality", m.basis.orthonormality_defect(), tol.orthonormality));
  checks.push_back(check_entry("membership", membership, tol.membership));
  if (m.order() <= 24) {
    const int rank = dense_invariant_rank(m.group, regular_representation(m.group));
    j["dense_complex_rank"] = rank;
    checks.push_back(check_entry("dense_projector_rank", std::abs(2 * rank - m.real_dim()), 0.0));
  }
  j["checks"] = std::move(checks);
  return j;
}

Zeta resolve_zeta(const PipelineConfig& cfg, const McKayData& m) {
  const int irreps = m.r + 1;
  if (!cfg.zeta) return random_zeta(irreps, m.marks, stage_seed(cfg.seed, "zeta"));
  if (cfg.zeta->rows() != 3 || cfg.zeta->cols() != irreps) {
    throw Error(ErrorKind::InvalidArgument, "zeta must be 3 x " + std::to_string(irreps) + " for " +
                                                cfg.label.str());
  }
  return Zeta::traceless(*cfg.zeta, m.marks);
}

Json goodness_stage(const Zeta& z, const McKayData& m, const Tolerances& tol) {
  const GoodnessVerdict v = is_good_zeta(z, m, tol);
  Json j;
  j["zeta"] = to_json(z);
  j["good"] = v.good;
  j["witness"] = v.witness ? Json(*v.witness) : Json(nullptr);
  j["min_max_pairing"] = num(v.min_max_pairing);
  j["checks"] = Json::array({check_entry("zeta_traceless", z.trace_defect(m.marks), 1e-12),
                             check_entry("zeta_off_root_walls", v.min_max_pairing, tol.good_zeta,
                                         v.good)});
  return j;
}

Json solve_stage(const FlatModule& m, const Zeta& z, const SolveResult& res, const Tolerances& tol) {
  const MomentCheck mc = check_moment_value(moment_unchecked(res.point), m.rep, tol);
  Json j;
  j["residual"] = num(res.residual);
  j["iterations"] = res.iterations;
  j["converged"] = res.converged;
  j["point_norm"] = norm(res.point);
  j["zeta_norm"] = zeta_coordinates(z, m.alg).norm();
  j["checks"] = Json::array({
      check_entry("residual", res.residual, tol.converged_residual),
      check_entry("membership", membership_defect(res.point, m.rep), tol.membership),
      check_entry("moment_anti_hermitian", mc.anti_hermitian, tol.commutation),
      check_entry("moment_traceless", mc.trace, tol.commutation),
      check_entry("moment_commutes_with_R", mc.commutation, tol.moment_commutation),
  });
  return j;
}

Json metric_stage(const FlatModule& m, const SolveResult& res, const Tolerances& tol,
                  std::uint64_t seed, MetricSample* sample_out) {
  const RMatrix jac = moment_jacobian(res.point, m.basis, m.alg);
  const int rank = numerical_rank(jac, tol.kernel_cut);
  const double stab = stabilizer_check(res.point, m.alg);
  const auto discrete = discrete_stabilizer_check(res.point, m.alg, seed);
  const HorizontalFrame frame = horizontal_frame(res.point, m, tol);
  const MetricSample s = metric_sample(frame, tol);
  const MetricChecks c = check_metric(s);
  if (sample_out) *sample_out = s;

  const double q = tol.quaternion_relations;
  Json j;
  j["dmu_rank"] = rank;
  j["expected_rank"] = m.moment_dim();
  j["frame_dim"] = static_cast<int>(frame.vectors.size());
  j["stabilizer_min_singular_value"] = num(stab);
  j["discrete_stabilizer_min_displacement"] = num(discrete.min_displacement);
  j["checks"] = Json::array({
      check_entry("dmu_full_rank", std::abs(rank - m.moment_dim()), 0.0),
      check_entry("frame_dim_4", std::abs(static_cast<int>(frame.vectors.size()) - 4), 0.0),
      check_entry("stabilizer_trivial", stab, tol.stabilizer, stab > tol.stabilizer),
      check_entry("discrete_stabilizer_heuristic", discrete.min_displacement, 1e-6, discrete.pass),
      check_entry("frame_orthonormal", (s.gram - Eigen::Matrix4d::Identity()).norm(), q),
      check_entry("projection_defect", s.projection_defect, tol.projection_defect),
      check_entry("gram_symmetric", c.gram_symmetry, q),
      check_entry("gram_positive", c.gram_min_eigenvalue, 0.0, c.gram_min_eigenvalue > 0.0),
      check_entry("Iq_squared", c.i_squared, q),
      check_entry("Jq_squared", c.j_squared, q),
      check_entry("Kq_squared", c.k_squared, q),
      check_entry("IqJqKq", c.ijk, q),
      check_entry("Iq_isometry", c.i_isometry, q),
      check_entry("Jq_isometry", c.j_isometry, q),
      check_entry("Kq_isometry", c.k_isometry, q),
  });
  return j;
}

Json gauge_stage(const FlatModule& m, const PipelineConfig& cfg, const MatrixPair* solution) {
  std::mt19937_64 rng(stage_seed(cfg.seed, "gauge"));
  const SphereSample s = build_sphere_sample(cfg.sample_size, cfg.strategy, rng());
  const SampleChecks sc = check_sample(s);
  const double qtol = quadrature_tolerance(s);

  std::vector<MatrixPair> pairs;
  if (solution) pairs.push_back(*solution);
  for (int t = 0; t < cfg.gauge_pairs; ++t) pairs.push_back(m.basis.assemble(random_coords(m.real_dim(), rng)));
  std::vector<SectionSample> secs;
  for (const auto& p : pairs) secs.push_back(section_from_pair(p, s, m.rep, cfg.tol));

  double j_red = 0.0, j_sq = 0.0, s1 = 0.0, gam = 0.0;
  double g_agree = 0.0, w1_agree = 0.0, w2_agree = 0.0, w3_agree = 0.0;
  double g_sym = 0.0, w1_skew = 0.0, w2_skew = 0.0, w3_skew = 0.0;
  double c2 = 0.0, c3 = 0.0, d2 = 0.0, d3 = 0.0, d1 = 0.0;
  double d2_same = 0.0, d3_same = 0.0, d1_same = 0.0;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> pick_point(0, s.size() - 1);
  std::uniform_int_distribution<int> pick_gamma(0, m.order() - 1);
  const int np = static_cast<int>(pairs.size());
  for (int a = 0; a < np; ++a) {
    const SectionSample js = j_on_section(secs[a], s);
    const SectionSample ref = section_values(quaternion_J(pairs[a]), s);
    const SectionSample jjs = j_on_section(js, s);
    for (int k = 0; k < s.size(); ++k) {
      j_red = std::max(j_red, (js.values[k] - ref.values[k]).norm());
      j_sq = std::max(j_sq, (jjs.values[k] + secs[a].values[k]).norm());
    }
    for (int t = 0; t < 32; ++t) {
      const int k = pick_point(rng);
      const Complex phase = std::polar(1.0, angle(rng));
      s1 = std::max(s1, (evaluate_section(pairs[a], phase * s.points[k]) - phase * secs[a].values[k]).norm());
      const int e = pick_gamma(rng);
      const CMatrix moved = evaluate_section(pairs[a], right_act(s.points[k], m.group.elements[e]));
      const CMatrix& r = m.rep.matrices[e];
      gam = std::max(gam, (moved - r.adjoint() * secs[a].values[k] * r).norm());
    }
    const int b = (a + 1) % np;
    const QuadratureForms f = quadrature_forms(secs[a], secs[b], s);
    const QuadratureForms fr = quadrature_forms(secs[b], secs[a], s);
    const QuadratureForms flat = flat_forms(pairs[a], pairs[b]);
    g_agree = std::max(g_agree, std::abs(f.g - flat.g));
    w1_agree = std::max(w1_agree, std::abs(f.omega1 - flat.omega1));
    w2_agree = std::max(w2_agree, std::abs(f.omega2 - flat.omega2));
    w3_agree = std::max(w3_agree, std::abs(f.omega3 - flat.omega3));
    g_sym = std::max(g_sym, std::abs(f.g - fr.g));
    w1_skew = std::max(w1_skew, std::abs(f.omega1 + fr.omega1));
    w2_skew = std::max(w2_skew, std::abs(f.omega2 + fr.omega2));
    w3_skew = std::max(w3_skew, std::abs(f.omega3 + fr.omega3));

    const ReducedMoment rm = reduced_moment_integrands(secs[a], s);
    const Mu1Reduction m1 = mu1_reduction_check(secs[a], s);
    c2 = std::max(c2, rm.constancy2);
    c3 = std::max(c3, rm.constancy3);
    d2 = std::max(d2, rm.defect2_flipped);
    d3 = std::max(d3, rm.defect3_flipped);
    d1 = std::max(d1, m1.defect_flipped);
    d2_same = std::max(d2_same, rm.defect2_same_sign);
    d3_same = std::max(d3_same, rm.defect3_same_sign);
    d1_same = std::max(d1_same, m1.defect_same_sign);
  }

  Json checks = Json::array({
      check_entry("sample_normalization", sc.normalization, 1e-12),
      check_entry("sample_tau_closed", sc.tau_defect, 1e-12),
      check_entry("sample_odd_moment", sc.odd_moment, sc.odd_moment_tolerance),
      check_entry("j_reduction", j_red, 1e-12),
      check_entry("j_squared_minus_one", j_sq, 1e-12),
      check_entry("s1_equivariance", s1, 1e-12),
      check_entry("gamma_equivariance", gam, 1e-9),
      check_entry("g_matches_flat_metric", g_agree, 1e-9),
      check_entry("omega1_matches_flat", w1_agree, 1e-9),
      check_entry("omega2_matches_flat", w2_agree, 1e-9),
      check_entry("omega3_matches_flat", w3_agree, 1e-9),
      check_entry("g_symmetry", g_sym, qtol),
      check_entry("omega1_skew", w1_skew, qtol),
      check_entry("omega2_skew", w2_skew, qtol),
      check_entry("omega3_skew", w3_skew, qtol),
      check_entry("mu2_integrand_constancy", c2, 1e-10),
      check_entry("mu3_integrand_constancy", c3, 1e-10),
      check_entry("mu2_reduction", d2, 1e-10),
      check_entry("mu3_reduction", d3, 1e-10),
      check_entry("mu1_reduction", d1, qtol),
  });

  Json j;
  j["sample"] = {{"size", s.size()},
                 {"strategy", strategy_name(s.strategy)},
                 {"normalization", num(sc.normalization)},
                 {"odd_moment", num(sc.odd_moment)}};
  j["pairs"] = np;
  j["includes_solution"] = solution != nullptr;
  // ∫μ̃_a against +μ_a and −μ_a; the checks above use −μ_a (ζ̃ = −ζ)
  j["signed_comparisons"] = {{"mu1_same_sign", num(d1_same)}, {"mu1_flipped", num(d1)},
                             {"mu2_same_sign", num(d2_same)}, {"mu2_flipped", num(d2)},
                             {"mu3_same_sign", num(d3_same)}, {"mu3_flipped", num(d3)}};

  if (static_cast<long>(s.size()) * m.order() <= cfg.max_closed_points) {
    const SphereSample closed = close_under_group(s, m.group);
    const int e = pick_gamma(rng);
    SphereSample moved = closed;
    for (auto& p : moved.points) p = right_act(p, m.group.elements[e]);
    moved.fingerprint = closed.fingerprint;
    const auto relabel = group_relabeling(closed, m.group, e);
    double set_map = 0.0;
    for (int k = 0; k < closed.size(); ++k) {
      set_map = std::max(set_map, (moved.points[k] - closed.points[relabel[k]]).norm());
    }
    const auto p0 = pairs.front(), p1 = pairs[1 % np];
    const QuadratureForms before =
        quadrature_forms(section_values(p0, closed), section_values(p1, closed), closed);
    const QuadratureForms after =
        quadrature_forms(section_values(p0, moved), section_values(p1, moved), moved);
    const double drift = std::max({std::abs(before.g - after.g), std::abs(before.omega1 - after.omega1),
                                   std::abs(before.omega2 - after.omega2),
                                   std::abs(before.omega3 - after.omega3)});
    checks.push_back(check_entry("gamma_relabeling_set_map", set_map, 1e-12));
    checks.push_back(check_entry("gamma_relabeling_invariance", drift, 1e-9));
    j["gamma_closed_size"] = closed.size();
  } else {
    j["gamma_closed_size"] = nullptr;
  }
  j["checks"] = std::move(checks);
  return j;
}

RunReport run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  RunReport rep;
  Json& body = rep.body;
  Json& timings = rep.timings;
  body["config"] = to_json(cfg);
  body["seed"] = cfg.seed;

  auto t0 = std::chrono::steady_clock::now();
  CachedModule cached = in_stage("basis", [&] { return load_or_build(cfg.label, cfg.cache_dir, cfg.tol); });
  const FlatModule& m = cached.module;
  timings["build"] = seconds_since(t0);
  timings["cache_hit"] = cached.from_cache;

  t0 = std::chrono::steady_clock::now();
  body["group"] = in_stage("group", [&] { return group_stage(m.group, cfg.tol, stage_seed(cfg.seed, "group")); });
  timings["group"] = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  body["mckay"] = in_stage("mckay", [&] { return mckay_stage(m.group, m.mckay); });
  timings["mckay"] = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  body["basis"] = in_stage("basis", [&] { return basis_stage(m, cfg.tol, stage_seed(cfg.seed, "basis")); });
  timings["basis"] = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const Zeta z = in_stage("goodness", [&] { return resolve_zeta(cfg, m.mckay); });
  body["goodness"] = in_stage("goodness", [&] { return goodness_stage(z, m.mckay, cfg.tol); });
  const bool good = body["goodness"]["good"].get<bool>();
  timings["goodness"] = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const SolveResult res =
      in_stage("solve", [&] { return solve_moment(m, z, stage_seed(cfg.seed, "solve"), cfg.solver); });
  body["solve"] = in_stage("solve", [&] { return solve_stage(m, z, res, cfg.tol); });
  timings["solve"] = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  if (good && res.converged) {
    MetricSample sample;
    body["metric"] = in_stage("metric", [&] {
      return metric_stage(m, res, cfg.tol, stage_seed(cfg.seed, "metric"), &sample);
    });
    if (!cfg.metric_csv_path.empty()) {
      in_stage("metric", [&] { emit_metric_csv(sample, cfg.metric_csv_path); });
    }
  } else {
    body["metric"] = {{"skipped", good ? "solver did not converge" : "zeta is not good"}};
  }
  timings["metric"] = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  body["gauge"] = in_stage("gauge", [&] {
    return gauge_stage(m, cfg, good && res.converged ? &res.point : nullptr);
  });
  timings["gauge"] = seconds_since(t0);

  rep.pass = all_checks_pass(body);
  body["pass"] = rep.pass;
  if (!cfg.report_path.empty()) write_json_file(cfg.report_path, rep.to_json());
  return rep;
}

std::string metric_csv(const MetricSample& s) {
  std::string out = "matrix,row,c0,c1,c2,c3\n";
  const std::pair<const char*, const Eigen::Matrix4d*> mats[] = {
      {"gram", &s.gram}, {"Iq", &s.iq}, {"Jq", &s.jq}, {"Kq", &s.kq}};
  char buf[64];
  for (const auto& [name, mat] : mats) {
    for (int r = 0; r < 4; ++r) {
      out += name;
      out += "," + std::to_string(r);
      for (int c = 0; c < 4; ++c) {
        std::snprintf(buf, sizeof buf, ",%.17g", (*mat)(r, c));
        out += buf;
      }
      out += "\n";
    }
  }
  return out;
}

void emit_metric_csv(const MetricSample& s, const fs::path& path) {
  if (path.empty()) throw Error(ErrorKind::Io, "empty metric CSV path");
  write_text_file(path, metric_csv(s));
}

MetricSample parse_metric_csv(const std::string& text) {
  MetricSample s;
  s.gram.setZero();
  s.iq.setZero();
  s.jq.setZero();
  s.kq.setZero();
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("matrix,row", 0) != 0) {
    throw Error(ErrorKind::Io, "metric CSV is missing its header");
  }
  int seen = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (cells.size() != 6) throw Error(ErrorKind::Io, "metric CSV row has " + std::to_string(cells.size()) + " cells");
    Eigen::Matrix4d* target = cells[0] == "gram" ? &s.gram
                              : cells[0] == "Iq" ? &s.iq
                              : cells[0] == "Jq" ? &s.jq
                              : cells[0] == "Kq" ? &s.kq
                                                 : nullptr;
    if (!target) throw Error(ErrorKind::Io, "unknown metric CSV matrix '" + cells[0] + "'");
    const int r = std::stoi(cells[1]);
    if (r < 0 || r > 3) throw Error(ErrorKind::Io, "metric CSV row index out of range");
    for (int c = 0; c < 4; ++c) (*target)(r, c) = std::stod(cells[2 + c]);
    ++seen;
  }
  if (seen != 16) throw Error(ErrorKind::Io, "metric CSV needs 16 rows, found " + std::to_string(seen));
  return s;
}

MetricSample read_metric_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_metric_csv(ss.str());
}

Json solution_to_json(const GroupLabel& label, std::uint64_t seed, const Zeta& z,
                      const SolveResult& res) {
  return {{"family", family_name(label.family)},
          {"k", label.k},
          {"seed", seed},
          {"zeta", to_json(z)},
          {"point", to_json(res.point)},
          {"coords", std::vector<double>(res.coords.data(), res.coords.data() + res.coords.size())},
          {"residual", num(res.residual)},
          {"iterations", res.iterations},
          {"converged", res.converged}};
}

SolveResult solution_from_json(const Json& j, const FlatModule& m) {
  SolveResult res;
  res.point = pair_from_json(j.at("point"));
  if (res.point.dim() != m.order()) {
    throw Error(ErrorKind::DimensionMismatch, "solution point does not match the group order");
  }
  const auto coords = j.at("coords").get<std::vector<double>>();
  res.coords = Eigen::Map<const RVector>(coords.data(), static_cast<Eigen::Index>(coords.size()));
  res.residual = j.at("residual").is_number() ? j.at("residual").get<double>()
                                              : std::numeric_limits<double>::infinity();
  res.iterations = j.at("iterations").get<int>();
  res.converged = j.at("converged").get<bool>();
  return res;
}

}  // namespace hkale
