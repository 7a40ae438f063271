// Acceptance suite: one line per criterion, exit 0 iff all pass.
#include "hkale/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

using namespace hkale;

namespace {

using Label = std::pair<Family, int>;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <typename T>
  Detail& operator<<(const T& x) {
    os_ << x;
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

RVector normal_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  RVector v(n);
  for (int k = 0; k < n; ++k) v(k) = d(rng);
  return v;
}

std::string str(const Label& l) { return GroupLabel{l.first, l.second}.str(); }

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Label> mckay_labels(bool extended) {
  std::vector<Label> l = {{Family::A, 1}, {Family::A, 2}, {Family::A, 3}, {Family::A, 4},
                          {Family::D, 2}, {Family::D, 3}, {Family::D, 4}, {Family::E6, 0}};
  if (extended) {
    l.push_back({Family::E7, 0});
    l.push_back({Family::E8, 0});
  }
  return l;
}

Outcome group_orders() {
  Outcome o;
  const std::vector<std::pair<Label, int>> expected = {
      {{Family::A, 1}, 2},  {{Family::A, 2}, 3},  {{Family::A, 3}, 4},   {{Family::A, 4}, 5},
      {{Family::D, 2}, 8},  {{Family::D, 3}, 12}, {{Family::D, 4}, 16},  {{Family::E6, 0}, 24},
      {{Family::E7, 0}, 48}, {{Family::E8, 0}, 120}};
  double slowest = 0.0;
  for (const auto& [l, n] : expected) {
    const auto t0 = std::chrono::steady_clock::now();
    const FiniteSubgroup g = build_group(l.first, l.second);
    const double t = elapsed(t0);
    slowest = std::max(slowest, t);
    if (g.order() != n || t >= 1.0) {
      o.pass = false;
      o.detail += str(l) + " order " + std::to_string(g.order()) + " ";
    }
  }
  o.detail += (Detail() << "10 groups, slowest build " << slowest << " s").str();
  return o;
}

Outcome mckay_marks(bool extended) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& l : mckay_labels(extended)) {
    const FiniteSubgroup g = build_group(l.first, l.second);
    const McKayData m = mckay_graph(g);
    int sum = 0;
    for (int n : m.marks) sum += n * n;
    const Eigen::VectorXi n = Eigen::Map<const Eigen::VectorXi>(m.marks.data(), m.marks.size());
    const bool ok = sum == g.order() && graphs_isomorphic(m.adjacency, affine_template(m.label)) &&
                    (m.cartan_ext * n).isZero();
    if (!ok) {
      o.pass = false;
      o.detail += str(l) + " failed ";
    }
  }
  const double t = elapsed(t0);
  const double budget = extended ? 600.0 : 30.0;
  if (t > budget) o.pass = false;
  o.detail += (Detail() << mckay_labels(extended).size() << " families, " << t << " s").str();
  return o;
}

Outcome invariant_dimension() {
  Outcome o;
  int dense = 0;
  for (const auto& l : mckay_labels(false)) {
    const FlatModule m = FlatModule::build({l.first, l.second});
    bool ok = m.real_dim() == 4 * m.order();
    if (m.order() <= 24) {
      ok = ok && 2 * dense_invariant_rank(m.group, regular_representation(m.group)) == m.real_dim();
      ++dense;
    }
    if (!ok) {
      o.pass = false;
      o.detail += str(l) + " failed ";
    }
  }
  o.detail += (Detail() << "8 families, " << dense << " dense cross-checks").str();
  return o;
}

Outcome jacobian_fd() {
  Outcome o;
  double worst = 0.0;
  std::mt19937_64 rng(2024);
  for (const Label l : {Label{Family::A, 1}, Label{Family::A, 2}, Label{Family::D, 2}}) {
    const FlatModule m = FlatModule::build({l.first, l.second});
    for (int t = 0; t < 20; ++t) {
      const RVector x = normal_vector(m.real_dim(), rng);
      const RMatrix jac = moment_jacobian(m.basis.assemble(x), m.basis, m.alg);
      RMatrix fd(jac.rows(), jac.cols());
      const double h = 1e-5;
      for (int c = 0; c < m.real_dim(); ++c) {
        RVector xp = x, xm = x;
        xp(c) += h;
        xm(c) -= h;
        fd.col(c) = (moment_coordinates(moment_unchecked(m.basis.assemble(xp)), m.alg) -
                     moment_coordinates(moment_unchecked(m.basis.assemble(xm)), m.alg)) /
                    (2 * h);
      }
      worst = std::max(worst, (jac - fd).norm() / jac.norm());
    }
  }
  o.pass = worst <= 1e-6;
  o.detail = (Detail() << "60 points, max relative error " << worst).str();
  return o;
}

struct SolverRun {
  std::vector<std::pair<const FlatModule*, SolveResult>> solutions;
  std::vector<std::unique_ptr<FlatModule>> modules;
};

Outcome solver_suite(SolverRun& run) {
  Outcome o;
  double worst_res = 0.0, min_sigma = std::numeric_limits<double>::infinity();
  int solved = 0, total = 0;
  for (const Label l : {Label{Family::A, 1}, Label{Family::A, 2}, Label{Family::A, 3}, Label{Family::D, 2}}) {
    run.modules.push_back(std::make_unique<FlatModule>(FlatModule::build({l.first, l.second})));
    const FlatModule& m = *run.modules.back();
    for (std::uint64_t s = 0; s < 10; ++s) {
      ++total;
      const Zeta z = random_zeta(m.mckay.r + 1, m.mckay.marks, stage_seed(s, "acceptance-zeta"));
      if (!is_good_zeta(z, m.mckay).good) {
        o.pass = false;
        continue;
      }
      const SolveResult res = solve_moment(m, z, stage_seed(s, "acceptance-solve"));
      worst_res = std::max(worst_res, res.residual);
      if (!res.converged) {
        o.pass = false;
        continue;
      }
      const int rank = numerical_rank(moment_jacobian(res.point, m.basis, m.alg), 1e-8);
      const double sigma = stabilizer_check(res.point, m.alg);
      min_sigma = std::min(min_sigma, sigma);
      bool ok = rank == 3 * (m.order() - 1) && sigma > 1e-8;
      try {
        ok = ok && horizontal_frame(res.point, m).vectors.size() == 4;
      } catch (const Error&) {
        ok = false;
      }
      if (!ok) {
        o.pass = false;
        continue;
      }
      ++solved;
      run.solutions.emplace_back(&m, res);
    }
  }
  o.detail = (Detail() << solved << "/" << total << " certified, max residual " << worst_res
                       << ", min stabilizer sigma " << min_sigma)
                 .str();
  return o;
}

Outcome hyperkahler_checks(const SolverRun& run) {
  Outcome o;
  double worst = 0.0;
  for (const auto& [m, res] : run.solutions) {
    const MetricChecks c = check_metric(metric_sample(horizontal_frame(res.point, *m)));
    worst = std::max(worst, c.max_defect());
    if (!(c.gram_min_eigenvalue > 0.0)) o.pass = false;
  }
  if (worst > 1e-6 || run.solutions.empty()) o.pass = false;
  o.detail = (Detail() << run.solutions.size() << " solutions, max defect " << worst).str();
  return o;
}

Outcome goodness_gate() {
  Outcome o;
  int flips = 0;
  for (const auto& l : mckay_labels(false)) {
    const McKayData m = mckay_graph(build_group(l.first, l.second));
    const GoodnessVerdict v = is_good_zeta(Zeta::zero(m.r + 1), m);
    const bool witness_ok =
        v.witness && std::all_of(v.witness->begin(), v.witness->end(), [](int x) { return x >= 0; });
    if (v.good || !witness_ok) {
      o.pass = false;
      o.detail += str(l) + " accepted zeta = 0 ";
    }
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Zeta z = random_zeta(m.r + 1, m.marks, s);
      const bool base = is_good_zeta(z, m).good;
      for (double scale : {1e-3, 1.0, 1e3}) {
        if (is_good_zeta(z.scaled(scale), m).good != base) ++flips;
      }
    }
  }
  if (flips) o.pass = false;
  o.detail += (Detail() << "8 families rejected zeta = 0, " << flips << " scale flips").str();
  return o;
}

Outcome cone_oracle() {
  Outcome o;
  const FlatModule m = FlatModule::build({Family::A, 1});
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const SolveResult res = solve_moment(m, Zeta::zero(2), stage_seed(s, "acceptance-cone"));
    worst = std::max(worst, cone_oracle_a1(res.point));
    if (!res.converged) o.pass = false;
  }
  std::mt19937_64 rng(99);
  int misses = 0;
  for (int t = 0; t < 10; ++t) {
    if (cone_oracle_a1(m.basis.assemble(normal_vector(m.real_dim(), rng))) > 1e-3) ++misses;
  }
  o.pass = o.pass && worst <= 1e-7 && misses >= 9;
  o.detail = (Detail() << "max relation defect " << worst << ", negative control " << misses << "/10").str();
  return o;
}

std::vector<MatrixPair> random_pairs(const FlatModule& m, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<MatrixPair> out;
  for (int k = 0; k < count; ++k) out.push_back(m.basis.assemble(normal_vector(m.real_dim(), rng)));
  return out;
}

const Label kGaugeLabels[] = {{Family::A, 1}, {Family::A, 2}, {Family::D, 2}};
const SampleStrategy kStrategies[] = {SampleStrategy::Design, SampleStrategy::UniformRandom};

Outcome j_reduction() {
  Outcome o;
  double worst = 0.0;
  for (const auto& l : kGaugeLabels) {
    const FlatModule m = FlatModule::build({l.first, l.second});
    for (auto strat : kStrategies) {
      const SphereSample s = build_sphere_sample(1000, strat, 11);
      for (const auto& p : random_pairs(m, 20, 12)) {
        const SectionSample sec = section_from_pair(p, s, m.rep);
        const SectionSample js = j_on_section(sec, s);
        const MatrixPair jp = quaternion_J(p);
        for (int k = 0; k < s.size(); ++k) {
          worst = std::max(worst, (js.values[k] - evaluate_section(jp, s.points[k])).norm());
        }
      }
    }
  }
  o.pass = worst <= 1e-12;
  o.detail = (Detail() << "3 families x 2 strategies x 20 pairs x 1000 points, max defect " << worst).str();
  return o;
}

Outcome moment_reduction() {
  Outcome o;
  double constancy = 0.0, flipped = 0.0, same = 0.0, mu1 = 0.0;
  for (const auto& l : kGaugeLabels) {
    const FlatModule m = FlatModule::build({l.first, l.second});
    for (auto strat : kStrategies) {
      const SphereSample s = build_sphere_sample(1000, strat, 13);
      for (const auto& p : random_pairs(m, 5, 14)) {
        const SectionSample sec = section_from_pair(p, s, m.rep);
        const ReducedMoment r = reduced_moment_integrands(sec, s);
        const Mu1Reduction r1 = mu1_reduction_check(sec, s);
        constancy = std::max({constancy, r.constancy2, r.constancy3});
        flipped = std::max({flipped, r.defect2_flipped, r.defect3_flipped});
        same = std::max({same, r.defect2_same_sign, r.defect3_same_sign});
        mu1 = std::max(mu1, r1.defect_flipped);
      }
    }
  }
  o.pass = constancy <= 1e-10 && flipped <= 1e-10 && mu1 <= 1e-10;
  o.detail = (Detail() << "constancy " << constancy << ", integral vs -mu2/-mu3 " << flipped
                       << " (same-sign reading " << same << "), mu1 integral vs -mu1 " << mu1)
                 .str();
  return o;
}

Outcome metric_agreement() {
  Outcome o;
  double g = 0.0, omega = 0.0, skew = 0.0;
  for (const auto& l : kGaugeLabels) {
    const FlatModule m = FlatModule::build({l.first, l.second});
    for (auto strat : kStrategies) {
      const SphereSample s = build_sphere_sample(1000, strat, 15);
      const auto pairs = random_pairs(m, 6, 16);
      for (std::size_t a = 0; a + 1 < pairs.size(); a += 2) {
        const SectionSample x = section_from_pair(pairs[a], s, m.rep);
        const SectionSample y = section_from_pair(pairs[a + 1], s, m.rep);
        const QuadratureForms f = quadrature_forms(x, y, s);
        const QuadratureForms r = quadrature_forms(y, x, s);
        const QuadratureForms flat = flat_forms(pairs[a], pairs[a + 1]);
        g = std::max(g, std::abs(f.g - real_pairing(pairs[a], pairs[a + 1])));
        omega = std::max({omega, std::abs(f.omega1 - flat.omega1), std::abs(f.omega2 - flat.omega2),
                          std::abs(f.omega3 - flat.omega3)});
        skew = std::max(skew, std::abs(f.omega3 + r.omega3));
        if (std::abs(f.omega3 + r.omega3) > quadrature_tolerance(s)) o.pass = false;
      }
    }
  }
  o.pass = o.pass && g <= 1e-9 && omega <= 1e-9;
  o.detail = (Detail() << "metric " << g << ", forms " << omega << ", omega3 skew " << skew).str();
  return o;
}

Outcome determinism() {
  Outcome o;
  PipelineConfig cfg;
  cfg.label = {Family::A, 2};
  cfg.seed = 7;
  const std::string a = run_pipeline(cfg).body.dump(2);
  const std::string b = run_pipeline(cfg).body.dump(2);
  o.pass = a == b;
  o.detail = (Detail() << "A2 reports of " << a.size() << " bytes " << (o.pass ? "identical" : "differ")).str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  bool extended = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--extended") == 0) extended = true;
  }
  SolverRun run;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"group orders", group_orders},
      {extended ? "McKay marks (with E7, E8)" : "McKay marks", [&] { return mckay_marks(extended); }},
      {"dim M = 4|G|", invariant_dimension},
      {"moment Jacobian vs finite differences", jacobian_fd},
      {"solver, rank, frame, stabilizer", [&] { return solver_suite(run); }},
      {"hyperkahler sample checks", [&] { return hyperkahler_checks(run); }},
      {"good-set gate", goodness_gate},
      {"A1 cone oracle", cone_oracle},
      {"J-reduction on sections", j_reduction},
      {"moment reduction", moment_reduction},
      {"metric agreement", metric_agreement},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    if (!out.pass) ++failed;
    std::printf("[%s] %2zu %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                out.detail.c_str(), elapsed(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
