#include "hkale/pipeline.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <set>

using namespace hkale;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hkale_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

PipelineConfig small_config(Family f, int k) {
  PipelineConfig cfg;
  cfg.label = {f, k};
  cfg.sample_size = 200;
  cfg.gauge_pairs = 2;
  return cfg;
}

MetricSample sample_for(Family f, int k) {
  const FlatModule m = FlatModule::build({f, k});
  const Zeta z = random_zeta(m.mckay.r + 1, m.mckay.marks, 1);
  const SolveResult res = solve_moment(m, z, std::uint64_t{1});
  return metric_sample(horizontal_frame(res.point, m));
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("metric CSV round trip") {
    const MetricSample s = sample_for(Family::A, 1);
    const std::string text = metric_csv(s);
    CHECK(text.rfind("matrix,row,c0,c1,c2,c3\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 17);
    CHECK(text.find("\ngram,0,") != std::string::npos);
    CHECK(s.gram.isApprox(Eigen::Matrix4d::Identity(), 1e-12));
    const MetricSample back = parse_metric_csv(text);
    CHECK(back.gram == s.gram);
    CHECK(back.iq == s.iq);
    CHECK(back.jq == s.jq);
    CHECK(back.kq == s.kq);
    CHECK((back.jq * back.jq + Eigen::Matrix4d::Identity()).norm() < 1e-10);

    const fs::path dir = scratch("csv");
    emit_metric_csv(s, dir / "nested" / "m.csv");
    CHECK(read_metric_csv(dir / "nested" / "m.csv").kq == s.kq);
    try {
      emit_metric_csv(s, "");
      FAIL("expected Io");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Io);
    }
    MetricSample id;
    id.gram.setIdentity();
    id.iq.setZero();
    id.jq.setZero();
    id.kq.setZero();
    CHECK(metric_csv(id).find("\ngram,0,1,0,0,0\ngram,1,0,1,0,0\n") != std::string::npos);
    CHECK_THROWS_AS(parse_metric_csv("gram,0,1,0,0,0\n"), Error);
    CHECK_THROWS_AS(parse_metric_csv("matrix,row,c0,c1,c2,c3\nfoo,0,1,0,0,0\n"), Error);
  }

  TEST_CASE("JSON round trip is bitwise") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    CMatrix c(3, 4);
    for (int r = 0; r < 3; ++r) {
      for (int k = 0; k < 4; ++k) c(r, k) = {u(rng) / 7.0, std::ldexp(u(rng), -40)};
    }
    const Json j = Json::parse(to_json(c).dump());
    CHECK(cmatrix_from_json(j) == c);

    const FlatModule m = FlatModule::build({Family::D, 2});
    const McKayData back = mckay_from_json(Json::parse(to_json(m.mckay).dump()));
    CHECK(back.marks == m.mckay.marks);
    CHECK(back.adjacency == m.mckay.adjacency);
    CHECK(back.isotypic.change_of_basis == m.mckay.isotypic.change_of_basis);
    const FiniteSubgroup g = group_from_json(Json::parse(to_json(m.group).dump()));
    CHECK(g.order() == m.order());
    for (int a = 0; a < g.order(); ++a) CHECK(g.elements[a] == m.group.elements[a]);
    const InvariantBasis b = basis_from_json(Json::parse(to_json(m.basis).dump()));
    CHECK(b.size() == m.basis.size());
    CHECK(b.vector(7).alpha == m.basis.vector(7).alpha);

    const Zeta z = random_zeta(m.mckay.r + 1, m.mckay.marks, 2);
    CHECK(zeta_from_json(Json::parse(to_json(z).dump())).coeffs == z.coeffs);
  }

  TEST_CASE("solution file round trip") {
    const FlatModule m = FlatModule::build({Family::A, 1});
    const Zeta z = random_zeta(2, m.mckay.marks, 3);
    const SolveResult res = solve_moment(m, z, std::uint64_t{4});
    const Json j = Json::parse(solution_to_json(m.group.label, 4, z, res).dump());
    const SolveResult back = solution_from_json(j, m);
    CHECK(back.coords == res.coords);
    CHECK(back.point.alpha == res.point.alpha);
    CHECK(back.residual == res.residual);
    CHECK(back.converged == res.converged);
    const FlatModule other = FlatModule::build({Family::A, 2});
    CHECK_THROWS_AS(solution_from_json(j, other), Error);
  }

  TEST_CASE("cache: miss, then hit, same report") {
    const fs::path dir = scratch("cache");
    PipelineConfig cfg = small_config(Family::D, 2);
    cfg.cache_dir = dir;
    const RunReport first = run_pipeline(cfg);
    CHECK(first.timings["cache_hit"] == false);
    CHECK(fs::exists(dir / "D2.json"));
    const RunReport second = run_pipeline(cfg);
    CHECK(second.timings["cache_hit"] == true);
    CHECK(first.body.dump() == second.body.dump());
    CHECK(first.pass);

    // corrupt cache is rebuilt
    write_text_file(dir / "D2.json", "{not json");
    const CachedModule rebuilt = load_or_build(cfg.label, dir);
    CHECK_FALSE(rebuilt.from_cache);
    CHECK(load_or_build(cfg.label, dir).from_cache);
    // no caching with an empty directory
    CHECK_FALSE(load_or_build(cfg.label, "").from_cache);
  }

  TEST_CASE("same config, same report") {
    const PipelineConfig cfg = small_config(Family::A, 2);
    CHECK(run_pipeline(cfg).body.dump() == run_pipeline(cfg).body.dump());
    PipelineConfig other = cfg;
    other.seed = 8;
    CHECK(run_pipeline(other).body.dump() != run_pipeline(cfg).body.dump());
  }

  TEST_CASE("stage seeds are distinct and stable") {
    const std::vector<std::string> stages = {"group", "basis", "zeta", "solve", "metric", "gauge"};
    std::set<std::uint64_t> seen;
    for (const auto& s : stages) seen.insert(stage_seed(7, s));
    CHECK(seen.size() == stages.size());
    CHECK(stage_seed(7, "solve") == stage_seed(7, "solve"));
    CHECK(stage_seed(7, "solve") != stage_seed(8, "solve"));
  }

  TEST_CASE("config parsing and validation") {
    const Json j = Json::parse(R"({"family": "D", "k": 3, "seed": 11, "sample_size": 300,
                                    "strategy": "uniform-random", "tolerances": {"membership": 1e-8}})");
    const PipelineConfig cfg = config_from_json(j);
    CHECK(cfg.label.str() == "D3");
    CHECK(cfg.seed == 11);
    CHECK(cfg.sample_size == 300);
    CHECK(cfg.strategy == SampleStrategy::UniformRandom);
    CHECK(cfg.tol.membership == 1e-8);
    CHECK_NOTHROW(cfg.validate());
    CHECK(config_from_json(Json::parse(R"({"family": "E6"})")).label.str() == "E6");

    auto rejects = [](const char* text) {
      try {
        config_from_json(Json::parse(text)).validate();
        return false;
      } catch (const Error& e) {
        return e.kind() == ErrorKind::InvalidArgument;
      }
    };
    CHECK(rejects(R"({"tolerances": {"membership": 0}})"));
    CHECK(rejects(R"({"tolerances": {"good_zeta": -1}})"));
    CHECK(rejects(R"({"sample_size": 50})"));
    CHECK(rejects(R"({"family": "D", "k": 1})"));
    CHECK(rejects(R"({"family": "A", "k": 0})"));
    CHECK(rejects(R"({"strategy": "grid"})"));
    CHECK(rejects(R"({"k": "three"})"));
    CHECK(rejects(R"({"max_iter": 0})"));
  }

  TEST_CASE("bad ζ is reported, not crashed on") {
    PipelineConfig cfg = small_config(Family::A, 2);
    cfg.zeta = RMatrix::Zero(3, 3);
    const RunReport rep = run_pipeline(cfg);
    CHECK_FALSE(rep.pass);
    CHECK(rep.body["goodness"]["good"] == false);
    CHECK(rep.body["goodness"]["witness"].is_array());
    CHECK(rep.body["metric"].contains("skipped"));
    // gauge identities do not depend on ζ
    CHECK(all_checks_pass(rep.body["gauge"]));

    cfg.zeta = RMatrix::Zero(3, 2);
    try {
      run_pipeline(cfg);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("stage 'goodness'") != std::string::npos);
    }
  }

  TEST_CASE("all_checks_pass walks nested check arrays") {
    Json j = {{"a", {{"checks", {check_entry("x", 1e-12, 1e-10)}}}},
              {"b", Json::array({{{"checks", {check_entry("y", 0.5, 1.0)}}}})}};
    CHECK(all_checks_pass(j));
    j["b"][0]["checks"].push_back(check_entry("z", 2.0, 1.0));
    CHECK_FALSE(all_checks_pass(j));
    CHECK(check_entry("forced", 5.0, 1.0, true)["pass"] == true);
    CHECK(check_entry("nan", std::nan(""), 1.0)["value"] == "nan");
  }

  TEST_CASE("report file is written") {
    const fs::path dir = scratch("report");
    PipelineConfig cfg = small_config(Family::A, 1);
    cfg.report_path = dir / "out" / "report.json";
    cfg.metric_csv_path = dir / "out" / "metric.csv";
    const RunReport rep = run_pipeline(cfg);
    const Json j = read_json_file(cfg.report_path);
    CHECK(j.contains("timings"));
    CHECK(j["pass"] == rep.pass);
    CHECK(read_metric_csv(cfg.metric_csv_path).gram.isApprox(Eigen::Matrix4d::Identity(), 1e-12));
  }
}
