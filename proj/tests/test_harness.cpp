#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "basket/scenarios.hpp"
#include "basket/simulate.hpp"

using namespace basket;

TEST_CASE("scenario table matches the simulation grid") {
  const auto& table = scenario_table();
  REQUIRE(table.size() == 25);
  for (const Scenario& s : table) {
    REQUIRE(s.num_cohorts() == 6);
    for (int i = 0; i < 6; ++i) {
      CHECK(s.true_rates[i] >= 0.0);
      CHECK(s.true_rates[i] <= 1.0);
    }
  }

  const Scenario* s1 = find_scenario("1.A.2");
  REQUIRE(s1 != nullptr);
  CHECK(s1->true_rates == Eigen::VectorXd::Constant(6, 0.3));

  const Scenario* s2 = find_scenario("2.C.2");
  REQUIRE(s2 != nullptr);
  Eigen::VectorXd expected(6);
  expected << 0.1, 0.1, 0.1, 0.5, 0.5, 0.5;
  CHECK(s2->true_rates == expected);

  const Scenario* s3 = find_scenario("3.B.1");
  REQUIRE(s3 != nullptr);
  expected << 0.1, 0.4, 0.9, 0.9, 0.9, 0.9;
  CHECK(s3->true_rates == expected);

  CHECK(find_scenario("9.Z.9") == nullptr);
}

TEST_CASE("scenario table checksum stays pinned") {
  // FNV-1a over "id:rate,rate,..." lines with rates in %.4f; freezing the
  // digest guards against accidental edits of the grid.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Scenario& s : scenario_table()) {
    char line[96];
    std::snprintf(line, sizeof(line), "%s:%.4f,%.4f,%.4f,%.4f,%.4f,%.4f",
                  s.id.c_str(), s.true_rates[0], s.true_rates[1],
                  s.true_rates[2], s.true_rates[3], s.true_rates[4],
                  s.true_rates[5]);
    for (const char* p = line; *p != '\0'; ++p) {
      h ^= static_cast<unsigned char>(*p);
      h *= 0x100000001b3ULL;
    }
  }
  CHECK(h == 0x7d7d94211f66a7acULL);
}

TEST_CASE("generate_trial respects degenerate rates") {
  Scenario zero{"zero", Eigen::VectorXd::Zero(6)};
  Scenario one{"one", Eigen::VectorXd::Ones(6)};
  RngStream rng(5);
  const TrialData none = generate_trial(zero, 10, rng);
  const TrialData all = generate_trial(one, 10, rng);
  for (int i = 0; i < 6; ++i) {
    CHECK(none.cohorts[i].r == 0);
    CHECK(all.cohorts[i].r == 10);
    CHECK(none.cohorts[i].n == 10);
  }
  CHECK_THROWS_AS(generate_trial(zero, 0, rng), std::invalid_argument);
}

TEST_CASE("generate_trial matches the binomial mean") {
  const Scenario* s = find_scenario("1.A.2");  // p = 0.3
  RngStream rng(6);
  double total = 0.0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    RngStream stream = rng.child(i);
    const TrialData t = generate_trial(*s, 100, stream);
    for (int c = 0; c < 6; ++c) {
      total += t.cohorts[c].r;
    }
  }
  CHECK(total / (6.0 * trials) == doctest::Approx(30.0).epsilon(0.01));
}

namespace {

CellResult make_cell(const Scenario& scenario,
                     const std::vector<Eigen::VectorXd>& rows) {
  CellResult cell;
  cell.scenario_id = scenario.id;
  cell.method = MethodId::SampleProportion;
  cell.n_per_cohort = 10;
  cell.estimates.resize(rows.size(), scenario.num_cohorts());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    cell.estimates.row(i) = rows[i].transpose();
  }
  cell.ok.assign(rows.size(), 1);
  return cell;
}

}  // namespace

TEST_CASE("metric formulas at fixed points") {
  const Scenario* hetero = find_scenario("2.B.2");

  SUBCASE("estimates equal to truth give zero everywhere") {
    const CellResult cell =
        make_cell(*hetero, {hetero->true_rates, hetero->true_rates});
    const MetricsRecord m = compute_metrics(cell, *hetero);
    CHECK(m.mean_abs_bias == 0.0);
    CHECK(m.mean_mse == 0.0);
    REQUIRE(m.shrinkage.has_value());
    CHECK(*m.shrinkage == 0.0);
  }

  SUBCASE("constant estimates collapse the range: shrinkage one") {
    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(6, 0.2);
    const CellResult cell = make_cell(*hetero, {flat, flat, flat});
    const MetricsRecord m = compute_metrics(cell, *hetero);
    REQUIRE(m.shrinkage.has_value());
    CHECK(*m.shrinkage == 1.0);
  }

  SUBCASE("homogeneous scenarios have no shrinkage value") {
    const Scenario* homog = find_scenario("1.A.1");
    const CellResult cell =
        make_cell(*homog, {homog->true_rates, homog->true_rates});
    const MetricsRecord m = compute_metrics(cell, *homog);
    CHECK(!m.shrinkage.has_value());
  }

  SUBCASE("fewer than two replications is an error") {
    const CellResult cell = make_cell(*hetero, {hetero->true_rates});
    CHECK_THROWS_AS(compute_metrics(cell, *hetero), std::invalid_argument);
  }

  SUBCASE("variance uses the unbiased denominator") {
    Eigen::VectorXd low = Eigen::VectorXd::Constant(6, 0.1);
    Eigen::VectorXd high = Eigen::VectorXd::Constant(6, 0.3);
    const Scenario* homog = find_scenario("1.A.1");  // truth 0.1
    const CellResult cell = make_cell(*homog, {low, high});
    const MetricsRecord m = compute_metrics(cell, *homog);
    // mean 0.2, bias 0.1, sample variance (n-1 denominator) 0.02.
    CHECK(m.mean_abs_bias == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(m.mean_mse == doctest::Approx(0.01 + 0.02).epsilon(1e-12));
  }
}

TEST_CASE("mean MSE dominates squared bias on simulated cells") {
  SimPlan plan;
  plan.scenario_ids = {"2.B.1"};
  plan.sample_sizes = {10};
  plan.methods = {MethodId::SampleProportion, MethodId::Fujikawa,
                  MethodId::LiuLocalMem};
  plan.n_reps = 200;
  plan.master_seed = 99;
  const SimResults results = run_plan(plan);
  for (const CellResult& cell : results.cells) {
    const Scenario* s = find_scenario(cell.scenario_id);
    const auto [mean, variance] = cohort_moments(cell);
    const MetricsRecord m = compute_metrics(cell, *s);
    double bias_sq = 0.0;
    for (int i = 0; i < 6; ++i) {
      const double b = mean[i] - s->true_rates[i];
      bias_sq += b * b;
    }
    CHECK(m.mean_mse >= bias_sq / 6.0 - 1e-15);
  }
}

TEST_CASE("sample proportion analytic moments on the homogeneous grid") {
  SimPlan plan;
  plan.scenario_ids = {"1.A.3"};
  plan.sample_sizes = {10};
  plan.methods = {MethodId::SampleProportion};
  plan.n_reps = 10000;
  plan.master_seed = 314159;
  plan.workers = 2;
  const SimResults results = run_plan(plan);
  REQUIRE(results.metrics.size() == 1);
  CHECK(results.metrics[0].mean_mse == doctest::Approx(0.025).epsilon(0.04));
  CHECK(!results.metrics[0].shrinkage.has_value());
}

TEST_CASE("sample proportion is unbiased at n = 100") {
  SimPlan plan;
  plan.scenario_ids = {"2.C.2"};
  plan.sample_sizes = {100};
  plan.methods = {MethodId::SampleProportion};
  plan.n_reps = 10000;
  plan.master_seed = 2718;
  plan.workers = 2;
  const SimResults results = run_plan(plan);
  CHECK(results.metrics[0].mean_abs_bias < 0.005);
}

TEST_CASE("runs are deterministic across worker counts and reruns") {
  SimPlan plan;
  plan.scenario_ids = {"2.B.2", "1.A.2"};
  plan.sample_sizes = {10, 20};
  plan.methods = {MethodId::SampleProportion, MethodId::Fujikawa,
                  MethodId::PsiodaBma};
  plan.n_reps = 40;
  plan.master_seed = 777;

  plan.workers = 1;
  const SimResults serial = run_plan(plan);
  plan.workers = 8;
  const SimResults parallel = run_plan(plan);

  REQUIRE(serial.metrics.size() == parallel.metrics.size());
  for (std::size_t i = 0; i < serial.metrics.size(); ++i) {
    CHECK(serial.metrics[i].mean_abs_bias == parallel.metrics[i].mean_abs_bias);
    CHECK(serial.metrics[i].mean_mse == parallel.metrics[i].mean_mse);
    CHECK(serial.metrics[i].shrinkage.has_value() ==
          parallel.metrics[i].shrinkage.has_value());
    if (serial.metrics[i].shrinkage.has_value()) {
      CHECK(*serial.metrics[i].shrinkage == *parallel.metrics[i].shrinkage);
    }
  }
  REQUIRE(serial.trial_digests.size() == parallel.trial_digests.size());
  for (std::size_t i = 0; i < serial.trial_digests.size(); ++i) {
    CHECK(serial.trial_digests[i] == parallel.trial_digests[i]);
  }
  for (std::size_t i = 0; i < serial.cells.size(); ++i) {
    CHECK(serial.cells[i].estimates == parallel.cells[i].estimates);
  }
}

TEST_CASE("method estimates do not depend on which other methods run") {
  SimPlan narrow;
  narrow.scenario_ids = {"1.A.2"};
  narrow.sample_sizes = {10};
  narrow.methods = {MethodId::Fujikawa};
  narrow.n_reps = 25;
  narrow.master_seed = 4242;

  SimPlan wide = narrow;
  wide.methods = {MethodId::SampleProportion, MethodId::Fujikawa,
                  MethodId::LiuLocalMem};

  const SimResults a = run_plan(narrow);
  const SimResults b = run_plan(wide);
  const CellResult* fuji_wide = nullptr;
  for (const CellResult& cell : b.cells) {
    if (cell.method == MethodId::Fujikawa) {
      fuji_wide = &cell;
    }
  }
  REQUIRE(fuji_wide != nullptr);
  CHECK(a.cells[0].estimates == fuji_wide->estimates);
  CHECK(a.trial_digests[0] == b.trial_digests[0]);
}

TEST_CASE("plans with unknown scenarios or broken methods abort") {
  SimPlan plan;
  plan.scenario_ids = {"nonexistent"};
  CHECK_THROWS_WITH_AS(run_plan(plan), doctest::Contains("unknown scenario"),
                       std::invalid_argument);

  SimPlan failing;
  failing.scenario_ids = {"1.A.1"};
  failing.sample_sizes = {10};
  failing.methods = {MethodId::ChenLeeBchm};
  failing.n_reps = 5;
  failing.configs.chen_lee.crp_iterations = 1;  // invalid: every rep fails
  CHECK_THROWS_WITH_AS(run_plan(failing), doctest::Contains("more than 1%"),
                       std::runtime_error);
}
