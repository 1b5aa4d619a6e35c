#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "basket/partition.hpp"
#include "basket/rng.hpp"
#include "basket/sampling.hpp"
#include "oracles.hpp"

using namespace basket;

namespace {

TrialData make_trial(std::initializer_list<std::pair<int, int>> counts) {
  TrialData data;
  for (const auto& [n, r] : counts) {
    data.cohorts.push_back({n, r});
  }
  return data;
}

}  // namespace

TEST_CASE("partition counts match the Bell-triangle oracle") {
  const auto bell = oracle::bell_numbers(8);
  for (int k = 2; k <= 8; ++k) {
    CHECK(enumerate_partitions(k).size() == bell[k]);
  }
}

TEST_CASE("k=2 enumeration by hand") {
  const auto parts = enumerate_partitions(2);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].assignment == std::vector<int>{0, 0});
  CHECK(parts[0].num_blocks == 1);
  CHECK(parts[1].assignment == std::vector<int>{0, 1});
  CHECK(parts[1].num_blocks == 2);
}

TEST_CASE("enumeration is canonical, unique and lexicographic") {
  for (int k : {3, 5, 6}) {
    const auto parts = enumerate_partitions(k);
    std::set<std::vector<int>> seen;
    for (std::size_t idx = 0; idx < parts.size(); ++idx) {
      const auto& a = parts[idx].assignment;
      // Restricted growth: a[0] = 0 and a[i] <= 1 + max(prefix).
      CHECK(a[0] == 0);
      int prefix_max = 0;
      for (int i = 1; i < k; ++i) {
        CHECK(a[i] <= prefix_max + 1);
        prefix_max = std::max(prefix_max, a[i]);
      }
      CHECK(seen.insert(a).second);
      if (idx > 0) {
        CHECK(parts[idx - 1].assignment < a);
      }
    }
  }
}

TEST_CASE("enumeration bounds are enforced") {
  CHECK_THROWS_AS(enumerate_partitions(1), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_partitions(13), std::invalid_argument);
}

TEST_CASE("block evidence by hand for K=2") {
  const TrialData data = make_trial({{1, 1}, {1, 0}});
  const BetaParams uniform{1.0, 1.0};
  Partition pooled{{0, 0}, 1};
  Partition split{{0, 1}, 2};
  CHECK(partition_log_evidence(pooled, data, uniform) ==
        doctest::Approx(std::log(1.0 / 6.0)).epsilon(1e-14));
  CHECK(partition_log_evidence(split, data, uniform) ==
        doctest::Approx(std::log(1.0 / 4.0)).epsilon(1e-14));
}

TEST_CASE("empty trials carry unit evidence for every partition") {
  const TrialData data = make_trial({{0, 0}, {0, 0}, {0, 0}});
  for (const Partition& part : enumerate_partitions(3)) {
    CHECK(partition_log_evidence(part, data, {2.0, 3.0}) == 0.0);
  }
}

TEST_CASE("evidence ignores block labels of the same grouping") {
  const TrialData data = make_trial({{10, 2}, {10, 2}, {10, 7}});
  Partition canonical{{0, 0, 1}, 2};
  Partition relabeled{{1, 1, 0}, 2};
  CHECK(partition_log_evidence(canonical, data, {1.0, 1.0}) ==
        partition_log_evidence(relabeled, data, {1.0, 1.0}));
}

TEST_CASE("evidence rejects mismatched lengths") {
  const TrialData data = make_trial({{10, 2}, {10, 2}});
  Partition part{{0, 0, 1}, 2};
  CHECK_THROWS_AS(partition_log_evidence(part, data, {1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("two-cohort posterior by hand") {
  const TrialData data = make_trial({{1, 1}, {1, 0}});
  const PartitionPosterior post = partition_posterior(data, {1.0, 1.0}, 0.0);
  REQUIRE(post.partitions.size() == 2);
  CHECK(post.posterior_prob[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(post.posterior_prob[1] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(post.log_prior[0] == doctest::Approx(std::log(0.5)).epsilon(1e-14));
}

TEST_CASE("equal evidence gives back the prior") {
  const TrialData data = make_trial({{0, 0}, {0, 0}, {0, 0}, {0, 0}});
  const PartitionPosterior post = partition_posterior(data, {1.0, 1.0}, 0.0);
  const double uniform = 1.0 / static_cast<double>(post.partitions.size());
  for (int i = 0; i < post.posterior_prob.size(); ++i) {
    CHECK(post.posterior_prob[i] == doctest::Approx(uniform).epsilon(1e-12));
  }
}

TEST_CASE("posterior probabilities sum to one on random trials") {
  RngStream rng(31337);
  for (int i = 0; i < 100; ++i) {
    const int k = 2 + static_cast<int>(rng.next_u64() % 5);
    TrialData data;
    for (int c = 0; c < k; ++c) {
      const int n = 1 + static_cast<int>(rng.next_u64() % 30);
      data.cohorts.push_back(
          {n, static_cast<int>(rng.next_u64() % (n + 1))});
    }
    const double exponent = (i % 3 == 0) ? 0.0 : (i % 3 == 1 ? 1.0 : -0.5);
    const PartitionPosterior post =
        partition_posterior(data, {1.0, 1.0}, exponent);
    CHECK(post.posterior_prob.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(post.log_prior.array().exp().sum() ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("posterior is exchangeable under cohort permutation") {
  const TrialData data = make_trial({{10, 1}, {10, 5}, {10, 8}});
  const TrialData permuted = make_trial({{10, 8}, {10, 1}, {10, 5}});
  const auto post_a = partition_posterior(data, {1.0, 1.0}, 0.0);
  const auto post_b = partition_posterior(permuted, {1.0, 1.0}, 0.0);
  std::multiset<double> probs_a;
  std::multiset<double> probs_b;
  for (int i = 0; i < post_a.posterior_prob.size(); ++i) {
    probs_a.insert(std::round(post_a.posterior_prob[i] * 1e12));
    probs_b.insert(std::round(post_b.posterior_prob[i] * 1e12));
  }
  CHECK(probs_a == probs_b);
}

TEST_CASE("evidence matches brute-force quadrature exhaustively for K=2") {
  const BetaParams uniform{1.0, 1.0};
  for (int n = 1; n <= 5; ++n) {
    for (int r1 = 0; r1 <= n; ++r1) {
      for (int r2 = 0; r2 <= n; ++r2) {
        const TrialData data = make_trial({{n, r1}, {n, r2}});
        const Partition pooled{{0, 0}, 1};
        const Partition split{{0, 1}, 2};
        const double pooled_quad = oracle::integrate_unit(
            [&](double p) {
              return std::pow(p, r1 + r2) * std::pow(1.0 - p, 2 * n - r1 - r2);
            },
            1e-14);
        const double split_quad =
            oracle::integrate_unit(
                [&](double p) {
                  return std::pow(p, r1) * std::pow(1.0 - p, n - r1);
                },
                1e-14) *
            oracle::integrate_unit(
                [&](double p) {
                  return std::pow(p, r2) * std::pow(1.0 - p, n - r2);
                },
                1e-14);
        CHECK(partition_log_evidence(pooled, data, uniform) ==
              doctest::Approx(std::log(pooled_quad)).epsilon(1e-10));
        CHECK(partition_log_evidence(split, data, uniform) ==
              doctest::Approx(std::log(split_quad)).epsilon(1e-10));
        if (r1 == r2) {
          // Identical observed rates: pooling is never disfavored.
          CHECK(partition_log_evidence(pooled, data, uniform) >=
                partition_log_evidence(split, data, uniform));
        }
      }
    }
  }
}

TEST_CASE("MAP selection and tie-breaking") {
  const TrialData data = make_trial({{1, 1}, {1, 0}});
  const PartitionPosterior post = partition_posterior(data, {1.0, 1.0}, 0.0);
  CHECK(map_partition(post).assignment == std::vector<int>{0, 1});

  // Exact tie (empty data): fewest blocks wins.
  const TrialData empty = make_trial({{0, 0}, {0, 0}});
  const PartitionPosterior tied = partition_posterior(empty, {1.0, 1.0}, 0.0);
  CHECK(tied.posterior_prob[0] == tied.posterior_prob[1]);
  CHECK(map_partition(tied).assignment == std::vector<int>{0, 0});

  PartitionPosterior single;
  single.partitions.push_back(Partition{{0, 0, 0}, 1});
  single.posterior_prob = Eigen::VectorXd::Ones(1);
  single.log_prior = Eigen::VectorXd::Zero(1);
  single.log_evidence = Eigen::VectorXd::Zero(1);
  CHECK(map_partition(single).assignment == std::vector<int>{0, 0, 0});

  PartitionPosterior empty_post;
  CHECK_THROWS_AS(map_partition(empty_post), std::invalid_argument);
}

TEST_CASE("later partition with fewer blocks wins an exact tie") {
  // Hand-built posterior: [0,0,1,2] (3 blocks) precedes [0,1,0,0] (2 blocks)
  // lexicographically; on a tie the 2-block grouping must win.
  PartitionPosterior post;
  post.partitions.push_back(Partition{{0, 0, 1, 2}, 3});
  post.partitions.push_back(Partition{{0, 1, 0, 0}, 2});
  post.posterior_prob = Eigen::VectorXd::Constant(2, 0.5);
  post.log_prior = Eigen::VectorXd::Zero(2);
  post.log_evidence = Eigen::VectorXd::Zero(2);
  CHECK(map_partition(post).assignment == std::vector<int>{0, 1, 0, 0});
}
