#include "basket/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace basket {

std::vector<Partition> enumerate_partitions(int k) {
  if (k < 2 || k > 12) {
    throw std::invalid_argument("enumerate_partitions requires 2 <= k <= 12");
  }
  std::vector<Partition> out;
  std::vector<int> assignment(k, 0);
  // Iterate restricted growth strings in lexicographic order: position i may
  // hold any value up to 1 + max(assignment[0..i-1]).
  for (;;) {
    Partition part;
    part.assignment = assignment;
    part.num_blocks = 1 + *std::max_element(assignment.begin(),
                                            assignment.end());
    out.push_back(std::move(part));

    int i = k - 1;
    for (; i > 0; --i) {
      const int prefix_max =
          *std::max_element(assignment.begin(), assignment.begin() + i);
      if (assignment[i] <= prefix_max) {
        ++assignment[i];
        std::fill(assignment.begin() + i + 1, assignment.end(), 0);
        break;
      }
    }
    if (i == 0) {
      break;
    }
  }
  return out;
}

double partition_log_evidence(const Partition& part, const TrialData& data,
                              const BetaParams& prior) {
  const int k = data.num_cohorts();
  if (static_cast<int>(part.assignment.size()) != k) {
    throw std::invalid_argument(
        "partition length does not match the trial's cohort count");
  }
  std::vector<int> block_r(part.num_blocks, 0);
  std::vector<int> block_n(part.num_blocks, 0);
  for (int i = 0; i < k; ++i) {
    block_r[part.assignment[i]] += data.cohorts[i].r;
    block_n[part.assignment[i]] += data.cohorts[i].n;
  }
  double log_evidence = 0.0;
  for (int b = 0; b < part.num_blocks; ++b) {
    log_evidence += log_bb_marginal(block_r[b], block_n[b], prior);
  }
  return log_evidence;
}

PartitionPosterior partition_posterior(const TrialData& data,
                                       const BetaParams& prior,
                                       double model_prior_exponent) {
  validate_trial(data);
  PartitionPosterior post;
  post.partitions = enumerate_partitions(data.num_cohorts());
  const int m = static_cast<int>(post.partitions.size());
  post.log_prior.resize(m);
  post.log_evidence.resize(m);
  post.posterior_prob.resize(m);

  for (int i = 0; i < m; ++i) {
    post.log_prior[i] =
        model_prior_exponent * std::log(post.partitions[i].num_blocks);
    post.log_evidence[i] =
        partition_log_evidence(post.partitions[i], data, prior);
  }

  const double prior_max = post.log_prior.maxCoeff();
  const double prior_log_norm =
      prior_max + std::log((post.log_prior.array() - prior_max).exp().sum());
  post.log_prior.array() -= prior_log_norm;

  Eigen::VectorXd log_post = post.log_prior + post.log_evidence;
  const double post_max = log_post.maxCoeff();
  post.posterior_prob = (log_post.array() - post_max).exp();
  post.posterior_prob /= post.posterior_prob.sum();
  return post;
}

const Partition& map_partition(const PartitionPosterior& post) {
  if (post.partitions.empty()) {
    throw std::invalid_argument("map_partition requires a non-empty posterior");
  }
  int best = 0;
  for (int i = 1; i < static_cast<int>(post.partitions.size()); ++i) {
    const double prob = post.posterior_prob[i];
    const double best_prob = post.posterior_prob[best];
    if (prob > best_prob ||
        (prob == best_prob &&
         post.partitions[i].num_blocks < post.partitions[best].num_blocks)) {
      best = i;
    }
  }
  return post.partitions[best];
}

}  // namespace basket
