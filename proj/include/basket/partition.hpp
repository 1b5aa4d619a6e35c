#pragma once

#include <vector>

#include <Eigen/Dense>

#include "basket/special.hpp"
#include "basket/trial.hpp"

namespace basket {

// A set partition of cohorts in canonical (restricted-growth) form: block
// indices are contiguous from 0 and first occurrences appear in increasing
// order, so each grouping has exactly one representation.
struct Partition {
  std::vector<int> assignment;
  int num_blocks = 0;
};

// All Bell(k) canonical partitions in lexicographic order of assignment
// vectors. Guarded to 2 <= k <= 12 (Bell(12) = 4,213,597).
std::vector<Partition> enumerate_partitions(int k);

// Sum over blocks of the integrated beta-binomial likelihood of the pooled
// block counts under the shared rate prior.
double partition_log_evidence(const Partition& part, const TrialData& data,
                              const BetaParams& prior);

// Aligned per-partition prior, evidence and normalized posterior.
struct PartitionPosterior {
  std::vector<Partition> partitions;
  Eigen::VectorXd log_prior;       // normalized log prior probabilities
  Eigen::VectorXd log_evidence;
  Eigen::VectorXd posterior_prob;  // sums to 1
};

// Prior mass proportional to num_blocks^model_prior_exponent; posterior
// normalized in log space with max subtraction.
PartitionPosterior partition_posterior(const TrialData& data,
                                       const BetaParams& prior,
                                       double model_prior_exponent);

// Highest-posterior partition; ties broken by fewest blocks, then by
// enumeration order.
const Partition& map_partition(const PartitionPosterior& post);

}  // namespace basket
