#pragma once

#include <filesystem>

#include "basket/run_config.hpp"
#include "basket/simulate.hpp"

namespace basket {

// Writes plot-ready outputs into `dir`:
//   summary.csv     scenario,method,n,mean_abs_bias,mean_mse,shrinkage
//   per_cohort.csv  scenario,method,n,cohort,true_p,mean_est,bias,variance,mse
//   manifest        seed and fully resolved configuration (re-parseable)
// Rows are ordered by scenario id, method name and n ascending; reruns with
// the same configuration and seed produce byte-identical files.
void emit_results(const SimResults& results, const RunConfig& config,
                  const std::filesystem::path& dir);

}  // namespace basket
