#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace basket {

// One cohort's counts: n enrolled patients, r responders, 0 <= r <= n.
struct CohortData {
  int n = 0;
  int r = 0;
};

// An observed (or simulated) single-stage trial over K >= 2 cohorts. Cohort
// order is significant and preserved by every operation.
struct TrialData {
  std::vector<CohortData> cohorts;

  int num_cohorts() const { return static_cast<int>(cohorts.size()); }
};

// Returns the input unchanged when all invariants hold, otherwise throws
// std::invalid_argument naming the first violated invariant.
const TrialData& validate_trial(const TrialData& data);

// A row of the simulation grid: a label plus one true response rate per
// cohort, each in [0, 1].
struct Scenario {
  std::string id;
  Eigen::VectorXd true_rates;

  int num_cohorts() const { return static_cast<int>(true_rates.size()); }
};

// Per-cohort point estimates in [0, 1], aligned with the source TrialData.
using EstimateVector = Eigen::VectorXd;

enum class MethodId {
  SampleProportion,
  BerryBhm,
  Exnex,
  PsiodaBma,
  Fujikawa,
  JinCbhm,
  ChenLeeBchm,
  LiuLocalMem,
};

inline constexpr MethodId kAllMethods[] = {
    MethodId::SampleProportion, MethodId::BerryBhm,    MethodId::Exnex,
    MethodId::PsiodaBma,        MethodId::Fujikawa,    MethodId::JinCbhm,
    MethodId::ChenLeeBchm,      MethodId::LiuLocalMem,
};

// Stable serialized identifiers used in configuration and output files.
std::string_view method_name(MethodId id);
std::optional<MethodId> method_from_name(std::string_view name);

// Plain-text record "r/n r/n ..." round-tripping counts exactly.
std::string format_trial(const TrialData& data);
TrialData parse_trial(std::string_view text);

// FNV-1a digest of the exact counts; used to verify the paired design.
std::uint64_t hash_trial(const TrialData& data);

}  // namespace basket
