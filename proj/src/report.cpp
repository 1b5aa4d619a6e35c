#include "basket/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "basket/scenarios.hpp"

namespace basket {

namespace {

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) {
    return value;
  }
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') {
      quoted += '"';
    }
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string csv_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::ofstream open_file(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

bool row_order(const CellResult& a, const CellResult& b) {
  if (a.scenario_id != b.scenario_id) {
    return a.scenario_id < b.scenario_id;
  }
  const auto name_a = method_name(a.method);
  const auto name_b = method_name(b.method);
  if (name_a != name_b) {
    return name_a < name_b;
  }
  return a.n_per_cohort < b.n_per_cohort;
}

}  // namespace

void emit_results(const SimResults& results, const RunConfig& config,
                  const std::filesystem::path& dir) {
  if (results.cells.empty()) {
    throw std::invalid_argument("emit_results requires non-empty results");
  }
  std::filesystem::create_directories(dir);

  std::vector<const CellResult*> ordered;
  ordered.reserve(results.cells.size());
  for (const CellResult& cell : results.cells) {
    ordered.push_back(&cell);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const CellResult* a, const CellResult* b) {
              return row_order(*a, *b);
            });

  {
    std::ofstream summary = open_file(dir / "summary.csv");
    summary << "scenario,method,n,mean_abs_bias,mean_mse,shrinkage\n";
    for (const CellResult* cell : ordered) {
      const Scenario* scenario = find_scenario(cell->scenario_id);
      const MetricsRecord record = compute_metrics(*cell, *scenario);
      summary << csv_field(record.scenario_id) << ','
              << method_name(record.method) << ',' << record.n_per_cohort
              << ',' << csv_number(record.mean_abs_bias) << ','
              << csv_number(record.mean_mse) << ',';
      if (record.shrinkage) {
        summary << csv_number(*record.shrinkage);
      }
      summary << '\n';
    }
  }

  {
    std::ofstream detail = open_file(dir / "per_cohort.csv");
    detail << "scenario,method,n,cohort,true_p,mean_est,bias,variance,mse\n";
    for (const CellResult* cell : ordered) {
      const Scenario* scenario = find_scenario(cell->scenario_id);
      const auto [mean, variance] = cohort_moments(*cell);
      for (int i = 0; i < scenario->num_cohorts(); ++i) {
        const double bias = mean[i] - scenario->true_rates[i];
        detail << csv_field(cell->scenario_id) << ','
               << method_name(cell->method) << ',' << cell->n_per_cohort
               << ',' << (i + 1) << ','
               << csv_number(scenario->true_rates[i]) << ','
               << csv_number(mean[i]) << ',' << csv_number(bias) << ','
               << csv_number(variance[i]) << ','
               << csv_number(bias * bias + variance[i]) << '\n';
      }
    }
  }

  {
    std::ofstream manifest = open_file(dir / "manifest");
    manifest << render_config(config);
  }
}

}  // namespace basket
