#include "basket/scenarios.hpp"

#include <array>

namespace basket {

namespace {

struct Row {
  const char* id;
  std::array<double, 6> rates;
};

constexpr Row kRows[] = {
    {"1.A.1", {0.1, 0.1, 0.1, 0.1, 0.1, 0.1}},
    {"1.A.2", {0.3, 0.3, 0.3, 0.3, 0.3, 0.3}},
    {"1.A.3", {0.5, 0.5, 0.5, 0.5, 0.5, 0.5}},
    {"1.B.1", {0.4375, 0.4625, 0.4875, 0.5125, 0.5375, 0.5625}},
    {"1.B.2", {0.375, 0.425, 0.475, 0.525, 0.575, 0.625}},
    {"1.B.3", {0.2375, 0.2625, 0.2875, 0.3125, 0.3375, 0.3625}},
    {"1.B.4", {0.175, 0.225, 0.275, 0.325, 0.375, 0.425}},
    {"2.A.1", {0.3, 0.5, 0.5, 0.5, 0.5, 0.5}},
    {"2.A.2", {0.3, 0.3, 0.3, 0.5, 0.5, 0.5}},
    {"2.A.3", {0.3, 0.3, 0.3, 0.3, 0.3, 0.5}},
    {"2.B.1", {0.1, 0.3, 0.3, 0.3, 0.3, 0.3}},
    {"2.B.2", {0.1, 0.1, 0.1, 0.3, 0.3, 0.3}},
    {"2.B.3", {0.1, 0.1, 0.1, 0.1, 0.1, 0.3}},
    {"2.C.1", {0.1, 0.5, 0.5, 0.5, 0.5, 0.5}},
    {"2.C.2", {0.1, 0.1, 0.1, 0.5, 0.5, 0.5}},
    {"2.C.3", {0.1, 0.1, 0.1, 0.1, 0.1, 0.5}},
    {"2.D.1", {0.1, 0.7, 0.7, 0.7, 0.7, 0.7}},
    {"2.D.2", {0.1, 0.1, 0.1, 0.7, 0.7, 0.7}},
    {"2.D.3", {0.1, 0.1, 0.1, 0.1, 0.1, 0.7}},
    {"3.A.1", {0.1, 0.4, 0.7, 0.7, 0.7, 0.7}},
    {"3.A.2", {0.1, 0.1, 0.4, 0.4, 0.7, 0.7}},
    {"3.A.3", {0.1, 0.1, 0.1, 0.1, 0.4, 0.7}},
    {"3.B.1", {0.1, 0.4, 0.9, 0.9, 0.9, 0.9}},
    {"3.B.2", {0.1, 0.1, 0.4, 0.4, 0.9, 0.9}},
    {"3.B.3", {0.1, 0.1, 0.1, 0.1, 0.4, 0.9}},
};

}  // namespace

const std::vector<Scenario>& scenario_table() {
  static const std::vector<Scenario> table = [] {
    std::vector<Scenario> scenarios;
    scenarios.reserve(std::size(kRows));
    for (const Row& row : kRows) {
      Scenario s;
      s.id = row.id;
      s.true_rates.resize(6);
      for (int i = 0; i < 6; ++i) {
        s.true_rates[i] = row.rates[i];
      }
      scenarios.push_back(std::move(s));
    }
    return scenarios;
  }();
  return table;
}

const Scenario* find_scenario(std::string_view id) {
  for (const Scenario& s : scenario_table()) {
    if (s.id == id) {
      return &s;
    }
  }
  return nullptr;
}

}  // namespace basket
