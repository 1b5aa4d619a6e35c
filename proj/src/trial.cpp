#include "basket/trial.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace basket {

const TrialData& validate_trial(const TrialData& data) {
  if (data.num_cohorts() < 2) {
    throw std::invalid_argument("trial must have K >= 2 cohorts");
  }
  for (int i = 0; i < data.num_cohorts(); ++i) {
    const CohortData& c = data.cohorts[i];
    if (c.n < 0 || c.r < 0) {
      throw std::invalid_argument("cohort " + std::to_string(i + 1) +
                                  ": negative count");
    }
    if (c.r > c.n) {
      throw std::invalid_argument("cohort " + std::to_string(i + 1) +
                                  ": r exceeds n");
    }
  }
  return data;
}

std::string_view method_name(MethodId id) {
  switch (id) {
    case MethodId::SampleProportion:
      return "sample_proportion";
    case MethodId::BerryBhm:
      return "berry";
    case MethodId::Exnex:
      return "exnex";
    case MethodId::PsiodaBma:
      return "psioda";
    case MethodId::Fujikawa:
      return "fujikawa";
    case MethodId::JinCbhm:
      return "jin";
    case MethodId::ChenLeeBchm:
      return "chen_lee";
    case MethodId::LiuLocalMem:
      return "liu";
  }
  throw std::logic_error("unknown MethodId");
}

std::optional<MethodId> method_from_name(std::string_view name) {
  for (MethodId id : kAllMethods) {
    if (method_name(id) == name) {
      return id;
    }
  }
  return std::nullopt;
}

std::string format_trial(const TrialData& data) {
  std::string out;
  for (int i = 0; i < data.num_cohorts(); ++i) {
    if (i > 0) {
      out += ' ';
    }
    out += std::to_string(data.cohorts[i].r);
    out += '/';
    out += std::to_string(data.cohorts[i].n);
  }
  return out;
}

TrialData parse_trial(std::string_view text) {
  TrialData data;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    const auto slash = token.find('/');
    if (slash == std::string::npos) {
      throw std::invalid_argument("trial record token '" + token +
                                  "' is not of the form r/n");
    }
    CohortData c;
    auto parse_int = [&](std::string_view s, int& value) {
      const auto* end = s.data() + s.size();
      auto [ptr, ec] = std::from_chars(s.data(), end, value);
      if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("trial record token '" + token +
                                    "' has a malformed count");
      }
    };
    parse_int(std::string_view(token).substr(0, slash), c.r);
    parse_int(std::string_view(token).substr(slash + 1), c.n);
    data.cohorts.push_back(c);
  }
  return data;
}

std::uint64_t hash_trial(const TrialData& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto fold = [&h](std::uint64_t v) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (v >> (8 * byte)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (const CohortData& c : data.cohorts) {
    fold(static_cast<std::uint64_t>(c.n));
    fold(static_cast<std::uint64_t>(c.r));
  }
  return h;
}

}  // namespace basket
