#include "basket/run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "basket/scenarios.hpp"

namespace basket {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw std::invalid_argument("config: " + path + ": " + message);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> items;
  std::string current;
  for (char c : value) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!current.empty()) {
        items.push_back(std::move(current));
        current.clear();
      }
    } else {
      current += c;
    }
  }
  if (!current.empty()) {
    items.push_back(std::move(current));
  }
  return items;
}

double parse_double(const std::string& path, const std::string& value) {
  try {
    std::size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(out)) {
      fail(path, "expected a finite number, got '" + value + "'");
    }
    return out;
  } catch (const std::invalid_argument&) {
    fail(path, "expected a number, got '" + value + "'");
  } catch (const std::out_of_range&) {
    fail(path, "number out of range: '" + value + "'");
  }
}

long long parse_integer(const std::string& path, const std::string& value) {
  long long out = 0;
  const auto* begin = value.data();
  const auto* end = begin + value.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end) {
    fail(path, "expected an integer, got '" + value + "'");
  }
  return out;
}

int parse_positive_int(const std::string& path, const std::string& value) {
  const long long out = parse_integer(path, value);
  if (out < 1 || out > std::numeric_limits<int>::max()) {
    fail(path, "must be a positive integer");
  }
  return static_cast<int>(out);
}

double parse_positive(const std::string& path, const std::string& value) {
  const double out = parse_double(path, value);
  if (!(out > 0.0)) {
    fail(path, "must be positive");
  }
  return out;
}

// Shortest decimal representation that round-trips exactly.
std::string format_double(double value) {
  char buffer[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    double parsed = 0.0;
    std::sscanf(buffer, "%lf", &parsed);
    if (parsed == value) {
      break;
    }
  }
  return buffer;
}

struct Entry {
  std::string key;
  std::string value;
};

struct Document {
  std::vector<Entry> globals;
  std::vector<std::pair<std::string, std::vector<Entry>>> sections;
};

Document tokenize(std::string_view text) {
  Document doc;
  std::vector<Entry>* current = &doc.globals;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    std::string_view line = trim(raw);
    const auto comment = line.find('#');
    if (comment != std::string_view::npos) {
      line = trim(line.substr(0, comment));
    }
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        fail("line " + std::to_string(line_number),
             "malformed section header");
      }
      doc.sections.emplace_back(std::string(trim(line.substr(1, line.size() - 2))),
                                std::vector<Entry>{});
      current = &doc.sections.back().second;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail("line " + std::to_string(line_number), "expected 'key = value'");
    }
    Entry entry;
    entry.key = std::string(trim(line.substr(0, eq)));
    entry.value = std::string(trim(line.substr(eq + 1)));
    if (entry.key.empty()) {
      fail("line " + std::to_string(line_number), "empty key");
    }
    current->push_back(std::move(entry));
  }
  return doc;
}

void apply_global(RunConfig& config, const std::string& key,
                  const std::string& value) {
  if (key == "seed") {
    config.plan.master_seed =
        static_cast<std::uint64_t>(parse_integer(key, value));
  } else if (key == "reps") {
    config.plan.n_reps = parse_positive_int(key, value);
  } else if (key == "prior_mean") {
    const double m = parse_double(key, value);
    if (!(m > 0.0) || !(m < 1.0)) {
      fail(key, "must lie in the open interval (0, 1)");
    }
    config.plan.prior_mean = m;
  } else if (key == "scenarios") {
    config.plan.scenario_ids = split_list(value);
  } else if (key == "sample_sizes") {
    config.plan.sample_sizes.clear();
    for (const std::string& item : split_list(value)) {
      config.plan.sample_sizes.push_back(parse_positive_int(key, item));
    }
    if (config.plan.sample_sizes.empty()) {
      fail(key, "must list at least one sample size");
    }
  } else if (key == "methods") {
    config.plan.methods.clear();
    for (const std::string& item : split_list(value)) {
      const auto id = method_from_name(item);
      if (!id) {
        fail(key, "unknown method '" + item + "'");
      }
      config.plan.methods.push_back(*id);
    }
    if (config.plan.methods.empty()) {
      fail(key, "must list at least one method");
    }
  } else if (key == "workers") {
    config.plan.workers = parse_positive_int(key, value);
  } else if (key == "out") {
    config.out_dir = value;
  } else {
    fail(key, "unknown key");
  }
}

void apply_mcmc(McmcConfig& mcmc, const std::string& key,
                const std::string& value) {
  const std::string path = "mcmc." + key;
  if (key == "n_burn") {
    const long long v = parse_integer(path, value);
    if (v < 0) {
      fail(path, "must be >= 0");
    }
    mcmc.n_burn = static_cast<int>(v);
  } else if (key == "n_keep") {
    mcmc.n_keep = parse_positive_int(path, value);
  } else if (key == "thin") {
    mcmc.thin = parse_positive_int(path, value);
  } else if (key == "adapt_window") {
    mcmc.adapt_window = parse_positive_int(path, value);
  } else if (key == "target_accept") {
    const double v = parse_double(path, value);
    if (!(v > 0.0) || !(v < 1.0)) {
      fail(path, "must lie in (0, 1)");
    }
    mcmc.target_accept = v;
  } else {
    fail(path, "unknown key");
  }
}

void apply_method_key(MethodConfigs& configs, const std::string& section,
                      const std::string& key, const std::string& value) {
  const std::string path = section + "." + key;
  if (section == "berry") {
    if (key == "mu0") {
      configs.berry.mu0 = parse_double(path, value);
    } else if (key == "sigma0_sq") {
      configs.berry.sigma0_sq = parse_positive(path, value);
    } else if (key == "lambda1") {
      configs.berry.lambda1 = parse_positive(path, value);
    } else if (key == "lambda2") {
      configs.berry.lambda2 = parse_positive(path, value);
    } else {
      fail(path, "unknown key");
    }
  } else if (section == "exnex") {
    if (key == "ex_weight") {
      const double v = parse_double(path, value);
      if (!(v >= 0.0) || !(v <= 1.0)) {
        fail(path, "must lie in [0, 1]");
      }
      configs.exnex.ex_weight = v;
    } else if (key == "mu0_mean") {
      configs.exnex.mu0_mean = parse_double(path, value);
    } else if (key == "mu0_var") {
      configs.exnex.mu0_var = parse_positive(path, value);
    } else if (key == "sigma0_halfnormal_scale") {
      configs.exnex.sigma0_halfnormal_scale = parse_positive(path, value);
    } else if (key == "nex_mean") {
      configs.exnex.nex_mean = parse_double(path, value);
    } else if (key == "nex_var") {
      configs.exnex.nex_var = parse_positive(path, value);
    } else {
      fail(path, "unknown key");
    }
  } else if (section == "psioda") {
    if (key == "prior_alpha") {
      configs.psioda.rate_prior.alpha = parse_positive(path, value);
    } else if (key == "prior_beta") {
      configs.psioda.rate_prior.beta = parse_positive(path, value);
    } else if (key == "model_prior_exponent") {
      configs.psioda.model_prior_exponent = parse_double(path, value);
    } else {
      fail(path, "unknown key");
    }
  } else if (section == "fujikawa") {
    if (key == "prior_alpha") {
      configs.fujikawa.rate_prior.alpha = parse_positive(path, value);
    } else if (key == "prior_beta") {
      configs.fujikawa.rate_prior.beta = parse_positive(path, value);
    } else if (key == "tau") {
      const double v = parse_double(path, value);
      if (!(v >= 0.0) || !(v <= 1.0)) {
        fail(path, "tau must lie in [0, 1]");
      }
      configs.fujikawa.tau = v;
    } else if (key == "epsilon") {
      const double v = parse_double(path, value);
      if (!(v >= 0.0)) {
        fail(path, "must be >= 0");
      }
      configs.fujikawa.epsilon = v;
    } else {
      fail(path, "unknown key");
    }
  } else if (section == "jin") {
    if (key == "theta0_mean") {
      configs.jin.theta0_mean = parse_double(path, value);
    } else if (key == "sigma0_sq_shape") {
      configs.jin.sigma0_sq_prior.shape = parse_positive(path, value);
    } else if (key == "sigma0_sq_scale") {
      configs.jin.sigma0_sq_prior.scale = parse_positive(path, value);
    } else if (key == "sigma_sq_shape") {
      configs.jin.sigma_sq_prior.shape = parse_positive(path, value);
    } else if (key == "sigma_sq_scale") {
      configs.jin.sigma_sq_prior.scale = parse_positive(path, value);
    } else if (key == "tau_sq_shape") {
      configs.jin.tau_sq_prior.shape = parse_positive(path, value);
    } else if (key == "tau_sq_scale") {
      configs.jin.tau_sq_prior.scale = parse_positive(path, value);
    } else if (key == "phi_shape") {
      configs.jin.phi_prior.shape = parse_positive(path, value);
    } else if (key == "phi_rate") {
      configs.jin.phi_prior.rate = parse_positive(path, value);
    } else {
      fail(path, "unknown key");
    }
  } else if (section == "chen_lee") {
    if (key == "crp_alpha") {
      configs.chen_lee.crp_alpha = parse_positive(path, value);
    } else if (key == "cluster_obs_var") {
      configs.chen_lee.cluster_obs_var = parse_positive(path, value);
    } else if (key == "base_mean") {
      configs.chen_lee.base_mean = parse_double(path, value);
    } else if (key == "base_var") {
      configs.chen_lee.base_var = parse_positive(path, value);
    } else if (key == "mu2") {
      configs.chen_lee.mu2 = parse_double(path, value);
    } else if (key == "tau2") {
      configs.chen_lee.tau2 = parse_positive(path, value);
    } else if (key == "tau1_shape") {
      configs.chen_lee.tau1_prior.shape = parse_positive(path, value);
    } else if (key == "tau1_rate") {
      configs.chen_lee.tau1_prior.rate = parse_positive(path, value);
    } else if (key == "crp_iterations") {
      configs.chen_lee.crp_iterations = parse_positive_int(path, value);
    } else {
      fail(path, "unknown key");
    }
  } else if (section == "liu") {
    if (key == "prior_alpha") {
      configs.liu.rate_prior.alpha = parse_positive(path, value);
    } else if (key == "prior_beta") {
      configs.liu.rate_prior.beta = parse_positive(path, value);
    } else if (key == "delta") {
      configs.liu.delta = parse_double(path, value);
    } else {
      fail(path, "unknown key");
    }
  } else {
    fail(section, "unknown section");
  }
}

}  // namespace

RunConfig parse_config(std::string_view text,
                       const std::map<std::string, std::string>& overrides) {
  const Document doc = tokenize(text);
  RunConfig config;

  for (const Entry& entry : doc.globals) {
    apply_global(config, entry.key, entry.value);
  }
  for (const auto& [key, value] : overrides) {
    if (key.find('.') == std::string::npos) {
      apply_global(config, key, value);
    }
  }

  // The prior-mean mapping resets the method defaults; explicit per-method
  // keys below then take precedence.
  config.plan.configs = apply_prior_mean(MethodConfigs{},
                                         config.plan.prior_mean);

  for (const auto& [section, entries] : doc.sections) {
    for (const Entry& entry : entries) {
      if (section == "mcmc") {
        apply_mcmc(config.plan.mcmc, entry.key, entry.value);
      } else {
        apply_method_key(config.plan.configs, section, entry.key, entry.value);
      }
    }
  }
  for (const auto& [key, value] : overrides) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
      continue;
    }
    const std::string section = key.substr(0, dot);
    const std::string subkey = key.substr(dot + 1);
    if (section == "mcmc") {
      apply_mcmc(config.plan.mcmc, subkey, value);
    } else {
      apply_method_key(config.plan.configs, section, subkey, value);
    }
  }
  return config;
}

std::string render_config(const RunConfig& config) {
  const SimPlan& plan = config.plan;
  std::ostringstream out;
  out << "# basketsim " << kVersion << " resolved run configuration\n";
  out << "seed = " << plan.master_seed << "\n";
  out << "reps = " << plan.n_reps << "\n";
  out << "prior_mean = " << format_double(plan.prior_mean) << "\n";

  out << "scenarios = ";
  if (plan.scenario_ids.empty()) {
    bool first = true;
    for (const Scenario& s : scenario_table()) {
      out << (first ? "" : ",") << s.id;
      first = false;
    }
  } else {
    for (std::size_t i = 0; i < plan.scenario_ids.size(); ++i) {
      out << (i == 0 ? "" : ",") << plan.scenario_ids[i];
    }
  }
  out << "\n";

  out << "sample_sizes = ";
  for (std::size_t i = 0; i < plan.sample_sizes.size(); ++i) {
    out << (i == 0 ? "" : ",") << plan.sample_sizes[i];
  }
  out << "\n";

  out << "methods = ";
  for (std::size_t i = 0; i < plan.methods.size(); ++i) {
    out << (i == 0 ? "" : ",") << method_name(plan.methods[i]);
  }
  out << "\n\n";

  out << "[mcmc]\n";
  out << "n_burn = " << plan.mcmc.n_burn << "\n";
  out << "n_keep = " << plan.mcmc.n_keep << "\n";
  out << "thin = " << plan.mcmc.thin << "\n";
  out << "adapt_window = " << plan.mcmc.adapt_window << "\n";
  out << "target_accept = " << format_double(plan.mcmc.target_accept)
      << "\n\n";

  const MethodConfigs& c = plan.configs;
  out << "[berry]\n";
  out << "mu0 = " << format_double(c.berry.mu0) << "\n";
  out << "sigma0_sq = " << format_double(c.berry.sigma0_sq) << "\n";
  out << "lambda1 = " << format_double(c.berry.lambda1) << "\n";
  out << "lambda2 = " << format_double(c.berry.lambda2) << "\n\n";

  out << "[exnex]\n";
  out << "ex_weight = " << format_double(c.exnex.ex_weight) << "\n";
  out << "mu0_mean = " << format_double(c.exnex.mu0_mean) << "\n";
  out << "mu0_var = " << format_double(c.exnex.mu0_var) << "\n";
  out << "sigma0_halfnormal_scale = "
      << format_double(c.exnex.sigma0_halfnormal_scale) << "\n";
  out << "nex_mean = " << format_double(c.exnex.nex_mean) << "\n";
  out << "nex_var = " << format_double(c.exnex.nex_var) << "\n\n";

  out << "[psioda]\n";
  out << "prior_alpha = " << format_double(c.psioda.rate_prior.alpha) << "\n";
  out << "prior_beta = " << format_double(c.psioda.rate_prior.beta) << "\n";
  out << "model_prior_exponent = "
      << format_double(c.psioda.model_prior_exponent) << "\n\n";

  out << "[fujikawa]\n";
  out << "prior_alpha = " << format_double(c.fujikawa.rate_prior.alpha)
      << "\n";
  out << "prior_beta = " << format_double(c.fujikawa.rate_prior.beta) << "\n";
  out << "tau = " << format_double(c.fujikawa.tau) << "\n";
  out << "epsilon = " << format_double(c.fujikawa.epsilon) << "\n\n";

  out << "[jin]\n";
  out << "theta0_mean = " << format_double(c.jin.theta0_mean) << "\n";
  out << "sigma0_sq_shape = " << format_double(c.jin.sigma0_sq_prior.shape)
      << "\n";
  out << "sigma0_sq_scale = " << format_double(c.jin.sigma0_sq_prior.scale)
      << "\n";
  out << "sigma_sq_shape = " << format_double(c.jin.sigma_sq_prior.shape)
      << "\n";
  out << "sigma_sq_scale = " << format_double(c.jin.sigma_sq_prior.scale)
      << "\n";
  out << "tau_sq_shape = " << format_double(c.jin.tau_sq_prior.shape) << "\n";
  out << "tau_sq_scale = " << format_double(c.jin.tau_sq_prior.scale) << "\n";
  out << "phi_shape = " << format_double(c.jin.phi_prior.shape) << "\n";
  out << "phi_rate = " << format_double(c.jin.phi_prior.rate) << "\n\n";

  out << "[chen_lee]\n";
  out << "crp_alpha = " << format_double(c.chen_lee.crp_alpha) << "\n";
  out << "cluster_obs_var = " << format_double(c.chen_lee.cluster_obs_var)
      << "\n";
  out << "base_mean = " << format_double(c.chen_lee.base_mean) << "\n";
  out << "base_var = " << format_double(c.chen_lee.base_var) << "\n";
  out << "mu2 = " << format_double(c.chen_lee.mu2) << "\n";
  out << "tau2 = " << format_double(c.chen_lee.tau2) << "\n";
  out << "tau1_shape = " << format_double(c.chen_lee.tau1_prior.shape) << "\n";
  out << "tau1_rate = " << format_double(c.chen_lee.tau1_prior.rate) << "\n";
  out << "crp_iterations = " << c.chen_lee.crp_iterations << "\n\n";

  out << "[liu]\n";
  out << "prior_alpha = " << format_double(c.liu.rate_prior.alpha) << "\n";
  out << "prior_beta = " << format_double(c.liu.rate_prior.beta) << "\n";
  out << "delta = " << format_double(c.liu.delta) << "\n";

  return out.str();
}

}  // namespace basket
