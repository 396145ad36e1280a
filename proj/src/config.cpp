#include "imst/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace imst {

namespace {

constexpr const char* kHaarNames[kHaarKindCount] = {"two_rect_h",   "two_rect_v",      "three_rect",
                                                    "checkerboard", "center_surround", "mean"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Shortest text that parses back to the same double.
std::string fmt_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  errno = 0;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(d)) {
    throw std::invalid_argument("config " + key + ": expected a number, got '" + v + "'");
  }
  return d;
}

unsigned long long to_unsigned(const std::string& key, const std::string& v) {
  if (v.empty() || v[0] == '-') {
    throw std::invalid_argument("config " + key + ": expected a nonnegative integer, got '" + v + "'");
  }
  char* end = nullptr;
  errno = 0;
  const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE) {
    throw std::invalid_argument("config " + key + ": expected a nonnegative integer, got '" + v + "'");
  }
  return u;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("config " + key + ": expected true/false, got '" + v + "'");
}

std::size_t to_budget(const std::string& key, const std::string& v) {
  if (v == "unbounded") return kUnboundedBudget;
  return static_cast<std::size_t>(to_unsigned(key, v));
}

std::string budget_string(std::size_t b) {
  return b == kUnboundedBudget ? "unbounded" : std::to_string(b);
}

KernelType to_kernel(const std::string& key, const std::string& v) {
  if (v == "gaussian") return KernelType::kGaussian;
  if (v == "linear") return KernelType::kLinear;
  throw std::invalid_argument("config " + key + ": expected gaussian or linear, got '" + v + "'");
}

std::array<bool, kHaarKindCount> to_haar_kinds(const std::string& key, const std::string& v) {
  std::array<bool, kHaarKindCount> kinds{};
  std::stringstream ss(v);
  std::string name;
  while (std::getline(ss, name, ',')) {
    name = trim(name);
    if (name.empty()) continue;
    bool found = false;
    for (int k = 0; k < kHaarKindCount; ++k) {
      if (name == kHaarNames[k]) {
        kinds[k] = true;
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("config " + key + ": unknown layout '" + name + "'");
  }
  return kinds;
}

std::string haar_string(const std::array<bool, kHaarKindCount>& kinds) {
  std::string out;
  for (int k = 0; k < kHaarKindCount; ++k) {
    if (!kinds[k]) continue;
    if (!out.empty()) out += ',';
    out += kHaarNames[k];
  }
  return out;
}

}  // namespace

ConfigMap parse_config(std::istream& in) {
  ConfigMap map;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(number) + ": expected key=value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(number) + ": empty key");
    map[key] = trim(t.substr(eq + 1));
  }
  return map;
}

ConfigMap load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  const int first = (in >> std::ws).peek();
  if (first == '{') {
    const auto manifest = nlohmann::json::parse(in);
    ConfigMap map;
    for (const auto& [key, value] : manifest.at("config").items()) map[key] = value.get<std::string>();
    return map;
  }
  return parse_config(in);
}

void write_config(std::ostream& out, const ConfigMap& map) {
  for (const auto& [k, v] : map) out << k << '=' << v << '\n';
}

TrackerConfig tracker_config_from(const ConfigMap& map, TrackerConfig base) {
  TrackerConfig c = std::move(base);
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"seed", [&](auto& k, auto& v) { c.seed = to_unsigned(k, v); }},
      {"sampler.mode",
       [&](auto& k, auto& v) {
         if (v == "hybrid") {
           c.mode = SamplingMode::kHybrid;
         } else if (v == "gaussian") {
           c.mode = SamplingMode::kGaussian;
         } else {
           throw std::invalid_argument("config " + k + ": expected hybrid or gaussian, got '" + v + "'");
         }
       }},
      {"sampler.n", [&](auto& k, auto& v) { c.sampler.n = to_unsigned(k, v); }},
      {"sampler.sigma_xy_factor", [&](auto& k, auto& v) { c.sampler.sigma_xy_factor = to_double(k, v); }},
      {"sampler.sigma_scale", [&](auto& k, auto& v) { c.sampler.sigma_scale = to_double(k, v); }},
      {"features.grid_rows", [&](auto& k, auto& v) { c.features.grid_rows = static_cast<int>(to_unsigned(k, v)); }},
      {"features.grid_cols", [&](auto& k, auto& v) { c.features.grid_cols = static_cast<int>(to_unsigned(k, v)); }},
      {"features.histogram_bins",
       [&](auto& k, auto& v) { c.features.histogram_bins = static_cast<int>(to_unsigned(k, v)); }},
      {"features.include_histogram", [&](auto& k, auto& v) { c.features.include_histogram = to_bool(k, v); }},
      {"features.haar_kinds", [&](auto& k, auto& v) { c.features.haar_kinds = to_haar_kinds(k, v); }},
      {"svm.kernel",
       [&](auto& k, auto& v) { c.short_svm.kernel.type = c.long_svm.kernel.type = to_kernel(k, v); }},
      {"svm.gamma", [&](auto& k, auto& v) { c.short_svm.kernel.gamma = c.long_svm.kernel.gamma = to_double(k, v); }},
      {"svm.C", [&](auto& k, auto& v) { c.short_svm.C = c.long_svm.C = to_double(k, v); }},
      {"svm.budget", [&](auto& k, auto& v) { c.short_svm.budget = c.long_svm.budget = to_budget(k, v); }},
      {"svm.bias", [&](auto& k, auto& v) { c.short_svm.bias = c.long_svm.bias = to_double(k, v); }},
      {"critic.candidates", [&](auto& k, auto& v) { c.critic.candidates = to_unsigned(k, v); }},
      {"critic.max_rejects", [&](auto& k, auto& v) { c.critic.max_rejects = to_unsigned(k, v); }},
      {"critic.budget", [&](auto& k, auto& v) { c.critic.model.budget = to_budget(k, v); }},
      {"critic.kernel", [&](auto& k, auto& v) { c.critic.model.kernel.type = to_kernel(k, v); }},
      {"critic.gamma", [&](auto& k, auto& v) { c.critic.model.kernel.gamma = to_double(k, v); }},
      {"critic.C", [&](auto& k, auto& v) { c.critic.model.C = to_double(k, v); }},
      {"critic.sigma_xy_factor", [&](auto& k, auto& v) { c.critic.sigma_xy_factor = to_double(k, v); }},
      {"critic.sigma_scale", [&](auto& k, auto& v) { c.critic.sigma_scale = to_double(k, v); }},
      {"tracker.m", [&](auto& k, auto& v) { c.tracker.m = to_unsigned(k, v); }},
      {"tracker.delta", [&](auto& k, auto& v) { c.tracker.delta = to_unsigned(k, v); }},
      {"tracker.epsilon", [&](auto& k, auto& v) { c.tracker.epsilon = to_double(k, v); }},
      {"tracker.tau_match", [&](auto& k, auto& v) { c.tracker.tau_match = to_double(k, v); }},
      {"tracker.lost_inflation", [&](auto& k, auto& v) { c.tracker.lost_inflation = to_double(k, v); }},
      {"tracker.max_inflation", [&](auto& k, auto& v) { c.tracker.max_inflation = to_double(k, v); }},
  };
  for (const auto& [key, value] : map) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw std::invalid_argument("unknown config key '" + key + "'");
    it->second(key, value);
  }
  c.validate();
  return c;
}

ConfigMap to_config_map(const TrackerConfig& c) {
  auto kernel = [](KernelType t) { return std::string(t == KernelType::kLinear ? "linear" : "gaussian"); };
  return {
      {"seed", std::to_string(c.seed)},
      {"sampler.mode", c.mode == SamplingMode::kHybrid ? "hybrid" : "gaussian"},
      {"sampler.n", std::to_string(c.sampler.n)},
      {"sampler.sigma_xy_factor", fmt_double(c.sampler.sigma_xy_factor)},
      {"sampler.sigma_scale", fmt_double(c.sampler.sigma_scale)},
      {"features.grid_rows", std::to_string(c.features.grid_rows)},
      {"features.grid_cols", std::to_string(c.features.grid_cols)},
      {"features.histogram_bins", std::to_string(c.features.histogram_bins)},
      {"features.include_histogram", c.features.include_histogram ? "true" : "false"},
      {"features.haar_kinds", haar_string(c.features.haar_kinds)},
      {"svm.kernel", kernel(c.short_svm.kernel.type)},
      {"svm.gamma", fmt_double(c.short_svm.kernel.gamma)},
      {"svm.C", fmt_double(c.short_svm.C)},
      {"svm.budget", budget_string(c.short_svm.budget)},
      {"svm.bias", fmt_double(c.short_svm.bias)},
      {"critic.candidates", std::to_string(c.critic.candidates)},
      {"critic.max_rejects", std::to_string(c.critic.max_rejects)},
      {"critic.budget", budget_string(c.critic.model.budget)},
      {"critic.kernel", kernel(c.critic.model.kernel.type)},
      {"critic.gamma", fmt_double(c.critic.model.kernel.gamma)},
      {"critic.C", fmt_double(c.critic.model.C)},
      {"critic.sigma_xy_factor", fmt_double(c.critic.sigma_xy_factor)},
      {"critic.sigma_scale", fmt_double(c.critic.sigma_scale)},
      {"tracker.m", std::to_string(c.tracker.m)},
      {"tracker.delta", std::to_string(c.tracker.delta)},
      {"tracker.epsilon", fmt_double(c.tracker.epsilon)},
      {"tracker.tau_match", fmt_double(c.tracker.tau_match)},
      {"tracker.lost_inflation", fmt_double(c.tracker.lost_inflation)},
      {"tracker.max_inflation", fmt_double(c.tracker.max_inflation)},
  };
}

}  // namespace imst
