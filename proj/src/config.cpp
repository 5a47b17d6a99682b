#include "uecomp/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "uecomp/group.hpp"

namespace uecomp {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidSpecError("config line " + std::to_string(lineno) +
                             " is not key=value: " + t);
    cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key.empty()) throw InvalidSpecError("empty config key");
  kv_[key] = value;
}

bool RunConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string RunConfig::get_string(const std::string& key,
                                  const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

std::string RunConfig::require_string(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end())
    throw InvalidSpecError("missing required config key: " + key);
  return it->second;
}

int64_t RunConfig::get_int(const std::string& key, int64_t fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    size_t pos = 0;
    int64_t v = std::stoll(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw InvalidSpecError("config key " + key +
                           " is not an integer: " + it->second);
  }
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw InvalidSpecError("config key " + key +
                           " is not a number: " + it->second);
  }
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::string v = it->second;
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw InvalidSpecError("config key " + key + " is not a boolean: " + v);
}

void RunConfig::validate() const {
  std::vector<std::string> bad;
  auto check = [&](const std::string& key, auto fn) {
    if (!has(key)) return;
    try {
      fn();
    } catch (const std::exception& e) {
      bad.push_back(key + " (" + e.what() + ")");
    }
  };
  check("group", [&] { GroupSpec::parse(require_string("group")).validate(); });
  check("group2",
        [&] { GroupSpec::parse(require_string("group2")).validate(); });
  check("n", [&] {
    if (get_int("n", 0) < 1) throw InvalidSpecError("n must be >= 1");
  });
  check("n_max", [&] {
    if (get_int("n_max", 0) < 1) throw InvalidSpecError("n_max must be >= 1");
  });
  check("p", [&] {
    double p = get_double("p", 0.0);
    if (!(p >= 0 && p < 1)) throw InvalidSpecError("p must lie in [0,1)");
  });
  check("q", [&] {
    double q = get_double("q", 0.0);
    if (!(q >= 0 && q < 0.5)) throw InvalidSpecError("q must lie in [0,0.5)");
  });
  check("radius", [&] {
    if (get_double("radius", 0.0) < 0)
      throw InvalidSpecError("radius must be >= 0");
  });
  check("delta", [&] {
    double d = get_double("delta", 1.0);
    if (!(d > 0 && d <= 1)) throw InvalidSpecError("delta must lie in (0,1]");
  });
  check("alpha", [&] {
    double a = get_double("alpha", 1.0);
    if (!(a > 0 && a <= 1)) throw InvalidSpecError("alpha must lie in (0,1]");
  });
  check("seed", [&] { get_int("seed", 0); });
  check("threads", [&] {
    if (get_int("threads", 1) < 1)
      throw InvalidSpecError("threads must be >= 1");
  });
  check("budget_bytes", [&] {
    if (get_int("budget_bytes", 1) < 1)
      throw InvalidSpecError("budget_bytes must be >= 1");
  });
  check("budget_elements", [&] {
    if (get_int("budget_elements", 1) < 1)
      throw InvalidSpecError("budget_elements must be >= 1");
  });
  if (!bad.empty()) {
    std::string msg = "invalid config fields:";
    for (const std::string& b : bad) msg += " " + b + ";";
    throw InvalidSpecError(msg);
  }
}

std::string RunConfig::hash() const {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [k, v] : kv_) {
    mix(k);
    mix("=");
    mix(v);
    mix("\n");
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string tool_version() { return "uecomp 1.0.0"; }

}  // namespace uecomp
