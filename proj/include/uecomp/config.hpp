#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uecomp/errors.hpp"

namespace uecomp {

// Flat key=value configuration. Values are kept as text; typed accessors
// parse on demand and report the offending key on failure. CLI flags are
// applied through set(), overriding file-sourced keys.
class RunConfig {
 public:
  static RunConfig from_file(const std::string& path);
  static RunConfig from_text(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  int64_t get_int(const std::string& key, int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Checks every known-key domain at once; throws InvalidSpecError listing
  // all invalid fields, not just the first.
  void validate() const;

  // FNV-1a over the sorted canonical key=value lines, hex-encoded
  std::string hash() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

std::string tool_version();

}  // namespace uecomp
