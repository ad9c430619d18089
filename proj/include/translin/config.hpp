#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace translin {

/// Error in a configuration file, with the offending line when known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Minimal TOML-style document: [section] headers over key = value lines,
/// '#' comments, quoted or bare scalar values. Enough for the experiment
/// config format; order of sections and keys is preserved for serialization.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int_or(const std::string& section, const std::string& key,
                       long long fallback) const;
  std::uint64_t get_uint64_or(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;

  void set(const std::string& section, const std::string& key, const std::string& value);

  /// Canonical serialization: sections and keys in insertion order, one
  /// blank line between sections. Reparsing reproduces the document.
  std::string serialize() const;

 private:
  const std::string* find(const std::string& section, const std::string& key) const;

  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
  };
  std::vector<Section> sections_;
};

/// Grid notation: either "start:step:stop" (inclusive, tolerant endpoint) or
/// a comma-separated list of numbers.
std::vector<double> parse_grid(const std::string& text);

/// Formats a double with 12 significant digits, the precision used in every
/// emitted file so that values round-trip.
std::string format_double(double value);

}  // namespace translin
