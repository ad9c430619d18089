#include "translin/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace translin {
namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

/// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

double parse_number(const std::string& value, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got '" + value + "'");
  }
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string raw;
  std::string current;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      cfg.set(current, "", "");  // registers the section even if empty
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    if (current.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    cfg.set(current, key, value);
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  Section* target = nullptr;
  for (Section& s : sections_)
    if (s.name == section) target = &s;
  if (!target) {
    sections_.push_back({section, {}});
    target = &sections_.back();
  }
  if (key.empty()) return;
  for (auto& [k, v] : target->entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  target->entries.emplace_back(key, value);
}

const std::string* Config::find(const std::string& section, const std::string& key) const {
  for (const Section& s : sections_) {
    if (s.name != section) continue;
    for (const auto& [k, v] : s.entries)
      if (k == key) return &v;
  }
  return nullptr;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  const std::string* v = find(section, key);
  if (!v) throw ConfigError("missing required key [" + section + "] " + key);
  return *v;
}

std::string Config::get_string_or(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  const std::string* v = find(section, key);
  return v ? *v : fallback;
}

long long Config::get_int(const std::string& section, const std::string& key) const {
  const double v = parse_number(get_string(section, key), "[" + section + "] " + key);
  const long long iv = static_cast<long long>(std::llround(v));
  if (static_cast<double>(iv) != v)
    throw ConfigError("[" + section + "] " + key + ": expected an integer");
  return iv;
}

long long Config::get_int_or(const std::string& section, const std::string& key,
                             long long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t Config::get_uint64_or(const std::string& section, const std::string& key,
                                    std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  const std::string text = get_string(section, key);
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw ConfigError("[" + section + "] " + key + ": expected a non-negative integer");
  }
}

double Config::get_double(const std::string& section, const std::string& key) const {
  return parse_number(get_string(section, key), "[" + section + "] " + key);
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

std::string Config::serialize() const {
  std::string out;
  bool first = true;
  for (const Section& s : sections_) {
    if (!first) out += "\n";
    first = false;
    out += "[" + s.name + "]\n";
    for (const auto& [k, v] : s.entries) {
      const bool quote =
          v.empty() || v.find_first_not_of("0123456789+-.:,eE") != std::string::npos;
      out += k + " = " + (quote ? "\"" + v + "\"" : v) + "\n";
    }
  }
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  const std::string spec = trim(text);
  if (spec.empty()) throw ConfigError("empty grid specification");
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    double start = 0, step = 0, stop = 0;
    std::istringstream in(spec);
    std::string a, b, c;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c))
      throw ConfigError("grid range must be start:step:stop, got '" + spec + "'");
    start = parse_number(trim(a), "grid start");
    step = parse_number(trim(b), "grid step");
    stop = parse_number(trim(c), "grid stop");
    if (step <= 0) throw ConfigError("grid step must be positive");
    if (stop < start) throw ConfigError("grid stop below start");
    for (double v = start; v <= stop + 1e-9 * step; v += step) grid.push_back(v);
  } else {
    std::istringstream in(spec);
    std::string token;
    while (std::getline(in, token, ',')) {
      const std::string t = trim(token);
      if (t.empty()) continue;
      grid.push_back(parse_number(t, "grid value"));
    }
  }
  if (grid.empty()) throw ConfigError("grid resolved to no points: '" + spec + "'");
  return grid;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

}  // namespace translin
