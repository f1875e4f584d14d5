#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sflopt {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sectioned key = value text config (a TOML subset): [section] headers,
// one key per line, # comments, scalars, bracketed or bare comma lists,
// and "k:v, k:v" pair maps (optionally quoted). Insertion order is kept
// so a document round-trips stably.
class ConfigDoc {
 public:
  ConfigDoc() = default;

  static ConfigDoc parse_file(const std::string& path);
  static ConfigDoc parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> raw(const std::string& section, const std::string& key) const;

  std::optional<double> get_double(const std::string& section, const std::string& key) const;
  std::optional<std::int64_t> get_int(const std::string& section, const std::string& key) const;
  std::optional<bool> get_bool(const std::string& section, const std::string& key) const;
  std::optional<std::string> get_string(const std::string& section, const std::string& key) const;
  std::optional<std::vector<double>> get_double_list(const std::string& section,
                                                     const std::string& key) const;
  std::optional<std::vector<std::int64_t>> get_int_list(const std::string& section,
                                                        const std::string& key) const;
  // "1:62, 2:41" -> {1:62, 2:41}
  std::optional<std::map<std::int64_t, std::int64_t>> get_pair_map(const std::string& section,
                                                                   const std::string& key) const;

  void set(const std::string& section, const std::string& key, const std::string& value);
  void set_double(const std::string& section, const std::string& key, double value);
  void set_int(const std::string& section, const std::string& key, std::int64_t value);
  void set_bool(const std::string& section, const std::string& key, bool value);
  void set_double_list(const std::string& section, const std::string& key,
                       const std::vector<double>& values);
  void set_int_list(const std::string& section, const std::string& key,
                    const std::vector<std::int64_t>& values);
  void set_pair_map(const std::string& section, const std::string& key,
                    const std::map<std::int64_t, std::int64_t>& values);

  std::string to_string() const;
  void save_file(const std::string& path) const;

  // Full-precision decimal form that parses back to the same double.
  static std::string format_double(double value);

 private:
  struct Entry {
    std::string key;
    std::string value;  // raw text, quotes/brackets stripped on read
  };
  struct Section {
    std::string name;
    std::vector<Entry> entries;
  };
  std::vector<Section> sections_;

  const Entry* find(const std::string& section, const std::string& key) const;
  Entry& upsert(const std::string& section, const std::string& key);
};

}  // namespace sflopt
