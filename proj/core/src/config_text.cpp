#include "sflopt/config_text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sflopt {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Strips one layer of quotes, brackets or braces around a value.
std::string unwrap(std::string v) {
  v = trim(v);
  if (v.size() >= 2) {
    const char a = v.front();
    const char b = v.back();
    if ((a == '"' && b == '"') || (a == '\'' && b == '\'') || (a == '[' && b == ']') ||
        (a == '{' && b == '}')) {
      return trim(v.substr(1, v.size() - 2));
    }
  }
  return v;
}

std::vector<std::string> split_commas(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  const std::string last = trim(cur);
  if (!last.empty() || !out.empty()) out.push_back(last);
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

double parse_double_or_throw(const std::string& text, const std::string& what) {
  const std::string t = unwrap(text);
  try {
    std::size_t pos = 0;
    const double v = std::stod(t, &pos);
    while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
    if (pos != t.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: " + what + ": cannot parse '" + t + "' as a number");
  }
}

std::int64_t parse_int_or_throw(const std::string& text, const std::string& what) {
  const std::string t = unwrap(text);
  std::int64_t v = 0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec == std::errc() && res.ptr == last) return v;
  // Fall back through double so "5e3" style integers are accepted.
  const double d = parse_double_or_throw(t, what);
  const double r = std::round(d);
  if (std::abs(d - r) > 1e-9 * std::max(1.0, std::abs(d))) {
    throw ConfigError("config: " + what + ": '" + t + "' is not an integer");
  }
  return static_cast<std::int64_t>(r);
}

}  // namespace

ConfigDoc ConfigDoc::parse_string(const std::string& text, const std::string& origin) {
  ConfigDoc doc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Strip comments that are not inside quotes.
    bool in_quote = false;
    std::string stripped;
    for (char c : line) {
      if (c == '"') in_quote = !in_quote;
      if ((c == '#' || c == ';') && !in_quote) break;
      stripped.push_back(c);
    }
    const std::string t = trim(stripped);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
      }
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) {
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
      }
      // Materialize the section even if it stays empty.
      doc.upsert(section, std::string());
      auto& sec = doc.sections_.back();
      sec.entries.clear();
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    doc.upsert(section, key).value = value;
  }
  return doc;
}

ConfigDoc ConfigDoc::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

const ConfigDoc::Entry* ConfigDoc::find(const std::string& section, const std::string& key) const {
  for (const auto& sec : sections_) {
    if (sec.name != section) continue;
    for (const auto& e : sec.entries) {
      if (e.key == key) return &e;
    }
  }
  return nullptr;
}

ConfigDoc::Entry& ConfigDoc::upsert(const std::string& section, const std::string& key) {
  Section* target = nullptr;
  for (auto& sec : sections_) {
    if (sec.name == section) {
      target = &sec;
      break;
    }
  }
  if (target == nullptr) {
    sections_.push_back(Section{section, {}});
    target = &sections_.back();
  }
  if (key.empty()) {
    static Entry dummy;
    return dummy;
  }
  for (auto& e : target->entries) {
    if (e.key == key) return e;
  }
  target->entries.push_back(Entry{key, std::string()});
  return target->entries.back();
}

bool ConfigDoc::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::optional<std::string> ConfigDoc::raw(const std::string& section, const std::string& key) const {
  const auto* e = find(section, key);
  if (e == nullptr) return std::nullopt;
  return e->value;
}

std::optional<double> ConfigDoc::get_double(const std::string& section,
                                            const std::string& key) const {
  const auto* e = find(section, key);
  if (e == nullptr) return std::nullopt;
  return parse_double_or_throw(e->value, section + "." + key);
}

std::optional<std::int64_t> ConfigDoc::get_int(const std::string& section,
                                               const std::string& key) const {
  const auto* e = find(section, key);
  if (e == nullptr) return std::nullopt;
  return parse_int_or_throw(e->value, section + "." + key);
}

std::optional<bool> ConfigDoc::get_bool(const std::string& section, const std::string& key) const {
  const auto* e = find(section, key);
  if (e == nullptr) return std::nullopt;
  std::string v = unwrap(e->value);
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError("config: " + section + "." + key + ": cannot parse '" + v + "' as bool");
}

std::optional<std::string> ConfigDoc::get_string(const std::string& section,
                                                 const std::string& key) const {
  const auto* e = find(section, key);
  if (e == nullptr) return std::nullopt;
  return unwrap(e->value);
}

std::optional<std::vector<double>> ConfigDoc::get_double_list(const std::string& section,
                                                              const std::string& key) const {
  const auto* e = find(section, key);
  if (e == nullptr) return std::nullopt;
  std::vector<double> out;
  for (const auto& item : split_commas(unwrap(e->value))) {
    out.push_back(parse_double_or_throw(item, section + "." + key));
  }
  return out;
}

std::optional<std::vector<std::int64_t>> ConfigDoc::get_int_list(const std::string& section,
                                                                 const std::string& key) const {
  const auto* e = find(section, key);
  if (e == nullptr) return std::nullopt;
  std::vector<std::int64_t> out;
  for (const auto& item : split_commas(unwrap(e->value))) {
    out.push_back(parse_int_or_throw(item, section + "." + key));
  }
  return out;
}

std::optional<std::map<std::int64_t, std::int64_t>> ConfigDoc::get_pair_map(
    const std::string& section, const std::string& key) const {
  const auto* e = find(section, key);
  if (e == nullptr) return std::nullopt;
  std::map<std::int64_t, std::int64_t> out;
  for (const auto& item : split_commas(unwrap(e->value))) {
    auto sep = item.find(':');
    if (sep == std::string::npos) sep = item.find('=');
    if (sep == std::string::npos) {
      throw ConfigError("config: " + section + "." + key + ": expected 'k:v' in '" + item + "'");
    }
    const auto k = parse_int_or_throw(trim(item.substr(0, sep)), section + "." + key);
    const auto v = parse_int_or_throw(trim(item.substr(sep + 1)), section + "." + key);
    out[k] = v;
  }
  return out;
}

void ConfigDoc::set(const std::string& section, const std::string& key, const std::string& value) {
  upsert(section, key).value = value;
}

std::string ConfigDoc::format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void ConfigDoc::set_double(const std::string& section, const std::string& key, double value) {
  set(section, key, format_double(value));
}

void ConfigDoc::set_int(const std::string& section, const std::string& key, std::int64_t value) {
  set(section, key, std::to_string(value));
}

void ConfigDoc::set_bool(const std::string& section, const std::string& key, bool value) {
  set(section, key, value ? "true" : "false");
}

void ConfigDoc::set_double_list(const std::string& section, const std::string& key,
                                const std::vector<double>& values) {
  std::string v = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) v += ", ";
    v += format_double(values[i]);
  }
  v += "]";
  set(section, key, v);
}

void ConfigDoc::set_int_list(const std::string& section, const std::string& key,
                             const std::vector<std::int64_t>& values) {
  std::string v = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) v += ", ";
    v += std::to_string(values[i]);
  }
  v += "]";
  set(section, key, v);
}

void ConfigDoc::set_pair_map(const std::string& section, const std::string& key,
                             const std::map<std::int64_t, std::int64_t>& values) {
  std::string v = "\"";
  bool first = true;
  for (const auto& [k, e] : values) {
    if (!first) v += ", ";
    first = false;
    v += std::to_string(k) + ":" + std::to_string(e);
  }
  v += "\"";
  set(section, key, v);
}

std::string ConfigDoc::to_string() const {
  std::string out;
  for (const auto& sec : sections_) {
    if (!out.empty()) out += "\n";
    out += "[" + sec.name + "]\n";
    for (const auto& e : sec.entries) {
      out += e.key + " = " + e.value + "\n";
    }
  }
  return out;
}

void ConfigDoc::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("config: cannot write '" + path + "'");
  out << to_string();
  if (!out) throw ConfigError("config: write failed for '" + path + "'");
}

}  // namespace sflopt
