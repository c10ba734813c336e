#include "ballotlens/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "ballotlens/errors.hpp"

namespace ballotlens::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Value {
  std::string scalar;
  std::vector<std::string> array;
  bool is_array = false;
  bool is_string = false;
};

Value parse_value(const std::string& raw, const std::string& where) {
  Value v;
  std::string s = trim(raw);
  if (s.empty()) throw ConfigError(where + ": empty value");
  if (s.front() == '[') {
    if (s.back() != ']') throw ConfigError(where + ": unterminated array");
    v.is_array = true;
    std::string inner = s.substr(1, s.size() - 2);
    std::string cur;
    bool in_str = false;
    for (char c : inner) {
      if (c == '"') {
        in_str = !in_str;
        continue;
      }
      if (c == ',' && !in_str) {
        std::string t = trim(cur);
        if (!t.empty()) v.array.push_back(t);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    std::string t = trim(cur);
    if (!t.empty()) v.array.push_back(t);
    if (in_str) throw ConfigError(where + ": unterminated string in array");
    return v;
  }
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') throw ConfigError(where + ": unterminated string");
    v.is_string = true;
    v.scalar = s.substr(1, s.size() - 2);
    return v;
  }
  v.scalar = s;
  return v;
}

int parse_int(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw ConfigError(where + ": expected integer, got '" + s + "'");
  }
}

bool parse_bool(const std::string& s, const std::string& where) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError(where + ": expected true/false, got '" + s + "'");
}

}  // namespace

void PipelineConfig::validate() const {
  for (int y : years)
    if (y % 2 != 0) throw ConfigError("years must be even, got " + std::to_string(y));
  for (int w : weeks)
    if (w < 0 || w > 51) throw ConfigError("weeks must be in 0..51, got " + std::to_string(w));
  if (results_path.empty()) throw ConfigError("results path is required");
  if (out_dir.empty()) throw ConfigError("output directory is required");
}

PipelineConfig parse_config(const std::string& text, const std::string& origin) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = origin + ":" + std::to_string(lineno);
    // strip comments outside strings
    std::string stripped;
    bool in_str = false;
    for (char c : line) {
      if (c == '"') in_str = !in_str;
      if (c == '#' && !in_str) break;
      stripped.push_back(c);
    }
    stripped = trim(stripped);
    if (stripped.empty()) continue;
    if (stripped.front() == '[' && stripped.back() == ']' &&
        stripped.find('=') == std::string::npos)
      continue;  // table header, flat namespace

    auto eq = stripped.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    std::string key = trim(stripped.substr(0, eq));
    Value v = parse_value(stripped.substr(eq + 1), where);

    auto scalar = [&]() -> const std::string& {
      if (v.is_array) throw ConfigError(where + ": '" + key + "' is not an array key");
      return v.scalar;
    };
    auto strings = [&]() {
      return v.is_array ? v.array : std::vector<std::string>{v.scalar};
    };

    if (key == "years") {
      cfg.years.clear();
      for (const auto& s : strings()) cfg.years.push_back(parse_int(s, where));
    } else if (key == "chambers") {
      cfg.chambers = strings();
    } else if (key == "results") {
      cfg.results_path = scalar();
    } else if (key == "receipts") {
      cfg.receipts_path = scalar();
    } else if (key == "overrides") {
      cfg.overrides_path = scalar();
    } else if (key == "cache_dir") {
      cfg.cache_dir = scalar();
    } else if (key == "channels") {
      cfg.channels = strings();
    } else if (key == "offline") {
      cfg.offline = parse_bool(scalar(), where);
    } else if (key == "out_dir") {
      cfg.out_dir = scalar();
    } else if (key == "models") {
      cfg.models = strings();
    } else if (key == "weeks") {
      cfg.weeks.clear();
      for (const auto& s : strings()) cfg.weeks.push_back(parse_int(s, where));
    } else if (key == "cumulative") {
      cfg.cumulative = parse_bool(scalar(), where);
    } else if (key == "user_agent") {
      cfg.user_agent = scalar();
    } else {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace ballotlens::cli
