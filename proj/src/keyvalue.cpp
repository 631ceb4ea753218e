#include "slrkit/keyvalue.hpp"

#include "slrkit/errors.hpp"

namespace slrkit {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(unsigned(s[begin]))) ++begin;
  while (end > begin && std::isspace(unsigned(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_values(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string::npos) line_end = text.size();
    std::string line = text.substr(line_start, line_end - line_start);
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) {
        throw ParseError("config: line without '='", line_start);
      }
      const std::string key = trim(line.substr(0, eq));
      if (key.empty()) {
        throw ParseError("config: empty key", line_start);
      }
      pairs.emplace_back(key, trim(line.substr(eq + 1)));
    }
    if (line_end == text.size()) break;
    line_start = line_end + 1;
  }
  return pairs;
}

std::string format_key_values(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::string out;
  for (const auto& [key, value] : pairs) {
    out += key;
    out += "=";
    out += value;
    out += "\n";
  }
  return out;
}

std::string lookup(const std::vector<std::pair<std::string, std::string>>& kv,
                   const std::string& key, const std::string& fallback) {
  std::string result = fallback;
  for (const auto& [k, v] : kv) {
    if (k == key) result = v;
  }
  return result;
}

bool contains(const std::vector<std::pair<std::string, std::string>>& kv,
              const std::string& key) {
  for (const auto& [k, v] : kv) {
    if (k == key) return true;
  }
  return false;
}

}  // namespace slrkit
