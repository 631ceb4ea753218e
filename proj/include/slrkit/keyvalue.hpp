#pragma once

#include <string>
#include <utility>
#include <vector>

namespace slrkit {

// Flat key=value config format: one pair per line, '#' starts a comment,
// blank lines ignored, whitespace around keys and values trimmed. A
// nonempty line without '=' or with an empty key raises ParseError with the
// byte offset of the offending line.
std::vector<std::pair<std::string, std::string>> parse_key_values(
    const std::string& text);

std::string format_key_values(
    const std::vector<std::pair<std::string, std::string>>& pairs);

// Last value wins; missing key returns the fallback.
std::string lookup(const std::vector<std::pair<std::string, std::string>>& kv,
                   const std::string& key, const std::string& fallback = "");
bool contains(const std::vector<std::pair<std::string, std::string>>& kv,
              const std::string& key);

}  // namespace slrkit
