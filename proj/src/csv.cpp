#include "slrkit/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace slrkit {
namespace csv {

std::string format(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string format(long long value) {
  return std::to_string(value);
}

std::string format(int value) {
  return std::to_string(value);
}

std::string escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) {
    return cell;
  }
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

Writer::Writer(std::vector<std::string> header) : columns_(header.size()) {
  if (header.empty()) {
    throw std::invalid_argument("csv::Writer: empty header");
  }
  add_row(header);
}

void Writer::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw std::invalid_argument("csv::Writer: row width mismatch");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out_ += ',';
    out_ += escape(cells[i]);
  }
  out_ += '\n';
}

}  // namespace csv
}  // namespace slrkit
