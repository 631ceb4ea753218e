#pragma once

#include <string>
#include <vector>

namespace slrkit {
namespace csv {

// %.17g: shortest form that still round-trips a double exactly.
std::string format(double value);
std::string format(long long value);
std::string format(int value);

// Quotes a cell per RFC 4180 when it contains a comma, quote, or newline.
std::string escape(const std::string& cell);

class Writer {
 public:
  explicit Writer(std::vector<std::string> header);

  // Cell count must match the header.
  void add_row(const std::vector<std::string>& cells);

  const std::string& str() const { return out_; }

 private:
  std::size_t columns_;
  std::string out_;
};

}  // namespace csv
}  // namespace slrkit
