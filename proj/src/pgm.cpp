#include "slrkit/pgm.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace slrkit {

namespace {

// Token scanner over the PGM header: skips whitespace and '#' comments,
// remembers where each token started so errors can point at it.
class HeaderScanner {
 public:
  explicit HeaderScanner(const std::string& bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }

  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string token(const char* what) {
    skip_separators();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(unsigned(bytes_[pos_])) &&
           bytes_[pos_] != '#') {
      ++pos_;
    }
    if (start == pos_) {
      throw ParseError(std::string("pgm: missing ") + what, start);
    }
    return bytes_.substr(start, pos_ - start);
  }

  long number(const char* what) {
    skip_separators();
    const std::size_t start = pos_;
    const std::string text = token(what);
    for (char c : text) {
      if (c < '0' || c > '9') {
        throw ParseError(std::string("pgm: bad ") + what + ": " + text, start);
      }
    }
    if (text.size() > 9) {
      throw ParseError(std::string("pgm: ") + what + " out of range", start);
    }
    return std::stol(text);
  }

  // One single whitespace byte separates the header from the raster.
  void raster_separator() {
    if (pos_ >= bytes_.size() || !std::isspace(unsigned(bytes_[pos_]))) {
      throw ParseError("pgm: missing raster separator", pos_);
    }
    ++pos_;
  }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Matrix image_decode(const std::string& bytes) {
  HeaderScanner scan(bytes);
  const std::size_t magic_at = 0;
  const std::string magic = scan.token("magic");
  if (magic != "P5") {
    throw ParseError("pgm: not a binary PGM (magic != P5)", magic_at);
  }
  const long width = scan.number("width");
  const long height = scan.number("height");
  if (width <= 0 || height <= 0) {
    throw ParseError("pgm: dimensions must be positive", scan.pos());
  }
  scan.skip_separators();
  const std::size_t maxval_at = scan.pos();
  const long maxval = scan.number("maxval");
  if (maxval != 255) {
    throw ParseError("pgm: only maxval 255 is supported", maxval_at);
  }
  scan.raster_separator();

  const std::size_t need = std::size_t(width) * std::size_t(height);
  if (bytes.size() - scan.pos() < need) {
    throw ParseError("pgm: truncated raster", bytes.size());
  }
  Matrix image(height, width);
  std::size_t at = scan.pos();
  for (long i = 0; i < height; ++i) {
    for (long j = 0; j < width; ++j) {
      image(i, j) = double(std::uint8_t(bytes[at++])) / 255.0;
    }
  }
  return image;
}

std::string image_encode(const Matrix& image) {
  if (image.size() == 0) {
    throw std::invalid_argument("image_encode: empty image");
  }
  require_finite(image, "image_encode");
  std::ostringstream os;
  os << "P5\n" << image.cols() << " " << image.rows() << "\n255\n";
  std::string out = os.str();
  out.reserve(out.size() + std::size_t(image.size()));
  for (Index i = 0; i < image.rows(); ++i) {
    for (Index j = 0; j < image.cols(); ++j) {
      const double clamped = std::min(1.0, std::max(0.0, image(i, j)));
      out.push_back(char(std::uint8_t(std::lround(clamped * 255.0))));
    }
  }
  return out;
}

Matrix image_read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("image_read: cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return image_decode(buffer.str());
}

void image_write(const std::string& path, const Matrix& image) {
  const std::string bytes = image_encode(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("image_write: cannot open " + path);
  }
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) {
    throw std::runtime_error("image_write: write failed for " + path);
  }
}

}  // namespace slrkit
