#pragma once

#include <string>

#include "slrkit/core.hpp"

namespace slrkit {

// Binary PGM (P5, maxval 255) codecs. Pixels map to [0, 1] doubles,
// row-major, top row first. Decoding rejects malformed input with a
// ParseError carrying the byte offset; other maxvals are rejected too.
Matrix image_decode(const std::string& bytes);
std::string image_encode(const Matrix& image);  // clamps to [0, 1], rounds

Matrix image_read(const std::string& path);
void image_write(const std::string& path, const Matrix& image);

}  // namespace slrkit
