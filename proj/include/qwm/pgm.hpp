#pragma once

// Binary PGM (P5) reader/writer for 8-bit square 2^k images.
//
// Canonical output is "P5 <w> <h> 255\n" followed by the raw payload. The
// reader accepts any whitespace between header fields and '#' comments.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "qwm/error.hpp"
#include "qwm/image.hpp"

namespace qwm {

namespace detail {

class PgmHeaderScanner {
 public:
  explicit PgmHeaderScanner(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t read_uint(const char* field) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) fail(ErrorKind::PgmTruncated, std::string("missing ") + field);
    if (!std::isdigit(bytes_[pos_]))
      fail(ErrorKind::PgmBadHeader, std::string("non-numeric ") + field);
    std::size_t v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > (1u << 20)) fail(ErrorKind::PgmBadHeader, std::string(field) + " too large");
    }
    return v;
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    fail(ErrorKind::PgmBadMagic, "not a binary PGM (expected P5)");
  detail::PgmHeaderScanner scan(bytes);
  scan.advance(2);
  if (scan.pos() < bytes.size() && !std::isspace(bytes[scan.pos()]) && bytes[scan.pos()] != '#')
    fail(ErrorKind::PgmBadMagic, "not a binary PGM (expected P5)");
  const auto width = scan.read_uint("width");
  const auto height = scan.read_uint("height");
  const auto maxval = scan.read_uint("maxval");
  if (maxval != 255) fail(ErrorKind::PgmBadMaxval, "maxval must be 255, got " + std::to_string(maxval));
  if (scan.pos() >= bytes.size() || !std::isspace(bytes[scan.pos()]))
    fail(ErrorKind::PgmTruncated, "missing separator before payload");
  scan.advance(1);
  if (width != height)
    fail(ErrorKind::PgmNotSquare,
         "image is " + std::to_string(width) + "x" + std::to_string(height));
  const int exp = exact_log2(width);
  if (exp < 0 || exp > kMaxSideExp)
    fail(ErrorKind::PgmNotPowerOfTwo, "side " + std::to_string(width) + " is not a power of two");
  const std::size_t count = width * height;
  if (bytes.size() - scan.pos() < count)
    fail(ErrorKind::PgmTruncated, "payload has " + std::to_string(bytes.size() - scan.pos()) +
                                      " of " + std::to_string(count) + " bytes");
  const auto* first = bytes.data() + scan.pos();
  return GrayImage(exp, std::vector<std::uint8_t>(first, first + count));
}

inline std::vector<std::uint8_t> write_pgm(const GrayImage& img) {
  const std::string side = std::to_string(img.side());
  const std::string header = "P5 " + side + " " + side + " 255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "short write to " + path.string());
}

inline GrayImage load_pgm(const std::filesystem::path& path) {
  return read_pgm(read_file_bytes(path));
}

inline void save_pgm(const std::filesystem::path& path, const GrayImage& img) {
  write_file_bytes(path, write_pgm(img));
}

}  // namespace qwm
