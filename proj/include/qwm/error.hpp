#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qwm {

enum class ErrorKind {
  Structural,        // shape/size/index contract violated
  UnsupportedScale,  // carrier/watermark size ratio outside the scheme
  SizeMismatch,      // two images that must agree in size do not
  InvalidArgument,   // scalar parameter out of range
  Io,                // file could not be read or written
  PgmBadMagic,
  PgmBadHeader,
  PgmBadMaxval,
  PgmNotSquare,
  PgmNotPowerOfTwo,
  PgmTruncated,
  KeyInvalid,
  ConfigInvalid,
  VerificationFailed,
};

/// Machine-parsable category name, stable across releases.
constexpr std::string_view category(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::Structural: return "structural";
    case ErrorKind::UnsupportedScale: return "unsupported-scale";
    case ErrorKind::SizeMismatch: return "size-mismatch";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Io: return "io";
    case ErrorKind::PgmBadMagic: return "pgm-bad-magic";
    case ErrorKind::PgmBadHeader: return "pgm-bad-header";
    case ErrorKind::PgmBadMaxval: return "pgm-bad-maxval";
    case ErrorKind::PgmNotSquare: return "pgm-not-square";
    case ErrorKind::PgmNotPowerOfTwo: return "pgm-not-power-of-two";
    case ErrorKind::PgmTruncated: return "pgm-truncated";
    case ErrorKind::KeyInvalid: return "key-invalid";
    case ErrorKind::ConfigInvalid: return "config-invalid";
    case ErrorKind::VerificationFailed: return "verification-failed";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace qwm
