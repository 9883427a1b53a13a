#pragma once

// Image-quality metrics: MSE, PSNR, SSIM and NCC over 8-bit images.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "qwm/error.hpp"
#include "qwm/image.hpp"

namespace qwm {

namespace detail {

inline void check_same_size(const GrayImage& a, const GrayImage& b) {
  require(a.side_exp() == b.side_exp(), ErrorKind::SizeMismatch,
          "images differ in size: " + std::to_string(a.side()) + " vs " + std::to_string(b.side()));
}

}  // namespace detail

inline double mse(const GrayImage& a, const GrayImage& b) {
  detail::check_same_size(a, b);
  const auto pa = a.pixels(), pb = b.pixels();
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const int d = int{pa[i]} - int{pb[i]};
    acc += static_cast<std::uint64_t>(d * d);
  }
  return static_cast<double>(acc) / static_cast<double>(pa.size());
}

/// Peak signal-to-noise ratio in dB; +infinity for identical images.
inline double psnr(const GrayImage& a, const GrayImage& b) {
  const double e = mse(a, b);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / e);
}

struct SsimOptions {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
};

namespace detail {

inline double ssim_term(double mx, double my, double vx, double vy, double cxy, double c1, double c2) {
  return ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
}

inline std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> k(static_cast<std::size_t>(size));
  const double c = (size - 1) / 2.0;
  double sum = 0;
  for (int i = 0; i < size; ++i) {
    k[i] = std::exp(-((i - c) * (i - c)) / (2 * sigma * sigma));
    sum += k[i];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// 'valid' separable filtering of a side x side field.
inline std::vector<double> filter_valid(const std::vector<double>& src, std::size_t side,
                                        const std::vector<double>& k) {
  const std::size_t w = k.size(), out_side = side - w + 1;
  std::vector<double> rows(side * out_side);
  for (std::size_t y = 0; y < side; ++y)
    for (std::size_t x = 0; x < out_side; ++x) {
      double acc = 0;
      for (std::size_t i = 0; i < w; ++i) acc += k[i] * src[y * side + x + i];
      rows[y * out_side + x] = acc;
    }
  std::vector<double> out(out_side * out_side);
  for (std::size_t y = 0; y < out_side; ++y)
    for (std::size_t x = 0; x < out_side; ++x) {
      double acc = 0;
      for (std::size_t i = 0; i < w; ++i) acc += k[i] * rows[(y + i) * out_side + x];
      out[y * out_side + x] = acc;
    }
  return out;
}

}  // namespace detail

/// Mean SSIM over all valid 11x11 Gaussian (sigma 1.5) windows. Images
/// smaller than the window use one global window with uniform weights.
inline double ssim(const GrayImage& a, const GrayImage& b, const SsimOptions& opt = {}) {
  detail::check_same_size(a, b);
  const double c1 = (opt.k1 * 255) * (opt.k1 * 255);
  const double c2 = (opt.k2 * 255) * (opt.k2 * 255);
  const auto pa = a.pixels(), pb = b.pixels();
  const std::size_t n = pa.size();

  if (a.side() < static_cast<std::size_t>(opt.window)) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += pa[i];
      my += pb[i];
    }
    mx /= n;
    my /= n;
    double vx = 0, vy = 0, cxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      vx += (pa[i] - mx) * (pa[i] - mx);
      vy += (pb[i] - my) * (pb[i] - my);
      cxy += (pa[i] - mx) * (pb[i] - my);
    }
    return detail::ssim_term(mx, my, vx / n, vy / n, cxy / n, c1, c2);
  }

  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = pa[i];
    y[i] = pb[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto k = detail::gaussian_kernel(opt.window, opt.sigma);
  const std::size_t side = a.side();
  const auto mx = detail::filter_valid(x, side, k);
  const auto my = detail::filter_valid(y, side, k);
  const auto sxx = detail::filter_valid(xx, side, k);
  const auto syy = detail::filter_valid(yy, side, k);
  const auto sxy = detail::filter_valid(xy, side, k);
  double total = 0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    total += detail::ssim_term(mx[i], my[i], sxx[i] - mx[i] * mx[i], syy[i] - my[i] * my[i],
                               sxy[i] - mx[i] * my[i], c1, c2);
  }
  return total / static_cast<double>(mx.size());
}

/// Normalized cross-correlation sum(ab) / sqrt(sum(a^2) sum(b^2)).
/// Two all-zero images correlate perfectly; one all-zero image gives 0.
inline double ncc(const GrayImage& a, const GrayImage& b) {
  detail::check_same_size(a, b);
  const auto pa = a.pixels(), pb = b.pixels();
  std::uint64_t ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    ab += std::uint64_t{pa[i]} * pb[i];
    aa += std::uint64_t{pa[i]} * pa[i];
    bb += std::uint64_t{pb[i]} * pb[i];
  }
  if (aa == 0 && bb == 0) return 1.0;
  if (aa == 0 || bb == 0) return 0.0;
  return static_cast<double>(ab) / std::sqrt(static_cast<double>(aa) * static_cast<double>(bb));
}

struct MetricsReport {
  double mse = 0;
  double psnr = 0;  // +infinity iff mse == 0
  double ssim = 0;
  double ncc = 0;

  bool psnr_infinite() const noexcept { return std::isinf(psnr); }
};

inline MetricsReport compare(const GrayImage& a, const GrayImage& b) {
  MetricsReport r;
  r.mse = mse(a, b);
  r.psnr = r.mse == 0.0 ? std::numeric_limits<double>::infinity()
                        : 10.0 * std::log10(255.0 * 255.0 / r.mse);
  r.ssim = ssim(a, b);
  r.ncc = ncc(a, b);
  return r;
}

/// Fixed-point rendering used in reports: "Inf" for infinite values.
inline std::string format_fixed(double v, int decimals) {
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::string format_db(double v) { return format_fixed(v, 2); }
inline std::string format_ratio(double v) { return format_fixed(v, 4); }

}  // namespace qwm
