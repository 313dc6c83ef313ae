#pragma once

// Minimal deterministic complex FFT used by the spectral Helmholtz solve and
// periodic convolution: iterative radix-2 for power-of-two lengths plus
// Bluestein's chirp-z algorithm for arbitrary lengths (needed because grid
// resolutions tied to eps/4 are generally not powers of two). Plans are
// cached per length behind a mutex; transforms themselves are lock-free.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace pfmc::fft {

using cd = std::complex<double>;

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

namespace detail {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Pow2Plan {
  int n = 0;
  std::vector<int> bitrev;
  std::vector<cd> roots;  // roots[k] = exp(-2 pi i k / n), k < n/2 (forward)

  explicit Pow2Plan(int n_) : n(n_) {
    bitrev.resize(n);
    int log2n = 0;
    while ((1 << log2n) < n) ++log2n;
    for (int i = 0; i < n; ++i) {
      int r = 0;
      for (int b = 0; b < log2n; ++b)
        if (i & (1 << b)) r |= 1 << (log2n - 1 - b);
      bitrev[i] = r;
    }
    roots.resize(n / 2);
    for (int k = 0; k < n / 2; ++k) {
      const double a = -2.0 * kPi * k / n;
      roots[k] = cd(std::cos(a), std::sin(a));
    }
  }

  void run(cd* x, bool inverse) const {
    for (int i = 0; i < n; ++i)
      if (i < bitrev[i]) std::swap(x[i], x[bitrev[i]]);
    for (int len = 2; len <= n; len <<= 1) {
      const int half = len >> 1, stride = n / len;
      for (int base = 0; base < n; base += len) {
        for (int j = 0; j < half; ++j) {
          cd w = roots[j * stride];
          if (inverse) w = std::conj(w);
          const cd u = x[base + j];
          const cd v = x[base + j + half] * w;
          x[base + j] = u + v;
          x[base + j + half] = u - v;
        }
      }
    }
    if (inverse) {
      const double inv = 1.0 / n;
      for (int i = 0; i < n; ++i) x[i] *= inv;
    }
  }
};

}  // namespace detail

// Transform plan for one length. Forward transforms are unnormalized; the
// inverse divides by n.
struct Plan {
  int n = 0;
  std::shared_ptr<const detail::Pow2Plan> p2;     // set when n is a power of two
  // Bluestein data (set otherwise)
  int m = 0;                                      // padded power-of-two length >= 2n - 1
  std::shared_ptr<const detail::Pow2Plan> sub;    // plan of length m
  std::vector<cd> chirp;                          // chirp[j] = exp(-i pi j^2 / n)
  std::vector<cd> bhat;                           // forward FFT of the wrapped conj chirp

  explicit Plan(int n_) : n(n_) {
    if (n < 1) throw std::invalid_argument("fft: length must be positive");
    if (is_pow2(n)) {
      p2 = std::make_shared<detail::Pow2Plan>(n);
      return;
    }
    m = 1;
    while (m < 2 * n - 1) m <<= 1;
    sub = std::make_shared<detail::Pow2Plan>(m);
    chirp.resize(n);
    for (int j = 0; j < n; ++j) {
      // j^2 mod 2n keeps the phase argument small for accuracy
      const std::int64_t q = (static_cast<std::int64_t>(j) * j) % (2 * n);
      const double a = -detail::kPi * static_cast<double>(q) / n;
      chirp[j] = cd(std::cos(a), std::sin(a));
    }
    std::vector<cd> b(m, cd(0.0, 0.0));
    b[0] = std::conj(chirp[0]);
    for (int j = 1; j < n; ++j) b[j] = b[m - j] = std::conj(chirp[j]);
    sub->run(b.data(), false);
    bhat = std::move(b);
  }

  // scratch doubles as the convolution buffer; size scratch_size() elements
  std::size_t scratch_size() const { return p2 ? 0 : static_cast<std::size_t>(m); }

  void run(cd* x, bool inverse, cd* scratch) const {
    if (p2) {
      p2->run(x, inverse);
      return;
    }
    // Bluestein: X_k = chirp_k * IFFT_m( FFT_m(x_j chirp_j) .* bhat )_k
    // For the inverse transform, conjugate-in/conjugate-out and divide by n.
    cd* buf = scratch;
    if (!buf) throw std::invalid_argument("fft: Bluestein transform requires scratch");
    for (int j = 0; j < n; ++j) {
      const cd xj = inverse ? std::conj(x[j]) : x[j];
      buf[j] = xj * chirp[j];
    }
    for (int j = n; j < m; ++j) buf[j] = cd(0.0, 0.0);
    sub->run(buf, false);
    for (int j = 0; j < m; ++j) buf[j] *= bhat[j];
    sub->run(buf, true);
    for (int k = 0; k < n; ++k) {
      const cd xk = buf[k] * chirp[k];
      x[k] = inverse ? std::conj(xk) / static_cast<double>(n) : xk;
    }
  }
};

// Cached plan lookup, thread-safe.
inline const Plan& plan_for(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Plan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<Plan>(n)).first;
  return *it->second;
}

// Convenience single-shot transform of a contiguous buffer.
inline void transform(std::vector<cd>& x, bool inverse) {
  const Plan& pl = plan_for(static_cast<int>(x.size()));
  std::vector<cd> scratch(pl.scratch_size());
  pl.run(x.data(), inverse, scratch.empty() ? nullptr : scratch.data());
}

}  // namespace pfmc::fft
