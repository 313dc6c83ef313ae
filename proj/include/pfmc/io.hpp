#pragma once

// File outputs: PFMC grid snapshots (binary), CSV diagnostics, PGM band
// images.  All floating-point bytes on disk are IEEE-754 binary64,
// little-endian, regardless of host order; CSV floats are printed with
// %.17g so values round-trip exactly.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfmc/grid.hpp"

namespace pfmc {

// ------------------------------------------------------------ binary helpers

namespace detail_io {

inline void put_u32(std::string& buf, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

inline void put_f64(std::string& buf, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

inline std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t x = 0;
  for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return x;
}

inline double get_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

inline std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("io: cannot open '" + path + "' for reading");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

inline void write_all(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("io: cannot open '" + path + "' for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("io: short write to '" + path + "'");
}

}  // namespace detail_io

// -------------------------------------------------------------- snapshots

// Header {magic "PFMC", version u32 = 1, d u32, n u32, eps f64, t f64},
// then n^d binary64 values in the ScalarField flat order (axis 0 slowest).
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct SnapshotInfo {
  int d = 0;
  int n = 0;
  double eps = 0.0;
  double t = 0.0;
};

template <int D>
void save_scalar(const std::string& path, const ScalarField<D>& f, double eps, double t) {
  std::string buf;
  buf.reserve(28 + 8 * f.v.size());
  buf += "PFMC";
  detail_io::put_u32(buf, kSnapshotVersion);
  detail_io::put_u32(buf, static_cast<std::uint32_t>(D));
  detail_io::put_u32(buf, static_cast<std::uint32_t>(f.grid.n));
  detail_io::put_f64(buf, eps);
  detail_io::put_f64(buf, t);
  for (double x : f.v) detail_io::put_f64(buf, x);
  detail_io::write_all(path, buf);
}

template <int D>
SnapshotInfo load_scalar(const std::string& path, ScalarField<D>& out) {
  const std::string data = detail_io::read_all(path);
  if (data.size() < 32 || data.compare(0, 4, "PFMC") != 0)
    throw std::runtime_error("io: '" + path + "' is not a PFMC snapshot");
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  SnapshotInfo info;
  const std::uint32_t version = detail_io::get_u32(p + 4);
  if (version != kSnapshotVersion)
    throw std::runtime_error("io: '" + path + "': unsupported snapshot version " +
                             std::to_string(version));
  info.d = static_cast<int>(detail_io::get_u32(p + 8));
  info.n = static_cast<int>(detail_io::get_u32(p + 12));
  info.eps = detail_io::get_f64(p + 16);
  info.t = detail_io::get_f64(p + 24);
  if (info.d != D)
    throw std::runtime_error("io: '" + path + "': dimension " + std::to_string(info.d) +
                             ", expected " + std::to_string(D));
  if (info.n < 8) throw std::runtime_error("io: '" + path + "': grid size below minimum");
  std::size_t cells = 1;
  for (int a = 0; a < D; ++a) cells *= static_cast<std::size_t>(info.n);
  if (data.size() != 32 + 8 * cells)
    throw std::runtime_error("io: '" + path + "': truncated payload");
  out = ScalarField<D>(TorusGrid<D>(info.n));
  for (std::size_t i = 0; i < cells; ++i) out.v[i] = detail_io::get_f64(p + 32 + 8 * i);
  return info;
}

// ------------------------------------------------------------------ CSV

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("io: cannot open '" + path + "' for writing");
    out_ << header << "\n";
  }

  // All values with %.17g; formatting is locale-independent.
  void row(const std::vector<double>& xs) {
    std::string line;
    char buf[64];
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) line += ",";
      std::snprintf(buf, sizeof buf, "%.17g", xs[i]);
      line += buf;
    }
    out_ << line << "\n";
    if (!out_) throw std::runtime_error("io: CSV write failed");
  }

  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

// ------------------------------------------------------------------ PGM

// P5 image of the positive phase: one byte per cell, 255 where phi > 0,
// 0 elsewhere.  In 3-d the middle slice (axis 2 index n/2) is written.
template <int D>
void write_pgm(const std::string& path, const ScalarField<D>& phi) {
  const int n = phi.grid.n;
  std::string buf = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  buf.reserve(buf.size() + static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v;
      if constexpr (D == 2) {
        v = phi.at(i, j);
      } else {
        v = phi.at(i, j, n / 2);
      }
      buf.push_back(static_cast<char>(v > 0.0 ? 255 : 0));
    }
  detail_io::write_all(path, buf);
}

}  // namespace pfmc
