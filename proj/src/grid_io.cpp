#include "wtv/grid_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace wtv {

namespace {

constexpr std::array<char, 8> kMagic{'W', 'T', 'V', 'G', 'R', 'I', 'D', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  os.write(b.data(), 8);
}

std::uint64_t get_u64(std::istream& is) {
  std::array<unsigned char, 8> b{};
  is.read(reinterpret_cast<char*>(b.data()), 8);
  if (!is) throw IoError("WTVGRID1: truncated payload");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& os, double x) { put_u64(os, std::bit_cast<std::uint64_t>(x)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

void write_header(std::ostream& os, std::size_t n, GridKind kind) {
  os.write(kMagic.data(), kMagic.size());
  const auto n32 = static_cast<std::uint32_t>(n);
  for (int i = 0; i < 4; ++i) os.put(static_cast<char>((n32 >> (8 * i)) & 0xffu));
  os.put(static_cast<char>(kind));
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("write failed: " + path.string());
}

}  // namespace

void write_grid(std::ostream& os, const Image& g) {
  write_header(os, g.n(), GridKind::Real);
  for (double x : g) put_f64(os, x);
}

void write_grid(std::ostream& os, const ComplexGrid& g) {
  write_header(os, g.n(), GridKind::Complex);
  for (const auto& c : g) {
    put_f64(os, c.real());
    put_f64(os, c.imag());
  }
}

AnyGrid read_grid(std::istream& is) {
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw IoError("not a WTVGRID1 stream");
  std::array<unsigned char, 5> hdr{};
  is.read(reinterpret_cast<char*>(hdr.data()), hdr.size());
  if (!is) throw IoError("WTVGRID1: truncated header");
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) n |= std::uint32_t(hdr[i]) << (8 * i);
  const auto kind = hdr[4];
  const std::size_t count = std::size_t(n) * n;
  if (kind == static_cast<unsigned char>(GridKind::Real)) {
    Image g(n);
    for (std::size_t k = 0; k < count; ++k) g[k] = get_f64(is);
    return g;
  }
  if (kind == static_cast<unsigned char>(GridKind::Complex)) {
    ComplexGrid g(n);
    for (std::size_t k = 0; k < count; ++k) {
      const double re = get_f64(is);
      const double im = get_f64(is);
      g[k] = {re, im};
    }
    return g;
  }
  throw IoError("WTVGRID1: unknown kind byte " + std::to_string(kind));
}

void write_grid(const std::filesystem::path& path, const Image& g) {
  auto os = open_out(path);
  write_grid(os, g);
  finish(os, path);
}

void write_grid(const std::filesystem::path& path, const ComplexGrid& g) {
  auto os = open_out(path);
  write_grid(os, g);
  finish(os, path);
}

AnyGrid read_grid(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_grid(is);
}

Image read_real_grid(const std::filesystem::path& path) {
  auto g = read_grid(path);
  if (auto* img = std::get_if<Image>(&g)) return std::move(*img);
  throw IoError(path.string() + " holds a complex grid, expected real");
}

void write_pgm(const std::filesystem::path& path, const Image& g, double lo, double hi) {
  if (!(hi > lo)) throw IoError("write_pgm: empty intensity window");
  auto os = open_out(path);
  os << "P5\n" << g.n() << ' ' << g.n() << "\n65535\n";
  for (double x : g) {
    const double t = std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
    const auto v = static_cast<std::uint16_t>(std::lround(t * 65535.0));
    os.put(static_cast<char>(v >> 8));
    os.put(static_cast<char>(v & 0xffu));
  }
  finish(os, path);
}

}  // namespace wtv
