#pragma once

#include <filesystem>
#include <iosfwd>
#include <variant>

#include "wtv/grid.hpp"

namespace wtv {

// WTVGRID1 layout (little-endian throughout):
//   8 bytes  magic "WTVGRID1"
//   u32      n
//   u8       kind: 0 = real64, 1 = complex128 (re, im interleaved)
//   payload  n*n samples, row-major
enum class GridKind : std::uint8_t { Real = 0, Complex = 1 };

using AnyGrid = std::variant<Image, ComplexGrid>;

void write_grid(std::ostream& os, const Image& g);
void write_grid(std::ostream& os, const ComplexGrid& g);
AnyGrid read_grid(std::istream& is);

void write_grid(const std::filesystem::path& path, const Image& g);
void write_grid(const std::filesystem::path& path, const ComplexGrid& g);
AnyGrid read_grid(const std::filesystem::path& path);
/// Throws IoError when the file holds a complex grid.
Image read_real_grid(const std::filesystem::path& path);

/// 16-bit binary PGM (P5, maxval 65535). Values are mapped linearly from
/// [lo, hi] and clamped.
void write_pgm(const std::filesystem::path& path, const Image& g, double lo = 0.0, double hi = 1.0);

}  // namespace wtv
