#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "inkgrain/labels.hpp"
#include "inkgrain/raster.hpp"

namespace inkgrain::io {

/// Scan resolution assumed when a PNG has no pHYs chunk.
inline constexpr double kDefaultDpi = 8000.0;

/// Reads an 8- or 16-bit PNG as RGB. Gray and palette images are expanded,
/// alpha is dropped. The dpi comes from pHYs when present, else `fallback_dpi`.
RasterImage read_png(const std::filesystem::path& path, double fallback_dpi = kDefaultDpi);

/// 16-bit RGB with a pHYs chunk.
void write_png_rgb16(const std::filesystem::path& path, const RasterImage& img);

/// 16-bit grayscale; samples clamped to [0,1].
void write_png_gray16(const std::filesystem::path& path, const Plane& img);

void write_label_png(const std::filesystem::path& path, const LabelMap& labels, double dpi);
LabelMap read_label_png(const std::filesystem::path& path);

/// Ink pixels black (0), everything else white (255).
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask, double dpi);
BinaryMask read_mask_png(const std::filesystem::path& path);

/// Lossless float dump: "IGR1", u32 width, u32 height, u32 dpi, then
/// width*height little-endian f64 samples, row-major.
void write_igr1(const std::filesystem::path& path, const Plane& img);
Plane read_igr1(const std::filesystem::path& path);

/// Writes through a sibling temp file and renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace inkgrain::io
