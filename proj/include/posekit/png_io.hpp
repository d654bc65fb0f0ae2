#pragma once

#include <filesystem>

#include "posekit/raster.hpp"

namespace posekit {

/// Reads any PNG as 8-bit RGB (palette, grey and 16-bit inputs are converted,
/// alpha is composited onto black).
RasterImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RasterImage& img);

/// dir/frame_%06d.png
std::filesystem::path frame_path(const std::filesystem::path& dir, std::size_t index);

}  // namespace posekit
