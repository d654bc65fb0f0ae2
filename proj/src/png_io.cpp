#include "posekit/png_io.hpp"

#include <cstdio>
#include <cstring>
#include <vector>

#include <png.h>

namespace posekit {

RasterImage read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IoError("cannot read PNG " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  const int w = static_cast<int>(image.width), h = static_cast<int>(image.height);
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  png_color black{0, 0, 0};
  if (!png_image_finish_read(&image, &black, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
  }

  RasterImage img(w, h);
  for (int y = 0; y < h; ++y) {
    const png_byte* row = buffer.data() + static_cast<std::size_t>(y) * w * 3;
    for (int x = 0; x < w; ++x) {
      img.at(Channel::R, x, y) = row[3 * x];
      img.at(Channel::G, x, y) = row[3 * x + 1];
      img.at(Channel::B, x, y) = row[3 * x + 2];
    }
  }
  return img;
}

void write_png(const std::filesystem::path& path, const RasterImage& img) {
  const int w = img.width(), h = img.height();
  std::vector<png_byte> buffer(static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    png_byte* row = buffer.data() + static_cast<std::size_t>(y) * w * 3;
    for (int x = 0; x < w; ++x) {
      row[3 * x] = img.at(Channel::R, x, y);
      row[3 * x + 1] = img.at(Channel::G, x, y);
      row[3 * x + 2] = img.at(Channel::B, x, y);
    }
  }

  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    throw IoError("cannot write PNG " + path.string() + ": " + image.message);
  }
}

std::filesystem::path frame_path(const std::filesystem::path& dir, std::size_t index) {
  char name[32];
  std::snprintf(name, sizeof(name), "frame_%06zu.png", index);
  return dir / name;
}

}  // namespace posekit
