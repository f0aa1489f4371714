#pragma once

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <png.h>

#include "lpc/image.hpp"
#include "lpc/io_util.hpp"

namespace lpc {

// PNG is the one raster format this project reads and writes: lossless,
// carries alpha for wildcard template pixels, and universally produced by
// frame-extraction tooling. Everything goes through libpng's simplified API
// normalized to 8-bit RGBA.

struct RgbaImage {
  int width = 0;
  int height = 0;
  std::vector<Rgba> pixels;
};

inline RgbaImage read_png_rgba(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str()))
    throw IoError("cannot read PNG " + path.string() + ": " + image.message);
  image.format = PNG_FORMAT_RGBA;

  RgbaImage out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.pixels.resize(static_cast<std::size_t>(out.width) *
                    static_cast<std::size_t>(out.height));
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  return out;
}

inline void write_png_rgba(const std::filesystem::path& path, int width,
                           int height, const std::vector<Rgba>& pixels) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = PNG_FORMAT_RGBA;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels.data(), 0,
                               nullptr))
    throw IoError("cannot write PNG " + path.string() + ": " + image.message);
}

inline FrameImage read_frame_png(const std::filesystem::path& path) {
  RgbaImage raw = read_png_rgba(path);
  FrameImage frame(raw.width, raw.height);
  for (std::size_t i = 0; i < raw.pixels.size(); ++i)
    frame.pixels[i] = {raw.pixels[i].r, raw.pixels[i].g, raw.pixels[i].b};
  return frame;
}

inline SpriteTemplate read_template_png(const std::filesystem::path& path,
                                        std::string name) {
  RgbaImage raw = read_png_rgba(path);
  SpriteTemplate tmpl;
  tmpl.name = std::move(name);
  tmpl.width = raw.width;
  tmpl.height = raw.height;
  tmpl.pixels = std::move(raw.pixels);
  tmpl.validate();
  return tmpl;
}

inline void write_frame_png(const std::filesystem::path& path,
                            const FrameImage& frame) {
  std::vector<Rgba> rgba(frame.pixels.size());
  for (std::size_t i = 0; i < frame.pixels.size(); ++i)
    rgba[i] = {frame.pixels[i].r, frame.pixels[i].g, frame.pixels[i].b, 255};
  write_png_rgba(path, frame.width, frame.height, rgba);
}

inline void write_template_png(const std::filesystem::path& path,
                               const SpriteTemplate& tmpl) {
  write_png_rgba(path, tmpl.width, tmpl.height, tmpl.pixels);
}

}  // namespace lpc
