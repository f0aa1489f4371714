#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpc {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

struct Rgba {
  std::uint8_t r = 0, g = 0, b = 0, a = 255;
  bool operator==(const Rgba&) const = default;
};

struct FrameImage {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;  // row-major

  FrameImage() = default;
  FrameImage(int w, int h, Rgb fill = {})
      : width(w), height(h),
        pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  const Rgb& at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
  Rgb& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
};

// Template pixels with alpha == 0 are wildcards and match anything; all other
// pixels compare on RGB.
struct SpriteTemplate {
  std::string name;
  int width = 0;
  int height = 0;
  std::vector<Rgba> pixels;  // row-major

  const Rgba& at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }

  void validate() const {
    if (width < 1 || height < 1 ||
        pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
      throw std::invalid_argument("sprite template '" + name + "': bad dimensions");
    for (const auto& px : pixels)
      if (px.a != 0) return;
    throw std::invalid_argument("sprite template '" + name +
                                "' has no non-wildcard pixels");
  }
};

// Stamps the template's non-wildcard pixels onto the frame. Test/fixture
// helper for composing synthetic frames.
inline void blit(FrameImage& frame, const SpriteTemplate& tmpl, int x0, int y0) {
  for (int y = 0; y < tmpl.height; ++y)
    for (int x = 0; x < tmpl.width; ++x) {
      const Rgba& px = tmpl.at(x, y);
      if (px.a == 0) continue;
      int fx = x0 + x, fy = y0 + y;
      if (fx < 0 || fy < 0 || fx >= frame.width || fy >= frame.height) continue;
      frame.at(fx, fy) = {px.r, px.g, px.b};
    }
}

}  // namespace lpc
