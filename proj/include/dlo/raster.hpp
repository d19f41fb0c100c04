#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlo/geometry.hpp"

namespace dlo {

struct Rgb {
    uint8_t r = 0;
    uint8_t g = 0;
    uint8_t b = 0;

    bool operator==(const Rgb&) const = default;
};

struct Hsv {
    double h = 0.0;  // degrees, [0, 360)
    double s = 0.0;  // [0, 1]
    double v = 0.0;  // [0, 1]
};

/// Hexcone HSV. Gray pixels (max == min) get hue 0.
Hsv rgb_to_hsv(Rgb c);

/// Row-major 8-bit RGB raster.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;  // width * height * 3

    Image() = default;
    Image(int w, int h, Rgb fill = {0, 0, 0});

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    Rgb at(int x, int y) const {
        size_t i = (static_cast<size_t>(y) * width + x) * 3;
        return {pixels[i], pixels[i + 1], pixels[i + 2]};
    }
    void set(int x, int y, Rgb c) {
        size_t i = (static_cast<size_t>(y) * width + x) * 3;
        pixels[i] = c.r;
        pixels[i + 1] = c.g;
        pixels[i + 2] = c.b;
    }

    bool operator==(const Image&) const = default;
};

/// Row-major foreground/background raster; one byte per pixel, 0 or 1.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), bits(static_cast<size_t>(w) * h, 0) {}

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    bool get(int x, int y) const { return bits[static_cast<size_t>(y) * width + x] != 0; }
    /// Out-of-bounds reads as background.
    bool get_clamped(int x, int y) const { return in_bounds(x, y) && get(x, y); }
    void set(int x, int y, bool v) { bits[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }

    size_t foreground_count() const;

    bool operator==(const BinaryMask&) const = default;
};

/// Inclusive HSV band. A hue band with lo > hi wraps through 0 degrees.
struct ColorRange {
    double hue_lo = 0.0;
    double hue_hi = 360.0;
    double sat_lo = 0.0;
    double sat_hi = 1.0;
    double val_lo = 0.0;
    double val_hi = 1.0;

    bool contains(const Hsv& c) const {
        bool hue_ok = hue_lo <= hue_hi ? (c.h >= hue_lo && c.h <= hue_hi)
                                       : (c.h >= hue_lo || c.h <= hue_hi);
        return hue_ok && c.s >= sat_lo && c.s <= sat_hi && c.v >= val_lo && c.v <= val_hi;
    }
};

/// 8-connected component labels, 0 = background, components numbered 1..count
/// in raster-scan order of their first pixel.
struct ComponentLabeling {
    int width = 0;
    int height = 0;
    std::vector<int32_t> labels;
    int count = 0;

    int32_t label(int x, int y) const { return labels[static_cast<size_t>(y) * width + x]; }
};

class FormatError : public std::runtime_error {
  public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Parse a binary P6 portable pixmap with maxval 255. Throws FormatError
/// naming the byte offset on malformed input.
Image load_ppm(const std::vector<uint8_t>& bytes);

/// Serialize to binary P6, maxval 255. load_ppm(save_ppm(x)) == x.
std::vector<uint8_t> save_ppm(const Image& image);

Image load_ppm_file(const std::string& path);
void save_ppm_file(const Image& image, const std::string& path);

/// Foreground = pixels whose HSV lies inside the range (thresholds inclusive).
BinaryMask segment_color(const Image& image, const ColorRange& range);

ComponentLabeling connected_components(const BinaryMask& mask);

/// Drop components with fewer than min_area pixels.
BinaryMask filter_small_components(const BinaryMask& mask, int min_area);

/// Stroke a polyline onto a copy of the image. Thickness 1 is exact Bresenham;
/// larger thicknesses paint pixels whose center is closer than thickness/2 to
/// the polyline. Out-of-bounds pixels are clipped, never an error.
Image draw_polyline(const Image& image, const std::vector<Vec2>& points, Rgb color,
                    double thickness);

/// In-place variant of draw_polyline.
void draw_polyline_onto(Image& image, const std::vector<Vec2>& points, Rgb color,
                        double thickness);

/// Same round-brush coverage rule as draw_polyline, painted into a mask.
void stamp_polyline(BinaryMask& mask, const std::vector<Vec2>& points, double thickness);

}  // namespace dlo
