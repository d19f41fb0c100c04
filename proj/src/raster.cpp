#include "dlo/raster.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>

namespace dlo {

Hsv rgb_to_hsv(Rgb c) {
    double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
    double mx = std::max({r, g, b});
    double mn = std::min({r, g, b});
    double delta = mx - mn;

    Hsv out;
    out.v = mx;
    out.s = mx > 0.0 ? delta / mx : 0.0;
    if (delta > 0.0) {
        double h;
        if (mx == r)
            h = std::fmod((g - b) / delta, 6.0);
        else if (mx == g)
            h = (b - r) / delta + 2.0;
        else
            h = (r - g) / delta + 4.0;
        h *= 60.0;
        if (h < 0.0) h += 360.0;
        // fmod can land exactly on 360 after the negative fixup
        if (h >= 360.0) h -= 360.0;
        out.h = h;
    }
    return out;
}

Image::Image(int w, int h, Rgb fill) : width(w), height(h) {
    pixels.resize(static_cast<size_t>(w) * h * 3);
    for (size_t i = 0; i < pixels.size(); i += 3) {
        pixels[i] = fill.r;
        pixels[i + 1] = fill.g;
        pixels[i + 2] = fill.b;
    }
}

size_t BinaryMask::foreground_count() const {
    size_t n = 0;
    for (uint8_t b : bits) n += b;
    return n;
}

namespace {

// PPM header tokenizer: skips whitespace and '#' comments, tracks the byte
// offset for error messages.
struct PpmCursor {
    const std::vector<uint8_t>& bytes;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw FormatError("ppm: " + what + " at byte " + std::to_string(pos));
    }

    void skip_space_and_comments() {
        while (pos < bytes.size()) {
            uint8_t c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(c)) {
                ++pos;
            } else {
                break;
            }
        }
    }

    int read_int(const char* name) {
        skip_space_and_comments();
        if (pos >= bytes.size() || !std::isdigit(bytes[pos]))
            fail(std::string("expected ") + name);
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1000000000L) fail(std::string(name) + " out of range");
            ++pos;
        }
        return static_cast<int>(v);
    }
};

}  // namespace

Image load_ppm(const std::vector<uint8_t>& bytes) {
    PpmCursor cur{bytes};
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6')
        cur.fail("missing P6 magic");
    cur.pos = 2;

    int w = cur.read_int("width");
    int h = cur.read_int("height");
    int maxval = cur.read_int("maxval");
    if (w < 1 || h < 1) cur.fail("dimensions must be at least 1x1");
    if (maxval != 255) cur.fail("maxval must be 255, got " + std::to_string(maxval));

    // Exactly one whitespace byte separates the header from the payload.
    if (cur.pos >= bytes.size() || !std::isspace(bytes[cur.pos]))
        cur.fail("expected single whitespace before payload");
    ++cur.pos;

    size_t need = static_cast<size_t>(w) * h * 3;
    if (bytes.size() - cur.pos < need)
        cur.fail("truncated payload, need " + std::to_string(need) + " bytes, have " +
                 std::to_string(bytes.size() - cur.pos));

    Image img;
    img.width = w;
    img.height = h;
    img.pixels.assign(bytes.begin() + cur.pos, bytes.begin() + cur.pos + need);
    return img;
}

std::vector<uint8_t> save_ppm(const Image& image) {
    char header[64];
    int n = std::snprintf(header, sizeof(header), "P6\n%d %d\n255\n", image.width, image.height);
    std::vector<uint8_t> out;
    out.reserve(n + image.pixels.size());
    out.insert(out.end(), header, header + n);
    out.insert(out.end(), image.pixels.begin(), image.pixels.end());
    return out;
}

Image load_ppm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return load_ppm(bytes);
}

void save_ppm_file(const Image& image, const std::string& path) {
    auto bytes = save_ppm(image);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    if (!out) throw FormatError("short write to " + path);
}

BinaryMask segment_color(const Image& image, const ColorRange& range) {
    BinaryMask mask(image.width, image.height);
    const uint8_t* p = image.pixels.data();
    for (size_t i = 0, n = static_cast<size_t>(image.width) * image.height; i < n; ++i, p += 3) {
        Hsv hsv = rgb_to_hsv({p[0], p[1], p[2]});
        mask.bits[i] = range.contains(hsv) ? 1 : 0;
    }
    return mask;
}

ComponentLabeling connected_components(const BinaryMask& mask) {
    ComponentLabeling out;
    out.width = mask.width;
    out.height = mask.height;
    out.labels.assign(static_cast<size_t>(mask.width) * mask.height, 0);

    const int w = mask.width, h = mask.height;
    std::vector<PixelCoord> stack;
    int32_t next = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            size_t idx = static_cast<size_t>(y) * w + x;
            if (!mask.bits[idx] || out.labels[idx] != 0) continue;
            ++next;
            out.labels[idx] = next;
            stack.push_back({x, y});
            while (!stack.empty()) {
                PixelCoord p = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        int nx = p.x + dx, ny = p.y + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        size_t ni = static_cast<size_t>(ny) * w + nx;
                        if (mask.bits[ni] && out.labels[ni] == 0) {
                            out.labels[ni] = next;
                            stack.push_back({nx, ny});
                        }
                    }
                }
            }
        }
    }
    out.count = next;
    return out;
}

BinaryMask filter_small_components(const BinaryMask& mask, int min_area) {
    ComponentLabeling labeling = connected_components(mask);
    std::vector<int> areas(labeling.count + 1, 0);
    for (int32_t l : labeling.labels)
        if (l > 0) ++areas[l];

    BinaryMask out(mask.width, mask.height);
    for (size_t i = 0; i < out.bits.size(); ++i) {
        int32_t l = labeling.labels[i];
        out.bits[i] = (l > 0 && areas[l] >= min_area) ? 1 : 0;
    }
    return out;
}

namespace {

template <typename Paint>
void bresenham(PixelCoord a, PixelCoord b, Paint&& paint) {
    int dx = std::abs(b.x - a.x), sx = a.x < b.x ? 1 : -1;
    int dy = -std::abs(b.y - a.y), sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    int x = a.x, y = a.y;
    while (true) {
        paint(x, y);
        if (x == b.x && y == b.y) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
}

template <typename Paint>
void stroke_points(int width, int height, const std::vector<Vec2>& points, double thickness,
                   Paint&& paint) {
    if (points.empty()) return;
    if (thickness <= 1.0) {
        auto round_px = [](const Vec2& v) {
            return PixelCoord{static_cast<int>(std::lround(v.x)), static_cast<int>(std::lround(v.y))};
        };
        auto clip_paint = [&](int x, int y) {
            if (x >= 0 && x < width && y >= 0 && y < height) paint(x, y);
        };
        if (points.size() == 1) {
            PixelCoord p = round_px(points[0]);
            clip_paint(p.x, p.y);
            return;
        }
        for (size_t i = 0; i + 1 < points.size(); ++i)
            bresenham(round_px(points[i]), round_px(points[i + 1]), clip_paint);
        return;
    }

    double r = thickness / 2.0;
    auto stamp_segment = [&](const Vec2& a, const Vec2& b) {
        int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - r)));
        int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + r)));
        int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - r)));
        int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + r)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                if (point_segment_distance({static_cast<double>(x), static_cast<double>(y)}, a, b) < r)
                    paint(x, y);
    };
    if (points.size() == 1) {
        stamp_segment(points[0], points[0]);
        return;
    }
    for (size_t i = 0; i + 1 < points.size(); ++i) stamp_segment(points[i], points[i + 1]);
}

}  // namespace

Image draw_polyline(const Image& image, const std::vector<Vec2>& points, Rgb color,
                    double thickness) {
    Image out = image;
    draw_polyline_onto(out, points, color, thickness);
    return out;
}

void draw_polyline_onto(Image& image, const std::vector<Vec2>& points, Rgb color,
                        double thickness) {
    stroke_points(image.width, image.height, points, thickness,
                  [&](int x, int y) { image.set(x, y, color); });
}

void stamp_polyline(BinaryMask& mask, const std::vector<Vec2>& points, double thickness) {
    stroke_points(mask.width, mask.height, points, thickness,
                  [&](int x, int y) { mask.set(x, y, true); });
}

}  // namespace dlo
