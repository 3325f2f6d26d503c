#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace statleak {

// Row-major RGB pixel grid with an optional alpha plane (used by watermark
// rasters; empty means fully opaque).
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;    // 3 bytes per pixel
    std::vector<std::uint8_t> alpha;  // empty, or 1 byte per pixel

    static Raster solid(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b);

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    std::uint8_t* pixel(int x, int y) { return rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
    const std::uint8_t* pixel(int x, int y) const {
        return rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }

    bool operator==(const Raster&) const = default;
};

// Binary PPM (P6, maxval 255). Parse errors carry the byte offset.
Raster read_ppm(std::istream& in);
void write_ppm(const Raster& raster, std::ostream& out);
Raster read_ppm_file(const std::filesystem::path& path);
void write_ppm_file(const Raster& raster, const std::filesystem::path& path);

// Run-length container: magic "SCRL1", big-endian u32 width and height, then
// for each channel (R, G, B) runs of (count u8 >= 1, value u8) covering the
// pixels in row-major order.
std::vector<std::uint8_t> rle_serialize(const Raster& raster);
Raster rle_parse(const std::vector<std::uint8_t>& bytes);

}  // namespace statleak
