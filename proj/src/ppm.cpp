#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "statleak/errors.hpp"
#include "statleak/raster.hpp"

namespace statleak {

Raster Raster::solid(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    Raster out;
    out.width = width;
    out.height = height;
    out.rgb.resize(out.pixel_count() * 3);
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        out.rgb[3 * i] = r;
        out.rgb[3 * i + 1] = g;
        out.rgb[3 * i + 2] = b;
    }
    return out;
}

namespace {

struct PpmScanner {
    std::istream& in;
    std::size_t offset = 0;

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError("offset " + std::to_string(offset) + ": " + message, offset);
    }

    int get() {
        const int c = in.get();
        if (c != EOF) ++offset;
        return c;
    }

    // Whitespace and '#'-to-end-of-line comments separate header tokens.
    int next_token_char() {
        int c = get();
        while (true) {
            if (c == '#') {
                while (c != '\n' && c != EOF) c = get();
            } else if (c != EOF && std::isspace(c)) {
                c = get();
            } else {
                break;
            }
        }
        return c;
    }

    unsigned read_number() {
        int c = next_token_char();
        if (c == EOF || !std::isdigit(c)) fail("expected a decimal number in the header");
        unsigned long value = 0;
        while (c != EOF && std::isdigit(c)) {
            value = value * 10 + static_cast<unsigned long>(c - '0');
            if (value > 1u << 30) fail("header number out of range");
            c = get();
        }
        if (c != EOF && !std::isspace(c)) fail("malformed header number");
        return static_cast<unsigned>(value);
    }
};

}  // namespace

Raster read_ppm(std::istream& in) {
    PpmScanner scanner{in};
    const int p = scanner.get();
    const int six = scanner.get();
    if (p != 'P' || six != '6') scanner.fail("not a binary PPM (magic 'P6' missing)");

    Raster raster;
    raster.width = static_cast<int>(scanner.read_number());
    raster.height = static_cast<int>(scanner.read_number());
    if (raster.width < 1 || raster.height < 1) scanner.fail("dimensions must be positive");
    const unsigned maxval = scanner.read_number();
    if (maxval != 255) {
        scanner.fail("unsupported maxval " + std::to_string(maxval) + " (only 255)");
    }
    // The single whitespace byte after maxval was already consumed by
    // read_number; pixel data starts here.
    raster.rgb.resize(raster.pixel_count() * 3);
    in.read(reinterpret_cast<char*>(raster.rgb.data()),
            static_cast<std::streamsize>(raster.rgb.size()));
    const std::size_t got = static_cast<std::size_t>(in.gcount());
    scanner.offset += got;
    if (got != raster.rgb.size()) {
        scanner.fail("truncated pixel data: expected " + std::to_string(raster.rgb.size()) +
                     " bytes, got " + std::to_string(got));
    }
    return raster;
}

void write_ppm(const Raster& raster, std::ostream& out) {
    out << "P6\n" << raster.width << ' ' << raster.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(raster.rgb.data()),
              static_cast<std::streamsize>(raster.rgb.size()));
}

Raster read_ppm_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    return read_ppm(in);
}

void write_ppm_file(const Raster& raster, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path.string());
    write_ppm(raster, out);
    if (!out) throw Error("write failed: " + path.string());
}

namespace {

constexpr char kRleMagic[5] = {'S', 'C', 'R', 'L', '1'};

void push_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

}  // namespace

std::vector<std::uint8_t> rle_serialize(const Raster& raster) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kRleMagic, kRleMagic + 5);
    push_u32_be(out, static_cast<std::uint32_t>(raster.width));
    push_u32_be(out, static_cast<std::uint32_t>(raster.height));
    const std::size_t pixels = raster.pixel_count();
    for (int channel = 0; channel < 3; ++channel) {
        std::size_t i = 0;
        while (i < pixels) {
            const std::uint8_t value = raster.rgb[3 * i + channel];
            std::size_t run = 1;
            while (run < 255 && i + run < pixels &&
                   raster.rgb[3 * (i + run) + channel] == value) {
                ++run;
            }
            out.push_back(static_cast<std::uint8_t>(run));
            out.push_back(value);
            i += run;
        }
    }
    return out;
}

Raster rle_parse(const std::vector<std::uint8_t>& bytes) {
    std::size_t pos = 0;
    const auto fail = [&](const std::string& message) -> void {
        throw ParseError("offset " + std::to_string(pos) + ": " + message, pos);
    };
    if (bytes.size() < 13 || !std::equal(kRleMagic, kRleMagic + 5, bytes.begin())) {
        fail("not an SCRL1 container");
    }
    pos = 5;
    const auto read_u32 = [&]() {
        const std::uint32_t v = (std::uint32_t{bytes[pos]} << 24) |
                                (std::uint32_t{bytes[pos + 1]} << 16) |
                                (std::uint32_t{bytes[pos + 2]} << 8) | bytes[pos + 3];
        pos += 4;
        return v;
    };
    Raster raster;
    raster.width = static_cast<int>(read_u32());
    raster.height = static_cast<int>(read_u32());
    if (raster.width < 1 || raster.height < 1) fail("dimensions must be positive");
    const std::size_t pixels = raster.pixel_count();
    raster.rgb.resize(pixels * 3);
    for (int channel = 0; channel < 3; ++channel) {
        std::size_t i = 0;
        while (i < pixels) {
            if (pos + 2 > bytes.size()) fail("truncated run data");
            const std::uint8_t run = bytes[pos];
            const std::uint8_t value = bytes[pos + 1];
            pos += 2;
            if (run == 0) fail("zero-length run");
            if (i + run > pixels) fail("run overflows channel");
            for (std::uint8_t k = 0; k < run; ++k) raster.rgb[3 * (i + k) + channel] = value;
            i += run;
        }
    }
    if (pos != bytes.size()) fail("trailing bytes after pixel data");
    return raster;
}

}  // namespace statleak
