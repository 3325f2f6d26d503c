#include "statleak/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "statleak/errors.hpp"

namespace statleak {

namespace fs = std::filesystem;

Raster composite_watermark(const Raster& base, const Raster& mark, double alpha,
                           SplitMix64& rng) {
    if (mark.width > base.width || mark.height > base.height) {
        throw ShapeError("watermark " + std::to_string(mark.width) + "x" +
                         std::to_string(mark.height) + " exceeds canvas " +
                         std::to_string(base.width) + "x" + std::to_string(base.height));
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw BadParameter("alpha must be in [0,1]");

    const int max_x = base.width - mark.width;
    const int max_y = base.height - mark.height;
    const int x0 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_x) + 1));
    const int y0 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_y) + 1));

    Raster out = base;
    for (int my = 0; my < mark.height; ++my) {
        for (int mx = 0; mx < mark.width; ++mx) {
            const double pixel_alpha =
                mark.alpha.empty()
                    ? 1.0
                    : mark.alpha[static_cast<std::size_t>(my) * mark.width + mx] / 255.0;
            const double a = alpha * pixel_alpha;
            const std::uint8_t* src = mark.pixel(mx, my);
            std::uint8_t* dst = out.pixel(x0 + mx, y0 + my);
            for (int c = 0; c < 3; ++c) {
                dst[c] = static_cast<std::uint8_t>(
                    std::lround((1.0 - a) * dst[c] + a * src[c]));
            }
        }
    }
    return out;
}

std::vector<LabeledRasters> generate_synthetic_bases(const SyntheticBaseSpec& spec,
                                                     std::uint64_t seed) {
    if (spec.width < 1 || spec.height < 1) throw BadParameter("raster dimensions must be positive");
    if (spec.classes.empty()) throw BadParameter("at least one class spec required");

    std::vector<LabeledRasters> out;
    std::uint64_t stream = 0;
    for (const auto& cls : spec.classes) {
        if (cls.noise_sigma < 0.0) throw BadParameter("noise sigma must be non-negative");
        if (cls.count < 1) throw BadParameter("class count must be positive");
        LabeledRasters labeled;
        labeled.class_name = cls.name;
        for (int i = 0; i < cls.count; ++i) {
            SplitMix64 rng = derive_rng(seed, stream++);
            Raster raster;
            raster.width = spec.width;
            raster.height = spec.height;
            raster.rgb.resize(raster.pixel_count() * 3);
            // Random large-scale structure: a tilted plane plus one sine wave
            // per channel, then per-pixel Gaussian noise.
            const double angle = rng.next_double() * 2.0 * std::numbers::pi;
            const double gx = std::cos(angle);
            const double gy = std::sin(angle);
            const double phase = rng.next_double() * 2.0 * std::numbers::pi;
            const double base_level = 64.0 + rng.next_double() * 128.0;
            for (int y = 0; y < spec.height; ++y) {
                for (int x = 0; x < spec.width; ++x) {
                    const double t = (gx * x / spec.width + gy * y / spec.height);
                    const double structure =
                        cls.gradient_amplitude *
                        (t + 0.5 * std::sin(2.0 * std::numbers::pi * t + phase));
                    std::uint8_t* px = raster.pixel(x, y);
                    for (int c = 0; c < 3; ++c) {
                        const double noise = cls.noise_sigma * rng.next_gaussian();
                        const double v = base_level + structure + 12.0 * c + noise;
                        px[c] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
                    }
                }
            }
            labeled.rasters.push_back(std::move(raster));
        }
        out.push_back(std::move(labeled));
    }
    return out;
}

namespace {

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed: " + path.string());
}

std::string substitute(const std::string& tmpl, const std::string& key,
                       const std::string& value) {
    std::string out = tmpl;
    std::size_t pos = 0;
    while ((pos = out.find(key, pos)) != std::string::npos) {
        out.replace(pos, key.size(), value);
        pos += value.size();
    }
    return out;
}

struct EncoderRunner {
    const fs::path& out_dir;

    std::string extension(const CorpusEncoder& encoder) const {
        if (std::holds_alternative<PpmEncoder>(encoder)) return ".ppm";
        if (std::holds_alternative<RleEncoder>(encoder)) return ".rle";
        return ".dat";
    }

    void encode(const CorpusEncoder& encoder, const Raster& raster, const fs::path& target) const {
        if (std::holds_alternative<PpmEncoder>(encoder)) {
            write_ppm_file(raster, target);
            return;
        }
        if (std::holds_alternative<RleEncoder>(encoder)) {
            write_bytes(target, rle_serialize(raster));
            return;
        }
        const auto& exec = std::get<ExecEncoder>(encoder);
        const fs::path tmp = target.string() + ".tmp.ppm";
        write_ppm_file(raster, tmp);
        std::string command = substitute(exec.command_template, "{in}", tmp.string());
        command = substitute(command, "{out}", target.string());
        const int status = std::system(command.c_str());
        std::error_code ec;
        fs::remove(tmp, ec);
        if (status != 0) {
            throw Error("encoder command failed (status " + std::to_string(status) +
                        "): " + command);
        }
        if (!fs::exists(target)) {
            throw Error("encoder command produced no output: " + command);
        }
    }
};

}  // namespace

void synth_corpus(const std::vector<LabeledRasters>& bases, const Raster& mark,
                  const SynthCorpusOptions& options, const fs::path& out_dir) {
    if (options.count_per_class < 1) throw BadParameter("count per class must be positive");
    for (const auto& cls : bases) {
        if (cls.rasters.empty()) throw EmptyClass("no base rasters for class '" + cls.class_name + "'");
    }

    fs::create_directories(out_dir);
    EncoderRunner runner{out_dir};
    const std::string ext = runner.extension(options.encoder);

    std::uint64_t file_index = 0;
    for (const auto& cls : bases) {
        const fs::path class_dir = out_dir / cls.class_name;
        fs::create_directories(class_dir);
        for (int i = 0; i < options.count_per_class; ++i, ++file_index) {
            SplitMix64 rng = derive_rng(options.seed, file_index);
            const auto& base = cls.rasters[rng.next_below(cls.rasters.size())];
            const Raster composed = composite_watermark(base, mark, options.alpha, rng);
            char name[32];
            std::snprintf(name, sizeof(name), "img%05llu",
                          static_cast<unsigned long long>(i));
            runner.encode(options.encoder, composed, class_dir / (name + ext));
        }
    }
}

}  // namespace statleak
