#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "statleak/raster.hpp"
#include "statleak/rng.hpp"

namespace statleak {

// Alpha-blends the mark onto a copy of the base at a position drawn
// uniformly over all placements that keep the mark fully inside the canvas.
// Within the overlap each channel becomes
// round((1 - alpha*a) * base + alpha*a * mark), where a is the mark's
// per-pixel alpha (1 when the mark has no alpha plane).
Raster composite_watermark(const Raster& base, const Raster& mark, double alpha,
                           SplitMix64& rng);

struct LabeledRasters {
    std::string class_name;
    std::vector<Raster> rasters;
};

struct SyntheticClassSpec {
    std::string name;
    double noise_sigma = 0.0;        // per-channel Gaussian noise
    double gradient_amplitude = 0.0; // smooth large-scale structure
    int count = 1;
};

struct SyntheticBaseSpec {
    int width = 64;
    int height = 64;
    std::vector<SyntheticClassSpec> classes;
};

// Desk-scale stand-in for a photo library: smooth gradients plus per-class
// noise, so serialized byte statistics (size, entropy, chi-square) separate
// the classes exactly when the noise levels differ.
std::vector<LabeledRasters> generate_synthetic_bases(const SyntheticBaseSpec& spec,
                                                     std::uint64_t seed);

// Serializer choices for synthesized corpora. The external command template
// receives "{in}" (a PPM file) and "{out}" and must produce the output file.
struct PpmEncoder {};
struct RleEncoder {};
struct ExecEncoder {
    std::string command_template;
};
using CorpusEncoder = std::variant<PpmEncoder, RleEncoder, ExecEncoder>;

struct SynthCorpusOptions {
    double alpha = 0.25;
    int count_per_class = 1;
    std::uint64_t seed = 1;
    CorpusEncoder encoder = RleEncoder{};
};

// Expands base rasters into a labeled corpus directory: every output picks a
// base uniformly at random, composites the watermark, and serializes into
// <out_dir>/<class>/imgNNNNN.<ext>. Deterministic for a given seed.
void synth_corpus(const std::vector<LabeledRasters>& bases, const Raster& mark,
                  const SynthCorpusOptions& options, const std::filesystem::path& out_dir);

}  // namespace statleak
