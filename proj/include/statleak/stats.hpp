#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

namespace statleak {

// Occurrence counts of the 256 byte values in a stream.
struct ByteHistogram {
    std::array<std::uint64_t, 256> counts{};
    std::uint64_t total = 0;

    void add(std::uint8_t value) {
        ++counts[value];
        ++total;
    }
};

ByteHistogram byte_histogram(std::span<const std::uint8_t> stream);

// Shannon entropy in bits per byte, in [0, 8]. Throws EmptyStream on an
// empty histogram.
double entropy(const ByteHistogram& hist);

// Entropy-derived optimum size shrink in percent: (8 - H) / 8 * 100.
double compression_estimate(double entropy_bits_per_byte);

struct ChiSquareResult {
    double statistic = 0.0;
    double p_value = 1.0;  // upper-tail probability under uniformity
    int degrees_of_freedom = 255;
};

// Goodness-of-fit against the uniform byte distribution, 255 degrees of
// freedom (256 bins minus one).
ChiSquareResult chi_square(const ByteHistogram& hist);

double arithmetic_mean(const ByteHistogram& hist);

struct MonteCarloPi {
    double estimate = 0.0;
    double error_percent = 0.0;
    std::uint64_t groups = 0;
    std::uint64_t inside = 0;
};

// Interprets consecutive non-overlapping 6-byte groups as (x, y) points in
// the unit square and estimates pi from the fraction inside the quarter
// circle. Trailing remainder bytes are discarded. Throws InsufficientData
// below 6 bytes.
MonteCarloPi monte_carlo_pi(std::span<const std::uint8_t> stream);

// Pearson correlation of the byte sequence against its successor sequence,
// with the last byte wrapping around to the first. nullopt when the stream
// is constant (zero variance). Throws InsufficientData below 2 bytes.
std::optional<double> serial_correlation(std::span<const std::uint8_t> stream);

// The eight per-file features, in their canonical serialization order.
struct Fingerprint {
    double entropy = 0.0;           // bits per byte
    std::uint64_t size = 0;         // stream length in bytes
    double compression_rate = 0.0;  // percent
    double chisq_statistic = 0.0;
    double arith_mean = 0.0;
    double monte_pi = 0.0;
    double err_monte_pi = 0.0;      // percent
    double serial_corr = 0.0;       // 0.0 when undefined
    bool corr_defined = true;

    std::array<double, 8> values() const {
        return {entropy,    static_cast<double>(size), compression_rate, chisq_statistic,
                arith_mean, monte_pi,                  err_monte_pi,     serial_corr};
    }

    static const std::array<std::string, 8>& feature_names();
};

// Mergeable single-pass accumulator. Chunk boundaries may fall anywhere;
// the finished fingerprint is bit-identical to one-shot processing, and
// merge() is associative, so chunks can be fingerprinted in parallel and
// combined. The Monte-Carlo test is kept for all six group alignments so a
// right-hand accumulator can be stitched onto any prefix length.
class FingerprintAccumulator {
public:
    void update(std::span<const std::uint8_t> chunk);
    void merge(const FingerprintAccumulator& other);

    // Requires at least 6 bytes accumulated; throws InsufficientData.
    Fingerprint finish() const;

    std::uint64_t total() const { return hist_.total; }
    const ByteHistogram& histogram() const { return hist_; }

private:
    struct McPhase {
        std::uint64_t groups = 0;
        std::uint64_t inside = 0;
        std::array<std::uint8_t, 6> pending{};
        int pending_len = 0;
    };

    void mc_feed(std::uint8_t value, std::uint64_t global_index);
    static bool group_inside(const std::uint8_t* group);

    ByteHistogram hist_;
    std::uint64_t cross_sum_ = 0;  // sum of products of adjacent byte pairs
    std::uint8_t first_byte_ = 0;
    std::uint8_t last_byte_ = 0;
    std::array<McPhase, 6> phases_{};
    std::array<std::uint8_t, 5> head_{};
    int head_len_ = 0;
};

Fingerprint fingerprint_bytes(std::span<const std::uint8_t> stream);
Fingerprint fingerprint_file(const std::filesystem::path& path);

// Regularized upper incomplete gamma Q(a, x); the chi-square upper tail is
// Q(df/2, statistic/2).
double gamma_q(double a, double x);

// Upper-tail chi-square probability.
double chi_square_p_value(double statistic, int degrees_of_freedom);

// Inverse standard normal CDF (Acklam's rational approximation, refined by
// one Halley step). Used by error-based pruning to turn a confidence factor
// into a z-score.
double normal_quantile(double p);

}  // namespace statleak
