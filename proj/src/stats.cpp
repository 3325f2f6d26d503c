#include "statleak/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <vector>

#include "statleak/errors.hpp"
#include "statleak/rng.hpp"

namespace statleak {

namespace {

constexpr double kMax24Bit = 16777215.0;  // 2^24 - 1

}  // namespace

ByteHistogram byte_histogram(std::span<const std::uint8_t> stream) {
    ByteHistogram hist;
    for (std::uint8_t b : stream) hist.add(b);
    return hist;
}

double entropy(const ByteHistogram& hist) {
    if (hist.total == 0) throw EmptyStream();
    const double total = static_cast<double>(hist.total);
    double h = 0.0;
    for (std::uint64_t count : hist.counts) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / total;
        h -= p * std::log2(p);
    }
    // A single-symbol stream accumulates -0.0; normalize the sign.
    return h == 0.0 ? 0.0 : h;
}

double compression_estimate(double entropy_bits_per_byte) {
    return (8.0 - entropy_bits_per_byte) / 8.0 * 100.0;
}

ChiSquareResult chi_square(const ByteHistogram& hist) {
    if (hist.total == 0) throw EmptyStream();
    const double expected = static_cast<double>(hist.total) / 256.0;
    double statistic = 0.0;
    for (std::uint64_t count : hist.counts) {
        const double diff = static_cast<double>(count) - expected;
        statistic += diff * diff / expected;
    }
    ChiSquareResult result;
    result.statistic = statistic;
    result.degrees_of_freedom = 255;
    result.p_value = chi_square_p_value(statistic, 255);
    return result;
}

double arithmetic_mean(const ByteHistogram& hist) {
    if (hist.total == 0) throw EmptyStream();
    std::uint64_t weighted = 0;
    for (int v = 0; v < 256; ++v) weighted += static_cast<std::uint64_t>(v) * hist.counts[v];
    return static_cast<double>(weighted) / static_cast<double>(hist.total);
}

MonteCarloPi monte_carlo_pi(std::span<const std::uint8_t> stream) {
    if (stream.size() < 6) {
        throw InsufficientData("monte-carlo pi needs at least 6 bytes, got " +
                               std::to_string(stream.size()));
    }
    MonteCarloPi result;
    const std::size_t groups = stream.size() / 6;
    for (std::size_t g = 0; g < groups; ++g) {
        const std::uint8_t* p = stream.data() + 6 * g;
        const double x = static_cast<double>((std::uint32_t{p[0]} << 16) |
                                             (std::uint32_t{p[1]} << 8) | p[2]) /
                         kMax24Bit;
        const double y = static_cast<double>((std::uint32_t{p[3]} << 16) |
                                             (std::uint32_t{p[4]} << 8) | p[5]) /
                         kMax24Bit;
        if (x * x + y * y <= 1.0) ++result.inside;
    }
    result.groups = groups;
    result.estimate = 4.0 * static_cast<double>(result.inside) / static_cast<double>(groups);
    result.error_percent =
        std::abs(result.estimate - std::numbers::pi) / std::numbers::pi * 100.0;
    return result;
}

namespace {

// Shared by the one-shot and streaming paths. Sums are exact in uint64 for
// any realistic stream length; the final ratio is formed in double.
std::optional<double> serial_correlation_from_sums(const ByteHistogram& hist,
                                                   std::uint64_t cross_sum_with_wrap) {
    const double n = static_cast<double>(hist.total);
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
    for (int v = 0; v < 256; ++v) {
        sum += static_cast<std::uint64_t>(v) * hist.counts[v];
        sum_sq += static_cast<std::uint64_t>(v) * v * hist.counts[v];
    }
    const double denom = n * static_cast<double>(sum_sq) -
                         static_cast<double>(sum) * static_cast<double>(sum);
    if (denom == 0.0) return std::nullopt;
    const double numer = n * static_cast<double>(cross_sum_with_wrap) -
                         static_cast<double>(sum) * static_cast<double>(sum);
    return numer / denom;
}

}  // namespace

std::optional<double> serial_correlation(std::span<const std::uint8_t> stream) {
    if (stream.size() < 2) {
        throw InsufficientData("serial correlation needs at least 2 bytes, got " +
                               std::to_string(stream.size()));
    }
    std::uint64_t cross = 0;
    for (std::size_t i = 0; i + 1 < stream.size(); ++i) {
        cross += static_cast<std::uint64_t>(stream[i]) * stream[i + 1];
    }
    cross += static_cast<std::uint64_t>(stream.back()) * stream.front();
    return serial_correlation_from_sums(byte_histogram(stream), cross);
}

const std::array<std::string, 8>& Fingerprint::feature_names() {
    static const std::array<std::string, 8> names = {
        "entropy", "size",    "compressionrate", "chisqstatistic",
        "arithmean", "montepi", "errmontepi",    "corr"};
    return names;
}

bool FingerprintAccumulator::group_inside(const std::uint8_t* g) {
    const double x = static_cast<double>((std::uint32_t{g[0]} << 16) |
                                         (std::uint32_t{g[1]} << 8) | g[2]) /
                     kMax24Bit;
    const double y = static_cast<double>((std::uint32_t{g[3]} << 16) |
                                         (std::uint32_t{g[4]} << 8) | g[5]) /
                     kMax24Bit;
    return x * x + y * y <= 1.0;
}

void FingerprintAccumulator::mc_feed(std::uint8_t value, std::uint64_t global_index) {
    for (int p = 0; p < 6; ++p) {
        if (global_index < static_cast<std::uint64_t>(p)) continue;  // phase not started
        McPhase& phase = phases_[p];
        phase.pending[phase.pending_len++] = value;
        if (phase.pending_len == 6) {
            ++phase.groups;
            if (group_inside(phase.pending.data())) ++phase.inside;
            phase.pending_len = 0;
        }
    }
}

void FingerprintAccumulator::update(std::span<const std::uint8_t> chunk) {
    for (std::uint8_t b : chunk) {
        const std::uint64_t idx = hist_.total;
        if (idx == 0) {
            first_byte_ = b;
        } else {
            cross_sum_ += static_cast<std::uint64_t>(last_byte_) * b;
        }
        last_byte_ = b;
        if (head_len_ < 5) head_[head_len_++] = b;
        mc_feed(b, idx);
        hist_.add(b);
    }
}

void FingerprintAccumulator::merge(const FingerprintAccumulator& other_in) {
    if (other_in.total() == 0) return;
    if (total() == 0) {
        *this = other_in;
        return;
    }
    // Self-merge duplicates the stream; work from a copy so the right-hand
    // state is stable while this object mutates.
    if (&other_in == this) {
        const FingerprintAccumulator copy(other_in);
        merge(copy);
        return;
    }
    const FingerprintAccumulator& other = other_in;

    const std::uint64_t left_total = hist_.total;

    cross_sum_ += other.cross_sum_ +
                  static_cast<std::uint64_t>(last_byte_) * other.first_byte_;
    last_byte_ = other.last_byte_;

    if (other.total() <= 5) {
        // Small right-hand side: replay its bytes (all retained in head_)
        // through the group machinery.
        for (int j = 0; j < other.head_len_; ++j) {
            mc_feed(other.head_[j], left_total + static_cast<std::uint64_t>(j));
        }
    } else {
        std::array<McPhase, 6> merged{};
        for (int p = 0; p < 6; ++p) {
            if (left_total >= static_cast<std::uint64_t>(p)) {
                McPhase state = phases_[p];
                const int carried = state.pending_len;
                if (carried > 0) {
                    // Complete the straddling group with the first bytes of
                    // the right-hand stream.
                    for (int j = 0; j < 6 - carried; ++j) state.pending[carried + j] = other.head_[j];
                    ++state.groups;
                    if (group_inside(state.pending.data())) ++state.inside;
                }
                // Remaining groups of the combined stream line up with the
                // right-hand accumulator's phase at offset (6 - carried).
                const McPhase& tail = other.phases_[(6 - carried) % 6];
                merged[p].groups = state.groups + tail.groups;
                merged[p].inside = state.inside + tail.inside;
                merged[p].pending = tail.pending;
                merged[p].pending_len = tail.pending_len;
            } else {
                // This phase's skip extends into the right-hand stream.
                merged[p] = other.phases_[p - static_cast<int>(left_total)];
            }
        }
        phases_ = merged;
    }

    for (int j = 0; head_len_ < 5 && j < other.head_len_; ++j) head_[head_len_++] = other.head_[j];

    for (int v = 0; v < 256; ++v) hist_.counts[v] += other.hist_.counts[v];
    hist_.total += other.hist_.total;
}

Fingerprint FingerprintAccumulator::finish() const {
    if (hist_.total < 6) {
        throw InsufficientData("fingerprint needs at least 6 bytes, got " +
                               std::to_string(hist_.total));
    }
    Fingerprint fp;
    fp.size = hist_.total;
    fp.entropy = statleak::entropy(hist_);
    fp.compression_rate = compression_estimate(fp.entropy);
    fp.chisq_statistic = chi_square(hist_).statistic;
    fp.arith_mean = arithmetic_mean(hist_);

    const McPhase& mc = phases_[0];
    fp.monte_pi = 4.0 * static_cast<double>(mc.inside) / static_cast<double>(mc.groups);
    fp.err_monte_pi = std::abs(fp.monte_pi - std::numbers::pi) / std::numbers::pi * 100.0;

    const std::uint64_t wrap =
        static_cast<std::uint64_t>(last_byte_) * first_byte_;
    const auto corr = serial_correlation_from_sums(hist_, cross_sum_ + wrap);
    fp.corr_defined = corr.has_value();
    fp.serial_corr = corr.value_or(0.0);
    return fp;
}

Fingerprint fingerprint_bytes(std::span<const std::uint8_t> stream) {
    FingerprintAccumulator acc;
    acc.update(stream);
    return acc.finish();
}

Fingerprint fingerprint_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    FingerprintAccumulator acc;
    std::vector<std::uint8_t> buffer(1 << 16);
    while (in) {
        in.read(reinterpret_cast<char*>(buffer.data()),
                static_cast<std::streamsize>(buffer.size()));
        const std::streamsize got = in.gcount();
        if (got > 0) acc.update(std::span<const std::uint8_t>(buffer.data(), got));
    }
    if (in.bad()) throw Error("read error on file: " + path.string());
    return acc.finish();
}

// ---------------------------------------------------------------------------
// Special functions.

namespace {

// Series expansion of P(a, x), effective for x < a + 1.
double gamma_p_series(double a, double x) {
    const double lg = std::lgamma(a);
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < 1000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
}

// Continued fraction for Q(a, x) via modified Lentz, effective for x >= a + 1.
double gamma_q_fraction(double a, double x) {
    const double lg = std::lgamma(a);
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw BadParameter("gamma_q requires a > 0 and x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_fraction(a, x);
}

double chi_square_p_value(double statistic, int degrees_of_freedom) {
    if (degrees_of_freedom < 1) throw BadParameter("degrees of freedom must be positive");
    if (statistic <= 0.0) return 1.0;
    return gamma_q(static_cast<double>(degrees_of_freedom) / 2.0, statistic / 2.0);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw BadParameter("normal_quantile requires p in (0,1)");

    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};

    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley refinement against erfc brings the result to near machine
    // precision.
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

std::vector<std::uint8_t> random_bytes(std::uint64_t seed, std::size_t count) {
    SplitMix64 rng(seed);
    std::vector<std::uint8_t> bytes(count);
    std::size_t i = 0;
    while (i + 8 <= count) {
        const std::uint64_t v = rng.next();
        for (int k = 0; k < 8; ++k) bytes[i + k] = static_cast<std::uint8_t>(v >> (8 * k));
        i += 8;
    }
    if (i < count) {
        const std::uint64_t v = rng.next();
        for (int k = 0; i < count; ++k, ++i) bytes[i] = static_cast<std::uint8_t>(v >> (8 * k));
    }
    return bytes;
}

}  // namespace statleak
