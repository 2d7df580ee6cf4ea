#include "emomine/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

namespace emomine::features {

namespace {

bool is_power_of_two(std::size_t n) {
    return n >= 2 && (n & (n - 1)) == 0;
}

// In-place iterative radix-2 transform (decimation in time).
void fft_inplace(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle_step = -2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> w =
                    std::polar(1.0, angle_step * static_cast<double>(k));
                const std::complex<double> u = a[start + k];
                const std::complex<double> v = a[start + k + len / 2] * w;
                a[start + k] = u + v;
                a[start + k + len / 2] = u - v;
            }
        }
    }
}

}  // namespace

void StftConfig::validate(double sample_rate_hz) const {
    if (!is_power_of_two(window_len)) throw Error("window_len must be a power of two >= 2");
    if (hop == 0 || hop > window_len) throw Error("hop must be in [1, window_len]");
    if (!(0.0 < fmin_hz && fmin_hz < fmax_hz)) throw Error("need 0 < fmin_hz < fmax_hz");
    if (sample_rate_hz > 0.0 && fmax_hz > sample_rate_hz / 2.0) {
        throw Error("fmax_hz above Nyquist for sample rate " + std::to_string(sample_rate_hz));
    }
    if (n_bands < 2) throw Error("n_bands must be at least 2");
    if (max_frames == 0) throw Error("max_frames must be positive");
}

std::vector<std::complex<double>> dft(std::span<const double> frame) {
    const std::size_t n = frame.size();
    if (!is_power_of_two(n)) {
        throw LengthMismatchError("frame length " + std::to_string(n) +
                                  " is not a power of two");
    }
    std::vector<std::complex<double>> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = frame[i];
    fft_inplace(a);
    a.resize(n / 2 + 1);
    return a;
}

std::vector<double> band_edges(const StftConfig& cfg) {
    std::vector<double> edges(cfg.n_bands + 1);
    if (cfg.log_spaced_bands) {
        const double ratio = std::log(cfg.fmax_hz / cfg.fmin_hz);
        for (std::size_t i = 0; i <= cfg.n_bands; ++i) {
            edges[i] = cfg.fmin_hz *
                       std::exp(ratio * static_cast<double>(i) / static_cast<double>(cfg.n_bands));
        }
    } else {
        const double step = (cfg.fmax_hz - cfg.fmin_hz) / static_cast<double>(cfg.n_bands);
        for (std::size_t i = 0; i <= cfg.n_bands; ++i) {
            edges[i] = cfg.fmin_hz + step * static_cast<double>(i);
        }
    }
    edges.front() = cfg.fmin_hz;
    edges.back() = cfg.fmax_hz;
    return edges;
}

Spectrogram stft_bands(const AudioBuffer& audio, const StftConfig& cfg) {
    cfg.validate(static_cast<double>(audio.sample_rate_hz));
    const std::size_t n = audio.samples.size();
    if (n < cfg.window_len) {
        throw TooShortError("audio of " + std::to_string(n) + " samples is shorter than one " +
                            std::to_string(cfg.window_len) + "-sample window");
    }

    const double fs = static_cast<double>(audio.sample_rate_hz);
    const double bin_hz = fs / static_cast<double>(cfg.window_len);
    const std::vector<double> edges = band_edges(cfg);

    // Bin ranges per band: bin k belongs to band i when edges[i] <= f_k <
    // edges[i+1] (the top edge is inclusive for the last band).
    std::vector<std::pair<std::size_t, std::size_t>> band_bins(cfg.n_bands, {0, 0});
    {
        std::vector<std::vector<std::size_t>> bins_of(cfg.n_bands);
        for (std::size_t k = 0; k <= cfg.window_len / 2; ++k) {
            const double f = static_cast<double>(k) * bin_hz;
            if (f < cfg.fmin_hz || f > cfg.fmax_hz) continue;
            std::size_t band =
                static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), f) -
                                         edges.begin());
            band = band == 0 ? 0 : band - 1;
            if (band >= cfg.n_bands) band = cfg.n_bands - 1;
            bins_of[band].push_back(k);
        }
        bool any = false;
        for (std::size_t i = 0; i < cfg.n_bands; ++i) {
            if (!bins_of[i].empty()) {
                band_bins[i] = {bins_of[i].front(), bins_of[i].back() + 1};
                any = true;
            }
        }
        if (!any) throw Error("no DFT bins fall inside [fmin_hz, fmax_hz]");
        // Borrow for empty bands: nearest populated band below, else above.
        for (std::size_t i = 0; i < cfg.n_bands; ++i) {
            if (!bins_of[i].empty()) continue;
            std::size_t j = i;
            while (j > 0 && bins_of[j].empty()) --j;
            if (bins_of[j].empty()) {
                j = i;
                while (j + 1 < cfg.n_bands && bins_of[j].empty()) ++j;
            }
            band_bins[i] = {bins_of[j].front(), bins_of[j].back() + 1};
        }
    }

    const std::size_t raw_frames = (n - cfg.window_len) / cfg.hop + 1;
    const std::size_t frames = std::min<std::size_t>(raw_frames, cfg.max_frames);

    std::vector<double> window(cfg.window_len);
    for (std::size_t i = 0; i < cfg.window_len; ++i) {
        window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                         static_cast<double>(cfg.window_len));
    }

    Spectrogram out;
    out.values = Mat(frames, cfg.n_bands);
    out.valid_frames = frames;

    std::vector<double> frame(cfg.window_len);
    for (std::size_t t = 0; t < frames; ++t) {
        const std::size_t offset = t * cfg.hop;
        for (std::size_t i = 0; i < cfg.window_len; ++i) {
            frame[i] = audio.samples[offset + i] * window[i];
        }
        const std::vector<std::complex<double>> spectrum = dft(frame);
        for (std::size_t b = 0; b < cfg.n_bands; ++b) {
            const auto [lo, hi] = band_bins[b];
            double sum = 0.0;
            for (std::size_t k = lo; k < hi; ++k) sum += std::abs(spectrum[k]);
            double value = sum / static_cast<double>(hi - lo);
            if (cfg.log_compress) value = std::log1p(value);
            out.values(t, b) = value;
        }
    }
    return out;
}

bool frame_energy_check(std::span<const double> frame,
                        std::span<const std::complex<double>> coefficients) {
    const std::size_t n = frame.size();
    if (coefficients.size() != n / 2 + 1) return false;
    double time_energy = 0.0;
    for (double x : frame) time_energy += x * x;
    // Reconstruct the two-sided spectrum energy: interior one-sided bins
    // appear twice (conjugate pairs), DC and Nyquist once.
    double freq_energy = std::norm(coefficients.front()) + std::norm(coefficients.back());
    for (std::size_t k = 1; k + 1 < coefficients.size(); ++k) {
        freq_energy += 2.0 * std::norm(coefficients[k]);
    }
    freq_energy /= static_cast<double>(n);
    const double scale = std::max(time_energy, freq_energy);
    if (scale == 0.0) return true;
    return std::fabs(time_energy - freq_energy) <= 1e-6 * scale;
}

void write_feature_file(const std::string& path, const Spectrogram& spectrogram) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    const std::uint32_t version = 1;
    const std::uint32_t t_count = static_cast<std::uint32_t>(spectrogram.valid_frames);
    const std::uint32_t b_count = static_cast<std::uint32_t>(spectrogram.bands());
    out.write("EMOF", 4);
    auto put_u32 = [&out](std::uint32_t v) {
        const std::uint8_t b[4] = {static_cast<std::uint8_t>(v & 0xFF),
                                   static_cast<std::uint8_t>((v >> 8) & 0xFF),
                                   static_cast<std::uint8_t>((v >> 16) & 0xFF),
                                   static_cast<std::uint8_t>((v >> 24) & 0xFF)};
        out.write(reinterpret_cast<const char*>(b), 4);
    };
    put_u32(version);
    put_u32(t_count);
    put_u32(b_count);
    for (std::size_t t = 0; t < t_count; ++t) {
        for (std::size_t b = 0; b < b_count; ++b) {
            const float v = static_cast<float>(spectrogram.values(t, b));
            static_assert(sizeof(float) == 4);
            std::uint32_t bits;
            std::memcpy(&bits, &v, 4);
            put_u32(bits);
        }
    }
    if (!out) throw Error("short write to " + path);
}

Spectrogram read_feature_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "EMOF", 4) != 0) {
        throw Error("bad feature file magic in " + path);
    }
    auto get_u32 = [&in, &path]() {
        std::uint8_t b[4];
        if (!in.read(reinterpret_cast<char*>(b), 4)) throw Error("truncated feature file " + path);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    };
    const std::uint32_t version = get_u32();
    if (version != 1) throw Error("unsupported feature file version in " + path);
    const std::uint32_t t_count = get_u32();
    const std::uint32_t b_count = get_u32();
    if (t_count == 0 || b_count == 0) throw Error("empty feature file " + path);

    Spectrogram spectrogram;
    spectrogram.values = Mat(t_count, b_count);
    spectrogram.valid_frames = t_count;
    for (std::size_t t = 0; t < t_count; ++t) {
        for (std::size_t b = 0; b < b_count; ++b) {
            const std::uint32_t bits = get_u32();
            float v;
            std::memcpy(&v, &bits, 4);
            spectrogram.values(t, b) = static_cast<double>(v);
        }
    }
    return spectrogram;
}

std::string feature_path_for(const std::string& audio_path) {
    std::filesystem::path p(audio_path);
    p.replace_extension(".feat");
    return p.string();
}

}  // namespace emomine::features
