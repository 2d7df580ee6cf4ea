#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "emomine/error.hpp"
#include "emomine/mat.hpp"
#include "emomine/wav.hpp"

namespace emomine::features {

class LengthMismatchError : public Error {
public:
    using Error::Error;
};

class TooShortError : public Error {
public:
    using Error::Error;
};

struct StftConfig {
    std::size_t window_len = 1024;  // power of two
    std::size_t hop = 512;
    double fmin_hz = 60.0;
    double fmax_hz = 8000.0;
    std::size_t n_bands = 128;
    std::size_t max_frames = 515;   // longer utterances are truncated
    bool log_spaced_bands = true;   // geometric band edges; false -> linear
    bool log_compress = true;       // ln(1+v) on band magnitudes

    void validate(double sample_rate_hz) const;
};

// T x B matrix of band magnitudes. values may carry padding rows past
// valid_frames; consumers only read the first valid_frames rows.
struct Spectrogram {
    Mat values;
    std::size_t valid_frames = 0;

    std::size_t bands() const { return values.cols; }
};

// One-sided DFT of a real frame whose length is a power of two; returns
// coefficients k = 0 .. n/2 computed with an iterative radix-2 transform.
std::vector<std::complex<double>> dft(std::span<const double> frame);

// Band edges between fmin and fmax: n_bands+1 values, geometrically
// spaced when cfg.log_spaced_bands, linearly otherwise.
std::vector<double> band_edges(const StftConfig& cfg);

// Hann-windowed frames at offsets 0, hop, 2*hop, ...; per frame the bin
// magnitudes inside [fmin, fmax] are averaged into bands (a band without
// bins borrows the nearest populated band), then optionally compressed
// with ln(1+v). Truncates to max_frames frames.
Spectrogram stft_bands(const AudioBuffer& audio, const StftConfig& cfg);

// Parseval identity between a frame and its one-sided DFT, within 1e-6
// relative.
bool frame_energy_check(std::span<const double> frame,
                        std::span<const std::complex<double>> coefficients);

// Binary feature cache: magic "EMOF", version u32, T u32, B u32, then
// T*B float32 values row-major, little-endian.
void write_feature_file(const std::string& path, const Spectrogram& spectrogram);
Spectrogram read_feature_file(const std::string& path);

// Cache path for a segment WAV: same name with extension ".feat".
std::string feature_path_for(const std::string& audio_path);

}  // namespace emomine::features
