#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "emomine/error.hpp"

namespace emomine {

class CorruptHeaderError : public Error {
public:
    using Error::Error;
};

class UnsupportedFormatError : public Error {
public:
    using Error::Error;
};

// Mono audio, samples in [-1, 1].
struct AudioBuffer {
    std::vector<double> samples;
    std::uint32_t sample_rate_hz = 0;

    double duration_ms() const {
        return sample_rate_hz == 0 ? 0.0
                                   : 1000.0 * static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

// Decodes RIFF/WAVE, PCM 16-bit mono; samples scaled by 1/32768.
AudioBuffer decode_wav(std::string_view bytes, const std::string& source_name = "");
AudioBuffer read_wav_file(const std::string& path);

// Encodes to PCM 16-bit mono; values rounded and clamped to int16 range.
std::vector<std::uint8_t> encode_wav(const AudioBuffer& audio);
void write_wav_file(const std::string& path, const AudioBuffer& audio);

}  // namespace emomine
