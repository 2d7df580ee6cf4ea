#include "emomine/wav.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace emomine {

namespace {

constexpr std::uint16_t kFormatPcm = 1;

std::uint16_t read_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xFF));
}

}  // namespace

AudioBuffer decode_wav(std::string_view bytes, const std::string& source_name) {
    const std::string name = source_name.empty() ? "<input>" : source_name;
    const std::uint8_t* data = reinterpret_cast<const std::uint8_t*>(bytes.data());
    const std::size_t n = bytes.size();

    if (n < 12 || std::memcmp(data, "RIFF", 4) != 0 || std::memcmp(data + 8, "WAVE", 4) != 0) {
        throw CorruptHeaderError("not a RIFF/WAVE file: " + name);
    }

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    const std::uint8_t* pcm_data = nullptr;
    std::size_t pcm_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= n) {
        const std::uint8_t* chunk_id = data + pos;
        const std::uint32_t chunk_size = read_u32(data + pos + 4);
        pos += 8;
        if (chunk_size > n - pos) {
            throw CorruptHeaderError("truncated chunk in " + name);
        }
        if (std::memcmp(chunk_id, "fmt ", 4) == 0) {
            if (chunk_size < 16) throw CorruptHeaderError("fmt chunk too small in " + name);
            format = read_u16(data + pos);
            channels = read_u16(data + pos + 2);
            sample_rate = read_u32(data + pos + 4);
            bits = read_u16(data + pos + 14);
            have_fmt = true;
        } else if (std::memcmp(chunk_id, "data", 4) == 0) {
            pcm_data = data + pos;
            pcm_size = chunk_size;
        }
        pos += chunk_size + (chunk_size & 1);  // chunks are word-aligned
    }

    if (!have_fmt || pcm_data == nullptr) {
        throw CorruptHeaderError("missing fmt or data chunk in " + name);
    }
    if (format != kFormatPcm) {
        throw UnsupportedFormatError("only PCM is supported (format tag " +
                                     std::to_string(format) + ") in " + name);
    }
    if (channels != 1) {
        throw UnsupportedFormatError("only mono is supported (" + std::to_string(channels) +
                                     " channels) in " + name);
    }
    if (bits != 16) {
        throw UnsupportedFormatError("only 16-bit samples are supported (" + std::to_string(bits) +
                                     " bits) in " + name);
    }
    if (sample_rate == 0) {
        throw CorruptHeaderError("zero sample rate in " + name);
    }

    AudioBuffer audio;
    audio.sample_rate_hz = sample_rate;
    const std::size_t count = pcm_size / 2;
    audio.samples.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::int16_t s =
            static_cast<std::int16_t>(read_u16(pcm_data + 2 * i));
        audio.samples[i] = static_cast<double>(s) / 32768.0;
    }
    return audio;
}

AudioBuffer read_wav_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptHeaderError("cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_wav(bytes, path);
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& audio) {
    const std::uint32_t data_size = static_cast<std::uint32_t>(audio.samples.size() * 2);
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_size);

    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put_u32(out, 36 + data_size);
    out.insert(out.end(), {'W', 'A', 'V', 'E'});
    out.insert(out.end(), {'f', 'm', 't', ' '});
    put_u32(out, 16);
    put_u16(out, kFormatPcm);
    put_u16(out, 1);  // mono
    put_u32(out, audio.sample_rate_hz);
    put_u32(out, audio.sample_rate_hz * 2);  // byte rate
    put_u16(out, 2);                         // block align
    put_u16(out, 16);                        // bits per sample
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put_u32(out, data_size);

    for (double v : audio.samples) {
        double scaled = std::lround(v * 32768.0);
        if (scaled > 32767.0) scaled = 32767.0;
        if (scaled < -32768.0) scaled = -32768.0;
        put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    }
    return out;
}

void write_wav_file(const std::string& path, const AudioBuffer& audio) {
    const std::vector<std::uint8_t> bytes = encode_wav(audio);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to " + path);
}

}  // namespace emomine
