#include "enf/signal_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "enf/bandpass.hpp"
#include "enf/error.hpp"

namespace enf {

SampledSignal::SampledSignal(std::vector<double> samples, double sample_rate_hz,
                             double origin_offset_s)
    : samples_(std::move(samples)),
      sample_rate_hz_(sample_rate_hz),
      origin_offset_s_(origin_offset_s) {
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    throw InvalidArgument("sample rate must be positive");
  }
  if (samples_.empty()) throw InvalidArgument("signal must have at least one sample");
}

SampledSignal SampledSignal::skip_seconds(double seconds) const {
  if (seconds < 0.0) throw InvalidArgument("skip must be non-negative");
  const auto skip = static_cast<std::size_t>(std::llround(seconds * sample_rate_hz_));
  if (skip >= samples_.size()) {
    throw InvalidArgument("skip of " + std::to_string(seconds) +
                          " s leaves no samples");
  }
  std::vector<double> rest(samples_.begin() + static_cast<std::ptrdiff_t>(skip),
                           samples_.end());
  return SampledSignal(std::move(rest), sample_rate_hz_,
                       origin_offset_s_ + static_cast<double>(skip) / sample_rate_hz_);
}

// ---------------------------------------------------------------------------
// WAV

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

}  // namespace

SampledSignal read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();

  if (size < 12 || bytes.compare(0, 4, "RIFF") != 0 || bytes.compare(8, 4, "WAVE") != 0) {
    throw UnsupportedFormat(path.string() + ": not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint16_t bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* pcm = nullptr;
  std::size_t pcm_bytes = 0;

  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const std::string_view id(bytes.data() + pos, 4);
    const std::size_t chunk = le32(data + pos + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min(chunk, size - body);
    if (id == "fmt ") {
      if (avail < 16) throw UnsupportedFormat(path.string() + ": short fmt chunk");
      std::uint16_t format = le16(data + body);
      channels = le16(data + body + 2);
      rate = le32(data + body + 4);
      bits = le16(data + body + 14);
      if (format == kFormatExtensible && avail >= 26) format = le16(data + body + 24);
      if (format != kFormatPcm) {
        throw UnsupportedFormat(path.string() + ": only PCM WAV is supported (format tag " +
                                std::to_string(format) + ")");
      }
      have_fmt = true;
    } else if (id == "data") {
      pcm = data + body;
      pcm_bytes = avail;
    }
    pos = body + chunk + (chunk & 1U);
  }

  if (!have_fmt) throw UnsupportedFormat(path.string() + ": missing fmt chunk");
  if (bits != 16) {
    throw UnsupportedFormat(path.string() + ": only 16-bit PCM is supported, got " +
                            std::to_string(bits) + " bits");
  }
  if (channels == 0) throw UnsupportedFormat(path.string() + ": zero channels");
  if (pcm == nullptr) throw UnsupportedFormat(path.string() + ": missing data chunk");

  const std::size_t frame_bytes = 2U * channels;
  const std::size_t frames = pcm_bytes / frame_bytes;
  if (frames == 0) throw UnsupportedFormat(path.string() + ": no samples");

  std::vector<double> samples(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      acc += static_cast<std::int16_t>(le16(pcm + i * frame_bytes + 2 * c));
    }
    samples[i] = acc / (32768.0 * channels);
  }
  return SampledSignal(std::move(samples), static_cast<double>(rate));
}

void write_wav(const SampledSignal& signal, const std::filesystem::path& path) {
  const double rate = signal.sample_rate_hz();
  if (std::abs(rate - std::round(rate)) > 1e-9) {
    throw InvalidArgument("WAV needs an integer sample rate");
  }
  const auto n = static_cast<std::uint32_t>(signal.size());
  std::string out;
  out.reserve(44 + 2 * static_cast<std::size_t>(n));
  out += "RIFF";
  put32(out, 36 + 2 * n);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(rate));
  put32(out, static_cast<std::uint32_t>(rate) * 2);
  put16(out, 2);
  put16(out, 16);
  out += "data";
  put32(out, 2 * n);
  for (double s : signal.samples()) {
    const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// Decimation

std::size_t decimation_filter_length(int factor) {
  return 10 * static_cast<std::size_t>(factor) + 1;
}

SampledSignal decimate(const SampledSignal& signal, int factor) {
  if (factor <= 0) throw InvalidArgument("decimation factor must be positive");
  if (factor == 1) return signal;

  const std::size_t taps = decimation_filter_length(factor);
  const std::size_t n = signal.size();
  if (n <= taps) {
    throw InvalidArgument("signal of " + std::to_string(n) +
                          " samples is too short for a " + std::to_string(taps) +
                          "-tap anti-alias filter");
  }
  const double rate = signal.sample_rate_hz();
  const double out_rate = rate / factor;
  const FirFilter lp = design_lowpass(rate, 0.45 * out_rate, taps);

  // Keep output samples on the absolute grid t = j / out_rate so that
  // cascaded decimations land on the same instants as a single stage.
  const std::size_t f = static_cast<std::size_t>(factor);
  const std::size_t half = (taps - 1) / 2;
  std::size_t phase = 0;
  const double origin_samples = signal.origin_offset_s() * rate;
  const double origin_rounded = std::round(origin_samples);
  if (origin_rounded >= 0.0 && std::abs(origin_samples - origin_rounded) < 1e-6) {
    const auto origin_index = static_cast<std::size_t>(origin_rounded);
    phase = (f - origin_index % f) % f;
  }
  std::size_t first = phase;
  while (first < half) first += f;
  if (first + half >= n) {
    throw InvalidArgument("signal of " + std::to_string(n) + " samples yields no decimated output");
  }
  const auto x = signal.samples();
  const auto& h = lp.coeffs;

  std::vector<double> out;
  out.reserve((n - half - first) / f + 1);
  for (std::size_t i = first; i + half < n; i += f) {
    const std::size_t base = i - half;  // x index paired with h[taps-1]
    double acc = 0.0;
    for (std::size_t k = 0; k < taps; ++k) acc += h[k] * x[base + taps - 1 - k];
    out.push_back(acc);
  }
  return SampledSignal(std::move(out), out_rate,
                       signal.origin_offset_s() + static_cast<double>(first) / rate);
}

// ---------------------------------------------------------------------------
// Tracks

std::vector<double> EnfTrack::frequencies() const {
  std::vector<double> f;
  f.reserve(entries.size());
  for (const auto& e : entries) {
    f.push_back(e.valid ? e.freq_hz : std::numeric_limits<double>::quiet_NaN());
  }
  return f;
}

std::size_t EnfTrack::valid_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const TrackEntry& e) { return e.valid; }));
}

namespace {

constexpr std::string_view kCsvHeader = "frame_index,time_s,freq_hz";

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw Error("cannot format value");
  return std::string(buf.data(), end);
}

template <typename T>
T parse_field(std::string_view text, std::string_view name, std::size_t line) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("line " + std::to_string(line) + ": " + std::string(name) +
                         " is not numeric: '" + std::string(text) + "'",
                     line);
  }
  return value;
}

void infer_cadence(EnfTrack& track) {
  if (track.entries.size() >= 2) {
    const double dt = track.entries[1].time_s - track.entries[0].time_s;
    if (dt > 0.0) track.shift_s = dt;
  }
}

EnfTrack read_csv_track(std::istream& in) {
  EnfTrack track;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header) {
      if (line != kCsvHeader) {
        throw ParseError("line 1: expected header '" + std::string(kCsvHeader) + "'", 1);
      }
      header = true;
      continue;
    }
    if (line.empty()) continue;
    std::array<std::string_view, 3> fields;
    std::string_view rest(line);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto comma = rest.find(',');
      if ((i < 2) != (comma != std::string_view::npos)) {
        throw ParseError("line " + std::to_string(lineno) + ": expected 3 fields", lineno);
      }
      fields[i] = rest.substr(0, comma);
      rest = i < 2 ? rest.substr(comma + 1) : std::string_view{};
    }
    TrackEntry e;
    e.frame_index = parse_field<std::size_t>(fields[0], "frame_index", lineno);
    e.time_s = parse_field<double>(fields[1], "time_s", lineno);
    e.freq_hz = parse_field<double>(fields[2], "freq_hz", lineno);
    e.valid = std::isfinite(e.freq_hz);
    track.entries.push_back(e);
  }
  if (!header) throw ParseError("line 1: empty track file", 1);
  infer_cadence(track);
  return track;
}

EnfTrack read_json_track(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("json: ") + e.what(), 0);
  }
  if (!doc.is_array()) throw ParseError("json: expected an array of entries", 0);
  EnfTrack track;
  std::size_t index = 0;
  for (const auto& item : doc) {
    TrackEntry e;
    try {
      e.frame_index = item.at("frame_index").get<std::size_t>();
      e.time_s = item.at("time_s").get<double>();
      const auto& f = item.at("freq_hz");
      e.valid = !f.is_null();
      e.freq_hz = e.valid ? f.get<double>() : std::numeric_limits<double>::quiet_NaN();
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError("json entry " + std::to_string(index) + ": " + ex.what(), index);
    }
    track.entries.push_back(e);
    ++index;
  }
  infer_cadence(track);
  return track;
}

}  // namespace

void write_track(const EnfTrack& track, const std::filesystem::path& path,
                 TrackFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  if (format == TrackFormat::csv) {
    out << kCsvHeader << '\n';
    for (const auto& e : track.entries) {
      out << e.frame_index << ',' << format_double(e.time_s) << ','
          << (e.valid ? format_double(e.freq_hz) : std::string("nan")) << '\n';
    }
  } else {
    auto doc = nlohmann::json::array();
    for (const auto& e : track.entries) {
      nlohmann::json item{{"frame_index", e.frame_index}, {"time_s", e.time_s}};
      item["freq_hz"] = e.valid ? nlohmann::json(e.freq_hz) : nlohmann::json(nullptr);
      doc.push_back(std::move(item));
    }
    out << doc.dump(2) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

EnfTrack read_track(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return path.extension() == ".json" ? read_json_track(in) : read_csv_track(in);
}

}  // namespace enf
