#include "core/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace pinkam {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode extra = {}) {
  std::ofstream out(path, std::ios::out | std::ios::trunc | extra);
  if (!out) throw std::runtime_error("io: cannot open '" + path + "' for writing");
  return out;
}

double parse_double(std::string_view token, const std::string& path) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw std::runtime_error("io: bad numeric field '" + std::string(token) + "' in " + path);
  return v;
}

// --- WAV plumbing (RIFF little-endian) ---

std::uint32_t rd_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t rd_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void wr_u32(std::ofstream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void wr_u16(std::ofstream& out, std::uint16_t v) {
  const unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  out.write(reinterpret_cast<const char*>(b), 2);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_series_csv(const TimeSeries& ts, const std::string& path) {
  auto out = open_out(path);
  out << "t,x\n";
  for (std::size_t k = 0; k < ts.size(); ++k) {
    out << format_double(ts.time_at(k)) << ',' << format_double(ts.samples[k]) << '\n';
  }
  if (!out) throw std::runtime_error("io: write failed for '" + path + "'");
}

TimeSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("io: cannot open '" + path + "' for reading");

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("io: empty CSV '" + path + "'");
  if (line != "t,x" && line.rfind("t,x,", 0) != 0)
    throw std::runtime_error("io: '" + path + "' is not a t,x series CSV");

  // extra columns (trajectory r, psi) are ignored
  std::vector<double> times, values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    if (c1 == std::string::npos) throw std::runtime_error("io: malformed row in '" + path + "'");
    auto c2 = line.find(',', c1 + 1);
    if (c2 == std::string::npos) c2 = line.size();
    times.push_back(parse_double(std::string_view(line).substr(0, c1), path));
    values.push_back(parse_double(std::string_view(line).substr(c1 + 1, c2 - c1 - 1), path));
  }
  if (values.empty()) throw std::runtime_error("io: no samples in '" + path + "'");

  double rate = 1.0;
  if (times.size() > 1) {
    const double span = times.back() - times.front();
    if (span <= 0.0) throw std::runtime_error("io: non-increasing time column in '" + path + "'");
    rate = static_cast<double>(times.size() - 1) / span;
  }
  return TimeSeries(std::move(values), rate, times.front());
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path, bool include_psi) {
  auto out = open_out(path);
  out << (include_psi ? "t,x,r,psi\n" : "t,x,r\n");
  for (std::size_t k = 0; k < traj.x.size(); ++k) {
    out << format_double(traj.x.time_at(k)) << ',' << format_double(traj.x.samples[k]) << ','
        << format_double(traj.r.samples[k]);
    if (include_psi) out << ',' << format_double(traj.psi.samples[k]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("io: write failed for '" + path + "'");
}

void write_spectrum_csv(const Spectrum& spec, const std::string& path) {
  auto out = open_out(path);
  out << "f_hz,psd\n";
  for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
    out << format_double(spec.freqs[k]) << ',' << format_double(spec.psd[k]) << '\n';
  }
  if (!out) throw std::runtime_error("io: write failed for '" + path + "'");
}

void write_timeline_csv(const SlopeTimeline& tl, const std::string& path) {
  auto out = open_out(path);
  out << "t_s,slope\n";
  for (std::size_t k = 0; k < tl.times.size(); ++k) {
    out << format_double(tl.times[k]) << ',' << format_double(tl.slopes[k]) << '\n';
  }
  if (!out) throw std::runtime_error("io: write failed for '" + path + "'");
}

void write_modes_csv(const ModeSet& modes, const std::string& path) {
  auto out = open_out(path);
  out << "n1,n2,n3,f_hz\n";
  for (const Mode& m : modes.modes) {
    out << m.n1 << ',' << m.n2 << ',' << m.n3 << ',' << format_double(m.freq) << '\n';
  }
  if (!out) throw std::runtime_error("io: write failed for '" + path + "'");
}

void write_slopemap_csv(const SlopeMap& map, const std::string& path) {
  auto out = open_out(path);
  out << "N,K,slope_mean,slope_std,class\n";
  for (const SweepCell& c : map.cells) {
    out << c.n << ',' << format_double(c.coupling) << ',';
    if (c.ok) {
      out << format_double(c.slope_mean) << ',' << format_double(c.slope_std) << ','
          << noise_class_name(c.label);
    } else {
      out << "nan,nan,error";
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("io: write failed for '" + path + "'");
}

TimeSeries read_wav(const std::string& path, ChannelPolicy policy, WavInfo* info) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("io: cannot open '" + path + "' for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw std::runtime_error("io: '" + path + "' is not a RIFF/WAVE file");

  int channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::uint16_t format = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t len = rd_u32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + len > bytes.size()) throw std::runtime_error("io: truncated chunk in '" + path + "'");

    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (len < 16) throw std::runtime_error("io: malformed fmt chunk in '" + path + "'");
      format = rd_u16(bytes.data() + body);
      channels = rd_u16(bytes.data() + body + 2);
      rate = rd_u32(bytes.data() + body + 4);
      bits = rd_u16(bytes.data() + body + 14);
      if (format == 0xFFFE && len >= 40) format = rd_u16(bytes.data() + body + 24);  // extensible
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = len;
    }
    pos = body + len + (len & 1);  // chunks are word-aligned
  }

  if (channels == 0 || rate == 0) throw std::runtime_error("io: missing fmt chunk in '" + path + "'");
  if (data == nullptr) throw std::runtime_error("io: missing data chunk in '" + path + "'");
  if (channels > 2) throw std::runtime_error("io: unsupported channel count " + std::to_string(channels));

  const bool is_float = format == 3;
  if (!is_float && format != 1)
    throw std::runtime_error("io: unsupported WAV format code " + std::to_string(format) +
                             " (PCM and IEEE float only)");
  if (is_float && bits != 32)
    throw std::runtime_error("io: unsupported float WAV with " + std::to_string(bits) + " bits");
  if (!is_float && bits != 16 && bits != 24)
    throw std::runtime_error("io: unsupported PCM bit depth " + std::to_string(bits) +
                             " (16 and 24 only)");

  const std::size_t bytes_per = static_cast<std::size_t>(bits) / 8;
  const std::size_t frame = bytes_per * static_cast<std::size_t>(channels);
  const std::size_t frames = data_len / frame;
  if (frames == 0) throw std::runtime_error("io: no audio frames in '" + path + "'");

  auto decode = [&](std::size_t f, int ch) -> double {
    const unsigned char* p = data + f * frame + static_cast<std::size_t>(ch) * bytes_per;
    if (is_float) {
      float v = 0.0f;
      std::memcpy(&v, p, 4);
      return static_cast<double>(v);
    }
    if (bits == 16) {
      const auto v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
      return static_cast<double>(v) / 32768.0;
    }
    std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
    if (v & 0x800000) v |= ~0xFFFFFF;  // sign-extend 24-bit
    return static_cast<double>(v) / 8388608.0;
  };

  std::vector<double> samples(frames);
  if (channels == 1) {
    for (std::size_t f = 0; f < frames; ++f) samples[f] = decode(f, 0);
  } else {
    switch (policy) {
      case ChannelPolicy::mix_mean:
        for (std::size_t f = 0; f < frames; ++f) samples[f] = 0.5 * (decode(f, 0) + decode(f, 1));
        break;
      case ChannelPolicy::left:
        for (std::size_t f = 0; f < frames; ++f) samples[f] = decode(f, 0);
        break;
      case ChannelPolicy::right:
        for (std::size_t f = 0; f < frames; ++f) samples[f] = decode(f, 1);
        break;
    }
  }

  if (info != nullptr) *info = WavInfo{channels, bits, is_float};
  return TimeSeries(std::move(samples), static_cast<double>(rate));
}

void write_wav(const TimeSeries& ts, const std::string& path, WavEncoding enc) {
  const auto rate = static_cast<std::uint32_t>(std::llround(ts.rate));
  if (rate == 0) throw std::runtime_error("io: WAV needs an integer sample rate >= 1");

  const bool f32 = enc == WavEncoding::float32;
  const std::uint16_t bits = f32 ? 32 : 16;
  const std::uint16_t block = static_cast<std::uint16_t>(bits / 8);
  const auto data_len = static_cast<std::uint32_t>(ts.size() * block);

  auto out = open_out(path, std::ios::binary);
  out.write("RIFF", 4);
  wr_u32(out, 36 + data_len);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  wr_u32(out, 16);
  wr_u16(out, f32 ? 3 : 1);
  wr_u16(out, 1);  // mono
  wr_u32(out, rate);
  wr_u32(out, rate * block);
  wr_u16(out, block);
  wr_u16(out, bits);
  out.write("data", 4);
  wr_u32(out, data_len);

  if (f32) {
    for (double v : ts.samples) {
      const auto x = static_cast<float>(v);
      char b[4];
      std::memcpy(b, &x, 4);
      out.write(b, 4);
    }
  } else {
    for (double v : ts.samples) {
      // scale matches the decoder's 1/32768 so the round trip is symmetric
      const long q = std::clamp(std::lround(std::clamp(v, -1.0, 1.0) * 32768.0), -32768l, 32767l);
      wr_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
  }
  if (!out) throw std::runtime_error("io: write failed for '" + path + "'");
}

}  // namespace pinkam
