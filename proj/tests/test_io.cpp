#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "core/io.hpp"
#include "support/helpers.hpp"

using namespace pinkam;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("pinkam_io_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

// Minimal hand-rolled 24-bit stereo WAV for the decoder.
void write_wav24_stereo(const std::string& path, const std::vector<std::int32_t>& left,
                        const std::vector<std::int32_t>& right, std::uint32_t rate) {
  std::ofstream out(path, std::ios::binary);
  auto u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto u16 = [&](std::uint16_t v) { out.write(reinterpret_cast<const char*>(&v), 2); };
  const std::uint32_t data_len = static_cast<std::uint32_t>(left.size()) * 6;
  out.write("RIFF", 4);
  u32(36 + data_len);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  u32(16);
  u16(1);
  u16(2);
  u32(rate);
  u32(rate * 6);
  u16(6);
  u16(24);
  out.write("data", 4);
  u32(data_len);
  auto s24 = [&](std::int32_t v) {
    const char b[3] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                       static_cast<char>((v >> 16) & 0xFF)};
    out.write(b, 3);
  };
  for (std::size_t k = 0; k < left.size(); ++k) {
    s24(left[k]);
    s24(right[k]);
  }
}

}  // namespace

TEST_CASE("series CSV round-trips bit-exactly") {
  TempDir dir;
  std::vector<double> tricky = {0.1,       1.0 / 3.0,     -2.5e-17, 12345.6789,
                                1e300,     -1.0000000001, 0.0,      5e-324,
                                3.14159265358979312, -0.75};
  const TimeSeries ts(std::move(tricky), 44100.0, 0.25);
  const std::string path = dir.file("series.csv");
  write_series_csv(ts, path);
  const TimeSeries back = read_series_csv(path);
  REQUIRE(back.size() == ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    CHECK(back.samples[k] == ts.samples[k]);  // exact, not approximate
  }
  CHECK(back.origin == ts.origin);

  // writing the read-back series reproduces the file byte for byte
  const std::string path2 = dir.file("series2.csv");
  write_series_csv(back, path2);
  std::ifstream a(path), b(path2);
  const std::string s1((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  const std::string s2((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(s1 == s2);
}

TEST_CASE("trajectory CSVs read back as the x column") {
  TempDir dir;
  {
    std::ofstream out(dir.file("traj.csv"));
    out << "t,x,r\n0,0.25,0.9\n0.1,-0.5,0.8\n";
  }
  const TimeSeries ts = read_series_csv(dir.file("traj.csv"));
  CHECK(ts.samples == std::vector<double>{0.25, -0.5});
  CHECK(ts.rate == doctest::Approx(10.0));
}

TEST_CASE("series CSV errors") {
  TempDir dir;
  CHECK_THROWS_AS(read_series_csv(dir.file("missing.csv")), std::runtime_error);
  {
    std::ofstream out(dir.file("bad.csv"));
    out << "foo,bar\n1,2\n";
  }
  CHECK_THROWS_AS(read_series_csv(dir.file("bad.csv")), std::runtime_error);
  {
    std::ofstream out(dir.file("malformed.csv"));
    out << "t,x\n0.0,not_a_number\n";
  }
  CHECK_THROWS_AS(read_series_csv(dir.file("malformed.csv")), std::runtime_error);
}

TEST_CASE("float32 WAV round-trips samples exactly at float precision") {
  TempDir dir;
  TimeSeries ts = testutil::white_noise(4410, 44100.0, 8);
  for (double& v : ts.samples) v *= 0.25;
  const std::string path = dir.file("f32.wav");
  write_wav(ts, path, WavEncoding::float32);
  WavInfo info;
  const TimeSeries back = read_wav(path, ChannelPolicy::mix_mean, &info);
  CHECK(info.bits_per_sample == 32);
  CHECK(info.is_float);
  CHECK(back.rate == doctest::Approx(44100.0));
  REQUIRE(back.size() == ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    CHECK(back.samples[k] == doctest::Approx(ts.samples[k]).epsilon(1e-7));
  }
}

TEST_CASE("pcm16 WAV quantizes to within one LSB") {
  TempDir dir;
  TimeSeries ts = testutil::white_noise(1000, 8000.0, 9);
  double peak = 0.0;
  for (double v : ts.samples) peak = std::max(peak, std::abs(v));
  for (double& v : ts.samples) v /= peak;
  const std::string path = dir.file("p16.wav");
  write_wav(ts, path, WavEncoding::pcm16);
  const TimeSeries back = read_wav(path, ChannelPolicy::mix_mean);
  REQUIRE(back.size() == ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    CHECK(std::abs(back.samples[k] - ts.samples[k]) < 1.0 / 32000.0);
  }
}

TEST_CASE("24-bit stereo decodes with every channel policy") {
  TempDir dir;
  const std::vector<std::int32_t> left = {0, 1 << 22, -(1 << 22), 8388607, -8388608};
  const std::vector<std::int32_t> right = {

      8388607, 0, 1 << 21, -(1 << 21), 0};
  const std::string path = dir.file("s24.wav");
  write_wav24_stereo(path, left, right, 48000);

  WavInfo info;
  const TimeSeries l = read_wav(path, ChannelPolicy::left, &info);
  CHECK(info.channels == 2);
  CHECK(info.bits_per_sample == 24);
  CHECK(l.samples[1] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(l.samples[2] == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(l.samples[4] == doctest::Approx(-1.0));

  const TimeSeries r = read_wav(path, ChannelPolicy::right, &info);
  CHECK(r.samples[0] == doctest::Approx(8388607.0 / 8388608.0));

  const TimeSeries m = read_wav(path, ChannelPolicy::mix_mean, &info);
  for (std::size_t k = 0; k < m.size(); ++k) {
    CHECK(m.samples[k] == doctest::Approx(0.5 * (l.samples[k] + r.samples[k])));
  }
}

TEST_CASE("unsupported WAV features are named in the error") {
  TempDir dir;
  // 8-bit PCM header
  {
    std::ofstream out(dir.file("u8.wav"), std::ios::binary);
    auto u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto u16 = [&](std::uint16_t v) { out.write(reinterpret_cast<const char*>(&v), 2); };
    out.write("RIFF", 4);
    u32(36 + 4);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    u32(16);
    u16(1);
    u16(1);
    u32(8000);
    u32(8000);
    u16(1);
    u16(8);
    out.write("data", 4);
    u32(4);
    u32(0x80808080);
  }
  CHECK_THROWS_WITH_AS(read_wav(dir.file("u8.wav"), ChannelPolicy::mix_mean),
                       doctest::Contains("bit depth 8"), std::runtime_error);
  {
    std::ofstream out(dir.file("noise.wav"), std::ios::binary);
    out << "not a wav at all";
  }
  CHECK_THROWS_AS(read_wav(dir.file("noise.wav"), ChannelPolicy::mix_mean), std::runtime_error);
}

TEST_CASE("slope of a synthetic series survives CSV and WAV round trips") {
  TempDir dir;
  TimeSeries pink = testutil::shaped_noise(1.0, 1 << 15, 1000.0, 77);
  double peak = 0.0;
  for (double v : pink.samples) peak = std::max(peak, std::abs(v));
  for (double& v : pink.samples) v /= peak;

  const double base = testutil::fitted_slope(pink, 0.5, 100.0).slope;

  write_series_csv(pink, dir.file("pink.csv"));
  const double via_csv =
      testutil::fitted_slope(read_series_csv(dir.file("pink.csv")), 0.5, 100.0).slope;
  CHECK(std::abs(via_csv - base) < 0.02);

  write_wav(pink, dir.file("pink.wav"), WavEncoding::pcm16);
  const double via_wav =
      testutil::fitted_slope(read_wav(dir.file("pink.wav"), ChannelPolicy::mix_mean), 0.5, 100.0).slope;
  CHECK(std::abs(via_wav - base) < 0.02);
}

TEST_CASE("other CSV writers emit the documented headers") {
  TempDir dir;

  Spectrum spec;
  spec.freqs = {1.0, 2.0};
  spec.psd = {0.5, 0.25};
  write_spectrum_csv(spec, dir.file("spec.csv"));
  std::ifstream in(dir.file("spec.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "f_hz,psd");
  std::getline(in, line);
  CHECK(line == "1,0.5");

  SlopeTimeline tl;
  tl.times = {60.0};
  tl.slopes = {-1.01};
  write_timeline_csv(tl, dir.file("tl.csv"));
  std::ifstream tin(dir.file("tl.csv"));
  std::getline(tin, line);
  CHECK(line == "t_s,slope");

  ModeSet modes;
  modes.modes.push_back({1, 0, 0, 3.5});
  write_modes_csv(modes, dir.file("modes.csv"));
  std::ifstream min(dir.file("modes.csv"));
  std::getline(min, line);
  CHECK(line == "n1,n2,n3,f_hz");
  std::getline(min, line);
  CHECK(line == "1,0,0,3.5");

  SlopeMap map;
  map.n_count = 1;
  map.k_count = 2;
  SweepCell ok_cell;
  ok_cell.n = 20;
  ok_cell.coupling = 20.0;
  ok_cell.ok = true;
  ok_cell.slope_mean = -1.0;
  ok_cell.slope_std = 0.1;
  ok_cell.label = NoiseClass::pink;
  SweepCell bad_cell;
  bad_cell.n = 20;
  bad_cell.coupling = 30.0;
  bad_cell.ok = false;
  bad_cell.error = "boom";
  map.cells = {ok_cell, bad_cell};
  write_slopemap_csv(map, dir.file("map.csv"));
  std::ifstream sin_(dir.file("map.csv"));
  std::getline(sin_, line);
  CHECK(line == "N,K,slope_mean,slope_std,class");
  std::getline(sin_, line);
  CHECK(line == "20,20,-1,0.1,pink");
  std::getline(sin_, line);
  CHECK(line == "20,30,nan,nan,error");
}

TEST_CASE("trajectory CSV includes psi only on request") {
  TempDir dir;
  Trajectory traj;
  traj.x = TimeSeries({0.1, 0.2}, 10.0);
  traj.r = TimeSeries({0.9, 0.8}, 10.0);
  traj.psi = TimeSeries({0.0, 0.5}, 10.0);
  write_trajectory_csv(traj, dir.file("t.csv"), false);
  std::ifstream in(dir.file("t.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x,r");
  write_trajectory_csv(traj, dir.file("tp.csv"), true);
  std::ifstream pin(dir.file("tp.csv"));
  std::getline(pin, line);
  CHECK(line == "t,x,r,psi");
  std::getline(pin, line);
  CHECK(line == "0,0.1,0.9,0");
}
