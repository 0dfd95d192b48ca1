#include "manifest.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <pinkam/pinkam.h>

namespace manifest {

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("manifest: cannot read '" + path + "'");
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize k = 0; k < in.gcount(); ++k) {
      h ^= static_cast<unsigned char>(buf[k]);
      h *= 0x100000001b3ull;
    }
    if (!in) break;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Writer::Writer(std::string command, std::string out_dir)
    : command_(std::move(command)), out_dir_(std::move(out_dir)) {}

void Writer::add_input(const std::string& path) {
  inputs_.push_back({{"path", path}, {"fnv1a64", hex64(fnv1a64_file(path))}});
}

void Writer::write() const {
  nlohmann::json doc;
  doc["command"] = command_;
  doc["tool_version"] = pinkam_version();
  doc["config"] = config_;
  if (has_seed_) doc["master_seed"] = seed_;
  doc["inputs"] = inputs_;
  doc["outputs"] = outputs_;
  for (const auto& [k, v] : extra_.items()) doc[k] = v;
  doc["wall_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();

  const auto final_path = std::filesystem::path(out_dir_) / "manifest.json";
  const auto tmp_path = std::filesystem::path(out_dir_) / "manifest.json.tmp";
  {
    std::ofstream out(tmp_path);
    if (!out) throw std::runtime_error("manifest: cannot write '" + tmp_path.string() + "'");
    out << doc.dump(2) << "\n";
  }
  std::filesystem::rename(tmp_path, final_path);
}

}  // namespace manifest
