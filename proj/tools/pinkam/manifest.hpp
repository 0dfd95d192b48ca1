#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include <json.hpp>

namespace manifest {

// FNV-1a over the file bytes; identifies inputs in run manifests.
std::uint64_t fnv1a64_file(const std::string& path);

std::string hex64(std::uint64_t v);

/// Collects the resolved configuration and the produced files for one CLI
/// run, then writes manifest.json atomically next to the outputs. Re-running
/// the same command with --config manifest.json reproduces the outputs.
class Writer {
 public:
  Writer(std::string command, std::string out_dir);

  void set_config(nlohmann::json config) { config_ = std::move(config); }
  void set_seed(std::uint64_t seed) { seed_ = seed; has_seed_ = true; }
  void add_input(const std::string& path);
  void add_output(const std::string& path) { outputs_.push_back(path); }
  void set_extra(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }

  void write() const;

 private:
  std::string command_;
  std::string out_dir_;
  nlohmann::json config_;
  nlohmann::json inputs_ = nlohmann::json::array();
  std::vector<std::string> outputs_;
  nlohmann::json extra_ = nlohmann::json::object();
  std::uint64_t seed_ = 0;
  bool has_seed_ = false;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace manifest
