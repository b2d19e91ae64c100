#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "enf/pipeline.hpp"

namespace enf::cli {

inline constexpr int kManifestSchema = 1;

// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

nlohmann::json config_to_json(const PipelineConfig& config);

// Wall-clock per named stage, in call order.
class StageTimer {
 public:
  template <typename Fn>
  auto time(const std::string& stage, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      stages_.emplace_back(stage, elapsed(t0));
    } else {
      auto out = fn();
      stages_.emplace_back(stage, elapsed(t0));
      return out;
    }
  }
  nlohmann::json to_json() const;

 private:
  static double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  std::vector<std::pair<std::string, double>> stages_;
};

struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  nlohmann::json stages = nlohmann::json::array();

  nlohmann::json to_json() const;
};

// <output>.manifest.json next to the first output.
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace enf::cli
