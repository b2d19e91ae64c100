#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include "enf/error.hpp"

namespace enf::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 context initialisation failed");
  }
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

nlohmann::json config_to_json(const PipelineConfig& c) {
  return {
      {"nominal_hz", c.nominal_hz},
      {"harmonic", c.harmonic},
      {"working_rate_hz", c.working_rate_hz},
      {"skip_seconds", c.skip_seconds},
      {"frame_seconds", c.frame_len_s},
      {"shift_seconds", c.shift_s},
      {"window", std::string(to_string(c.window))},
      {"kaiser_beta", c.kaiser_beta},
      {"estimator", std::string(to_string(c.estimator))},
      {"taps", c.taps},
      {"passband_hz", c.passband_hz},
      {"capon_order", c.capon_order},
      {"pad_factor", c.pad_factor},
      {"capon_refine", std::string(to_string(c.capon_refine))},
      {"stft_interpolate", c.stft_interpolate},
      {"threads", resolve_threads(c.threads)},
  };
}

nlohmann::json StageTimer::to_json() const {
  auto out = nlohmann::json::array();
  for (const auto& [name, s] : stages_) out.push_back({{"stage", name}, {"seconds", s}});
  return out;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kManifestSchema;
  j["tool"] = "enf";
  j["tool_version"] = ENF_VERSION_STRING;
  j["command"] = command;
  j["config"] = config;
  j["inputs"] = nlohmann::json::array();
  for (const auto& p : inputs) j["inputs"].push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  j["outputs"] = nlohmann::json::array();
  for (const auto& p : outputs) j["outputs"].push_back(p.string());
  j["stages"] = stages;
  return j;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".manifest.json");
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << manifest.to_json().dump(2) << '\n';
  if (!out) throw IoError("failed writing manifest " + path.string());
}

}  // namespace enf::cli
