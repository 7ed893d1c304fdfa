#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace kinlim {

inline constexpr const char* kToolVersion = "1.0.0";

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);
std::string utc_timestamp();

struct RunManifest {
  std::string subcommand;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::string version = kToolVersion;
  std::vector<std::pair<std::string, std::string>> inputs;   // path, sha256
  std::vector<std::pair<std::string, std::string>> outputs;  // file name, sha256
  std::string started, finished;

  nlohmann::json to_json() const;
};

}  // namespace kinlim
