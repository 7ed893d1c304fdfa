#include "kinlim/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <memory>
#include <stdexcept>

#include "kinlim/output.hpp"

namespace kinlim {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
    throw std::runtime_error("sha256: digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_text(path)); }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["manifest_version"] = 1;
  j["tool"] = "kinlim";
  j["version"] = version;
  j["subcommand"] = subcommand;
  j["seed"] = seed;
  j["config"] = config;
  j["inputs"] = nlohmann::json::array();
  for (const auto& [p, h] : inputs) j["inputs"].push_back({{"path", p}, {"sha256", h}});
  j["outputs"] = nlohmann::json::array();
  for (const auto& [p, h] : outputs) j["outputs"].push_back({{"file", p}, {"sha256", h}});
  j["started"] = started;
  j["finished"] = finished;
  return j;
}

}  // namespace kinlim
