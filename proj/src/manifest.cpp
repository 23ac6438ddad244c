// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "traitscan/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "traitscan/error.hpp"

namespace traitscan {
namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 init failed");
  }
  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) throw Error("sha256 update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1) throw Error("sha256 final failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += kHex[md[i] >> 4];
      out += kHex[md[i] & 15];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf;
  while (f) {
    f.read(buf.data(), buf.size());
    if (f.gcount() > 0) h.update(buf.data(), static_cast<std::size_t>(f.gcount()));
  }
  return h.hex();
}

Manifest Manifest::load(const std::filesystem::path& path) {
  Manifest m;
  std::ifstream f(path, std::ios::binary);
  if (!f) return m;
  try {
    const auto j = nlohmann::json::parse(f);
    m.version = j.at("version").get<std::string>();
    m.configs = j.at("configs").get<std::map<std::string, std::string>>();
    for (const auto& [name, s] : j.at("stages").items()) {
      StageRecord r;
      r.config_sha256 = s.at("config_sha256").get<std::string>();
      r.rng_seed = s.at("rng_seed").get<std::uint64_t>();
      r.inputs = s.at("inputs").get<std::map<std::string, std::string>>();
      r.outputs = s.at("outputs").get<std::map<std::string, std::string>>();
      m.stages[name] = std::move(r);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": malformed manifest: " + e.what());
  }
  return m;
}

std::string Manifest::to_json() const {
  nlohmann::json j;
  j["tool"] = "traitscan";
  j["version"] = version;
  // Only configs some stage still refers to.
  j["configs"] = nlohmann::json::object();
  for (const auto& [name, r] : stages)
    if (const auto it = configs.find(r.config_sha256); it != configs.end()) j["configs"][it->first] = it->second;
  j["stages"] = nlohmann::json::object();
  for (const auto& [name, r] : stages)
    j["stages"][name] = {{"config_sha256", r.config_sha256},
                         {"rng_seed", r.rng_seed},
                         {"inputs", r.inputs},
                         {"outputs", r.outputs}};
  return j.dump(2) + "\n";
}

void Manifest::save(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << to_json();
}

}  // namespace traitscan
