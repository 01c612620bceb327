#include "tracker/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace tracker {

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot digest missing file: " + path.string());
  std::uint64_t h = 0xCBF29CE484222325ull;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= std::uint8_t(buf[i]);
      h *= 0x100000001B3ull;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void RunManifest::add_output(const std::filesystem::path& path) {
  outputs.emplace_back(path.filename().string(), file_digest(path));
}

void write_manifest(const RunManifest& m, const std::filesystem::path& out_dir) {
  nlohmann::json j;
  j["tool"] = "tracker";
  j["version"] = kToolVersion;
  j["command"] = m.command;
  j["config"] = m.resolved_config;
  j["seed"] = m.master_seed;
  j["rng"] = m.rng;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  nlohmann::json outs = nlohmann::json::object();
  for (const auto& [name, digest] : m.outputs) outs[name] = digest;
  j["outputs"] = outs;

  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest in " + out_dir.string());
  out << j.dump(2) << '\n';
}

}  // namespace tracker
