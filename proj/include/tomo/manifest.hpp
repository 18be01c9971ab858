#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tomo {

inline constexpr const char* kArtifactVersion = "0.1.0";

std::string sha256_hex(const std::filesystem::path& path);

struct ManifestEntry {
    std::string path;  // relative to the manifest directory
    std::string role;  // ground_truth | recon | counts
    std::optional<std::string> algorithm;
    std::optional<double> n0;
    std::uint64_t seed = 0;
    std::string checksum;
    std::vector<std::uint64_t> item_seeds;
};

struct RunManifest {
    std::string artifact_version = kArtifactVersion;
    nlohmann::json config;
    nlohmann::json extra;
    std::vector<ManifestEntry> files;
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

void write_manifest(const RunManifest& m, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

/// Checks that every referenced file exists, is referenced once, and matches
/// its checksum. Returns one message per problem; empty means valid.
std::vector<std::string> verify_manifest(const RunManifest& m, const std::filesystem::path& dir);

}  // namespace tomo
