#include "tomo/manifest.hpp"

#include "tomo/dtns.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <set>

namespace tomo {

std::string sha256_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for hashing: " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: digest initialisation failed");
    }
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

nlohmann::json to_json(const RunManifest& m) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : m.files) {
        nlohmann::json e{{"path", f.path}, {"role", f.role}, {"seed", f.seed}, {"checksum", f.checksum}};
        e["algorithm"] = f.algorithm ? nlohmann::json(*f.algorithm) : nlohmann::json(nullptr);
        e["n0"] = f.n0 ? nlohmann::json(*f.n0) : nlohmann::json(nullptr);
        if (!f.item_seeds.empty()) e["item_seeds"] = f.item_seeds;
        files.push_back(std::move(e));
    }
    nlohmann::json j{{"artifact_version", m.artifact_version}, {"config", m.config}, {"files", files}};
    if (!m.extra.is_null()) j["extra"] = m.extra;
    return j;
}

RunManifest manifest_from_json(const nlohmann::json& j) {
    RunManifest m;
    m.artifact_version = j.at("artifact_version").get<std::string>();
    m.config = j.value("config", nlohmann::json::object());
    if (j.contains("extra")) m.extra = j.at("extra");
    for (const auto& e : j.at("files")) {
        ManifestEntry f;
        f.path = e.at("path").get<std::string>();
        f.role = e.at("role").get<std::string>();
        if (e.contains("algorithm") && !e["algorithm"].is_null()) f.algorithm = e["algorithm"].get<std::string>();
        if (e.contains("n0") && !e["n0"].is_null()) f.n0 = e["n0"].get<double>();
        f.seed = e.value("seed", std::uint64_t{0});
        f.checksum = e.at("checksum").get<std::string>();
        if (e.contains("item_seeds")) f.item_seeds = e["item_seeds"].get<std::vector<std::uint64_t>>();
        m.files.push_back(std::move(f));
    }
    return m;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << to_json(m).dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return manifest_from_json(nlohmann::json::parse(in));
}

std::vector<std::string> verify_manifest(const RunManifest& m, const std::filesystem::path& dir) {
    std::vector<std::string> problems;
    std::set<std::string> seen;
    for (const auto& f : m.files) {
        if (!seen.insert(f.path).second) {
            problems.push_back("referenced more than once: " + f.path);
            continue;
        }
        const auto full = dir / f.path;
        if (!std::filesystem::exists(full)) {
            problems.push_back("missing file: " + f.path);
            continue;
        }
        if (sha256_hex(full) != f.checksum) problems.push_back("checksum mismatch: " + f.path);
    }
    return problems;
}

}  // namespace tomo
