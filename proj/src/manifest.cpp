#include "vantage/manifest.hpp"

#include "vantage/error.hpp"
#include "vantage/ingestion.hpp"

#include <openssl/evp.h>

#include <array>

namespace vantage {

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::Io, "SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[md[i] >> 4];
        out += kHex[md[i] & 0xF];
    }
    return out;
}

Manifest::Manifest(std::string command) {
    doc_ = {{"tool", "vantage"},
            {"version", kToolVersion},
            {"command", std::move(command)},
            {"inputs", nlohmann::json::array()},
            {"outputs", nlohmann::json::array()},
            {"parameters", nlohmann::json::object()},
            {"diagnostics", nlohmann::json::object()},
            {"timing", nlohmann::json::object()},
            {"warnings", nlohmann::json::array()}};
}

void Manifest::add_input(std::string_view role, const std::filesystem::path& path) {
    const std::string bytes = ingest::read_file(path);
    doc_["inputs"].push_back({{"role", role},
                              {"path", path.string()},
                              {"bytes", bytes.size()},
                              {"sha256", sha256_hex(bytes)}});
}

void Manifest::add_output(std::string_view role, const std::filesystem::path& path) {
    const std::string bytes = ingest::read_file(path);
    doc_["outputs"].push_back({{"role", role},
                               {"path", path.string()},
                               {"bytes", bytes.size()},
                               {"sha256", sha256_hex(bytes)}});
}

void Manifest::add_warning(std::string_view message) { doc_["warnings"].push_back(message); }

void Manifest::write(const std::filesystem::path& path) const {
    ingest::write_file(path, doc_.dump(2) + "\n");
}

}  // namespace vantage
