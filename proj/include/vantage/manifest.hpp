// Run manifests: inputs with digests, parameters, outputs, timing, tallies.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace vantage {

inline constexpr std::string_view kToolVersion = "0.3.0";

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

class Manifest {
public:
    explicit Manifest(std::string command);

    /// Records path, size and SHA-256 of an input file.
    void add_input(std::string_view role, const std::filesystem::path& path);
    void add_output(std::string_view role, const std::filesystem::path& path);
    nlohmann::json& parameters() { return doc_["parameters"]; }
    nlohmann::json& diagnostics() { return doc_["diagnostics"]; }
    nlohmann::json& timing() { return doc_["timing"]; }
    void add_warning(std::string_view message);

    const nlohmann::json& json() const noexcept { return doc_; }
    void write(const std::filesystem::path& path) const;

private:
    nlohmann::json doc_;
};

}  // namespace vantage
