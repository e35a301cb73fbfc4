#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace camsim {

inline constexpr const char* kToolName = "camsim";
inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a, used to fingerprint inputs and artifacts for the reproducibility
// contract (not for security).
std::uint64_t fnv1a(const std::string& data);
std::string fnv1a_hex(const std::string& data);

// Embedded in every artifact; identical manifests imply identical outputs.
struct RunManifest {
    std::map<std::string, std::string> input_hashes;
    std::string scheme_summary;
    std::string mode_stats;
    std::uint64_t seed = 0;

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);
};

}  // namespace camsim
