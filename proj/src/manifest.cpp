#include "camsim/manifest.hpp"

#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace camsim {

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a_hex(const std::string& data) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(data);
    return os.str();
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["inputs"] = input_hashes;
    j["scheme"] = scheme_summary;
    j["modes"] = mode_stats;
    j["seed"] = seed;
    return j.dump();
}

RunManifest RunManifest::from_json(const std::string& text) {
    auto j = nlohmann::ordered_json::parse(text);
    RunManifest m;
    m.input_hashes = j.value("inputs", std::map<std::string, std::string>{});
    m.scheme_summary = j.value("scheme", std::string());
    m.mode_stats = j.value("modes", std::string());
    m.seed = j.value("seed", 0ull);
    return m;
}

}  // namespace camsim
