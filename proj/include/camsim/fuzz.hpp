#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "camsim/nfa.hpp"

namespace camsim {

// Deterministic splitmix64 stream; stable across platforms, unlike the
// standard distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
    bool chance(int percent) { return below(100) < static_cast<std::uint64_t>(percent); }

private:
    std::uint64_t state_;
};

// Random pattern over a small literal pool plus classes/negations, depth
// limited, never matching only the empty string.
std::string random_pattern(Rng& rng, int max_depth = 6);

std::vector<std::uint8_t> random_input(Rng& rng, std::size_t max_len,
                                       int bias_alphabet = 8);

struct FuzzCase {
    std::uint64_t seed = 0;
    std::string pattern;
    std::vector<std::uint8_t> input;
    bool all_input_starts = false;
};

FuzzCase make_fuzz_case(std::uint64_t seed, std::size_t max_input_len = 64);

std::string bytes_to_hex(const std::vector<std::uint8_t>& data);

}  // namespace camsim
