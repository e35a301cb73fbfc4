#include "camsim/fuzz.hpp"

#include <sstream>

namespace camsim {

namespace {

const char kPool[] = "abcdef";
constexpr int kPoolSize = 6;

char pool_char(Rng& rng) { return kPool[rng.below(kPoolSize)]; }

void emit_class(Rng& rng, std::string& out) {
    out += '[';
    if (rng.chance(30)) out += '^';
    const int n = 1 + static_cast<int>(rng.below(4));
    for (int i = 0; i < n; ++i) {
        if (rng.chance(25)) {
            char lo = pool_char(rng);
            char hi = static_cast<char>(lo + static_cast<char>(rng.below(3)));
            out += lo;
            out += '-';
            out += hi;
        } else {
            out += pool_char(rng);
        }
    }
    out += ']';
}

// Grammar-guided generation. Leaves are literals or classes; inner nodes are
// concatenation, alternation and the repeat operators.
void emit(Rng& rng, std::string& out, int depth) {
    if (depth <= 0 || rng.chance(35)) {
        if (rng.chance(30))
            emit_class(rng, out);
        else
            out += pool_char(rng);
        return;
    }
    switch (rng.below(5)) {
        case 0: {  // concat
            const int n = 2 + static_cast<int>(rng.below(2));
            for (int i = 0; i < n; ++i) emit(rng, out, depth - 1);
            break;
        }
        case 1: {  // alternation
            out += '(';
            const int n = 2 + static_cast<int>(rng.below(2));
            for (int i = 0; i < n; ++i) {
                if (i) out += '|';
                emit(rng, out, depth - 1);
            }
            out += ')';
            break;
        }
        case 2:  // star needs a non-empty neighbour to keep the pattern useful
            out += pool_char(rng);
            out += '(';
            emit(rng, out, depth - 1);
            out += ")*";
            break;
        case 3:
            out += '(';
            emit(rng, out, depth - 1);
            out += ")+";
            break;
        default:
            out += pool_char(rng);
            out += '(';
            emit(rng, out, depth - 1);
            out += ")?";
            break;
    }
}

}  // namespace

std::string random_pattern(Rng& rng, int max_depth) {
    std::string out;
    emit(rng, out, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_depth))));
    return out;
}

std::vector<std::uint8_t> random_input(Rng& rng, std::size_t max_len, int bias_alphabet) {
    const std::size_t len = rng.below(max_len + 1);
    std::vector<std::uint8_t> out(len);
    for (auto& b : out) {
        // mostly pool symbols so patterns actually fire, some noise
        if (rng.chance(85))
            b = static_cast<std::uint8_t>(kPool[rng.below(
                static_cast<std::uint64_t>(std::min(bias_alphabet, kPoolSize)))]);
        else
            b = static_cast<std::uint8_t>(rng.below(256));
    }
    return out;
}

FuzzCase make_fuzz_case(std::uint64_t seed, std::size_t max_input_len) {
    Rng rng(seed);
    FuzzCase fc;
    fc.seed = seed;
    fc.pattern = random_pattern(rng);
    fc.input = random_input(rng, max_input_len);
    fc.all_input_starts = rng.chance(50);
    return fc;
}

std::string bytes_to_hex(const std::vector<std::uint8_t>& data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out += digits[b >> 4];
        out += digits[b & 0xf];
    }
    return out;
}

}  // namespace camsim
