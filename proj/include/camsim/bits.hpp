#pragma once

#include <bit>
#include <bitset>
#include <cstdint>
#include <string>

#include "camsim/errors.hpp"

namespace camsim {

// A fixed-width bit string of up to 32 bits. Position 0 is the leftmost
// character of the printed form and bit 0 of the packed word.
struct Code {
    std::uint32_t bits = 0;
    int width = 0;

    std::uint32_t mask() const {
        return width >= 32 ? 0xffffffffu : ((1u << width) - 1u);
    }
    bool get(int pos) const { return (bits >> pos) & 1u; }
    void set(int pos, bool v) {
        if (v)
            bits |= (1u << pos);
        else
            bits &= ~(1u << pos);
    }
    int ones() const { return std::popcount(bits & mask()); }
    int zeros() const { return width - ones(); }

    std::string to_string() const {
        std::string s(static_cast<std::size_t>(width), '0');
        for (int i = 0; i < width; ++i)
            if (get(i)) s[static_cast<std::size_t>(i)] = '1';
        return s;
    }

    static Code from_string(const std::string& s) {
        if (s.size() > 32) throw Error::input("code wider than 32 bits: " + s);
        Code c{0, static_cast<int>(s.size())};
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1')
                c.bits |= (1u << i);
            else if (s[i] != '0')
                throw Error::input("bad code character in '" + s + "'");
        }
        return c;
    }

    friend bool operator==(const Code&, const Code&) = default;
};

// All-ones code of the given width.
inline Code ones_code(int width) {
    Code c{0, width};
    c.bits = c.mask();
    return c;
}

// Entry matches the input iff every 1-bit of the entry is 1 in the input;
// 0-bits of the entry are don't-cares.
inline bool subset_match(std::uint32_t entry, std::uint32_t input, std::uint32_t mask) {
    return (entry & ~input & mask) == 0;
}

// One bit per CAM column in a 256-column sub-array.
using ColumnSet = std::bitset<256>;

}  // namespace camsim
