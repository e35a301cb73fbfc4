#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "camsim/bits.hpp"
#include "camsim/nfa.hpp"

namespace camsim {

// Exact average used for the scheme decision; "average class size == 1" must
// distinguish 1 from 1.006.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational of(std::int64_t n, std::int64_t d = 1) { return {n, d}; }
    double to_double() const { return den == 0 ? 0.0 : double(num) / double(den); }
    bool is_one() const { return num == den && den != 0; }
    // ceil(num/den) for nonnegative values.
    std::int64_t ceil() const { return den == 0 ? 0 : (num + den - 1) / den; }
};

struct AlphabetStats {
    int alphabet_size = 256;
    Rational avg_class_size_raw;
    Rational avg_class_size_no;                 // after negation optimization
    std::vector<std::int64_t> freq;             // per symbol, over post-NO classes
    std::vector<std::vector<std::int64_t>> cooccur;  // symmetric, cooccur[x][x] == freq[x]
};

enum class SchemeKind { OneZero, MultiZeros, TwoZerosPrefix, OneZeroPrefix };

const char* scheme_kind_name(SchemeKind k);
SchemeKind scheme_kind_of_name(const std::string& name);

struct Scheme {
    SchemeKind kind = SchemeKind::OneZero;
    int code_length = 0;
    int prefix_len = 0;   // prefix kinds only
    int suffix_len = 0;   // prefix kinds only
    int zeros_per_code = 1;

    std::string summary() const;
};

struct Codebook {
    Scheme scheme;
    int alphabet_size = 0;
    std::vector<Code> code_of;   // indexed by symbol
    std::vector<int> cluster_of; // prefix kinds; -1 elsewhere

    Code code(Symbol s) const;
};

// Unit of state-matching storage: a compressed code plus its owner state.
// `invert` flips the state-level match result (negation optimization).
struct CamEntry {
    Code code;
    StateId owner = 0;
    bool invert = false;
};

struct CompiledNfa {
    Codebook codebook;
    std::vector<std::vector<CamEntry>> entries_of;  // per state
    std::vector<bool> invert_of;                    // per state

    std::size_t total_entries() const;
};

// Per-row input-encoder table: logical code padded to 32 bits plus the mask
// of valid bits.
struct EncoderTable {
    int width = 0;
    std::uint32_t mask = 0;
    std::vector<std::uint32_t> rows;  // one per symbol
};

inline constexpr int kCamRows = 16;
inline constexpr int kMaxCodeLength = 32;

// n choose k without overflow for the ranges used here (saturates).
std::int64_t binomial(int n, int k);

// Statistics over the negation-optimized classes.
AlphabetStats analyze(const HomogeneousNfa& nfa);

// Store the smaller of (members, complement); invert=true iff the complement
// was chosen; ties keep the class as-is.
std::pair<std::set<Symbol>, bool> apply_negation_opt(const SymbolClass& cls,
                                                     int alphabet_size);

// Scheme decision: One-Zero for tiny alphabets, Multi-Zeros when every class
// is a singleton, otherwise the shorter of the swept Two-Zeros-Prefix length
// and the 2*ceil(sqrt(A)) One-Zero-Prefix length.
Scheme select_scheme(int alphabet_size, Rational avg_class_size,
                     int cam_rows = kCamRows, int max_len = kMaxCodeLength);

// Greedy frequency/co-occurrence clustering plus deterministic code
// assignment (zero positions enumerated lexicographically).
Codebook cluster_symbols(const AlphabetStats& stats, const Scheme& scheme);

Code encode_symbol(const Codebook& codebook, Symbol s);

// Exact cover of the effective member set: suffix compression per cluster,
// then the prefix-compression pass where the combinatorial number rule keeps
// the merge exact.
std::vector<CamEntry> compile_class(const Codebook& codebook,
                                    const std::set<Symbol>& members, bool invert,
                                    StateId owner = 0);

EncoderTable build_encoder_table(const Codebook& codebook);

// Negation optimization at entry level: compiles the class both ways when the
// complement looks smaller and keeps whichever needs fewer CAM entries
// (ties stay non-inverted).
std::pair<std::vector<CamEntry>, bool> compile_state(const Codebook& codebook,
                                                     const SymbolClass& cls,
                                                     StateId owner = 0);

// analyze + select + cluster + compile for every state.
CompiledNfa compile_nfa(const HomogeneousNfa& nfa);

std::string codebook_to_json(const CompiledNfa& compiled);
CompiledNfa codebook_from_json(const std::string& text);

}  // namespace camsim
