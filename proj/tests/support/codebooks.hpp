#pragma once

// Shared helpers for building fixture and randomized codebooks in tests.

#include <numeric>
#include <set>

#include "camsim/encoder.hpp"
#include "camsim/fuzz.hpp"

namespace camsim::testing {

inline AlphabetStats flat_stats(int alphabet_size) {
    AlphabetStats st;
    st.alphabet_size = alphabet_size;
    st.freq.assign(static_cast<std::size_t>(alphabet_size), 0);
    st.cooccur.assign(static_cast<std::size_t>(alphabet_size),
                      std::vector<std::int64_t>(static_cast<std::size_t>(alphabet_size), 0));
    st.avg_class_size_raw = Rational::of(1);
    st.avg_class_size_no = Rational::of(1);
    return st;
}

inline AlphabetStats random_stats(Rng& rng, int alphabet_size) {
    AlphabetStats st = flat_stats(alphabet_size);
    for (int i = 0; i < alphabet_size; ++i)
        st.freq[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rng.below(16));
    for (int i = 0; i < alphabet_size; ++i)
        for (int j = i; j < alphabet_size; ++j) {
            auto v = static_cast<std::int64_t>(rng.below(4));
            st.cooccur[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            st.cooccur[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
        }
    for (int i = 0; i < alphabet_size; ++i)
        st.cooccur[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
            st.freq[static_cast<std::size_t>(i)];
    return st;
}

// A valid scheme of the requested kind for the given alphabet.
inline Scheme scheme_of_kind(SchemeKind kind, int alphabet_size) {
    switch (kind) {
        case SchemeKind::OneZero: return select_scheme(alphabet_size, Rational::of(1), 256);
        case SchemeKind::MultiZeros: {
            Scheme s = select_scheme(std::max(alphabet_size, 17), Rational::of(1));
            if (alphabet_size <= 16) {
                // force the multi-zeros shape even for small alphabets
                s.kind = SchemeKind::MultiZeros;
                int len = 2;
                while (binomial(len, len / 2) < alphabet_size) ++len;
                s.code_length = len;
                s.zeros_per_code = len / 2;
                s.prefix_len = s.suffix_len = 0;
            }
            return s;
        }
        case SchemeKind::TwoZerosPrefix: {
            Scheme s;
            s.kind = SchemeKind::TwoZerosPrefix;
            s.suffix_len = 3;
            s.prefix_len = 2;
            while (binomial(s.prefix_len, 2) * s.suffix_len < alphabet_size) ++s.prefix_len;
            s.code_length = s.prefix_len + s.suffix_len;
            s.zeros_per_code = 3;
            return s;
        }
        case SchemeKind::OneZeroPrefix: {
            Scheme s;
            s.kind = SchemeKind::OneZeroPrefix;
            s.prefix_len = s.suffix_len = 1;
            while (s.prefix_len * s.suffix_len < alphabet_size) {
                if (s.prefix_len <= s.suffix_len)
                    ++s.prefix_len;
                else
                    ++s.suffix_len;
            }
            s.code_length = s.prefix_len + s.suffix_len;
            s.zeros_per_code = 2;
            return s;
        }
    }
    return {};
}

struct RandomCase {
    Codebook codebook;
    std::set<Symbol> members;  // stored set
    bool invert = false;
    SymbolClass original;
};

inline RandomCase random_compile_case(Rng& rng) {
    RandomCase rc;
    const SchemeKind kind = static_cast<SchemeKind>(rng.below(4));
    const int max_a = kind == SchemeKind::OneZero ? 16 : 256;
    const int a = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_a - 1)));
    AlphabetStats stats = random_stats(rng, a);
    rc.codebook = cluster_symbols(stats, scheme_of_kind(kind, a));

    SymbolClass cls;
    cls.negated = rng.chance(30);
    const int want = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(
                             rng.chance(80) ? std::min(a, 24) : a)));
    while (static_cast<int>(cls.members.size()) < want)
        cls.members.insert(static_cast<Symbol>(rng.below(static_cast<std::uint64_t>(a))));
    if (cls.effective_size(a) == 0) cls.negated = false;  // avoid the empty class
    rc.original = cls;
    auto [members, invert] = apply_negation_opt(cls, a);
    rc.members = std::move(members);
    rc.invert = invert;
    return rc;
}

}  // namespace camsim::testing
