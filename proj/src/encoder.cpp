#include "camsim/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "camsim/errors.hpp"

namespace camsim {

using ordered_json = nlohmann::ordered_json;

const char* scheme_kind_name(SchemeKind k) {
    switch (k) {
        case SchemeKind::OneZero: return "one-zero";
        case SchemeKind::MultiZeros: return "multi-zeros";
        case SchemeKind::TwoZerosPrefix: return "two-zeros-prefix";
        case SchemeKind::OneZeroPrefix: return "one-zero-prefix";
    }
    return "?";
}

SchemeKind scheme_kind_of_name(const std::string& name) {
    if (name == "one-zero") return SchemeKind::OneZero;
    if (name == "multi-zeros") return SchemeKind::MultiZeros;
    if (name == "two-zeros-prefix") return SchemeKind::TwoZerosPrefix;
    if (name == "one-zero-prefix") return SchemeKind::OneZeroPrefix;
    throw Error::input("unknown scheme kind '" + name + "'");
}

std::string Scheme::summary() const {
    std::ostringstream os;
    os << scheme_kind_name(kind) << " L=" << code_length;
    if (kind == SchemeKind::TwoZerosPrefix || kind == SchemeKind::OneZeroPrefix)
        os << " (lp=" << prefix_len << ", ls=" << suffix_len << ")";
    return os.str();
}

Code Codebook::code(Symbol s) const {
    if (s < 0 || s >= alphabet_size)
        throw Error::input("symbol " + std::to_string(s) + " outside alphabet");
    return code_of[static_cast<std::size_t>(s)];
}

std::size_t CompiledNfa::total_entries() const {
    std::size_t n = 0;
    for (const auto& e : entries_of) n += e.size();
    return n;
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > (std::int64_t{1} << 40)) return std::int64_t{1} << 40;  // saturate
    }
    return r;
}

std::pair<std::set<Symbol>, bool> apply_negation_opt(const SymbolClass& cls,
                                                     int alphabet_size) {
    std::set<Symbol> accepted = cls.effective(alphabet_size);
    std::set<Symbol> complement;
    for (Symbol s = 0; s < alphabet_size; ++s)
        if (!accepted.count(s)) complement.insert(s);
    if (complement.size() < accepted.size()) return {std::move(complement), true};
    return {std::move(accepted), false};
}

AlphabetStats analyze(const HomogeneousNfa& nfa) {
    AlphabetStats st;
    st.alphabet_size = nfa.alphabet_size;
    st.freq.assign(static_cast<std::size_t>(st.alphabet_size), 0);
    st.cooccur.assign(static_cast<std::size_t>(st.alphabet_size),
                      std::vector<std::int64_t>(static_cast<std::size_t>(st.alphabet_size), 0));
    std::int64_t raw_sum = 0;
    std::int64_t no_sum = 0;
    for (const Ste& s : nfa.states) {
        raw_sum += static_cast<std::int64_t>(s.cls.effective_size(nfa.alphabet_size));
        auto [members, invert] = apply_negation_opt(s.cls, nfa.alphabet_size);
        (void)invert;
        no_sum += static_cast<std::int64_t>(members.size());
        for (Symbol a : members) {
            for (Symbol b : members)
                st.cooccur[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += 1;
            st.freq[static_cast<std::size_t>(a)] += 1;
        }
    }
    std::int64_t n = nfa.size() > 0 ? nfa.size() : 1;
    st.avg_class_size_raw = Rational::of(raw_sum, n);
    st.avg_class_size_no = Rational::of(no_sum, n);
    return st;
}

namespace {

// Smallest L with C(L, floor(L/2)) >= A.
int multi_zeros_length(int alphabet_size) {
    for (int len = 1; len <= kMaxCodeLength; ++len)
        if (binomial(len, len / 2) >= alphabet_size) return len;
    return kMaxCodeLength + 1;
}

// Smallest lp with C(lp,2) * ls >= A.
int two_zeros_prefix_length(int alphabet_size, int suffix_len) {
    for (int lp = 2; lp <= kMaxCodeLength; ++lp)
        if (binomial(lp, 2) * suffix_len >= alphabet_size) return lp;
    return kMaxCodeLength + 1;
}

}  // namespace

Scheme select_scheme(int alphabet_size, Rational avg_class_size, int cam_rows,
                     int max_len) {
    if (alphabet_size < 1) throw Error::input("empty alphabet");
    Scheme sch;
    if (alphabet_size <= cam_rows) {
        sch.kind = SchemeKind::OneZero;
        sch.code_length = alphabet_size;
        sch.zeros_per_code = 1;
    } else if (avg_class_size.is_one()) {
        sch.kind = SchemeKind::MultiZeros;
        sch.code_length = multi_zeros_length(alphabet_size);
        sch.zeros_per_code = sch.code_length / 2;
    } else {
        const int ls_lo = std::max<std::int64_t>(2, avg_class_size.ceil());
        const int ls_hi = static_cast<int>(std::floor(std::sqrt(double(alphabet_size))));
        int best_len = kMaxCodeLength + 1;
        int best_lp = 0, best_ls = 0;
        for (int ls = ls_lo; ls <= ls_hi; ++ls) {
            int lp = two_zeros_prefix_length(alphabet_size, ls);
            if (lp + ls < best_len) {
                best_len = lp + ls;
                best_lp = lp;
                best_ls = ls;
            }
        }
        const int sqrt_len =
            2 * static_cast<int>(std::ceil(std::sqrt(double(alphabet_size))));
        if (ls_lo <= ls_hi && best_len < sqrt_len) {
            sch.kind = SchemeKind::TwoZerosPrefix;
            sch.code_length = best_len;
            sch.prefix_len = best_lp;
            sch.suffix_len = best_ls;
            sch.zeros_per_code = 3;
        } else {
            sch.kind = SchemeKind::OneZeroPrefix;
            sch.prefix_len = sch.suffix_len =
                static_cast<int>(std::ceil(std::sqrt(double(alphabet_size))));
            sch.code_length = sch.prefix_len + sch.suffix_len;
            sch.zeros_per_code = 2;
        }
    }
    if (sch.code_length > max_len)
        throw Error::input("unmappable alphabet: code length " +
                           std::to_string(sch.code_length) + " exceeds " +
                           std::to_string(max_len));
    return sch;
}

namespace {

// All width-bit codes with exactly `zeros` zeros, ordered lexicographically
// by zero-position tuple.
std::vector<Code> enumerate_fixed_zero_codes(int width, int zeros, std::size_t limit) {
    std::vector<Code> out;
    std::vector<int> pos(static_cast<std::size_t>(zeros));
    std::iota(pos.begin(), pos.end(), 0);
    while (true) {
        Code c = ones_code(width);
        for (int p : pos) c.set(p, false);
        out.push_back(c);
        if (out.size() >= limit) return out;
        // next combination
        int i = zeros - 1;
        while (i >= 0 && pos[static_cast<std::size_t>(i)] == width - zeros + i) --i;
        if (i < 0) return out;
        ++pos[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < zeros; ++j)
            pos[static_cast<std::size_t>(j)] = pos[static_cast<std::size_t>(j - 1)] + 1;
    }
}

Code concat_codes(const Code& prefix, const Code& suffix) {
    Code c{0, prefix.width + suffix.width};
    c.bits = prefix.bits | (suffix.bits << prefix.width);
    return c;
}

}  // namespace

Codebook cluster_symbols(const AlphabetStats& stats, const Scheme& scheme) {
    const int a = stats.alphabet_size;
    Codebook cb;
    cb.scheme = scheme;
    cb.alphabet_size = a;
    cb.code_of.resize(static_cast<std::size_t>(a));
    cb.cluster_of.assign(static_cast<std::size_t>(a), -1);

    switch (scheme.kind) {
        case SchemeKind::OneZero: {
            for (Symbol s = 0; s < a; ++s) {
                Code c = ones_code(scheme.code_length);
                c.set(s, false);
                cb.code_of[static_cast<std::size_t>(s)] = c;
            }
            return cb;
        }
        case SchemeKind::MultiZeros: {
            auto codes = enumerate_fixed_zero_codes(scheme.code_length,
                                                    scheme.zeros_per_code,
                                                    static_cast<std::size_t>(a));
            if (codes.size() < static_cast<std::size_t>(a))
                throw Error::input("multi-zeros code space too small");
            for (Symbol s = 0; s < a; ++s)
                cb.code_of[static_cast<std::size_t>(s)] = codes[static_cast<std::size_t>(s)];
            return cb;
        }
        case SchemeKind::TwoZerosPrefix:
        case SchemeKind::OneZeroPrefix: break;
    }

    // Greedy clustering: seed with the most frequent undistributed symbol,
    // then grow by the symbol with the highest co-occurrence score against
    // the cluster; ties prefer higher frequency, then lower symbol value.
    const int capacity = scheme.suffix_len;
    std::vector<bool> placed(static_cast<std::size_t>(a), false);
    std::vector<std::vector<Symbol>> clusters;
    int remaining = a;
    while (remaining > 0) {
        Symbol seed = -1;
        for (Symbol s = 0; s < a; ++s) {
            if (placed[static_cast<std::size_t>(s)]) continue;
            if (seed < 0 || stats.freq[static_cast<std::size_t>(s)] >
                                stats.freq[static_cast<std::size_t>(seed)])
                seed = s;
        }
        std::vector<Symbol> cluster{seed};
        placed[static_cast<std::size_t>(seed)] = true;
        --remaining;
        while (static_cast<int>(cluster.size()) < capacity && remaining > 0) {
            Symbol best = -1;
            std::int64_t best_score = -1;
            for (Symbol x = 0; x < a; ++x) {
                if (placed[static_cast<std::size_t>(x)]) continue;
                std::int64_t score = 0;
                for (Symbol c : cluster)
                    score += stats.cooccur[static_cast<std::size_t>(x)]
                                          [static_cast<std::size_t>(c)];
                if (best < 0 || score > best_score ||
                    (score == best_score &&
                     stats.freq[static_cast<std::size_t>(x)] >
                         stats.freq[static_cast<std::size_t>(best)])) {
                    best = x;
                    best_score = score;
                }
            }
            cluster.push_back(best);
            placed[static_cast<std::size_t>(best)] = true;
            --remaining;
        }
        clusters.push_back(std::move(cluster));
    }

    const int prefix_zeros = scheme.kind == SchemeKind::TwoZerosPrefix ? 2 : 1;
    auto prefixes =
        enumerate_fixed_zero_codes(scheme.prefix_len, prefix_zeros, clusters.size());
    if (prefixes.size() < clusters.size())
        throw Error::input("prefix code space too small for " +
                           std::to_string(clusters.size()) + " clusters");
    auto suffixes = enumerate_fixed_zero_codes(scheme.suffix_len, 1,
                                               static_cast<std::size_t>(capacity));
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
        for (std::size_t slot = 0; slot < clusters[ci].size(); ++slot) {
            Symbol s = clusters[ci][slot];
            cb.code_of[static_cast<std::size_t>(s)] = concat_codes(prefixes[ci], suffixes[slot]);
            cb.cluster_of[static_cast<std::size_t>(s)] = static_cast<int>(ci);
        }
    }
    return cb;
}

Code encode_symbol(const Codebook& codebook, Symbol s) { return codebook.code(s); }

namespace {

std::uint32_t zero_set(const Code& c) { return ~c.bits & c.mask(); }

std::vector<CamEntry> compile_multi_zeros(const Codebook& cb,
                                          const std::set<Symbol>& members, bool invert,
                                          StateId owner) {
    const int n_zeros = cb.scheme.zeros_per_code;
    std::map<std::uint32_t, Symbol> by_zeros;
    for (Symbol s = 0; s < cb.alphabet_size; ++s)
        by_zeros.emplace(zero_set(cb.code_of[static_cast<std::size_t>(s)]), s);

    // A merged zero set Z is exact iff every assigned n_zeros-subset of Z
    // belongs to the class (combinatorial number rule over the populated
    // code space).
    auto exact = [&](std::uint32_t zeros) {
        std::vector<int> pos;
        for (int b = 0; b < cb.scheme.code_length; ++b)
            if ((zeros >> b) & 1u) pos.push_back(b);
        const int m = static_cast<int>(pos.size());
        if (m < n_zeros) return false;
        std::vector<int> idx(static_cast<std::size_t>(n_zeros));
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            std::uint32_t sub = 0;
            for (int k : idx) sub |= 1u << pos[static_cast<std::size_t>(k)];
            auto it = by_zeros.find(sub);
            if (it != by_zeros.end() && !members.count(it->second)) return false;
            int i = n_zeros - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - n_zeros + i) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < n_zeros; ++j)
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
        return true;
    };

    std::vector<CamEntry> entries;
    for (Symbol s : members) entries.push_back({cb.code(s), owner, invert});
    bool merged_any = true;
    while (merged_any) {
        merged_any = false;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            for (std::size_t j = i + 1; j < entries.size();) {
                std::uint32_t zeros = zero_set(entries[i].code) | zero_set(entries[j].code);
                if (exact(zeros)) {
                    entries[i].code.bits &= entries[j].code.bits;
                    entries.erase(entries.begin() + static_cast<std::ptrdiff_t>(j));
                    merged_any = true;
                } else {
                    ++j;
                }
            }
        }
    }
    return entries;
}

std::vector<CamEntry> compile_prefixed(const Codebook& cb,
                                       const std::set<Symbol>& members, bool invert,
                                       StateId owner) {
    const Scheme& sch = cb.scheme;
    const std::uint32_t prefix_mask = (1u << sch.prefix_len) - 1u;

    // Suffix compression: AND together the members of each cluster.
    std::map<int, Code> per_cluster;
    for (Symbol s : members) {
        int c = cb.cluster_of[static_cast<std::size_t>(s)];
        auto [it, fresh] = per_cluster.emplace(c, cb.code(s));
        if (!fresh) it->second.bits &= cb.code(s).bits;
    }

    // Prefix compression: group by identical suffix field, ascending suffix.
    std::map<std::uint32_t, std::vector<Code>> by_suffix;
    for (auto& [cluster, code] : per_cluster)
        by_suffix[code.bits >> sch.prefix_len].push_back(code);

    std::vector<CamEntry> entries;
    for (auto& [suffix_bits, group] : by_suffix) {
        if (sch.kind == SchemeKind::OneZeroPrefix) {
            // Always exact: one zero per prefix, so the merged prefix covers
            // exactly the merged clusters.
            Code acc = group.front();
            for (const Code& c : group) acc.bits &= c.bits;
            entries.push_back({acc, owner, invert});
            continue;
        }
        // Two-zeros prefixes are edges over zero positions; a merge is exact
        // only for a complete C(m,2) family, i.e. a clique.
        std::vector<std::uint32_t> prefixes;
        for (const Code& c : group) prefixes.push_back(zero_set(c) & prefix_mask);
        std::vector<bool> used(prefixes.size(), false);
        auto has_edge = [&](std::uint32_t pair_zeros) {
            return std::find(prefixes.begin(), prefixes.end(), pair_zeros) !=
                   prefixes.end();
        };
        for (std::size_t i = 0; i < prefixes.size(); ++i) {
            if (used[i]) continue;
            // Grow a clique starting from this edge's two vertices.
            std::uint32_t verts = prefixes[i];
            bool grew = true;
            while (grew) {
                grew = false;
                for (int v = 0; v < sch.prefix_len; ++v) {
                    std::uint32_t bit = 1u << v;
                    if (verts & bit) continue;
                    bool complete = true;
                    for (int w = 0; w < sch.prefix_len && complete; ++w)
                        if ((verts >> w) & 1u) complete = has_edge(bit | (1u << w));
                    if (complete) {
                        verts |= bit;
                        grew = true;
                    }
                }
            }
            // Collect the clique's edges; merge when more than one.
            std::vector<std::size_t> group_idx;
            for (std::size_t k = 0; k < prefixes.size(); ++k)
                if (!used[k] && (prefixes[k] & ~verts) == 0) group_idx.push_back(k);
            Code acc = group[group_idx.front()];
            for (std::size_t k : group_idx) {
                acc.bits &= group[k].bits;
                used[k] = true;
            }
            entries.push_back({acc, owner, invert});
        }
    }
    return entries;
}

}  // namespace

std::vector<CamEntry> compile_class(const Codebook& codebook,
                                    const std::set<Symbol>& members, bool invert,
                                    StateId owner) {
    if (members.empty()) {
        if (!invert) throw Error::input("cannot compile an empty symbol class");
        // Matches everything: a single all-zeros (all don't-care) entry.
        return {CamEntry{Code{0, codebook.scheme.code_length}, owner, false}};
    }
    switch (codebook.scheme.kind) {
        case SchemeKind::OneZero: {
            Code acc = codebook.code(*members.begin());
            for (Symbol s : members) acc.bits &= codebook.code(s).bits;
            return {CamEntry{acc, owner, invert}};
        }
        case SchemeKind::MultiZeros:
            return compile_multi_zeros(codebook, members, invert, owner);
        case SchemeKind::TwoZerosPrefix:
        case SchemeKind::OneZeroPrefix:
            return compile_prefixed(codebook, members, invert, owner);
    }
    throw Error::input("corrupt scheme");
}

EncoderTable build_encoder_table(const Codebook& codebook) {
    EncoderTable t;
    t.width = codebook.scheme.code_length;
    t.mask = Code{0, t.width}.mask();
    t.rows.reserve(static_cast<std::size_t>(codebook.alphabet_size));
    for (Symbol s = 0; s < codebook.alphabet_size; ++s)
        t.rows.push_back(codebook.code_of[static_cast<std::size_t>(s)].bits & t.mask);
    return t;
}

std::pair<std::vector<CamEntry>, bool> compile_state(const Codebook& codebook,
                                                     const SymbolClass& cls,
                                                     StateId owner) {
    auto [members, invert] = apply_negation_opt(cls, codebook.alphabet_size);
    auto entries = compile_class(codebook, members, invert, owner);
    if (invert && !members.empty()) {
        // The complement has fewer symbols but may still compress worse;
        // keep the inversion only when it actually saves entries.
        auto raw = compile_class(codebook, cls.effective(codebook.alphabet_size),
                                 false, owner);
        if (raw.size() <= entries.size()) return {std::move(raw), false};
    }
    // A full-alphabet class compiles to one all-zeros entry with the
    // inversion folded away, so take the flag from the entries.
    const bool state_invert = entries.empty() ? false : entries.front().invert;
    return {std::move(entries), state_invert};
}

CompiledNfa compile_nfa(const HomogeneousNfa& nfa) {
    AlphabetStats stats = analyze(nfa);
    Scheme scheme = select_scheme(nfa.alphabet_size, stats.avg_class_size_no);
    CompiledNfa out;
    out.codebook = cluster_symbols(stats, scheme);
    out.entries_of.resize(static_cast<std::size_t>(nfa.size()));
    out.invert_of.resize(static_cast<std::size_t>(nfa.size()));
    for (int i = 0; i < nfa.size(); ++i) {
        auto [entries, invert] =
            compile_state(out.codebook, nfa.states[static_cast<std::size_t>(i)].cls, i);
        out.invert_of[static_cast<std::size_t>(i)] = invert;
        out.entries_of[static_cast<std::size_t>(i)] = std::move(entries);
    }
    return out;
}

std::string codebook_to_json(const CompiledNfa& compiled) {
    const Codebook& cb = compiled.codebook;
    ordered_json doc;
    doc["scheme"] = {{"kind", scheme_kind_name(cb.scheme.kind)},
                     {"code_length", cb.scheme.code_length},
                     {"prefix_len", cb.scheme.prefix_len},
                     {"suffix_len", cb.scheme.suffix_len},
                     {"zeros_per_code", cb.scheme.zeros_per_code}};
    doc["alphabet"] = cb.alphabet_size;
    doc["codes"] = ordered_json::array();
    for (Symbol s = 0; s < cb.alphabet_size; ++s)
        doc["codes"].push_back(cb.code_of[static_cast<std::size_t>(s)].to_string());
    doc["clusters"] = cb.cluster_of;
    doc["states"] = ordered_json::array();
    for (std::size_t i = 0; i < compiled.entries_of.size(); ++i) {
        ordered_json js;
        js["id"] = i;
        js["invert"] = static_cast<bool>(compiled.invert_of[i]);
        js["entries"] = ordered_json::array();
        for (const CamEntry& e : compiled.entries_of[i])
            js["entries"].push_back(e.code.to_string());
        doc["states"].push_back(std::move(js));
    }
    return doc.dump(2) + "\n";
}

CompiledNfa codebook_from_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error::input(std::string("codebook is not valid JSON: ") + e.what());
    }
    CompiledNfa out;
    Codebook& cb = out.codebook;
    cb.scheme.kind = scheme_kind_of_name(doc.at("scheme").at("kind").get<std::string>());
    cb.scheme.code_length = doc.at("scheme").at("code_length").get<int>();
    cb.scheme.prefix_len = doc.at("scheme").at("prefix_len").get<int>();
    cb.scheme.suffix_len = doc.at("scheme").at("suffix_len").get<int>();
    cb.scheme.zeros_per_code = doc.at("scheme").at("zeros_per_code").get<int>();
    cb.alphabet_size = doc.at("alphabet").get<int>();
    for (const auto& c : doc.at("codes")) cb.code_of.push_back(Code::from_string(c));
    cb.cluster_of = doc.at("clusters").get<std::vector<int>>();
    for (const auto& js : doc.at("states")) {
        std::vector<CamEntry> entries;
        bool invert = js.at("invert").get<bool>();
        StateId owner = js.at("id").get<int>();
        for (const auto& e : js.at("entries"))
            entries.push_back({Code::from_string(e), owner, invert});
        out.entries_of.push_back(std::move(entries));
        out.invert_of.push_back(invert);
    }
    return out;
}

}  // namespace camsim
