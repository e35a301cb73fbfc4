#pragma once

// Brute-force regex matcher used as an independent oracle. Works directly on
// the syntax tree with memoized interval matching; exponential in principle,
// fine for fuzz-sized inputs.

#include <map>
#include <tuple>
#include <vector>

#include "camsim/regex.hpp"

namespace camsim::testing {

class BacktrackMatcher {
public:
    explicit BacktrackMatcher(const RegexNode& root, int alphabet_size = 256)
        : root_(root), alphabet_(alphabet_size) {}

    // Does the pattern match text[lo, hi) exactly?
    bool match_range(const std::vector<std::uint8_t>& text, std::size_t lo, std::size_t hi) {
        return matches(&root_, text, lo, hi);
    }

    // Substring semantics: some match ends at position i (inclusive).
    bool substring_match_ending_at(const std::vector<std::uint8_t>& text, std::size_t i) {
        for (std::size_t j = 0; j <= i; ++j)
            if (matches(&root_, text, j, i + 1)) return true;
        return false;
    }

    // Anchored semantics: the prefix text[0, i] matches.
    bool prefix_match_ending_at(const std::vector<std::uint8_t>& text, std::size_t i) {
        return matches(&root_, text, 0, i + 1);
    }

private:
    const RegexNode& root_;
    int alphabet_;
    std::map<std::tuple<const RegexNode*, std::size_t, std::size_t>, bool> memo_;

    bool matches(const RegexNode* n, const std::vector<std::uint8_t>& s, std::size_t lo,
                 std::size_t hi) {
        auto key = std::make_tuple(n, lo, hi);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool r = eval(n, s, lo, hi);
        memo_[key] = r;
        return r;
    }

    bool eval(const RegexNode* n, const std::vector<std::uint8_t>& s, std::size_t lo,
              std::size_t hi) {
        switch (n->kind) {
            case RegexNode::Kind::Class:
                return hi - lo == 1 && n->cls.contains(s[lo], alphabet_);
            case RegexNode::Kind::Alt:
                for (const auto& c : n->children)
                    if (matches(c.get(), s, lo, hi)) return true;
                return false;
            case RegexNode::Kind::Concat: return concat(n, 0, s, lo, hi);
            case RegexNode::Kind::Star:
                return lo == hi || star(n->children.front().get(), s, lo, hi);
            case RegexNode::Kind::Plus: {
                const RegexNode* c = n->children.front().get();
                for (std::size_t mid = lo + 1; mid <= hi; ++mid)
                    if (matches(c, s, lo, mid) && (mid == hi || star(c, s, mid, hi)))
                        return true;
                return false;
            }
            case RegexNode::Kind::Opt:
                return lo == hi || matches(n->children.front().get(), s, lo, hi);
        }
        return false;
    }

    bool concat(const RegexNode* n, std::size_t idx, const std::vector<std::uint8_t>& s,
                std::size_t lo, std::size_t hi) {
        if (idx + 1 == n->children.size())
            return matches(n->children[idx].get(), s, lo, hi);
        for (std::size_t mid = lo; mid <= hi; ++mid)
            if (matches(n->children[idx].get(), s, lo, mid) &&
                concat(n, idx + 1, s, mid, hi))
                return true;
        return false;
    }

    bool star(const RegexNode* c, const std::vector<std::uint8_t>& s, std::size_t lo,
              std::size_t hi) {
        if (lo == hi) return true;
        for (std::size_t mid = lo + 1; mid <= hi; ++mid)
            if (matches(c, s, lo, mid) && star(c, s, mid, hi)) return true;
        return false;
    }
};

}  // namespace camsim::testing
