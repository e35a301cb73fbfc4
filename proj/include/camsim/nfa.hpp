#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace camsim {

using Symbol = int;
using StateId = int;

// Set of input symbols a state accepts. `negated` means the class is the
// complement of `members` over the declared alphabet.
struct SymbolClass {
    std::set<Symbol> members;
    bool negated = false;

    // The accepted symbol set, with negation resolved.
    std::set<Symbol> effective(int alphabet_size) const;
    bool contains(Symbol s, [[maybe_unused]] int alphabet_size) const {
        bool in = members.count(s) > 0;
        return negated ? !in : in;
    }
    std::size_t effective_size(int alphabet_size) const {
        return negated ? static_cast<std::size_t>(alphabet_size) - members.size()
                       : members.size();
    }

    friend bool operator==(const SymbolClass&, const SymbolClass&) = default;
};

enum class StartKind { None, StartOfData, AllInput };

// State transition element: matching is attached to the state, so every
// in-edge of a state requires this state's class.
struct Ste {
    StateId id = 0;
    SymbolClass cls;
    StartKind start = StartKind::None;
    bool reporting = false;
};

struct HomogeneousNfa {
    int alphabet_size = 256;
    std::vector<Ste> states;
    std::vector<std::set<StateId>> edges;  // source id -> destination ids

    int size() const { return static_cast<int>(states.size()); }

    // Structural checks: dense ids, edge endpoints valid, alphabet <= 256,
    // symbols within the alphabet, nonempty effective classes.
    void validate() const;

    bool has_start() const;
};

// Report emitted when a reporting state is active while consuming a symbol.
struct ReportRecord {
    StateId state_id = 0;
    int partition_id = 0;
    Symbol input_symbol = 0;
    std::int64_t cycle = 0;

    friend auto operator<=>(const ReportRecord&, const ReportRecord&) = default;
};

// One weakly-connected component, re-indexed densely, with the mapping back
// to the parent NFA's ids.
struct Component {
    HomogeneousNfa nfa;
    std::vector<StateId> orig_ids;
};

std::vector<Component> connected_components(const HomogeneousNfa& nfa);

// BFS from start states (lowest id first); unreached states appended in id
// order. Returns a permutation of 0..n-1.
std::vector<StateId> bfs_order(const HomogeneousNfa& cc);

// Concatenate disjoint NFAs into one, offsetting state ids. All inputs must
// share the alphabet size.
HomogeneousNfa merge_nfas(const std::vector<HomogeneousNfa>& parts);

// Interchange format (JSON text), see README for the schema.
HomogeneousNfa nfa_from_json(const std::string& text);
std::string nfa_to_json(const HomogeneousNfa& nfa);

// Returns a copy with every StartOfData state promoted to AllInput.
HomogeneousNfa with_all_input_starts(const HomogeneousNfa& nfa);

}  // namespace camsim
