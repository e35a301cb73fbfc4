#pragma once

#include <memory>
#include <string>
#include <vector>

#include "camsim/nfa.hpp"

namespace camsim {

// Syntax tree for the supported pattern language: literals, character
// classes [..] and [^..] with ranges, alternation, grouping, *, + and ?.
struct RegexNode {
    enum class Kind { Class, Concat, Alt, Star, Plus, Opt };
    Kind kind = Kind::Class;
    SymbolClass cls;                                    // Kind::Class
    std::vector<std::unique_ptr<RegexNode>> children;   // other kinds
};

using RegexTree = std::unique_ptr<RegexNode>;

// Throws SyntaxError with the byte offset on malformed input.
RegexTree parse_regex(const std::string& pattern);

// Position automaton: one STE per literal/class occurrence; first positions
// are StartOfData, last positions report. An alternation whose branches are
// all single classes collapses to one class state. Throws when the pattern
// matches only the empty string.
HomogeneousNfa glushkov_construct(const RegexNode& tree, int alphabet_size = 256);

HomogeneousNfa nfa_from_regex(const std::string& pattern, int alphabet_size = 256);

// One pattern per line (blank lines and '#' comments skipped); each pattern
// becomes its own component of the merged NFA.
HomogeneousNfa nfa_from_regex_list(const std::string& text, int alphabet_size = 256);

}  // namespace camsim
