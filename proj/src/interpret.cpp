#include "camsim/interpret.hpp"

#include <set>

#include "camsim/errors.hpp"

namespace camsim {

std::vector<ReportRecord> interpret(const HomogeneousNfa& nfa,
                                    std::span<const std::uint8_t> input) {
    const int n = nfa.size();
    std::vector<bool> enabled(static_cast<std::size_t>(n), false);
    std::vector<bool> all_input(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        StartKind k = nfa.states[static_cast<std::size_t>(i)].start;
        if (k != StartKind::None) enabled[static_cast<std::size_t>(i)] = true;
        if (k == StartKind::AllInput) all_input[static_cast<std::size_t>(i)] = true;
    }

    std::vector<ReportRecord> reports;
    std::vector<bool> next(static_cast<std::size_t>(n));
    for (std::size_t cycle = 0; cycle < input.size(); ++cycle) {
        Symbol sym = input[cycle];
        if (sym >= nfa.alphabet_size)
            throw Error::input("input symbol " + std::to_string(sym) +
                               " outside alphabet of " + std::to_string(nfa.alphabet_size));
        next.assign(static_cast<std::size_t>(n), false);
        for (int i = 0; i < n; ++i) {
            if (!enabled[static_cast<std::size_t>(i)]) continue;
            const Ste& st = nfa.states[static_cast<std::size_t>(i)];
            if (!st.cls.contains(sym, nfa.alphabet_size)) continue;
            if (st.reporting)
                reports.push_back({i, 0, sym, static_cast<std::int64_t>(cycle)});
            for (StateId v : nfa.edges[static_cast<std::size_t>(i)])
                next[static_cast<std::size_t>(v)] = true;
        }
        for (int i = 0; i < n; ++i)
            if (all_input[static_cast<std::size_t>(i)]) next[static_cast<std::size_t>(i)] = true;
        enabled = next;
    }
    return reports;
}

}  // namespace camsim
