#include "camsim/nfa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "camsim/errors.hpp"

namespace camsim {

using ordered_json = nlohmann::ordered_json;

std::set<Symbol> SymbolClass::effective(int alphabet_size) const {
    if (!negated) return members;
    std::set<Symbol> out;
    for (Symbol s = 0; s < alphabet_size; ++s)
        if (!members.count(s)) out.insert(s);
    return out;
}

void HomogeneousNfa::validate() const {
    if (alphabet_size < 1 || alphabet_size > 256)
        throw Error::input("alphabet overflow: size " + std::to_string(alphabet_size) +
                           " not in [1,256]");
    for (int i = 0; i < size(); ++i) {
        const Ste& st = states[static_cast<std::size_t>(i)];
        if (st.id != i)
            throw Error::input("state ids must be dense: expected " + std::to_string(i) +
                               ", got " + std::to_string(st.id));
        for (Symbol s : st.cls.members)
            if (s < 0 || s >= alphabet_size)
                throw Error::input("state " + std::to_string(i) + " lists symbol " +
                                   std::to_string(s) + " outside alphabet of " +
                                   std::to_string(alphabet_size));
        if (st.cls.effective_size(alphabet_size) == 0)
            throw Error::input("state " + std::to_string(i) + " matches no symbol");
    }
    if (edges.size() != states.size())
        throw Error::input("edge table size mismatch");
    for (std::size_t src = 0; src < edges.size(); ++src)
        for (StateId dst : edges[src])
            if (dst < 0 || dst >= size())
                throw Error::input("dangling edge " + std::to_string(src) + " -> " +
                                   std::to_string(dst));
}

bool HomogeneousNfa::has_start() const {
    return std::any_of(states.begin(), states.end(),
                       [](const Ste& s) { return s.start != StartKind::None; });
}

std::vector<Component> connected_components(const HomogeneousNfa& nfa) {
    const int n = nfa.size();
    std::vector<int> comp(static_cast<std::size_t>(n), -1);

    // Undirected adjacency for weak connectivity.
    std::vector<std::set<StateId>> undirected(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u)
        for (StateId v : nfa.edges[static_cast<std::size_t>(u)]) {
            undirected[static_cast<std::size_t>(u)].insert(v);
            undirected[static_cast<std::size_t>(v)].insert(u);
        }

    int ncomp = 0;
    for (int seed = 0; seed < n; ++seed) {
        if (comp[static_cast<std::size_t>(seed)] >= 0) continue;
        std::deque<int> queue{seed};
        comp[static_cast<std::size_t>(seed)] = ncomp;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (StateId v : undirected[static_cast<std::size_t>(u)])
                if (comp[static_cast<std::size_t>(v)] < 0) {
                    comp[static_cast<std::size_t>(v)] = ncomp;
                    queue.push_back(v);
                }
        }
        ++ncomp;
    }

    std::vector<Component> out(static_cast<std::size_t>(ncomp));
    std::vector<int> local(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
        Component& c = out[static_cast<std::size_t>(comp[static_cast<std::size_t>(u)])];
        local[static_cast<std::size_t>(u)] = static_cast<int>(c.orig_ids.size());
        c.orig_ids.push_back(u);
    }
    for (auto& c : out) {
        c.nfa.alphabet_size = nfa.alphabet_size;
        c.nfa.edges.resize(c.orig_ids.size());
        for (std::size_t i = 0; i < c.orig_ids.size(); ++i) {
            Ste st = nfa.states[static_cast<std::size_t>(c.orig_ids[i])];
            st.id = static_cast<int>(i);
            c.nfa.states.push_back(std::move(st));
        }
    }
    for (int u = 0; u < n; ++u) {
        Component& c = out[static_cast<std::size_t>(comp[static_cast<std::size_t>(u)])];
        for (StateId v : nfa.edges[static_cast<std::size_t>(u)])
            c.nfa.edges[static_cast<std::size_t>(local[static_cast<std::size_t>(u)])].insert(
                local[static_cast<std::size_t>(v)]);
    }
    return out;
}

std::vector<StateId> bfs_order(const HomogeneousNfa& cc) {
    const int n = cc.size();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<StateId> order;
    order.reserve(static_cast<std::size_t>(n));
    std::deque<StateId> queue;
    for (int i = 0; i < n; ++i)
        if (cc.states[static_cast<std::size_t>(i)].start != StartKind::None) {
            queue.push_back(i);
            seen[static_cast<std::size_t>(i)] = true;
        }
    while (!queue.empty()) {
        StateId u = queue.front();
        queue.pop_front();
        order.push_back(u);
        for (StateId v : cc.edges[static_cast<std::size_t>(u)])  // ascending id
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = true;
                queue.push_back(v);
            }
    }
    for (int i = 0; i < n; ++i)
        if (!seen[static_cast<std::size_t>(i)]) order.push_back(i);
    return order;
}

HomogeneousNfa merge_nfas(const std::vector<HomogeneousNfa>& parts) {
    HomogeneousNfa out;
    out.alphabet_size = parts.empty() ? 256 : parts.front().alphabet_size;
    for (const auto& p : parts) {
        if (p.alphabet_size != out.alphabet_size)
            throw Error::input("cannot merge NFAs with different alphabets");
        const int base = out.size();
        for (Ste st : p.states) {
            st.id += base;
            out.states.push_back(std::move(st));
        }
        for (const auto& dsts : p.edges) {
            std::set<StateId> shifted;
            for (StateId v : dsts) shifted.insert(v + base);
            out.edges.push_back(std::move(shifted));
        }
    }
    return out;
}

namespace {

// Collapse a sorted symbol set into [lo,hi] ranges.
ordered_json ranges_of(const std::set<Symbol>& symbols) {
    ordered_json out = ordered_json::array();
    auto it = symbols.begin();
    while (it != symbols.end()) {
        Symbol lo = *it, hi = *it;
        ++it;
        while (it != symbols.end() && *it == hi + 1) hi = *it++;
        out.push_back({lo, hi});
    }
    return out;
}

const char* start_name(StartKind k) {
    switch (k) {
        case StartKind::StartOfData: return "start-of-data";
        case StartKind::AllInput: return "all-input";
        default: return "none";
    }
}

StartKind start_of_name(const std::string& s) {
    if (s == "none") return StartKind::None;
    if (s == "start-of-data") return StartKind::StartOfData;
    if (s == "all-input") return StartKind::AllInput;
    throw Error::input("unknown start kind '" + s + "'");
}

}  // namespace

HomogeneousNfa nfa_from_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error::input(std::string("NFA document is not valid JSON: ") + e.what());
    }
    try {
        HomogeneousNfa nfa;
        nfa.alphabet_size = doc.at("alphabet").get<int>();
        if (nfa.alphabet_size > 256)
            throw Error::input("alphabet overflow: " + std::to_string(nfa.alphabet_size));
        for (const auto& js : doc.at("states")) {
            Ste st;
            st.id = js.at("id").get<int>();
            for (const auto& range : js.at("symbols")) {
                Symbol lo = range.at(0).get<int>();
                Symbol hi = range.at(1).get<int>();
                if (lo > hi) throw Error::input("empty symbol range");
                for (Symbol s = lo; s <= hi; ++s) st.cls.members.insert(s);
            }
            st.cls.negated = js.value("negated", false);
            st.start = start_of_name(js.value("start", std::string("none")));
            st.reporting = js.value("report", false);
            nfa.states.push_back(std::move(st));
        }
        nfa.edges.resize(nfa.states.size());
        for (const auto& je : doc.at("edges")) {
            StateId src = je.at(0).get<int>();
            StateId dst = je.at(1).get<int>();
            if (src < 0 || src >= nfa.size() || dst < 0 || dst >= nfa.size())
                throw Error::input("dangling edge " + std::to_string(src) + " -> " +
                                   std::to_string(dst));
            nfa.edges[static_cast<std::size_t>(src)].insert(dst);
        }
        nfa.validate();
        return nfa;
    } catch (const nlohmann::json::exception& e) {
        throw Error::input(std::string("NFA schema violation: ") + e.what());
    }
}

std::string nfa_to_json(const HomogeneousNfa& nfa) {
    ordered_json doc;
    doc["alphabet"] = nfa.alphabet_size;
    doc["states"] = ordered_json::array();
    for (const Ste& st : nfa.states) {
        ordered_json js;
        js["id"] = st.id;
        js["symbols"] = ranges_of(st.cls.members);
        js["negated"] = st.cls.negated;
        js["start"] = start_name(st.start);
        js["report"] = st.reporting;
        doc["states"].push_back(std::move(js));
    }
    doc["edges"] = ordered_json::array();
    for (std::size_t src = 0; src < nfa.edges.size(); ++src)
        for (StateId dst : nfa.edges[src]) doc["edges"].push_back({src, dst});
    return doc.dump(2) + "\n";
}

HomogeneousNfa with_all_input_starts(const HomogeneousNfa& nfa) {
    HomogeneousNfa out = nfa;
    for (Ste& st : out.states)
        if (st.start == StartKind::StartOfData) st.start = StartKind::AllInput;
    return out;
}

}  // namespace camsim
