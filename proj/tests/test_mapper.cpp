#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "camsim/errors.hpp"
#include "camsim/fuzz.hpp"
#include "camsim/mapper.hpp"
#include "camsim/regex.hpp"

using namespace camsim;

namespace {

HomogeneousNfa chain_nfa(int n, Symbol sym = 'a') {
    HomogeneousNfa nfa;
    nfa.alphabet_size = 256;
    nfa.edges.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Ste st;
        st.id = i;
        st.cls.members = {sym};
        if (i == 0) st.start = StartKind::StartOfData;
        if (i == n - 1) st.reporting = true;
        nfa.states.push_back(st);
        if (i + 1 < n) nfa.edges[static_cast<std::size_t>(i)].insert(i + 1);
    }
    return nfa;
}

std::vector<int> ones(int n) { return std::vector<int>(static_cast<std::size_t>(n), 1); }

// Pull every realized transition back through the column->state map.
std::set<std::pair<StateId, StateId>> realized_edges(const Placement& pl) {
    std::set<std::pair<StateId, StateId>> out;
    auto owner_at = [&](int tile, int slice, int col) {
        return pl.tiles[static_cast<std::size_t>(tile)]
            .tile.slices[static_cast<std::size_t>(slice)][static_cast<std::size_t>(col)]
            .owner;
    };
    for (const TilePlan& tp : pl.tiles) {
        for (int sl = 0; sl < tile_slices(tp.mode); ++sl) {
            const auto& prog = tp.programs[static_cast<std::size_t>(sl)];
            if (!prog) continue;
            for (int i = 0; i < 256; ++i)
                for (int j = 0; j < 256; ++j)
                    if (prog->test(i, j))
                        out.emplace(owner_at(tp.id, sl, i), owner_at(tp.id, sl, j));
        }
    }
    // global routes: sender state -> receiver state via slot maps
    for (const TilePlan& ts : pl.tiles) {
        for (auto [src_state, sport] : ts.send_port) {
            const int srow = ts.index_in_array * pl.cfg.global_ports_out + sport;
            for (const TilePlan& td : pl.tiles) {
                if (td.array != ts.array) continue;
                for (auto [dst_state, dport] : td.recv_port) {
                    const int drow =
                        pl.cfg.global_dim / 2 + td.index_in_array * pl.cfg.global_ports_in + dport;
                    if (pl.globals[static_cast<std::size_t>(ts.array)]
                            .rows[static_cast<std::size_t>(srow)]
                                 [static_cast<std::size_t>(drow)])
                        out.emplace(src_state, dst_state);
                }
            }
        }
    }
    return out;
}

std::set<std::pair<StateId, StateId>> nfa_edges(const HomogeneousNfa& nfa) {
    std::set<std::pair<StateId, StateId>> out;
    for (StateId u = 0; u < nfa.size(); ++u)
        for (StateId v : nfa.edges[static_cast<std::size_t>(u)]) out.emplace(u, v);
    return out;
}

}  // namespace

TEST_CASE("check_rcb_feasible basics") {
    HomogeneousNfa self = chain_nfa(1);
    self.edges[0].insert(0);
    CHECK(check_rcb_feasible(self, bfs_order(self), ones(1)).feasible);

    HomogeneousNfa ex = nfa_from_regex("(a|b)e*cd+");
    CHECK(check_rcb_feasible(ex, bfs_order(ex), ones(4)).feasible);
}

TEST_CASE("check_rcb_feasible rejects dense components") {
    Rng rng(3);
    HomogeneousNfa dense = chain_nfa(200);
    for (int k = 0; k < 2000; ++k) {
        int u = static_cast<int>(rng.below(200));
        int v = static_cast<int>(rng.below(200));
        dense.edges[static_cast<std::size_t>(u)].insert(v);
    }
    auto feas = check_rcb_feasible(dense, bfs_order(dense), ones(200));
    CHECK_FALSE(feas.feasible);
    CHECK(!feas.offending_edges.empty());
}

TEST_CASE("choose_app_mode prefers the narrowest workable datapath") {
    // wide code: everything lands in mode32
    HomogeneousNfa wide = nfa_from_regex("abc");
    CompiledNfa cw;
    cw.codebook.scheme = Scheme{SchemeKind::OneZeroPrefix, 32, 16, 16, 2};
    cw.codebook.alphabet_size = 256;
    cw.entries_of.resize(3);
    cw.invert_of.resize(3);
    auto modes = choose_app_mode(cw, connected_components(wide));
    REQUIRE(modes.size() == 1);
    CHECK(modes[0] == TileMode::Mode32);

    // narrow chain: banded switch suffices
    HomogeneousNfa chain = chain_nfa(40);
    CompiledNfa cc = compile_nfa(chain);
    CHECK(cc.codebook.scheme.code_length == 11);
    auto m2 = choose_app_mode(cc, connected_components(chain));
    CHECK(m2[0] == TileMode::Rcb16);

    // long-span edge forces the full crossbar
    HomogeneousNfa spanny = chain_nfa(120);
    spanny.edges[0].insert(100);
    CompiledNfa cs = compile_nfa(spanny);
    auto m3 = choose_app_mode(cs, connected_components(spanny));
    CHECK(m3[0] == TileMode::Fcb16);
}

TEST_CASE("place packs 21 small components into one banded tile") {
    std::vector<HomogeneousNfa> parts;
    for (int i = 0; i < 21; ++i) parts.push_back(chain_nfa(4));
    HomogeneousNfa nfa = merge_nfas(parts);
    CompiledNfa compiled = compile_nfa(nfa);
    CHECK(compiled.codebook.scheme.code_length == 11);
    Placement pl = place(nfa, compiled);
    CHECK(pl.tiles.size() == 1);
    CHECK(pl.tiles[0].mode == TileMode::Rcb16);
    int used = 0;
    for (int sl = 0; sl < 2; ++sl)
        for (const auto& c : pl.tiles[0].tile.slices[static_cast<std::size_t>(sl)])
            used += c.used;
    CHECK(used == 84);
    CHECK(pl.stats.global_port_pairs == 0);
}

TEST_CASE("place spills a 600-state chain across two tiles") {
    HomogeneousNfa nfa = chain_nfa(600);
    CompiledNfa compiled = compile_nfa(nfa);
    Placement pl = place(nfa, compiled);
    CHECK(pl.tiles.size() == 2);
    CHECK(pl.stats.tiles_rcb == 2);
    CHECK(pl.stats.global_port_pairs >= 1);
    CHECK(pl.stats.global_switches_used == 1);
    // capacity split: 512 in the first tile, 88 in the second
    int first = 0, second = 0;
    for (const StatePlace& p : pl.states) (p.tile == 0 ? first : second) += p.count;
    CHECK(first == 512);
    CHECK(second == 88);
}

TEST_CASE("fcb placement routes cross-block edges through the global switch") {
    HomogeneousNfa nfa = chain_nfa(200);
    nfa.edges[0].insert(150);  // long span forces Fcb16
    CompiledNfa compiled = compile_nfa(nfa);
    Placement pl = place(nfa, compiled);
    REQUIRE(pl.tiles.size() == 1);
    CHECK(pl.tiles[0].mode == TileMode::Fcb16);
    // 127->128 and 0->150 cross the 128-column block split
    CHECK(pl.stats.global_port_pairs == 2);
    CHECK(realized_edges(pl) == nfa_edges(nfa));
}

TEST_CASE("place reports port overflow") {
    // backward edges from slice 1 to slice 0 cannot be compacted by the BFS
    // layout, so tile 0 would need 18 distinct send ports
    HomogeneousNfa nfa = chain_nfa(272);
    for (int k = 0; k < 17; ++k)
        nfa.edges[static_cast<std::size_t>(256 + k)].insert(k);
    CompiledNfa compiled = compile_nfa(nfa);
    CHECK_THROWS_WITH_AS(place(nfa, compiled), doctest::Contains("port overflow"),
                         Error);
}

TEST_CASE("place rejects components larger than one array") {
    HomogeneousNfa nfa = chain_nfa(4100);
    CompiledNfa compiled = compile_nfa(nfa);
    CHECK_THROWS_AS(place(nfa, compiled), Error);
}

TEST_CASE("forced modes") {
    HomogeneousNfa nfa = nfa_from_regex("(a|b)e*cd+");
    CompiledNfa compiled = compile_nfa(nfa);
    Placement p32 = place(nfa, compiled, {}, TileMode::Mode32);
    CHECK(p32.tiles[0].mode == TileMode::Mode32);
    Placement pf = place(nfa, compiled, {}, TileMode::Fcb16);
    CHECK(pf.tiles[0].mode == TileMode::Fcb16);

    HomogeneousNfa spanny = chain_nfa(120);
    spanny.edges[0].insert(100);
    CHECK_THROWS_AS(place(spanny, compile_nfa(spanny), {}, TileMode::Rcb16), Error);
}

TEST_CASE("emit_report_mask marks first replica columns") {
    HomogeneousNfa nfa = nfa_from_regex("(a|b)e*cd+");
    CompiledNfa compiled = compile_nfa(nfa);
    Placement pl = place(nfa, compiled);
    auto masks = emit_report_mask(pl);
    REQUIRE(masks.size() == pl.tiles.size());
    std::size_t bits = 0;
    for (const auto& m : masks) bits += m[0].count() + m[1].count();
    CHECK(bits == 1);
    const StatePlace& p3 = pl.states[3];
    CHECK(masks[static_cast<std::size_t>(p3.tile)][static_cast<std::size_t>(p3.slice)]
               [static_cast<std::size_t>(p3.col)]);
    CHECK(masks[static_cast<std::size_t>(p3.tile)] ==
          pl.tiles[static_cast<std::size_t>(p3.tile)].report_mask);
}

TEST_CASE("report mask popcount equals placed reporting states") {
    Rng rng(64);
    for (int trial = 0; trial < 100; ++trial) {
        FuzzCase fc = make_fuzz_case(rng.next());
        HomogeneousNfa nfa = nfa_from_regex(fc.pattern);
        Placement pl = place(nfa, compile_nfa(nfa));
        int reporting = 0;
        for (const Ste& st : nfa.states) reporting += st.reporting;
        std::size_t bits = 0;
        for (const auto& m : emit_report_mask(pl)) bits += m[0].count() + m[1].count();
        CHECK(bits == static_cast<std::size_t>(reporting));
    }
}

TEST_CASE("realization completeness on fuzzed patterns") {
    Rng rng(12);
    for (int trial = 0; trial < 120; ++trial) {
        FuzzCase fc = make_fuzz_case(rng.next());
        HomogeneousNfa nfa = nfa_from_regex(fc.pattern);
        CAPTURE(fc.pattern);
        Placement pl = place(nfa, compile_nfa(nfa));
        CHECK(realized_edges(pl) == nfa_edges(nfa));
    }
}

TEST_CASE("capacity invariants hold across fuzzed placements") {
    Rng rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<HomogeneousNfa> parts;
        const int k = 1 + static_cast<int>(rng.below(6));
        for (int i = 0; i < k; ++i)
            parts.push_back(nfa_from_regex(make_fuzz_case(rng.next()).pattern));
        HomogeneousNfa nfa = merge_nfas(parts);
        Placement pl = place(nfa, compile_nfa(nfa));
        for (const TilePlan& tp : pl.tiles) {
            int per_tile = 0;
            for (int sl = 0; sl < 2; ++sl) {
                int used = 0;
                for (const auto& c : tp.tile.slices[static_cast<std::size_t>(sl)])
                    used += c.used;
                CHECK(used <= 256);
                if (sl >= tile_slices(tp.mode)) CHECK(used == 0);
                per_tile += used;
            }
            CHECK(per_tile <= tile_capacity(tp.mode));
            CHECK(static_cast<int>(tp.send_port.size()) <= pl.cfg.global_ports_out);
            CHECK(static_cast<int>(tp.recv_port.size()) <= pl.cfg.global_ports_in);
        }
        // partitions numbered densely in placement order
        std::set<int> parts_seen;
        for (const StatePlace& p : pl.states) parts_seen.insert(p.partition);
        CHECK(parts_seen.size() == connected_components(nfa).size());
    }
}

TEST_CASE("placements are byte-identical across runs") {
    HomogeneousNfa nfa = nfa_from_regex("(a|b)e*cd+[^ab]x?");
    RunManifest m;
    std::string j1 = placement_to_json(place(nfa, compile_nfa(nfa)), m);
    std::string j2 = placement_to_json(place(nfa_from_json(nfa_to_json(nfa)),
                                             compile_nfa(nfa)),
                                       m);
    CHECK(j1 == j2);
}

TEST_CASE("placement json round-trip preserves the document") {
    HomogeneousNfa nfa = nfa_from_regex("(a|b)e*cd+");
    RunManifest m;
    std::string j1 = placement_to_json(place(nfa, compile_nfa(nfa)), m);
    auto [pl, manifest] = placement_from_json(j1);
    CHECK(placement_to_json(pl, manifest) == j1);
}

TEST_CASE("appending a smaller component never moves earlier ones") {
    std::vector<HomogeneousNfa> parts{nfa_from_regex("abcdefab"), nfa_from_regex("xyz+")};
    HomogeneousNfa base = merge_nfas(parts);
    Placement p1 = place(base, compile_nfa(base));

    parts.push_back(nfa_from_regex("qq"));  // smaller than both
    HomogeneousNfa extended = merge_nfas(parts);
    Placement p2 = place(extended, compile_nfa(extended));
    for (int s = 0; s < base.size(); ++s) {
        const StatePlace& a = p1.states[static_cast<std::size_t>(s)];
        const StatePlace& b = p2.states[static_cast<std::size_t>(s)];
        CHECK(a.tile == b.tile);
        CHECK(a.slice == b.slice);
        CHECK(a.col == b.col);
        CHECK(a.partition == b.partition);
    }
}
