#include "camsim/mapper.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "camsim/errors.hpp"

namespace camsim {

using ordered_json = nlohmann::ordered_json;

std::string MappingStats::summary() const {
    std::ostringstream os;
    os << "rcb16=" << tiles_rcb << " fcb16=" << tiles_fcb << " mode32=" << tiles_mode32
       << " arrays=" << arrays_used << " globals=" << global_switches_used
       << " port_pairs=" << global_port_pairs;
    return os.str();
}

namespace {

// Replica-expanded column positions of a component in the given order, with
// states never straddling a `boundary`-column region (slices concatenated).
std::vector<int> layout_positions(const std::vector<StateId>& ordering,
                                  const std::vector<int>& replicas, int boundary) {
    std::vector<int> pos(ordering.size(), 0);
    int cursor = 0;
    for (StateId s : ordering) {
        int n = std::max(1, replicas[static_cast<std::size_t>(s)]);
        if (cursor % boundary + n > boundary)
            cursor = (cursor / boundary + 1) * boundary;
        pos[static_cast<std::size_t>(s)] = cursor;
        cursor += n;
    }
    return pos;
}

}  // namespace

RcbFeasibility check_rcb_feasible(const HomogeneousNfa& cc,
                                  const std::vector<StateId>& ordering,
                                  const std::vector<int>& replicas_per_state,
                                  const FabricConfig& cfg) {
    RcbFeasibility out;
    std::vector<int> pos = layout_positions(ordering, replicas_per_state, cfg.cam_cols);
    auto slice_of = [&](int p) { return p / cfg.cam_cols; };
    for (StateId u = 0; u < cc.size(); ++u) {
        for (StateId v : cc.edges[static_cast<std::size_t>(u)]) {
            const int nu = std::max(1, replicas_per_state[static_cast<std::size_t>(u)]);
            const int nv = std::max(1, replicas_per_state[static_cast<std::size_t>(v)]);
            const int pu = pos[static_cast<std::size_t>(u)];
            const int pv = pos[static_cast<std::size_t>(v)];
            if (slice_of(pu) != slice_of(pv)) continue;  // routed globally
            bool ok = true;
            for (int a = 0; a < nu && ok; ++a)
                for (int b = 0; b < nv && ok; ++b)
                    ok = rcb_supports((pu + a) % cfg.cam_cols, (pv + b) % cfg.cam_cols, cfg);
            if (!ok) {
                out.feasible = false;
                out.offending_edges.emplace_back(u, v);
            }
        }
    }
    return out;
}

std::vector<TileMode> choose_app_mode(const CompiledNfa& compiled,
                                      const std::vector<Component>& ccs,
                                      const FabricConfig& cfg) {
    std::vector<TileMode> modes;
    modes.reserve(ccs.size());
    const bool wide = compiled.codebook.scheme.code_length > 16;
    for (const Component& cc : ccs) {
        if (wide) {
            modes.push_back(TileMode::Mode32);
            continue;
        }
        std::vector<int> replicas(static_cast<std::size_t>(cc.nfa.size()), 1);
        for (int i = 0; i < cc.nfa.size(); ++i)
            replicas[static_cast<std::size_t>(i)] = static_cast<int>(
                compiled
                    .entries_of[static_cast<std::size_t>(
                        cc.orig_ids[static_cast<std::size_t>(i)])]
                    .size());
        auto feas = check_rcb_feasible(cc.nfa, bfs_order(cc.nfa), replicas, cfg);
        modes.push_back(feas.feasible ? TileMode::Rcb16 : TileMode::Fcb16);
    }
    return modes;
}

namespace {

struct Builder {
    const HomogeneousNfa& nfa;
    const CompiledNfa& compiled;
    FabricConfig cfg;
    Placement out;
    std::vector<std::array<int, 2>> cursor;  // next free column per tile slice

    Builder(const HomogeneousNfa& n, const CompiledNfa& c, const FabricConfig& f)
        : nfa(n), compiled(c), cfg(f) {
        out.cfg = cfg;
        out.nfa = nfa;
        out.compiled = compiled;
        out.states.resize(static_cast<std::size_t>(nfa.size()));
    }

    int replicas(StateId global_id) const {
        return std::max<int>(
            1, static_cast<int>(
                   compiled.entries_of[static_cast<std::size_t>(global_id)].size()));
    }

    int tiles_in_array(int array) const {
        int n = 0;
        for (const auto& t : out.tiles)
            if (t.array == array) ++n;
        return n;
    }

    int new_tile(int array, TileMode mode) {
        TilePlan tp;
        tp.id = static_cast<int>(out.tiles.size());
        tp.array = array;
        tp.index_in_array = tiles_in_array(array);
        tp.mode = mode;
        tp.tile.mode = mode;
        out.tiles.push_back(std::move(tp));
        cursor.push_back({0, 0});
        return out.tiles.back().id;
    }

    // Only the FCB modes split the 256 columns into two switch blocks.
    int block_boundary(TileMode mode) const {
        return mode == TileMode::Rcb16 ? cfg.cam_cols : cfg.rrcb_dim;
    }

    struct CcLayout {
        std::vector<StatePlace> places;  // indexed by component-local id
    };

    std::optional<CcLayout> try_layout(const Component& cc, TileMode mode, int array,
                                       int first_tile) {
        const std::vector<StateId> order = bfs_order(cc.nfa);
        const int nslices = tile_slices(mode);
        const int boundary = block_boundary(mode);

        CcLayout lay;
        lay.places.resize(static_cast<std::size_t>(cc.nfa.size()));
        std::vector<bool> placed(static_cast<std::size_t>(cc.nfa.size()), false);

        int tile = first_tile;
        int slice = 0;
        int col = cursor[static_cast<std::size_t>(tile)][0];

        auto advance_region = [&]() -> bool {
            const int block = col / boundary;
            if ((block + 1) * boundary < cfg.cam_cols) {
                col = (block + 1) * boundary;
                return true;
            }
            if (slice + 1 < nslices) {
                ++slice;
                col = cursor[static_cast<std::size_t>(tile)][static_cast<std::size_t>(slice)];
                return true;
            }
            int next = -1;
            for (const auto& t : out.tiles)
                if (t.array == array && t.id > tile && t.mode == mode) {
                    next = t.id;
                    break;
                }
            if (next < 0) {
                if (tiles_in_array(array) >= cfg.tiles_per_array) return false;
                next = new_tile(array, mode);
            }
            tile = next;
            slice = 0;
            col = cursor[static_cast<std::size_t>(tile)][0];
            return true;
        };

        auto in_band_with_placed = [&](StateId v, int vcol, int vcount) {
            if (mode != TileMode::Rcb16) return true;  // FCB blocks are complete
            auto pairs_ok = [&](int ucol, int ucount, int dcol, int dcount) {
                for (int a = 0; a < ucount; ++a)
                    for (int b = 0; b < dcount; ++b)
                        if (!rcb_supports(ucol + a, dcol + b, cfg)) return false;
                return true;
            };
            if (cc.nfa.edges[static_cast<std::size_t>(v)].count(v))
                if (!pairs_ok(vcol, vcount, vcol, vcount)) return false;
            for (StateId u = 0; u < cc.nfa.size(); ++u) {
                if (!placed[static_cast<std::size_t>(u)] || u == v) continue;
                const StatePlace& pu = lay.places[static_cast<std::size_t>(u)];
                if (pu.tile != tile || pu.slice != slice) continue;
                if (cc.nfa.edges[static_cast<std::size_t>(u)].count(v))
                    if (!pairs_ok(pu.col, pu.count, vcol, vcount)) return false;
                if (cc.nfa.edges[static_cast<std::size_t>(v)].count(u))
                    if (!pairs_ok(vcol, vcount, pu.col, pu.count)) return false;
            }
            return true;
        };

        for (StateId v : order) {
            const int n = replicas(cc.orig_ids[static_cast<std::size_t>(v)]);
            if (n > boundary) return std::nullopt;
            while (true) {
                if (col >= cfg.cam_cols || col % boundary + n > boundary) {
                    if (!advance_region()) return std::nullopt;
                    continue;
                }
                if (in_band_with_placed(v, col, n)) break;
                ++col;  // scan forward for a band-feasible offset
            }
            lay.places[static_cast<std::size_t>(v)] =
                StatePlace{cc.orig_ids[static_cast<std::size_t>(v)],
                           -1,
                           tile,
                           slice,
                           col,
                           n,
                           compiled.invert_of[static_cast<std::size_t>(
                               cc.orig_ids[static_cast<std::size_t>(v)])]};
            placed[static_cast<std::size_t>(v)] = true;
            col += n;
        }
        return lay;
    }

    void commit_layout(const Component& cc, const CcLayout& lay, int partition) {
        for (int v = 0; v < cc.nfa.size(); ++v) {
            StatePlace p = lay.places[static_cast<std::size_t>(v)];
            p.partition = partition;
            out.states[static_cast<std::size_t>(p.state)] = p;
            auto& cur =
                cursor[static_cast<std::size_t>(p.tile)][static_cast<std::size_t>(p.slice)];
            cur = std::max(cur, p.col + p.count);
        }
    }

    bool attempt(const Component& cc, TileMode mode, int partition, int array,
                 int first_tile) {
        const std::size_t snapshot = out.tiles.size();
        if (auto lay = try_layout(cc, mode, array, first_tile)) {
            commit_layout(cc, *lay, partition);
            return true;
        }
        while (out.tiles.size() > snapshot) {
            out.tiles.pop_back();
            cursor.pop_back();
        }
        return false;
    }

    bool attempt_fresh(const Component& cc, TileMode mode, int partition, int array) {
        const std::size_t snapshot = out.tiles.size();
        const int t = new_tile(array, mode);
        if (auto lay = try_layout(cc, mode, array, t)) {
            commit_layout(cc, *lay, partition);
            return true;
        }
        while (out.tiles.size() > snapshot) {
            out.tiles.pop_back();
            cursor.pop_back();
        }
        return false;
    }

    void place_component(const Component& cc, TileMode mode, int partition) {
        for (std::size_t t = 0; t < out.tiles.size(); ++t) {
            if (out.tiles[t].mode != mode) continue;
            if (attempt(cc, mode, partition, out.tiles[t].array, static_cast<int>(t)))
                return;
        }
        const int arrays = array_count();
        for (int a = 0; a < arrays; ++a) {
            if (tiles_in_array(a) >= cfg.tiles_per_array) continue;
            if (attempt_fresh(cc, mode, partition, a)) return;
        }
        if (arrays >= cfg.arrays_per_bank)
            throw Error::infeasible("bank capacity exhausted");
        if (attempt_fresh(cc, mode, partition, arrays)) return;
        int total = 0;
        for (StateId g : cc.orig_ids) total += replicas(g);
        throw Error::infeasible("component with " + std::to_string(total) +
                                " columns does not fit one array");
    }

    int array_count() const {
        int n = 0;
        for (const auto& t : out.tiles) n = std::max(n, t.array + 1);
        return n;
    }

    // Drop tiles that ended up with no states and renumber the rest densely.
    void compact_tiles() {
        std::vector<bool> used(out.tiles.size(), false);
        for (const StatePlace& p : out.states)
            if (p.tile >= 0) used[static_cast<std::size_t>(p.tile)] = true;
        std::vector<int> remap(out.tiles.size(), -1);
        std::vector<TilePlan> kept;
        std::vector<std::array<int, 2>> kept_cursor;
        for (std::size_t t = 0; t < out.tiles.size(); ++t) {
            if (!used[t]) continue;
            remap[t] = static_cast<int>(kept.size());
            TilePlan tp = std::move(out.tiles[t]);
            tp.id = remap[t];
            kept.push_back(std::move(tp));
            kept_cursor.push_back(cursor[t]);
        }
        // index_in_array must stay dense per array as well
        std::vector<int> per_array_count(static_cast<std::size_t>(array_count()), 0);
        for (auto& tp : kept) tp.index_in_array = per_array_count[static_cast<std::size_t>(tp.array)]++;
        out.tiles = std::move(kept);
        cursor = std::move(kept_cursor);
        for (StatePlace& p : out.states)
            if (p.tile >= 0) p.tile = remap[static_cast<std::size_t>(p.tile)];
    }

    void fill_columns_and_masks() {
        for (const StatePlace& p : out.states) {
            if (p.state < 0) continue;
            TilePlan& tp = out.tiles[static_cast<std::size_t>(p.tile)];
            const auto& entries = compiled.entries_of[static_cast<std::size_t>(p.state)];
            for (int r = 0; r < p.count; ++r) {
                Tile::Column& colref = tp.tile.slices[static_cast<std::size_t>(p.slice)]
                                                     [static_cast<std::size_t>(p.col + r)];
                colref.used = true;
                colref.owner = p.state;
                colref.bits =
                    entries.empty() ? 0 : entries[static_cast<std::size_t>(r)].code.bits;
            }
            if (nfa.states[static_cast<std::size_t>(p.state)].reporting)
                tp.report_mask[static_cast<std::size_t>(p.slice)].set(
                    static_cast<std::size_t>(p.col));
        }
    }

    void realize_edges() {
        std::vector<std::array<std::vector<std::pair<int, int>>, 2>> local_pairs(
            out.tiles.size());
        std::vector<std::vector<std::pair<int, int>>> global_pairs(
            static_cast<std::size_t>(array_count()));

        auto send_slot = [&](TilePlan& tp, StateId s) {
            auto it = tp.send_port.find(s);
            if (it == tp.send_port.end()) {
                if (static_cast<int>(tp.send_port.size()) >= cfg.global_ports_out)
                    throw Error::infeasible("send port overflow on tile " +
                                            std::to_string(tp.id));
                it = tp.send_port.emplace(s, static_cast<int>(tp.send_port.size())).first;
            }
            return tp.index_in_array * cfg.global_ports_out + it->second;
        };
        auto recv_slot = [&](TilePlan& tp, StateId s) {
            auto it = tp.recv_port.find(s);
            if (it == tp.recv_port.end()) {
                if (static_cast<int>(tp.recv_port.size()) >= cfg.global_ports_in)
                    throw Error::infeasible("receive port overflow on tile " +
                                            std::to_string(tp.id));
                it = tp.recv_port.emplace(s, static_cast<int>(tp.recv_port.size())).first;
            }
            return cfg.global_dim / 2 + tp.index_in_array * cfg.global_ports_in +
                   it->second;
        };

        for (StateId u = 0; u < nfa.size(); ++u) {
            const StatePlace& pu = out.states[static_cast<std::size_t>(u)];
            for (StateId v : nfa.edges[static_cast<std::size_t>(u)]) {
                const StatePlace& pv = out.states[static_cast<std::size_t>(v)];
                const int boundary =
                    block_boundary(out.tiles[static_cast<std::size_t>(pu.tile)].mode);
                const bool local = pu.tile == pv.tile && pu.slice == pv.slice &&
                                   pu.col / boundary == pv.col / boundary;
                if (local) {
                    for (int a = 0; a < pu.count; ++a)
                        for (int b = 0; b < pv.count; ++b)
                            local_pairs[static_cast<std::size_t>(pu.tile)]
                                       [static_cast<std::size_t>(pu.slice)]
                                           .emplace_back(pu.col + a, pv.col + b);
                } else {
                    TilePlan& ts = out.tiles[static_cast<std::size_t>(pu.tile)];
                    TilePlan& td = out.tiles[static_cast<std::size_t>(pv.tile)];
                    if (ts.array != td.array)
                        throw Error::infeasible("edge crosses arrays");
                    global_pairs[static_cast<std::size_t>(ts.array)].emplace_back(
                        send_slot(ts, u), recv_slot(td, v));
                }
            }
        }

        for (auto& tp : out.tiles) {
            const SwitchKind kind =
                tp.mode == TileMode::Rcb16 ? SwitchKind::Rcb : SwitchKind::Fcb;
            for (int sl = 0; sl < tile_slices(tp.mode); ++sl) {
                auto& pairs = local_pairs[static_cast<std::size_t>(tp.id)]
                                         [static_cast<std::size_t>(sl)];
                std::sort(pairs.begin(), pairs.end());
                pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
                tp.programs[static_cast<std::size_t>(sl)] = program_switch(pairs, kind, cfg);
            }
        }
        out.globals.resize(static_cast<std::size_t>(array_count()));
        for (std::size_t a = 0; a < global_pairs.size(); ++a) {
            auto& pairs = global_pairs[a];
            std::sort(pairs.begin(), pairs.end());
            pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
            out.globals[a] = program_global(pairs, cfg);
            if (!pairs.empty()) ++out.stats.global_switches_used;
            out.stats.global_port_pairs += static_cast<int>(pairs.size());
        }
    }

    void run(std::optional<TileMode> forced_mode) {
        auto ccs = connected_components(nfa);
        std::vector<TileMode> prefer = choose_app_mode(compiled, ccs, cfg);
        if (forced_mode) {
            if (*forced_mode != TileMode::Mode32 &&
                compiled.codebook.scheme.code_length > 16)
                throw Error::input("16-bit tile modes cannot hold a " +
                                   std::to_string(compiled.codebook.scheme.code_length) +
                                   "-bit code");
            for (std::size_t i = 0; i < prefer.size(); ++i) {
                if (*forced_mode == TileMode::Rcb16 && prefer[i] == TileMode::Fcb16) {
                    auto feas = check_rcb_feasible(ccs[i].nfa, bfs_order(ccs[i].nfa),
                                                   replica_vector(ccs[i]), cfg);
                    std::ostringstream os;
                    os << "component " << i
                       << " does not fit the RCB band; offending edges:";
                    for (auto [u, v] : feas.offending_edges) os << " " << u << "->" << v;
                    throw Error::infeasible(os.str());
                }
                prefer[i] = *forced_mode;
            }
        }

        std::vector<std::size_t> cc_order(ccs.size());
        std::iota(cc_order.begin(), cc_order.end(), 0);
        std::stable_sort(cc_order.begin(), cc_order.end(),
                         [&](std::size_t a, std::size_t b) {
                             return cc_columns(ccs[a]) > cc_columns(ccs[b]);
                         });

        int partition = 0;
        for (std::size_t idx : cc_order) place_component(ccs[idx], prefer[idx], partition++);

        compact_tiles();
        fill_columns_and_masks();
        realize_edges();
        for (const auto& t : out.tiles) {
            switch (t.mode) {
                case TileMode::Rcb16: ++out.stats.tiles_rcb; break;
                case TileMode::Fcb16: ++out.stats.tiles_fcb; break;
                case TileMode::Mode32: ++out.stats.tiles_mode32; break;
            }
        }
        out.stats.arrays_used = array_count();
    }

    std::vector<int> replica_vector(const Component& cc) const {
        std::vector<int> r(static_cast<std::size_t>(cc.nfa.size()));
        for (int i = 0; i < cc.nfa.size(); ++i)
            r[static_cast<std::size_t>(i)] =
                replicas(cc.orig_ids[static_cast<std::size_t>(i)]);
        return r;
    }

    int cc_columns(const Component& cc) const {
        int n = 0;
        for (StateId g : cc.orig_ids) n += replicas(g);
        return n;
    }
};

}  // namespace

Placement place(const HomogeneousNfa& nfa, const CompiledNfa& compiled,
                const FabricConfig& cfg, std::optional<TileMode> forced_mode) {
    cfg.validate();
    nfa.validate();
    Builder b(nfa, compiled, cfg);
    b.run(forced_mode);
    return std::move(b.out);
}

std::vector<std::array<ColumnSet, 2>> emit_report_mask(const Placement& placement) {
    std::vector<std::array<ColumnSet, 2>> masks(placement.tiles.size());
    for (const StatePlace& p : placement.states) {
        if (p.state < 0) continue;
        if (!placement.nfa.states[static_cast<std::size_t>(p.state)].reporting) continue;
        masks[static_cast<std::size_t>(p.tile)][static_cast<std::size_t>(p.slice)].set(
            static_cast<std::size_t>(p.col));
    }
    return masks;
}

namespace {

ordered_json program_pairs(const SwitchProgram& p) {
    ordered_json pairs = ordered_json::array();
    for (int i = 0; i < 256; ++i)
        for (int j = 0; j < 256; ++j)
            if (p.test(i, j)) pairs.push_back({i, j});
    return pairs;
}

ordered_json global_pairs_json(const GlobalProgram& p) {
    ordered_json pairs = ordered_json::array();
    for (int i = 0; i < 256; ++i)
        for (int j = 0; j < 256; ++j)
            if (p.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                pairs.push_back({i, j});
    return pairs;
}

ordered_json port_map_json(const std::map<StateId, int>& m) {
    ordered_json out = ordered_json::array();
    for (auto [state, port] : m) out.push_back({state, port});
    return out;
}

}  // namespace

std::string placement_to_json(const Placement& placement, const RunManifest& manifest) {
    ordered_json doc;
    doc["manifest"] = ordered_json::parse(manifest.to_json());
    doc["nfa"] = ordered_json::parse(nfa_to_json(placement.nfa));
    doc["codebook"] = ordered_json::parse(codebook_to_json(placement.compiled));
    doc["states"] = ordered_json::array();
    for (const StatePlace& p : placement.states)
        doc["states"].push_back({{"id", p.state},
                                 {"partition", p.partition},
                                 {"tile", p.tile},
                                 {"slice", p.slice},
                                 {"col", p.col},
                                 {"count", p.count},
                                 {"invert", p.invert}});
    doc["tiles"] = ordered_json::array();
    for (const TilePlan& t : placement.tiles) {
        ordered_json jt;
        jt["id"] = t.id;
        jt["array"] = t.array;
        jt["index_in_array"] = t.index_in_array;
        jt["mode"] = tile_mode_name(t.mode);
        jt["programs"] = ordered_json::array();
        for (int sl = 0; sl < tile_slices(t.mode); ++sl)
            jt["programs"].push_back(
                {{"slice", sl},
                 {"kind",
                  t.programs[static_cast<std::size_t>(sl)]->kind == SwitchKind::Rcb
                      ? "rcb"
                      : "fcb"},
                 {"pairs", program_pairs(*t.programs[static_cast<std::size_t>(sl)])}});
        jt["send_ports"] = port_map_json(t.send_port);
        jt["recv_ports"] = port_map_json(t.recv_port);
        doc["tiles"].push_back(std::move(jt));
    }
    doc["globals"] = ordered_json::array();
    for (std::size_t a = 0; a < placement.globals.size(); ++a)
        doc["globals"].push_back(
            {{"array", a}, {"pairs", global_pairs_json(placement.globals[a])}});
    doc["stats"] = {{"tiles_rcb", placement.stats.tiles_rcb},
                    {"tiles_fcb", placement.stats.tiles_fcb},
                    {"tiles_mode32", placement.stats.tiles_mode32},
                    {"arrays_used", placement.stats.arrays_used},
                    {"global_switches_used", placement.stats.global_switches_used},
                    {"global_port_pairs", placement.stats.global_port_pairs}};
    return doc.dump(2) + "\n";
}

std::pair<Placement, RunManifest> placement_from_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error::input(std::string("placement is not valid JSON: ") + e.what());
    }
    Placement p;
    RunManifest manifest = RunManifest::from_json(doc.at("manifest").dump());
    p.nfa = nfa_from_json(doc.at("nfa").dump());
    p.compiled = codebook_from_json(doc.at("codebook").dump());
    for (const auto& js : doc.at("states"))
        p.states.push_back(StatePlace{js.at("id").get<int>(), js.at("partition").get<int>(),
                                      js.at("tile").get<int>(), js.at("slice").get<int>(),
                                      js.at("col").get<int>(), js.at("count").get<int>(),
                                      js.at("invert").get<bool>()});
    for (const auto& jt : doc.at("tiles")) {
        TilePlan t;
        t.id = jt.at("id").get<int>();
        t.array = jt.at("array").get<int>();
        t.index_in_array = jt.at("index_in_array").get<int>();
        t.mode = tile_mode_of_name(jt.at("mode").get<std::string>());
        t.tile.mode = t.mode;
        for (const auto& jp : jt.at("programs")) {
            std::vector<std::pair<int, int>> pairs;
            for (const auto& pr : jp.at("pairs"))
                pairs.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
            SwitchKind kind = jp.at("kind").get<std::string>() == "rcb" ? SwitchKind::Rcb
                                                                        : SwitchKind::Fcb;
            t.programs[jp.at("slice").get<std::size_t>()] = program_switch(pairs, kind);
        }
        for (const auto& pp : jt.at("send_ports"))
            t.send_port.emplace(pp.at(0).get<int>(), pp.at(1).get<int>());
        for (const auto& pp : jt.at("recv_ports"))
            t.recv_port.emplace(pp.at(0).get<int>(), pp.at(1).get<int>());
        p.tiles.push_back(std::move(t));
    }
    for (const auto& jg : doc.at("globals")) {
        std::vector<std::pair<int, int>> pairs;
        for (const auto& pr : jg.at("pairs"))
            pairs.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
        p.globals.push_back(program_global(pairs));
    }
    const auto& st = doc.at("stats");
    p.stats.tiles_rcb = st.at("tiles_rcb").get<int>();
    p.stats.tiles_fcb = st.at("tiles_fcb").get<int>();
    p.stats.tiles_mode32 = st.at("tiles_mode32").get<int>();
    p.stats.arrays_used = st.at("arrays_used").get<int>();
    p.stats.global_switches_used = st.at("global_switches_used").get<int>();
    p.stats.global_port_pairs = st.at("global_port_pairs").get<int>();

    // Rebuild the CAM columns and report masks from states + codebook.
    for (const StatePlace& sp : p.states) {
        if (sp.state < 0) continue;
        TilePlan& tp = p.tiles[static_cast<std::size_t>(sp.tile)];
        const auto& entries = p.compiled.entries_of[static_cast<std::size_t>(sp.state)];
        for (int r = 0; r < sp.count; ++r) {
            Tile::Column& col = tp.tile.slices[static_cast<std::size_t>(sp.slice)]
                                              [static_cast<std::size_t>(sp.col + r)];
            col.used = true;
            col.owner = sp.state;
            col.bits = entries.empty() ? 0 : entries[static_cast<std::size_t>(r)].code.bits;
        }
        if (p.nfa.states[static_cast<std::size_t>(sp.state)].reporting)
            tp.report_mask[static_cast<std::size_t>(sp.slice)].set(
                static_cast<std::size_t>(sp.col));
    }
    return {std::move(p), std::move(manifest)};
}

}  // namespace camsim
