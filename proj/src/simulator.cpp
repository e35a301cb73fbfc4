#include "camsim/simulator.hpp"

#include <algorithm>
#include <sstream>

#include "camsim/errors.hpp"
#include "camsim/interpret.hpp"

namespace camsim {

const char* variant_name(Variant v) { return v == Variant::Energy ? "e" : "t"; }

Variant variant_of_name(const std::string& s) {
    if (s == "e" || s == "energy") return Variant::Energy;
    if (s == "t" || s == "throughput") return Variant::Throughput;
    throw Error::input("unknown variant '" + s + "' (use e or t)");
}

namespace {

struct TileCtx {
    std::array<ColumnSet, 2> placed{};     // used columns
    std::array<ColumnSet, 2> all_input{};  // columns of AllInput states
    std::vector<StateId> state_ids;        // states resident in this tile
};

struct SimContext {
    const Placement& pl;
    EncoderTable table;
    std::vector<TileCtx> tiles;

    explicit SimContext(const Placement& placement)
        : pl(placement), table(build_encoder_table(placement.compiled.codebook)) {
        tiles.resize(pl.tiles.size());
        for (const StatePlace& p : pl.states) {
            if (p.state < 0) continue;
            TileCtx& tc = tiles[static_cast<std::size_t>(p.tile)];
            tc.state_ids.push_back(p.state);
            for (int r = 0; r < p.count; ++r)
                tc.placed[static_cast<std::size_t>(p.slice)].set(
                    static_cast<std::size_t>(p.col + r));
            if (pl.nfa.states[static_cast<std::size_t>(p.state)].start ==
                StartKind::AllInput)
                for (int r = 0; r < p.count; ++r)
                    tc.all_input[static_cast<std::size_t>(p.slice)].set(
                        static_cast<std::size_t>(p.col + r));
        }
    }
};

void enable_state(std::vector<std::array<ColumnSet, 2>>& enabled, const StatePlace& p) {
    for (int r = 0; r < p.count; ++r)
        enabled[static_cast<std::size_t>(p.tile)][static_cast<std::size_t>(p.slice)].set(
            static_cast<std::size_t>(p.col + r));
}

// Switch input slots driven by the active columns: banded tiles drive one
// slot per group window containing the column, FCB tiles feed three replicas
// of each row.
int count_active_rows(const Placement& pl, TileMode mode,
                      const std::array<ColumnSet, 2>& active_cols) {
    const FabricConfig& cfg = pl.cfg;
    int slots = 0;
    if (mode == TileMode::Rcb16) {
        for (int sl = 0; sl < 2; ++sl) {
            const ColumnSet& act = active_cols[static_cast<std::size_t>(sl)];
            if (act.none()) continue;
            for (int g = 0; g < cfg.group_count(); ++g) {
                const int lead = cfg.window_slots() - cfg.k_dia;
                const int lo = std::max(0, cfg.k_dia * g - lead);
                const int hi = std::min(cfg.cam_cols, cfg.k_dia * (g + 1));
                for (int i = lo; i < hi; ++i)
                    if (act[static_cast<std::size_t>(i)]) ++slots;
            }
        }
    } else {
        slots = static_cast<int>(active_cols[0].count()) * cfg.wl_segments;
    }
    return slots;
}

SimResult simulate(const Placement& pl, std::span<const std::uint8_t> input,
                   Variant version) {
    SimContext ctx(pl);
    const int ntiles = static_cast<int>(pl.tiles.size());

    std::vector<std::array<ColumnSet, 2>> enabled(static_cast<std::size_t>(ntiles));
    for (const StatePlace& p : pl.states)
        if (p.state >= 0 &&
            pl.nfa.states[static_cast<std::size_t>(p.state)].start != StartKind::None)
            enable_state(enabled, p);

    SimResult out;
    out.trace.version = version;
    out.trace.cycles.reserve(input.size());

    std::vector<std::array<ColumnSet, 2>> next(static_cast<std::size_t>(ntiles));
    std::vector<std::bitset<256>> exported(pl.globals.size());

    for (std::size_t cyc = 0; cyc < input.size(); ++cyc) {
        const Symbol sym = input[cyc];
        if (sym >= pl.nfa.alphabet_size)
            throw Error::input("input symbol " + std::to_string(sym) +
                               " outside alphabet of " +
                               std::to_string(pl.nfa.alphabet_size));
        const std::uint32_t code = ctx.table.rows[static_cast<std::size_t>(sym)];

        CycleActivity ca;
        ca.cycle = static_cast<std::int64_t>(cyc);
        ca.symbol = sym;
        ca.tiles.resize(static_cast<std::size_t>(ntiles));

        for (auto& n : next) n = {};
        for (auto& e : exported) e.reset();

        for (int t = 0; t < ntiles; ++t) {
            const TilePlan& tp = pl.tiles[static_cast<std::size_t>(t)];
            const TileCtx& tc = ctx.tiles[static_cast<std::size_t>(t)];
            TileActivity& ta = ca.tiles[static_cast<std::size_t>(t)];
            ta.tile = t;

            // CAMA-E precharges only the enabled columns; CAMA-T precharges
            // every placed column and ANDs with the pipeline register.
            const std::array<ColumnSet, 2>& precharge =
                version == Variant::Energy ? enabled[static_cast<std::size_t>(t)]
                                           : tc.placed;
            const int en_cols_a = static_cast<int>(precharge[0].count());
            const int en_cols_b = static_cast<int>(precharge[1].count());
            switch (tp.mode) {
                case TileMode::Rcb16:
                    ta.enabled_a = en_cols_a;
                    ta.enabled_b = en_cols_b;
                    break;
                case TileMode::Fcb16:
                    ta.enabled_a = en_cols_a;
                    ta.enabled_b = 0;
                    break;
                case TileMode::Mode32:
                    // each column spans both sub-arrays
                    ta.enabled_a = en_cols_a;
                    ta.enabled_b = en_cols_a;
                    break;
            }

            const auto matches = tile_match(tp.tile, code, precharge);
            ta.matched =
                static_cast<int>(matches[0].count() + matches[1].count());

            // State-level resolution: OR over replicas, invert, gate by the
            // enabled set.
            std::array<ColumnSet, 2> active_cols{};
            for (StateId s : tc.state_ids) {
                const StatePlace& p = pl.states[static_cast<std::size_t>(s)];
                const auto& en_slice =
                    enabled[static_cast<std::size_t>(t)][static_cast<std::size_t>(p.slice)];
                if (!en_slice[static_cast<std::size_t>(p.col)]) continue;
                bool any = false;
                for (int r = 0; r < p.count && !any; ++r)
                    any = matches[static_cast<std::size_t>(p.slice)]
                                 [static_cast<std::size_t>(p.col + r)];
                const bool active = any ^ p.invert;
                if (!active) continue;
                for (int r = 0; r < p.count; ++r)
                    active_cols[static_cast<std::size_t>(p.slice)].set(
                        static_cast<std::size_t>(p.col + r));
                const Ste& st = pl.nfa.states[static_cast<std::size_t>(s)];
                if (st.reporting) {
                    out.reports.push_back(
                        {s, p.partition, sym, static_cast<std::int64_t>(cyc)});
                    ++ta.reports;
                    ++ca.reports;
                }
                // local routing happens below on the whole active set; global
                // exports are per sending state
                auto it = tp.send_port.find(s);
                if (it != tp.send_port.end())
                    exported[static_cast<std::size_t>(tp.array)].set(
                        static_cast<std::size_t>(tp.index_in_array *
                                                     pl.cfg.global_ports_out +
                                                 it->second));
            }

            ta.active_rows = count_active_rows(pl, tp.mode, active_cols);
            ta.local_access = active_cols[0].any() || active_cols[1].any();
            for (auto [state, port] : tp.send_port) {
                const StatePlace& p = pl.states[static_cast<std::size_t>(state)];
                bool act = active_cols[static_cast<std::size_t>(p.slice)]
                                      [static_cast<std::size_t>(p.col)];
                if (act) ta.global_access = 1;
            }

            for (int sl = 0; sl < tile_slices(tp.mode); ++sl) {
                const auto& prog = tp.programs[static_cast<std::size_t>(sl)];
                if (!prog) continue;
                next[static_cast<std::size_t>(t)][static_cast<std::size_t>(sl)] |=
                    route_local(*prog, active_cols[static_cast<std::size_t>(sl)]);
            }
        }

        // Global state transition: same-cycle combinational routing.
        for (std::size_t a = 0; a < pl.globals.size(); ++a) {
            if (exported[a].none()) continue;
            const std::bitset<256> imports = route_global(pl.globals[a], exported[a]);
            if (imports.none()) continue;
            for (int t = 0; t < ntiles; ++t) {
                const TilePlan& tp = pl.tiles[static_cast<std::size_t>(t)];
                if (tp.array != static_cast<int>(a)) continue;
                for (auto [state, port] : tp.recv_port) {
                    const std::size_t slot = static_cast<std::size_t>(
                        pl.cfg.global_dim / 2 +
                        tp.index_in_array * pl.cfg.global_ports_in + port);
                    if (imports[slot])
                        enable_state(next, pl.states[static_cast<std::size_t>(state)]);
                }
            }
        }

        for (int t = 0; t < ntiles; ++t)
            for (int sl = 0; sl < 2; ++sl)
                next[static_cast<std::size_t>(t)][static_cast<std::size_t>(sl)] |=
                    ctx.tiles[static_cast<std::size_t>(t)]
                        .all_input[static_cast<std::size_t>(sl)];

        enabled.swap(next);
        out.trace.cycles.push_back(std::move(ca));
    }

    const std::int64_t len = static_cast<std::int64_t>(input.size());
    out.trace.input_interrupts = (len + kInputBufferEntries - 1) / kInputBufferEntries;
    out.trace.output_interrupts =
        (static_cast<std::int64_t>(out.reports.size()) + kOutputBufferEntries - 1) /
        kOutputBufferEntries;
    return out;
}

}  // namespace

SimResult run_e(const Placement& placement, std::span<const std::uint8_t> input) {
    return simulate(placement, input, Variant::Energy);
}

SimResult run_t(const Placement& placement, std::span<const std::uint8_t> input) {
    return simulate(placement, input, Variant::Throughput);
}

SimResult run_sim(const Placement& placement, std::span<const std::uint8_t> input,
                  Variant version) {
    return simulate(placement, input, version);
}

namespace {

std::vector<std::tuple<StateId, std::int64_t, Symbol>> report_key(
    const std::vector<ReportRecord>& reports) {
    std::vector<std::tuple<StateId, std::int64_t, Symbol>> keys;
    keys.reserve(reports.size());
    for (const auto& r : reports) keys.emplace_back(r.state_id, r.cycle, r.input_symbol);
    std::sort(keys.begin(), keys.end());
    return keys;
}

}  // namespace

CompareVerdict run_oracle_compare(const HomogeneousNfa& nfa, const Placement& placement,
                                  std::span<const std::uint8_t> input) {
    auto expect = report_key(interpret(nfa, input));
    auto got_e = report_key(run_e(placement, input).reports);
    auto got_t = report_key(run_t(placement, input).reports);

    auto diff = [&](const auto& got, const char* which) -> CompareVerdict {
        for (std::size_t i = 0; i < std::max(expect.size(), got.size()); ++i) {
            if (i < expect.size() && i < got.size() && expect[i] == got[i]) continue;
            std::ostringstream os;
            os << which << " diverges at record " << i << ": expected ";
            if (i < expect.size())
                os << "(state=" << std::get<0>(expect[i]) << " cycle=" << std::get<1>(expect[i])
                   << " sym=" << std::get<2>(expect[i]) << ")";
            else
                os << "(none)";
            os << ", got ";
            if (i < got.size())
                os << "(state=" << std::get<0>(got[i]) << " cycle=" << std::get<1>(got[i])
                   << " sym=" << std::get<2>(got[i]) << ")";
            else
                os << "(none)";
            return {false, os.str()};
        }
        return {true, {}};
    };

    if (auto v = diff(got_e, "run_e"); !v.equal) return v;
    if (auto v = diff(got_t, "run_t"); !v.equal) return v;
    return {true, "reports match (" + std::to_string(expect.size()) + " records)"};
}

TraceSummary trace_summary(const ActivityTrace& trace) {
    TraceSummary s;
    s.cycles = static_cast<std::int64_t>(trace.cycles.size());
    for (const CycleActivity& ca : trace.cycles) {
        s.reports += ca.reports;
        for (const TileActivity& ta : ca.tiles) {
            s.enabled_entries += ta.enabled_a + ta.enabled_b;
            s.matched += ta.matched;
            s.active_rows += ta.active_rows;
            s.global_accesses += ta.global_access;
        }
    }
    if (s.cycles > 0) {
        s.avg_enabled_per_cycle = double(s.enabled_entries) / double(s.cycles);
        s.avg_active_rows_per_cycle = double(s.active_rows) / double(s.cycles);
        s.avg_global_per_cycle = double(s.global_accesses) / double(s.cycles);
        s.reports_per_cycle = double(s.reports) / double(s.cycles);
    }
    return s;
}

std::string trace_to_csv(const ActivityTrace& trace) {
    std::ostringstream os;
    os << "# placement=" << trace.placement_hash << " version=" << variant_name(trace.version)
       << " input_interrupts=" << trace.input_interrupts
       << " output_interrupts=" << trace.output_interrupts << "\n";
    os << "cycle,symbol,tile,enabled_a,enabled_b,matched,active_rows,local_access,"
          "global_access,reports\n";
    for (const CycleActivity& ca : trace.cycles)
        for (const TileActivity& ta : ca.tiles)
            os << ca.cycle << "," << ca.symbol << "," << ta.tile << "," << ta.enabled_a
               << "," << ta.enabled_b << "," << ta.matched << "," << ta.active_rows << ","
               << (ta.local_access ? 1 : 0) << "," << ta.global_access << "," << ta.reports
               << "\n";
    return os.str();
}

ActivityTrace trace_from_csv(const std::string& text) {
    ActivityTrace trace;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# placement=", 0) != 0)
        throw Error::input("trace is missing its placement header");
    {
        std::istringstream hdr(line.substr(2));
        std::string field;
        while (hdr >> field) {
            auto eq = field.find('=');
            if (eq == std::string::npos) continue;
            std::string key = field.substr(0, eq), val = field.substr(eq + 1);
            if (key == "placement") trace.placement_hash = val;
            if (key == "version") trace.version = variant_of_name(val);
            if (key == "input_interrupts") trace.input_interrupts = std::stoll(val);
            if (key == "output_interrupts") trace.output_interrupts = std::stoll(val);
        }
    }
    std::getline(in, line);  // column header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::vector<long long> f;
        std::string cell;
        while (std::getline(row, cell, ',')) f.push_back(std::stoll(cell));
        if (f.size() != 10) throw Error::input("malformed trace row: " + line);
        const std::int64_t cycle = f[0];
        if (trace.cycles.empty() || trace.cycles.back().cycle != cycle) {
            CycleActivity ca;
            ca.cycle = cycle;
            ca.symbol = static_cast<Symbol>(f[1]);
            trace.cycles.push_back(std::move(ca));
        }
        TileActivity ta;
        ta.tile = static_cast<int>(f[2]);
        ta.enabled_a = static_cast<int>(f[3]);
        ta.enabled_b = static_cast<int>(f[4]);
        ta.matched = static_cast<int>(f[5]);
        ta.active_rows = static_cast<int>(f[6]);
        ta.local_access = f[7] != 0;
        ta.global_access = static_cast<int>(f[8]);
        ta.reports = static_cast<int>(f[9]);
        trace.cycles.back().reports += ta.reports;
        trace.cycles.back().tiles.push_back(ta);
    }
    return trace;
}

std::string reports_to_text(const std::vector<ReportRecord>& reports,
                            const std::string& format) {
    std::ostringstream os;
    if (format == "csv") {
        os << "cycle,state,partition,symbol\n";
        for (const auto& r : reports)
            os << r.cycle << "," << r.state_id << "," << r.partition_id << ","
               << r.input_symbol << "\n";
    } else if (format == "json") {
        os << "[";
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const auto& r = reports[i];
            os << (i ? "," : "") << "\n  {\"cycle\": " << r.cycle
               << ", \"state\": " << r.state_id << ", \"partition\": " << r.partition_id
               << ", \"symbol\": " << r.input_symbol << "}";
        }
        os << (reports.empty() ? "]" : "\n]") << "\n";
    } else {
        for (const auto& r : reports)
            os << r.cycle << " " << r.state_id << " " << r.partition_id << " "
               << r.input_symbol << "\n";
    }
    return os.str();
}

}  // namespace camsim
