#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "camsim/errors.hpp"
#include "camsim/fabric.hpp"
#include "camsim/fuzz.hpp"

using namespace camsim;

namespace {

CamEntry entry_of(const std::string& bits) {
    return CamEntry{Code::from_string(bits), 0, false};
}

}  // namespace

TEST_CASE("cam_match follows the subset rule") {
    CHECK(cam_match(entry_of("00100"), Code::from_string("00101")));
    CHECK(cam_match(entry_of("00100"), Code::from_string("00110")));
    CHECK_FALSE(cam_match(entry_of("00100"), Code::from_string("01001")));
    CHECK(cam_match(entry_of("00101"), Code::from_string("00101")));  // identity
}

TEST_CASE("cam_match shows why raw ASCII cannot be stored") {
    // 'A' = 01000001 stored; input 'C' = 01000011 wrongly matches
    CHECK(cam_match(entry_of("01000001"), Code::from_string("01000011")));
}

TEST_CASE("cam_match rejects width mismatches") {
    CHECK_THROWS_AS(cam_match(entry_of("0101"), Code::from_string("01010")), Error);
}

TEST_CASE("cam_match equals the algebraic identity") {
    Rng rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        Code e{static_cast<std::uint32_t>(rng.next()) & 0xffffu, 16};
        Code c{static_cast<std::uint32_t>(rng.next()) & 0xffffu, 16};
        const bool expect = (e.bits & ~c.bits & e.mask()) == 0;
        CHECK(cam_match(CamEntry{e, 0, false}, c) == expect);
    }
}

TEST_CASE("rcb_supports window shape") {
    FabricConfig cfg;
    cfg.validate();
    CHECK(rcb_supports(0, 0));        // self-loop on the diagonal
    CHECK_FALSE(rcb_supports(150, 0));
    // group 1 spans destinations 43..85 and sources 22..85
    CHECK(rcb_supports(22, 43));
    CHECK_FALSE(rcb_supports(21, 43));
    CHECK(rcb_supports(85, 85));
    CHECK_FALSE(rcb_supports(86, 85));
}

TEST_CASE("rcb_supports covers self-loops and the forward band exhaustively") {
    for (int i = 0; i < 256; ++i) CHECK(rcb_supports(i, i));
    for (int i = 0; i < 256; ++i)
        for (int j = i; j < std::min(256, i + 22); ++j) {
            CAPTURE(i);
            CAPTURE(j);
            CHECK(rcb_supports(i, j));
        }
}

TEST_CASE("rcb_supports pair count matches the window arithmetic") {
    FabricConfig cfg;
    // per-group window sizes, clamped at the edges
    std::int64_t expected = 0;
    std::int64_t slot_instances = 0;
    for (int g = 0; g < cfg.group_count(); ++g) {
        const int lead = cfg.window_slots() - cfg.k_dia;
        const int lo = std::max(0, cfg.k_dia * g - lead);
        const int hi = std::min(cfg.cam_cols, cfg.k_dia * (g + 1));
        const int group_lo = cfg.k_dia * g;
        const int group_hi = std::min(cfg.cam_cols, cfg.k_dia * (g + 1));
        expected += static_cast<std::int64_t>(hi - lo) * (group_hi - group_lo);
        slot_instances += hi - lo;
    }
    std::int64_t got = 0;
    for (int i = 0; i < 256; ++i)
        for (int j = 0; j < 256; ++j) got += rcb_supports(i, j) ? 1 : 0;
    CHECK(got == expected);
    // the windows fit the 384-slot replica budget (6 x 64 unclamped)
    CHECK(slot_instances <= cfg.source_slots());
    CHECK(cfg.window_slots() * cfg.group_count() == cfg.source_slots());
}

TEST_CASE("program_switch accepts chains and rejects out-of-band pairs") {
    std::vector<std::pair<int, int>> chain;
    for (int i = 0; i + 1 < 256; ++i) chain.emplace_back(i, i + 1);
    CHECK_NOTHROW(program_switch(chain, SwitchKind::Rcb));
    CHECK_THROWS_AS(program_switch({{0, 200}}, SwitchKind::Rcb), Error);
}

TEST_CASE("fcb blocks are complete but never cross") {
    std::vector<std::pair<int, int>> dense;
    for (int i = 0; i < 128; ++i) dense.emplace_back(i, (i * 37) % 128);
    for (int i = 128; i < 256; ++i) dense.emplace_back(i, 128 + (i * 53) % 128);
    CHECK_NOTHROW(program_switch(dense, SwitchKind::Fcb));
    CHECK_THROWS_AS(program_switch({{0, 200}}, SwitchKind::Fcb), Error);
    CHECK_THROWS_AS(program_switch({{130, 10}}, SwitchKind::Fcb), Error);
}

TEST_CASE("route_local zero vector without sources") {
    SwitchProgram p = program_switch({{0, 1}, {0, 2}}, SwitchKind::Rcb);
    CHECK(route_local(p, ColumnSet{}).none());
}

TEST_CASE("route_local follows programmed fanout") {
    SwitchProgram p = program_switch({{0, 1}, {0, 2}}, SwitchKind::Rcb);
    ColumnSet active;
    active.set(0);
    ColumnSet dest = route_local(p, active);
    CHECK(dest[1]);
    CHECK(dest[2]);
    CHECK(dest.count() == 2);
}

TEST_CASE("route_local equals the brute-force matrix product") {
    Rng rng(20);
    for (int trial = 0; trial < 1000; ++trial) {
        // random in-band transition set
        std::vector<std::pair<int, int>> pairs;
        const int n = static_cast<int>(rng.below(60));
        for (int k = 0; k < n; ++k) {
            int j = static_cast<int>(rng.below(256));
            int span = static_cast<int>(rng.below(22));
            int i = std::max(0, j - span);
            if (rcb_supports(i, j)) pairs.emplace_back(i, j);
        }
        SwitchProgram p = program_switch(pairs, SwitchKind::Rcb);
        ColumnSet active;
        for (int k = 0; k < 32; ++k) active.set(rng.below(256));
        ColumnSet got = route_local(p, active);
        ColumnSet expect;
        for (auto [i, j] : pairs)
            if (active[static_cast<std::size_t>(i)]) expect.set(static_cast<std::size_t>(j));
        CHECK(got == expect);
    }
}

TEST_CASE("rcb programs route identically to their dense-matrix form") {
    // feasible band programs behave exactly like the same bits in a full
    // 256x256 crossbar restricted to the band
    Rng rng(21);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::pair<int, int>> pairs;
        for (int k = 0; k < 40; ++k) {
            int j = static_cast<int>(rng.below(256));
            int g = j / 43;
            int lo = std::max(0, 43 * g - 21);
            int hi = std::min(256, 43 * (g + 1));
            int i = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo)));
            pairs.emplace_back(i, j);
        }
        SwitchProgram banded = program_switch(pairs, SwitchKind::Rcb);
        std::array<std::bitset<256>, 256> dense{};
        for (auto [i, j] : pairs) dense[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(j));
        ColumnSet v;
        for (int k = 0; k < 48; ++k) v.set(rng.below(256));
        ColumnSet a = route_local(banded, v);
        ColumnSet b;
        for (std::size_t i = 0; i < 256; ++i)
            if (v[i]) b |= dense[i];
        CHECK(a == b);
    }
}

TEST_CASE("route_global moves port slots") {
    GlobalProgram g = program_global({{0, 128 + 16}});  // tile0 port0 -> tile1 port0
    std::bitset<256> exported;
    exported.set(0);
    auto imports = route_global(g, exported);
    CHECK(imports[128 + 16]);
    CHECK(imports.count() == 1);
    CHECK(route_global(g, {}).none());
}

TEST_CASE("tile_match honours enables and modes") {
    Tile tile;
    tile.mode = TileMode::Rcb16;
    tile.slices[0][3] = {Code::from_string("0011000000000000").bits, 7, true};
    std::array<ColumnSet, 2> all_off{};
    const std::uint32_t input = Code::from_string("0011010000000000").bits;
    CHECK(tile_match(tile, input, all_off)[0].none());

    std::array<ColumnSet, 2> on{};
    on[0].set(3);
    auto m = tile_match(tile, input, on);
    CHECK(m[0][3]);
    CHECK(m[0].count() == 1);
}

TEST_CASE("tile_match mode32 requires both halves") {
    Tile tile;
    tile.mode = TileMode::Mode32;
    // low half matches the input, high half does not
    const std::uint32_t entry = 0x0001'0001u;
    tile.slices[0][0] = {entry, 0, true};
    std::array<ColumnSet, 2> on{};
    on[0].set(0);
    CHECK(tile_match(tile, 0x0000'0001u, on)[0].none());
    CHECK(tile_match(tile, 0x0001'0001u, on)[0][0]);
}

TEST_CASE("switch program rle dump is stable") {
    SwitchProgram p = program_switch({{0, 1}, {0, 2}, {5, 5}}, SwitchKind::Rcb);
    const std::string dump = switch_program_rle(p);
    CHECK(dump ==
          "kind=rcb rows=256\n"
          "r0: 0x1 1x2 0x253\n"
          "r5: 0x5 1x1 0x250\n");
}
