#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <stdexcept>

#include "ffgraph/orbits.hpp"

using namespace ffgraph;

TEST_CASE("cycle_census on hand-built successor maps") {
    CHECK(cycle_census({{0}}).counts == std::map<std::uint64_t, std::uint64_t>{{1, 1}});
    CHECK(cycle_census({{1, 0}}).counts == std::map<std::uint64_t, std::uint64_t>{{2, 1}});
    // rho shape: 3 -> 2 -> 0 -> 1 -> 0
    CHECK(cycle_census({{1, 0, 0, 2}}).counts ==
          std::map<std::uint64_t, std::uint64_t>{{2, 1}});
    // two separate fixed points plus a 3-cycle
    CHECK(cycle_census({{0, 1, 3, 4, 2}}).counts ==
          std::map<std::uint64_t, std::uint64_t>{{1, 2}, {3, 1}});
    CHECK_THROWS_AS(cycle_census({{5, 0}}), std::invalid_argument);
}

TEST_CASE("census of the q=13 n=2 reference instance") {
    ExtCtx E = build_ext(build_field(13, 1));
    MapParams mp = derive_deltas(E, 3, 1, 2);
    SuccessorMap sm = build_successors(E, mp);
    CycleCensus cc = cycle_census(sm);
    CHECK(cc.counts == std::map<std::uint64_t, std::uint64_t>{{1, 3}, {2, 5}, {6, 4}});
    CHECK(cc.total_cyclic() == 3 + 10 + 24);
}

TEST_CASE("hanging trees of the q=13 n=2 instance all look alike") {
    ExtCtx E = build_ext(build_field(13, 1));
    MapParams mp = derive_deltas(E, 3, 1, 2);
    SuccessorMap sm = build_successors(E, mp);
    GraphReport rep = graph_report(sm);
    REQUIRE(rep.nonzero_tree_classes.size() == 1);
    const TreeShape& t = rep.nonzero_tree_classes[0].first;
    CHECK(t.level_sizes == std::vector<std::uint64_t>{1, 1, 2});
    CHECK(t.height == 2);
    CHECK(rep.nonzero_tree_classes[0].second == 36);  // every nonzero cyclic vertex
    // spot-check hanging_tree against the grouped result: 200 successor steps
    // from any start necessarily land on a cycle
    std::uint32_t cyclic_nonzero = 0;
    for (std::uint32_t v = 1; v < sm.size() && cyclic_nonzero == 0; ++v) {
        std::uint32_t u = v;
        for (int k = 0; k < 200; ++k) u = sm.succ[u];
        if (u != 0) cyclic_nonzero = u;
    }
    REQUIRE(cyclic_nonzero != 0);
    CHECK(hanging_tree(sm, cyclic_nonzero) == t);
    CHECK(component_ids(sm).size() == sm.size());
}

TEST_CASE("height-0 trees for q=13 n=5") {
    ExtCtx E = build_ext(build_field(13, 1));
    MapParams mp = derive_deltas(E, 3, 1, 5);
    SuccessorMap sm = build_successors(E, mp);
    GraphReport rep = graph_report(sm);
    REQUIRE(rep.nonzero_tree_classes.size() == 1);
    CHECK(rep.nonzero_tree_classes[0].first.canonical == "()");
    CHECK(rep.nonzero_tree_classes[0].first.height == 0);
    CHECK(rep.nonzero_tree_classes[0].second == 156);
}

TEST_CASE("zero component size via graph_report") {
    ExtCtx E = build_ext(build_field(13, 1));
    // delta1*delta2 != 0: zero component has 2q-1 = 25 elements
    MapParams mp = derive_deltas(E, 3, 7, 4);
    REQUIRE(mp.delta1 != 0);
    REQUIRE(mp.delta2 != 0);
    SuccessorMap sm = build_successors(E, mp);
    GraphReport rep = graph_report(sm);
    CHECK(rep.zero_profile.total_size() == 25);
    CHECK(rep.zero_profile.level_sizes == std::vector<std::uint64_t>{1, 12, 12});
}

TEST_CASE("odd delta2=0 instance is one big component") {
    ExtCtx E = build_ext(build_field(7, 1));
    MapParams mp = derive_deltas(E, 2, 2, 3);  // delta2 = a - c = 0
    REQUIRE(mp.delta2 == 0);
    SuccessorMap sm = build_successors(E, mp);
    GraphReport rep = graph_report(sm);
    CHECK(rep.component_sizes == std::vector<std::uint64_t>{49});
    CHECK(rep.zero_profile.total_size() == 49);
    CHECK(rep.census.counts == std::map<std::uint64_t, std::uint64_t>{{1, 1}});
}

TEST_CASE("trivial map sends everything to zero") {
    ExtCtx E = build_ext(build_field(7, 1));
    MapParams mp = derive_deltas(E, 0, 0, 2, /*allow_trivial=*/true);
    SuccessorMap sm = build_successors(E, mp);
    for (auto v : sm.succ) CHECK(v == 0);
    auto hist = in_degree_histogram(sm);
    CHECK(hist == std::map<std::uint64_t, std::uint64_t>{{0, 48}, {49, 1}});
    GraphReport rep = graph_report(sm);
    CHECK(rep.census.counts == std::map<std::uint64_t, std::uint64_t>{{1, 1}});
    CHECK(rep.zero_profile.level_sizes == std::vector<std::uint64_t>{1, 48});
}

TEST_CASE("component sizes partition the node set") {
    ExtCtx E = build_ext(build_field(11, 1));
    for (auto [a, c, n] : {std::tuple<std::uint32_t, std::uint32_t, std::uint64_t>{3, 1, 2},
                           {5, 5, 3}, {7, 4, 6}, {2, 9, 5}}) {
        MapParams mp = derive_deltas(E, a, c, n);
        SuccessorMap sm = build_successors(E, mp);
        GraphReport rep = graph_report(sm);
        std::uint64_t total =
            std::accumulate(rep.component_sizes.begin(), rep.component_sizes.end(),
                            std::uint64_t{0});
        CHECK(total == 121);
        CHECK(std::is_sorted(rep.component_sizes.rbegin(), rep.component_sizes.rend()));
        auto ids = component_ids(sm);
        for (std::uint32_t v = 0; v < sm.size(); ++v) CHECK(ids[v] == ids[sm.succ[v]]);
    }
}

TEST_CASE("audit mode passes on a faithful build") {
    ExtCtx E = build_ext(build_field(13, 1));
    MapParams mp = derive_deltas(E, 3, 1, 3);
    CHECK_NOTHROW(build_successors(E, mp, /*audit=*/true));
    SuccessorMap good = build_successors(E, mp);
    CHECK(dual_eval_mismatches(E, mp, good) == 0);
    // explicit comparison against the direct evaluation, point by point
    for (std::uint32_t i = 0; i < E.size(); ++i)
        CHECK(good.succ[i] == E.encode(eval_map_direct(E, mp, E.decode(i))));
}

TEST_CASE("dual_eval_mismatches counts every perturbed node") {
    ExtCtx E = build_ext(build_field(7, 1));
    MapParams mp = derive_deltas(E, 3, 1, 2);
    SuccessorMap sm = build_successors(E, mp);
    CHECK(dual_eval_mismatches(E, mp, sm) == 0);
    SuccessorMap bad = sm;
    bad.succ[5] = (bad.succ[5] + 1) % bad.size();
    bad.succ[17] = (bad.succ[17] + 3) % bad.size();
    CHECK(dual_eval_mismatches(E, mp, bad) == 2);
}

TEST_CASE("build_successors rejects graphs over the cap") {
    ExtCtx E = build_ext(build_field(13, 1));
    MapParams mp = derive_deltas(E, 3, 1, 2);
    CHECK_THROWS_AS(build_successors(E, mp, false, 1, 100), std::invalid_argument);
}

TEST_CASE("hanging_tree rejects non-cyclic nodes") {
    ExtCtx E = build_ext(build_field(13, 1));
    MapParams mp = derive_deltas(E, 3, 1, 2);
    SuccessorMap sm = build_successors(E, mp);
    // find a non-cyclic node: one whose long-run image never returns to it
    std::uint32_t tail = 0;
    for (std::uint32_t v = 1; v < sm.size(); ++v) {
        std::uint32_t u = v;
        bool returns = false;
        for (int k = 0; k < 170; ++k) {
            u = sm.succ[u];
            if (u == v) { returns = true; break; }
        }
        if (!returns) { tail = v; break; }
    }
    REQUIRE(tail != 0);
    CHECK_THROWS_AS(hanging_tree(sm, tail), std::invalid_argument);
    CHECK_THROWS_AS(hanging_tree(sm, sm.size()), std::invalid_argument);
}
