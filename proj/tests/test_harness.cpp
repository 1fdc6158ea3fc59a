#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ffgraph/harness.hpp"

using namespace ffgraph;

static InstanceKey mk(std::uint32_t p, std::uint32_t s, std::uint64_t n, std::uint32_t a,
                      std::uint32_t c) {
    InstanceKey k;
    k.p = p;
    k.s = s;
    k.n = n;
    k.a = a;
    k.c = c;
    return k;
}

TEST_CASE("verify_instance matches on the reference instances") {
    for (auto key : {mk(13, 1, 2, 3, 1), mk(13, 1, 3, 3, 1), mk(13, 1, 5, 3, 1),
                     mk(13, 1, 6, 3, 1), mk(7, 1, 2, 3, 3), mk(7, 1, 2, 3, 4),
                     mk(7, 1, 3, 2, 2), mk(13, 1, 4, 3, 7)}) {
        VerifyResult vr = verify_instance(key);
        CHECK(vr.all_match());
        CHECK(vr.census_match);
        CHECK(vr.tree_match);
        CHECK(vr.zero_match);
        CHECK(vr.audit_ok);
        CHECK(vr.diffs.empty());
        CHECK(vr.mismatch_tags.empty());
        CHECK(!vr.excused);
        REQUIRE(vr.detail != nullptr);
        CHECK(vr.detail->predicted.census == vr.detail->observed.census);
    }
}

TEST_CASE("verify_instance resolves canonical defaults into the key") {
    VerifyResult vr = verify_instance(mk(13, 1, 2, 3, 1));
    CHECK(vr.key.modulus == "0,1");
    CHECK(vr.key.b == 2);
    CHECK(vr.key.generator == 2);
    CHECK(key_to_string(vr.key) == "p=13 s=1 n=2 a=3 c=1 modulus=0,1 b=2 generator=2");
    // explicit overrides survive
    InstanceKey k8 = mk(13, 1, 2, 3, 1);
    k8.b = 8;
    CHECK(verify_instance(k8).key.b == 8);
}

TEST_CASE("verify_instance handles the trivial map") {
    VerifyResult vr = verify_instance(mk(13, 1, 2, 0, 0));
    CHECK(vr.all_match());
    CHECK(vr.detail->predicted.trivial);
    CHECK(vr.detail->observed.census.counts ==
          std::map<std::uint64_t, std::uint64_t>{{1, 1}});
}

TEST_CASE("verify_instance reports a documented divergence with diffs and tags") {
    VerifyResult vr = verify_instance(mk(7, 1, 4, 0, 1));
    CHECK(!vr.all_match());
    CHECK(!vr.census_match);
    CHECK(vr.tree_match);
    CHECK(vr.zero_match);
    CHECK(!vr.diffs.empty());
    // both length-1 and length-2 counts differ; both rule tags implicated
    CHECK(vr.mismatch_tags == std::vector<std::string>{"OddCycle", "evenlength"});
    bool saw_len1 = false;
    for (const auto& d : vr.diffs)
        if (d[0] == "census[1]") {
            saw_len1 = true;
            CHECK(d[1] == "3");
            CHECK(d[2] == "7");
        }
    CHECK(saw_len1);
}

TEST_CASE("verify_instance rejects bad keys") {
    CHECK_THROWS_AS(verify_instance(mk(4, 1, 2, 1, 0)), std::invalid_argument);
    CHECK_THROWS_AS(verify_instance(mk(13, 1, 1, 3, 1)), std::invalid_argument);
    CHECK_THROWS_AS(verify_instance(mk(13, 1, 2, 13, 0)), std::invalid_argument);
}

TEST_CASE("clean mini sweep: p in {3,5,7}, n=2 has no mismatches") {
    SweepSpec spec;
    spec.p_list = {3, 5, 7};
    spec.s_list = {1};
    spec.n_min = 2;
    spec.n_max = 2;
    SweepOutcome out = sweep(spec);
    CHECK(out.summary.instances == 8 + 24 + 48);
    CHECK(out.summary.matched == out.summary.instances);
    CHECK(out.summary.unexplained == 0);
    CHECK(out.summary.excused == 0);
    CHECK(out.summary.dual_mismatch_nodes == 0);
    CHECK(out.summary.indegree_violations == 0);
    CHECK(out.results.size() == out.summary.instances);
    CHECK(std::is_sorted(out.results.begin(), out.results.end(),
                         [](const VerifyResult& x, const VerifyResult& y) {
                             return x.key < y.key;
                         }));
}

TEST_CASE("known-discrepancies round trip excuses a divergent mini sweep") {
    SweepSpec spec;
    spec.p_list = {3, 5};
    spec.s_list = {1};
    spec.n_min = 3;
    spec.n_max = 3;
    SweepOutcome first = sweep(spec);
    // c = -a instances with g(3) = 1: two pairs at p=3, four at p=5
    CHECK(first.summary.unexplained == 6);
    CHECK(first.summary.mismatch_by_tag.at("treeodd") == 6);
    const std::string path = "test_known_roundtrip.tmp";
    write_known_discrepancies(path, first.results);
    KnownSet ks = load_known_discrepancies(path);
    CHECK(ks.size() == 6);
    for (const auto& [key, tags] : ks)
        CHECK(tags == std::set<std::string>{"treeodd"});
    SweepOutcome second = sweep(spec, ks);
    CHECK(second.summary.unexplained == 0);
    CHECK(second.summary.excused == 6);
    std::uint64_t excused_flags = 0;
    for (const auto& r : second.results)
        if (r.excused) ++excused_flags;
    CHECK(excused_flags == 6);
    std::remove(path.c_str());
}

TEST_CASE("known-discrepancies loader validates its input") {
    CHECK_THROWS_AS(load_known_discrepancies("no_such_file.txt"), std::runtime_error);
    const std::string path = "test_known_bad.tmp";
    {
        std::ofstream f(path);
        f << "# comment\n\n13 1 2 3 1 0,1 2 2 | OddCycle | some note\n";
    }
    KnownSet ks = load_known_discrepancies(path);
    CHECK(ks.size() == 1);
    CHECK(ks.begin()->second.count("OddCycle") == 1);
    {
        std::ofstream f(path);
        f << "13 1 2 3 1\n";  // no tag separator
    }
    CHECK_THROWS_AS(load_known_discrepancies(path), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("excusal requires the right tag, not just the right key") {
    SweepSpec spec;
    spec.p_list = {3};
    spec.s_list = {1};
    spec.n_min = 3;
    spec.n_max = 3;
    SweepOutcome base = sweep(spec);
    CHECK(base.summary.unexplained == 2);
    KnownSet wrong;
    for (const auto& r : base.results)
        if (!r.all_match()) wrong[r.key].insert("OddCycle");  // wrong tag on purpose
    SweepOutcome still = sweep(spec, wrong);
    CHECK(still.summary.unexplained == 2);
    CHECK(still.summary.excused == 0);
}

TEST_CASE("empty grids produce empty outcomes") {
    SweepSpec spec;
    spec.p_list = {3};
    spec.s_list = {1};
    spec.n_min = 3;
    spec.n_max = 2;  // empty range
    SweepOutcome out = sweep(spec);
    CHECK(out.summary.instances == 0);
    CHECK(out.results.empty());
    spec.n_min = 2;
    spec.q_cap = 2;  // q = 3 skipped
    out = sweep(spec);
    CHECK(out.summary.instances == 0);
}

TEST_CASE("sampled sweeps are deterministic in the seed") {
    SweepSpec spec;
    spec.p_list = {5};
    spec.s_list = {1};
    spec.n_min = 2;
    spec.n_max = 4;
    spec.sample_k = 10;
    spec.seed = 7;
    spec.with_detail = true;
    SweepOutcome a = sweep(spec);
    SweepOutcome b = sweep(spec);
    CHECK(a.summary.instances == 10);
    CHECK(render_csv(a.results) == render_csv(b.results));
    CHECK(render_json(a.results) == render_json(b.results));
    spec.seed = 8;
    SweepOutcome c = sweep(spec);
    CHECK(c.summary.instances == 10);
    bool same_keys = true;
    for (std::size_t i = 0; i < 10; ++i)
        if (!(a.results[i].key == c.results[i].key)) same_keys = false;
    CHECK(!same_keys);  // different seed picks a different subset
}

TEST_CASE("nonzero in-degree support follows the preimage lemma") {
    ExtCtx E = build_ext(build_field(13, 1));
    SuccessorMap sm = build_successors(E, derive_deltas(E, 3, 1, 2));
    CHECK(nonzero_indegree_support(sm) == std::set<std::uint64_t>{0, 2});
    sm = build_successors(E, derive_deltas(E, 3, 1, 6));
    CHECK(nonzero_indegree_support(sm) == std::set<std::uint64_t>{0, 6});
    ExtCtx E7 = build_ext(build_field(7, 1));
    sm = build_successors(E7, derive_deltas(E7, 1, 6, 3));  // odd, delta1 = 0
    CHECK(nonzero_indegree_support(sm) == std::set<std::uint64_t>{0, 21});
    sm = build_successors(E7, derive_deltas(E7, 0, 0, 2, true));
    CHECK(nonzero_indegree_support(sm) == std::set<std::uint64_t>{0});
}

TEST_CASE("render_dot of a single self-loop") {
    SuccessorMap sm{{0}};
    // a 1-node map has a perfect-square size, so coordinate labels apply
    CHECK(render_dot(sm) ==
          "// schema_version=1\ndigraph G {\n  \"0+0*B\" -> \"0+0*B\";\n}\n");
}

TEST_CASE("render_dot of a full instance uses coordinate labels") {
    ExtCtx E = build_ext(build_field(7, 1));
    SuccessorMap sm = build_successors(E, derive_deltas(E, 2, 2, 3));  // delta2 = 0
    std::string dot = render_dot(sm);
    std::size_t edges = 0;
    std::istringstream in(dot);
    std::string line;
    while (std::getline(in, line))
        if (line.find("->") != std::string::npos) ++edges;
    CHECK(edges == 49);
    CHECK(dot.find("\"0+0*B\" -> \"0+0*B\"") != std::string::npos);
    CHECK(dot.rfind("// schema_version=1\n", 0) == 0);
}

TEST_CASE("render_dot component filter keeps exactly the zero component") {
    ExtCtx E = build_ext(build_field(13, 1));
    SuccessorMap sm = build_successors(E, derive_deltas(E, 3, 7, 4));
    DotOptions opt;
    opt.component_of = 0;
    std::string dot = render_dot(sm, opt);
    std::size_t edges = 0;
    std::istringstream in(dot);
    std::string line;
    while (std::getline(in, line))
        if (line.find("->") != std::string::npos) ++edges;
    CHECK(edges == 25);  // the zero component has 2q-1 = 25 nodes
    DotOptions bad;
    bad.component_of = sm.size();
    CHECK_THROWS_AS(render_dot(sm, bad), std::invalid_argument);
}

TEST_CASE("JSON report carries match flags and is byte-deterministic") {
    VerifyResult vr = verify_instance(mk(13, 1, 2, 3, 1));
    std::string js = render_json({vr});
    CHECK(js.find("\"schema_version\": 1") != std::string::npos);
    CHECK(js.find("\"census_match\": true") != std::string::npos);
    CHECK(js.find("\"1\": 3") != std::string::npos);  // census entry
    CHECK(js.find("\"modulus\": \"0,1\"") != std::string::npos);
    CHECK(js == render_json({verify_instance(mk(13, 1, 2, 3, 1))}));
}

TEST_CASE("JSON report of a divergent instance lists diffs") {
    VerifyResult vr = verify_instance(mk(7, 1, 4, 0, 1));
    std::string js = render_json({vr});
    CHECK(js.find("\"census_match\": false") != std::string::npos);
    CHECK(js.find("census[1]") != std::string::npos);
}

TEST_CASE("CSV report has one sorted row per instance") {
    SweepSpec spec;
    spec.p_list = {3};
    spec.s_list = {1};
    spec.n_min = 2;
    spec.n_max = 2;
    spec.sample_k = 2;
    spec.seed = 1;
    spec.with_detail = true;
    SweepOutcome out = sweep(spec);
    std::string csv = render_csv(out.results);
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 4);  // schema comment, header, 2 data rows
    CHECK(lines[0] == "# schema_version=1");
    CHECK(lines[1].rfind("p,s,n,a,c,modulus,b,generator,q,", 0) == 0);
    CHECK(lines[2].rfind("3,1,2,", 0) == 0);
    CHECK(lines[3].rfind("3,1,2,", 0) == 0);
    CHECK(lines[2] < lines[3]);  // single-digit coefficients: text order = key order
}

TEST_CASE("emit_reports writes both formats and demands detail") {
    VerifyResult vr = verify_instance(mk(13, 1, 2, 3, 1));
    emit_reports({vr}, "test_emit_tmp.json", "test_emit_tmp.csv");
    std::ifstream jf("test_emit_tmp.json");
    REQUIRE(jf.good());
    std::stringstream buf;
    buf << jf.rdbuf();
    CHECK(buf.str() == render_json({vr}));
    jf.close();
    std::ifstream cf("test_emit_tmp.csv");
    REQUIRE(cf.good());
    std::stringstream cbuf;
    cbuf << cf.rdbuf();
    CHECK(cbuf.str() == render_csv({vr}));
    cf.close();
    std::remove("test_emit_tmp.json");
    std::remove("test_emit_tmp.csv");
    VerifyResult shallow = verify_instance(mk(13, 1, 2, 3, 1), /*with_detail=*/false);
    CHECK_THROWS_AS(render_json({shallow}), std::invalid_argument);
    CHECK_THROWS_AS(render_csv({shallow}), std::invalid_argument);
}

TEST_CASE("instance keys order lexicographically by field") {
    CHECK(mk(3, 1, 2, 0, 1) < mk(5, 1, 2, 0, 1));
    CHECK(mk(5, 1, 2, 0, 1) < mk(5, 1, 3, 0, 1));
    CHECK(mk(5, 1, 2, 0, 1) < mk(5, 1, 2, 1, 0));
    CHECK(mk(5, 1, 2, 0, 1) == mk(5, 1, 2, 0, 1));
}
