#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ffgraph/harness.hpp"

namespace {

using namespace ffgraph;

struct InstanceOpts {
    std::uint32_t p = 0;
    std::uint32_t s = 1;
    std::uint64_t n = 2;
    std::uint32_t a = 0;
    std::uint32_t c = 0;
    std::string modulus;
    std::uint32_t b = 0;
    std::uint32_t cap = kDefaultFieldCap;
};

void add_instance_flags(CLI::App* cmd, InstanceOpts& o, bool need_map) {
    cmd->add_option("--p", o.p, "field characteristic (odd prime)")->required();
    cmd->add_option("--s", o.s, "extension degree of the base field, q = p^s");
    if (need_map) {
        cmd->add_option("--n", o.n, "map exponent n >= 2")->required();
        cmd->add_option("--a", o.a, "coefficient a as canonical element index")->required();
        cmd->add_option("--c", o.c, "coefficient c as canonical element index")->required();
    }
    cmd->add_option("--modulus", o.modulus,
                    "base-field modulus coefficients, constant first (e.g. 2,0,1)");
    cmd->add_option("--b", o.b, "nonresidue index defining the quadratic extension");
    cmd->add_option("--cap", o.cap, "largest base-field size the builder accepts");
}

struct Built {
    ExtCtx E;
    MapParams mp;
};

Built build_from(const InstanceOpts& o) {
    std::vector<std::uint32_t> mod;
    if (!o.modulus.empty()) mod = parse_modulus(o.modulus);
    ExtCtx E = build_ext(build_field(o.p, o.s, mod, o.cap), o.b);
    MapParams mp = derive_deltas(E, o.a, o.c, o.n, /*allow_trivial=*/true);
    return {std::move(E), mp};
}

InstanceKey key_from(const InstanceOpts& o) {
    InstanceKey k;
    k.p = o.p;
    k.s = o.s;
    k.n = o.n;
    k.a = o.a;
    k.c = o.c;
    k.modulus = o.modulus;
    k.b = o.b;
    return k;
}

std::string census_text(const CycleCensus& c) {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (auto [len, cnt] : c.counts) {
        if (!first) out << ", ";
        out << len << ':' << cnt;
        first = false;
    }
    out << '}';
    return out.str();
}

std::string levels_text(const std::vector<std::uint64_t>& v) {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        out << v[i];
    }
    out << ']';
    return out.str();
}

void print_profile(const char* name, const TreeShape& t) {
    std::cout << name << ": levels=" << levels_text(t.level_sizes)
              << " size=" << t.total_size() << " height=" << t.height << '\n';
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

int run_analyze(const InstanceOpts& o, const std::string& dot_path) {
    Built bi = build_from(o);
    SuccessorMap sm = build_successors(bi.E, bi.mp);
    GraphReport rep = graph_report(sm);
    std::cout << "q=" << bi.E.fq.q << " n=" << o.n << " delta1=" << bi.mp.delta1
              << " delta2=" << bi.mp.delta2 << '\n';
    std::cout << "census: " << census_text(rep.census) << '\n';
    print_profile("zero_component", rep.zero_profile);
    for (const auto& [shape, mult] : rep.nonzero_tree_classes)
        std::cout << "tree_class: levels=" << levels_text(shape.level_sizes) << " x" << mult
                  << '\n';
    std::cout << "components: " << rep.component_sizes.size() << '\n';
    if (!dot_path.empty()) write_text(dot_path, render_dot(sm));
    return 0;
}

int run_predict(const InstanceOpts& o) {
    Built bi = build_from(o);
    Prediction pred = predict(bi.E, bi.mp);
    std::cout << "q=" << bi.E.fq.q << " n=" << o.n << " delta1=" << bi.mp.delta1
              << " delta2=" << bi.mp.delta2 << '\n';
    std::cout << "census: " << census_text(pred.census) << '\n';
    for (auto [len, tag] : pred.provenance)
        std::cout << "  length " << len << " via " << tag << '\n';
    print_profile("zero_component", pred.zero_profile);
    if (pred.nonzero_tree)
        std::cout << "tree: levels=" << levels_text(pred.nonzero_tree->level_sizes) << '\n';
    else
        std::cout << "tree: none\n";
    if (!pred.even && !pred.trivial && !pred.delta2_zero)
        std::cout << "tau0=" << pred.tau0 << " tau=" << pred.tau << " l0=" << pred.l0 << '\n';
    if (pred.even && !pred.trivial && !pred.delta1_zero && !pred.delta2_zero)
        std::cout << "delta_o=" << pred.delta_o << " l0=" << pred.l0 << " t0=" << pred.t0
                  << '\n';
    std::cout << "audit_total=" << pred.audit_total << " audit_ok=" << pred.audit_ok << '\n';
    return pred.audit_ok ? 0 : 1;
}

int run_verify(const InstanceOpts& o, const std::string& json_path,
               const std::string& csv_path) {
    VerifyResult vr = verify_instance(key_from(o), /*with_detail=*/true, o.cap);
    std::cout << key_to_string(vr.key) << '\n';
    std::cout << "census: predicted " << census_text(vr.detail->predicted.census)
              << " observed " << census_text(vr.detail->observed.census) << '\n';
    for (const auto& d : vr.diffs)
        std::cout << "diff " << d[0] << ": predicted=" << d[1] << " observed=" << d[2] << '\n';
    if (!json_path.empty() || !csv_path.empty())
        emit_reports({vr}, json_path, csv_path);
    std::cout << (vr.all_match() ? "MATCH" : "MISMATCH") << '\n';
    return vr.all_match() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "functional-graph census of (c*x^q + a*x)(x^q - x)^(n-1) over F_{q^2}: "
        "brute-force enumeration vs closed-form prediction"};
    app.require_subcommand(1);

    InstanceOpts opt;
    std::string json_path, csv_path, dot_path;

    CLI::App* analyze = app.add_subcommand("analyze", "enumerate the graph and report it");
    add_instance_flags(analyze, opt, true);
    analyze->add_option("--dot", dot_path, "write the successor graph as DOT ('-' = stdout)");

    CLI::App* predict_cmd =
        app.add_subcommand("predict", "closed-form prediction without enumeration");
    add_instance_flags(predict_cmd, opt, true);

    CLI::App* verify = app.add_subcommand("verify", "enumerate, predict, and diff");
    add_instance_flags(verify, opt, true);
    verify->add_option("--json", json_path, "write a full JSON report");
    verify->add_option("--csv", csv_path, "write a one-row CSV report");

    CLI::App* render = app.add_subcommand("render", "emit the successor graph as DOT");
    add_instance_flags(render, opt, true);
    render->add_option("--dot", dot_path, "output path ('-' = stdout)")->required();
    std::int64_t component_of = -1;
    render->add_option("--component", component_of,
                       "restrict to the weakly connected component of this node index");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "verify a whole grid of (p,s,n,a,c) instances");
    ffgraph::SweepSpec spec;
    sweep_cmd->add_option("--p", spec.p_list, "characteristics to sweep")->delimiter(',');
    sweep_cmd->add_option("--s", spec.s_list, "extension degrees to sweep")->delimiter(',');
    sweep_cmd->add_option("--n-min", spec.n_min, "smallest map exponent");
    sweep_cmd->add_option("--n-max", spec.n_max, "largest map exponent");
    sweep_cmd->add_option("--q-cap", spec.q_cap, "skip base fields larger than this");
    sweep_cmd->add_option("--sample", spec.sample_k,
                          "verify only this many instances, sampled deterministically");
    sweep_cmd->add_option("--seed", spec.seed, "sample-selection seed");
    std::string known_path = "data/known_discrepancies.txt";
    std::string emit_known_path;
    sweep_cmd->add_option("--known", known_path,
                          "known-discrepancies file that excuses documented mismatches");
    bool no_known = false;
    sweep_cmd->add_flag("--no-known", no_known, "ignore any known-discrepancies file");
    sweep_cmd->add_option("--emit-known", emit_known_path,
                          "write every mismatch as a known-discrepancies file");
    sweep_cmd->add_option("--json", json_path, "write a full JSON report (implies detail)");
    sweep_cmd->add_option("--csv", csv_path, "write a per-instance CSV report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*analyze) return run_analyze(opt, dot_path);
        if (*predict_cmd) return run_predict(opt);
        if (*verify) return run_verify(opt, json_path, csv_path);
        if (*render) {
            Built bi = build_from(opt);
            SuccessorMap sm = build_successors(bi.E, bi.mp);
            DotOptions dopt;
            if (component_of >= 0) dopt.component_of = static_cast<std::uint32_t>(component_of);
            write_text(dot_path, render_dot(sm, dopt));
            return 0;
        }
        if (*sweep_cmd) {
            spec.with_detail = !json_path.empty() || !csv_path.empty();
            ffgraph::KnownSet known;
            const bool user_known = sweep_cmd->count("--known") > 0;
            if (!no_known && (user_known || std::filesystem::exists(known_path)))
                known = load_known_discrepancies(known_path);
            SweepOutcome out = sweep(spec, known);
            if (!emit_known_path.empty())
                write_known_discrepancies(emit_known_path, out.results);
            if (spec.with_detail) emit_reports(out.results, json_path, csv_path);
            const auto& s = out.summary;
            std::cout << "instances=" << s.instances << " matched=" << s.matched
                      << " excused=" << s.excused << " unexplained=" << s.unexplained << '\n';
            for (const auto& [tag, cnt] : s.mismatch_by_tag)
                std::cout << "mismatch_tag " << tag << ": " << cnt << '\n';
            std::cout << "dual_mismatch_nodes=" << s.dual_mismatch_nodes
                      << " indegree_violations=" << s.indegree_violations
                      << " tau0_statement_divergences=" << s.tau0_statement_divergences
                      << '\n';
            std::cout << "elapsed_seconds=" << s.elapsed_seconds << '\n';
            return s.unexplained == 0 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
