#include "ffgraph/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ffgraph {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string census_str(const CycleCensus& c) {
    std::ostringstream out;
    bool first = true;
    for (auto [len, cnt] : c.counts) {
        if (!first) out << ';';
        out << len << ':' << cnt;
        first = false;
    }
    return out.str();
}

std::string levels_str(const std::vector<std::uint64_t>& levels) {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (i) out << ',';
        out << levels[i];
    }
    out << ']';
    return out.str();
}

// Compact descriptor for diff entries; full canonical strings can be huge.
std::string shape_str(const TreeShape& t) {
    if (t.canonical.size() <= 200) return t.canonical;
    std::ostringstream out;
    out << "height=" << t.height << " levels=" << levels_str(t.level_sizes)
        << " size=" << t.total_size();
    return out.str();
}

const char* tree_tag(const MapParams& mp) {
    return (!mp.even && mp.delta1 == 0) ? "treeodd" : "tree";
}

std::string tag_for_census_len(const Prediction& P, const MapParams& mp, std::uint64_t len) {
    auto it = P.provenance.find(len);
    if (it != P.provenance.end()) return it->second;
    if (mp.trivial) return "trivial";
    if (mp.even) return len % 2 == 1 ? "OddCycle" : "evenlength";
    return len == 1 ? "fixedodd" : "oddcycles";
}

const char* note_for_tag(const std::string& tag) {
    if (tag == "OddCycle") return "closed-form odd-length cycle count differs from enumeration";
    if (tag == "evenlength") return "even-length count inherits the odd-length divergence";
    if (tag == "fixedodd") return "closed-form fixed-point count differs from enumeration";
    if (tag == "oddcycles") return "closed-form cycle-length counts differ from enumeration";
    if (tag == "tree") return "predicted hanging-tree shape differs from enumeration";
    if (tag == "treeodd") return "predicted hanging-tree presence or shape differs from enumeration";
    if (tag == "zerocomp") return "predicted zero-component profile differs from enumeration";
    return "mismatch";
}

struct BuiltInstance {
    ExtCtx E;
    MapParams mp;
    InstanceKey key;  // defaults resolved
};

BuiltInstance build_instance(const InstanceKey& key, std::uint32_t field_cap) {
    std::vector<std::uint32_t> mod;
    if (!key.modulus.empty()) mod = parse_modulus(key.modulus);
    FieldCtx fq = build_field(key.p, key.s, mod, field_cap, key.generator);
    ExtCtx E = build_ext(std::move(fq), key.b);
    if (key.a >= E.fq.q || key.c >= E.fq.q)
        throw std::invalid_argument("verify_instance: coefficient index out of range");
    MapParams mp = derive_deltas(E, key.a, key.c, key.n, /*allow_trivial=*/true);
    InstanceKey resolved = key;
    resolved.modulus = modulus_to_string(E.fq.modulus);
    resolved.b = E.b;
    resolved.generator = E.fq.generator;
    return {std::move(E), mp, std::move(resolved)};
}

VerifyResult compare_instance(const InstanceKey& key, const MapParams& mp, Prediction pred,
                              GraphReport obs, bool with_detail) {
    VerifyResult vr;
    vr.key = key;
    std::set<std::string> tags;

    vr.census_match = pred.census == obs.census;
    if (!vr.census_match) {
        std::set<std::uint64_t> lens;
        for (auto [len, cnt] : pred.census.counts) lens.insert(len);
        for (auto [len, cnt] : obs.census.counts) lens.insert(len);
        for (std::uint64_t len : lens) {
            auto pit = pred.census.counts.find(len);
            auto oit = obs.census.counts.find(len);
            std::uint64_t pc = pit == pred.census.counts.end() ? 0 : pit->second;
            std::uint64_t oc = oit == obs.census.counts.end() ? 0 : oit->second;
            if (pc == oc) continue;
            vr.diffs.push_back({"census[" + std::to_string(len) + "]", std::to_string(pc),
                                std::to_string(oc)});
            tags.insert(tag_for_census_len(pred, mp, len));
        }
    }

    vr.zero_match = pred.zero_profile == obs.zero_profile;
    if (!vr.zero_match) {
        vr.diffs.push_back({"zero_profile", shape_str(pred.zero_profile),
                            shape_str(obs.zero_profile)});
        tags.insert("zerocomp");
    }

    const auto& classes = obs.nonzero_tree_classes;
    if (pred.nonzero_tree) {
        vr.tree_match = classes.size() == 1 && classes.front().first == *pred.nonzero_tree;
    } else {
        vr.tree_match =
            classes.empty() || (classes.size() == 1 && classes.front().first.canonical == "()");
    }
    if (!vr.tree_match) {
        std::string obs_desc;
        for (const auto& [shape, mult] : classes) {
            if (!obs_desc.empty()) obs_desc += " / ";
            obs_desc += shape_str(shape) + " x" + std::to_string(mult);
        }
        if (obs_desc.empty()) obs_desc = "none";
        vr.diffs.push_back({"tree", pred.nonzero_tree ? shape_str(*pred.nonzero_tree) : "none",
                            obs_desc});
        tags.insert(tree_tag(mp));
    }

    vr.audit_ok = pred.audit_ok;
    vr.mismatch_tags.assign(tags.begin(), tags.end());
    if (with_detail)
        vr.detail = std::make_shared<InstanceDetail>(
            InstanceDetail{std::move(pred), std::move(obs)});
    return vr;
}

}  // namespace

std::string key_to_string(const InstanceKey& key) {
    std::ostringstream out;
    out << "p=" << key.p << " s=" << key.s << " n=" << key.n << " a=" << key.a
        << " c=" << key.c << " modulus=" << key.modulus << " b=" << key.b
        << " generator=" << key.generator;
    return out.str();
}

VerifyResult verify_instance(const InstanceKey& key, bool with_detail, std::uint32_t field_cap) {
    BuiltInstance bi = build_instance(key, field_cap);
    SuccessorMap sm = build_successors(bi.E, bi.mp);
    GraphReport rep = graph_report(sm);
    Prediction pred = predict(bi.E, bi.mp);
    return compare_instance(bi.key, bi.mp, std::move(pred), std::move(rep), with_detail);
}

KnownSet load_known_discrepancies(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open known-discrepancies file: " + path);
    KnownSet ks;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t beg = line.find_first_not_of(" \t");
        if (beg == std::string::npos || line[beg] == '#') continue;
        std::size_t bar = line.find('|');
        if (bar == std::string::npos)
            throw std::runtime_error("known-discrepancies: malformed line: " + line);
        std::istringstream head(line.substr(0, bar));
        InstanceKey key;
        if (!(head >> key.p >> key.s >> key.n >> key.a >> key.c >> key.modulus >> key.b >>
              key.generator))
            throw std::runtime_error("known-discrepancies: malformed key: " + line);
        std::string rest = line.substr(bar + 1);
        std::size_t bar2 = rest.find('|');
        std::string tag = rest.substr(0, bar2 == std::string::npos ? rest.size() : bar2);
        std::size_t t0 = tag.find_first_not_of(" \t");
        std::size_t t1 = tag.find_last_not_of(" \t");
        if (t0 == std::string::npos)
            throw std::runtime_error("known-discrepancies: empty tag: " + line);
        ks[key].insert(tag.substr(t0, t1 - t0 + 1));
    }
    return ks;
}

void write_known_discrepancies(const std::string& path,
                               const std::vector<VerifyResult>& results) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write known-discrepancies file: " + path);
    out << "# schema_version=1 known discrepancies: p s n a c modulus b generator | "
           "theorem tag | note\n";
    for (const auto& r : results) {
        if (r.all_match()) continue;
        for (const auto& tag : r.mismatch_tags)
            out << r.key.p << ' ' << r.key.s << ' ' << r.key.n << ' ' << r.key.a << ' '
                << r.key.c << ' ' << r.key.modulus << ' ' << r.key.b << ' '
                << r.key.generator << " | " << tag << " | " << note_for_tag(tag) << '\n';
    }
}

std::set<std::uint64_t> nonzero_indegree_support(const SuccessorMap& sm) {
    std::vector<std::uint64_t> indeg(sm.size(), 0);
    for (auto v : sm.succ) ++indeg[v];
    std::set<std::uint64_t> support;
    for (std::uint32_t v = 1; v < sm.size(); ++v) support.insert(indeg[v]);
    return support;
}

SweepOutcome sweep(const SweepSpec& spec, const KnownSet& known) {
    const auto t_start = std::chrono::steady_clock::now();
    SweepOutcome out;
    std::vector<std::uint32_t> ps = spec.p_list, ss = spec.s_list;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::sort(ss.begin(), ss.end());
    ss.erase(std::unique(ss.begin(), ss.end()), ss.end());

    // Count instances first so sample mode can pick a deterministic subset.
    std::uint64_t total = 0;
    for (auto p : ps)
        for (auto s : ss) {
            std::uint64_t q = 1;
            bool ok = true;
            for (std::uint32_t i = 0; i < s; ++i) {
                q *= p;
                if (q > spec.q_cap) { ok = false; break; }
            }
            if (!ok || spec.n_max < spec.n_min) continue;
            total += (spec.n_max - spec.n_min + 1) * (q * q - 1);
        }
    std::vector<std::uint64_t> picked;
    const bool sampling = spec.sample_k > 0 && spec.sample_k < total;
    if (sampling) {
        std::vector<std::uint64_t> all(total);
        std::iota(all.begin(), all.end(), 0);
        std::mt19937_64 rng(spec.seed);
        std::shuffle(all.begin(), all.end(), rng);
        picked.assign(all.begin(), all.begin() + spec.sample_k);
        std::sort(picked.begin(), picked.end());
    }
    std::size_t pick_pos = 0;
    std::uint64_t counter = 0;

    for (auto p : ps) {
        for (auto s : ss) {
            std::uint64_t q64 = 1;
            bool ok = true;
            for (std::uint32_t i = 0; i < s; ++i) {
                q64 *= p;
                if (q64 > spec.q_cap) { ok = false; break; }
            }
            if (!ok) continue;
            const std::uint32_t q = static_cast<std::uint32_t>(q64);
            ExtCtx E = build_ext(build_field(p, s));
            const std::string modstr = modulus_to_string(E.fq.modulus);
            for (std::uint64_t n = spec.n_min; n <= spec.n_max; ++n) {
                for (std::uint32_t a = 0; a < q; ++a) {
                    for (std::uint32_t c = 0; c < q; ++c) {
                        if (a == 0 && c == 0) continue;
                        const std::uint64_t my_index = counter++;
                        if (sampling) {
                            if (pick_pos >= picked.size() || picked[pick_pos] != my_index)
                                continue;
                            ++pick_pos;
                        }
                        InstanceKey key{p, s, n, a, c, modstr, E.b, E.fq.generator};
                        MapParams mp = derive_deltas(E, a, c, n);
                        SuccessorMap sm = build_successors(E, mp);
                        if (spec.check_dual)
                            out.summary.dual_mismatch_nodes += dual_eval_mismatches(E, mp, sm);
                        if (spec.check_indegree) {
                            std::uint64_t allowed = 0;
                            bool claim = false;
                            const std::uint64_t g1 =
                                E.fq.g_of(static_cast<std::int64_t>(n));
                            if (mp.delta1 != 0 && mp.delta2 != 0) {
                                allowed = g1;
                                claim = true;
                            } else if (!mp.even && mp.delta1 == 0 && mp.delta2 != 0) {
                                allowed = q * g1;
                                claim = true;
                            }
                            if (claim) {
                                for (std::uint64_t d : nonzero_indegree_support(sm))
                                    if (d != 0 && d != allowed) {
                                        ++out.summary.indegree_violations;
                                        break;
                                    }
                            }
                        }
                        GraphReport rep = graph_report(sm);
                        Prediction pred = predict(E, mp);
                        if (!mp.even && mp.delta2 != 0 &&
                            compute_tau0_statement(E, mp) != pred.tau0)
                            ++out.summary.tau0_statement_divergences;

                        std::set<std::string> exercised;
                        for (const auto& [len, tag] : pred.provenance) exercised.insert(tag);
                        exercised.insert(tree_tag(mp));
                        exercised.insert("zerocomp");

                        VerifyResult vr = compare_instance(key, mp, std::move(pred),
                                                           std::move(rep), spec.with_detail);
                        ++out.summary.instances;
                        if (vr.all_match()) {
                            ++out.summary.matched;
                            for (const auto& t : exercised) ++out.summary.match_by_tag[t];
                        } else {
                            std::set<std::string> bad(vr.mismatch_tags.begin(),
                                                      vr.mismatch_tags.end());
                            for (const auto& t : bad) ++out.summary.mismatch_by_tag[t];
                            for (const auto& t : exercised)
                                if (!bad.count(t)) ++out.summary.match_by_tag[t];
                            auto it = known.find(key);
                            vr.excused = it != known.end() &&
                                         std::all_of(bad.begin(), bad.end(),
                                                     [&](const std::string& t) {
                                                         return it->second.count(t) > 0;
                                                     });
                            if (vr.excused)
                                ++out.summary.excused;
                            else
                                ++out.summary.unexplained;
                        }
                        out.results.push_back(std::move(vr));
                    }
                }
            }
        }
    }
    out.summary.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

std::string render_dot(const SuccessorMap& sm, const DotOptions& opt) {
    const std::uint32_t n = sm.size();
    std::uint32_t q = static_cast<std::uint32_t>(std::lround(std::sqrt(double(n))));
    const bool square = q > 0 && q * q == n;
    std::vector<std::uint32_t> comp;
    std::uint32_t want = 0;
    if (opt.component_of) {
        if (*opt.component_of >= n)
            throw std::invalid_argument("render_dot: filter node out of range");
        comp = component_ids(sm);
        want = comp[*opt.component_of];
    }
    auto label = [&](std::uint32_t i) {
        if (!square) return std::to_string(i);
        return std::to_string(i / q) + "+" + std::to_string(i % q) + "*B";
    };
    std::ostringstream out;
    out << "// schema_version=1\n";
    out << "digraph G {\n";
    for (std::uint32_t i = 0; i < n; ++i) {
        if (opt.component_of && comp[i] != want) continue;
        out << "  \"" << label(i) << "\" -> \"" << label(sm.succ[i]) << "\";\n";
    }
    out << "}\n";
    return out.str();
}

namespace {

ordered_json shape_json(const TreeShape& t) {
    return ordered_json{{"canonical", t.canonical},
                        {"height", t.height},
                        {"level_sizes", t.level_sizes}};
}

ordered_json census_json(const CycleCensus& c) {
    ordered_json obj = ordered_json::object();
    for (auto [len, cnt] : c.counts) obj[std::to_string(len)] = cnt;
    return obj;
}

const InstanceDetail& detail_of(const VerifyResult& r) {
    if (!r.detail)
        throw std::invalid_argument("emit_reports: result lacks detail for " +
                                    key_to_string(r.key));
    return *r.detail;
}

}  // namespace

std::string render_json(const std::vector<VerifyResult>& results) {
    ordered_json doc;
    doc["schema_version"] = 1;
    ordered_json arr = ordered_json::array();
    for (const auto& r : results) {
        const InstanceDetail& d = detail_of(r);
        const Prediction& P = d.predicted;
        ordered_json item;
        item["key"] = ordered_json{{"p", r.key.p},          {"s", r.key.s},
                                   {"n", r.key.n},          {"a", r.key.a},
                                   {"c", r.key.c},          {"modulus", r.key.modulus},
                                   {"b", r.key.b},          {"generator", r.key.generator}};
        ordered_json pred;
        pred["census"] = census_json(P.census);
        pred["zero_profile"] = shape_json(P.zero_profile);
        pred["zero_size"] = P.zero_size;
        pred["tree"] = P.nonzero_tree ? ordered_json(P.nonzero_tree->canonical)
                                      : ordered_json(nullptr);
        ordered_json prov = ordered_json::object();
        for (const auto& [len, tag] : P.provenance) prov[std::to_string(len)] = tag;
        pred["provenance"] = prov;
        pred["flags"] = ordered_json{{"even", P.even},
                                     {"trivial", P.trivial},
                                     {"delta1_zero", P.delta1_zero},
                                     {"delta2_zero", P.delta2_zero},
                                     {"chi2_a2mc2", P.chi2_a2mc2},
                                     {"delta_o", P.delta_o},
                                     {"tau0", P.tau0},
                                     {"tau", P.tau},
                                     {"l0", P.l0},
                                     {"t0", P.t0},
                                     {"e", P.e},
                                     {"uncovered", P.uncovered},
                                     {"audit_ok", P.audit_ok},
                                     {"audit_total", P.audit_total}};
        item["predicted"] = pred;
        ordered_json obs;
        obs["census"] = census_json(d.observed.census);
        obs["zero_profile"] = shape_json(d.observed.zero_profile);
        ordered_json classes = ordered_json::array();
        for (const auto& [shape, mult] : d.observed.nonzero_tree_classes) {
            ordered_json cl = shape_json(shape);
            cl["multiplicity"] = mult;
            classes.push_back(cl);
        }
        obs["tree_classes"] = classes;
        obs["component_sizes"] = d.observed.component_sizes;
        item["observed"] = obs;
        item["match"] = ordered_json{{"census_match", r.census_match},
                                     {"tree_match", r.tree_match},
                                     {"zero_match", r.zero_match},
                                     {"audit_ok", r.audit_ok},
                                     {"excused", r.excused}};
        ordered_json diffs = ordered_json::array();
        for (const auto& dif : r.diffs) diffs.push_back({dif[0], dif[1], dif[2]});
        item["diffs"] = diffs;
        arr.push_back(std::move(item));
    }
    doc["instances"] = arr;
    return doc.dump(2) + "\n";
}

std::string render_csv(const std::vector<VerifyResult>& results) {
    std::ostringstream out;
    out << "# schema_version=1\n";
    out << "p,s,n,a,c,modulus,b,generator,q,census_predicted,census_observed,"
           "census_match,tree_match,zero_match,audit_ok,excused,tags\n";
    for (const auto& r : results) {
        const InstanceDetail& d = detail_of(r);
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < r.key.s; ++i) q *= r.key.p;
        std::string tags;
        for (const auto& t : r.mismatch_tags) {
            if (!tags.empty()) tags += ';';
            tags += t;
        }
        out << r.key.p << ',' << r.key.s << ',' << r.key.n << ',' << r.key.a << ','
            << r.key.c << ',' << '"' << r.key.modulus << '"' << ',' << r.key.b << ','
            << r.key.generator << ',' << q << ',' << census_str(d.predicted.census) << ','
            << census_str(d.observed.census) << ',' << int(r.census_match) << ','
            << int(r.tree_match) << ',' << int(r.zero_match) << ',' << int(r.audit_ok)
            << ',' << int(r.excused) << ',' << tags << '\n';
    }
    return out.str();
}

void emit_reports(const std::vector<VerifyResult>& results, const std::string& json_path,
                  const std::string& csv_path) {
    if (!json_path.empty()) {
        std::ofstream f(json_path);
        if (!f) throw std::runtime_error("emit_reports: cannot write " + json_path);
        f << render_json(results);
    }
    if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw std::runtime_error("emit_reports: cannot write " + csv_path);
        f << render_csv(results);
    }
}

}  // namespace ffgraph
