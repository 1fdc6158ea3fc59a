#include "ffgraph/orbits.hpp"

#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

namespace ffgraph {

namespace {

struct Walk {
    CycleCensus census;
    std::vector<std::uint8_t> cyclic;
    std::vector<std::uint32_t> comp;
    std::uint32_t n_comps = 0;
};

// Three-state traversal: for each start node follow successors marking the
// path on-stack; hitting an on-stack node closes a new cycle, hitting a
// resolved node adopts its component. Iterative throughout.
Walk run_walk(const SuccessorMap& sm) {
    const std::uint32_t n = sm.size();
    for (auto v : sm.succ)
        if (v >= n) throw std::invalid_argument("cycle_census: successor out of range");
    Walk w;
    w.cyclic.assign(n, 0);
    w.comp.assign(n, 0);
    std::vector<std::uint8_t> color(n, 0);  // 0 unvisited, 1 on-stack, 2 resolved
    std::vector<std::uint32_t> path;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (color[i]) continue;
        path.clear();
        std::uint32_t v = i;
        while (color[v] == 0) {
            color[v] = 1;
            path.push_back(v);
            v = sm.succ[v];
        }
        std::uint32_t cid;
        if (color[v] == 1) {  // new cycle through v
            cid = w.n_comps++;
            std::uint64_t len = 1;
            for (std::uint32_t u = sm.succ[v]; u != v; u = sm.succ[u]) ++len;
            w.census.counts[len] += 1;
            std::uint32_t u = v;
            do {
                w.cyclic[u] = 1;
                w.comp[u] = cid;
                color[u] = 2;
                u = sm.succ[u];
            } while (u != v);
        } else {
            cid = w.comp[v];
        }
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            if (color[*it] == 2) continue;  // tail may include the fresh cycle
            color[*it] = 2;
            w.comp[*it] = cid;
        }
    }
    return w;
}

struct Csr {
    std::vector<std::uint32_t> off;
    std::vector<std::uint32_t> dat;
    std::span<const std::uint32_t> operator[](std::uint32_t v) const {
        return {dat.data() + off[v], dat.data() + off[v + 1]};
    }
};

// Children lists of the hanging forests: non-cyclic predecessors per node.
Csr tree_children(const SuccessorMap& sm, const std::vector<std::uint8_t>& cyclic) {
    const std::uint32_t n = sm.size();
    Csr csr;
    csr.off.assign(n + 1, 0);
    for (std::uint32_t v = 0; v < n; ++v)
        if (!cyclic[v]) ++csr.off[sm.succ[v] + 1];
    std::partial_sum(csr.off.begin(), csr.off.end(), csr.off.begin());
    csr.dat.resize(csr.off[n]);
    std::vector<std::uint32_t> cur(csr.off.begin(), csr.off.end() - 1);
    for (std::uint32_t v = 0; v < n; ++v)
        if (!cyclic[v]) csr.dat[cur[sm.succ[v]]++] = v;
    return csr;
}

}  // namespace

SuccessorMap build_successors(const ExtCtx& E, const MapParams& mp, bool audit,
                              std::uint64_t seed, std::uint64_t cap) {
    const FieldCtx& F = E.fq;
    const std::uint32_t q = F.q;
    const std::uint64_t n_nodes = static_cast<std::uint64_t>(q) * q;
    if (n_nodes > cap) throw std::invalid_argument("build_successors: q^2 exceeds cap");
    SuccessorMap sm;
    sm.succ.resize(n_nodes);
    // Per-y constants of the coordinate formulas; inner loop is one table
    // multiply per node.
    std::vector<std::uint32_t> t1(q), t2(q);
    if (mp.even) {
        for (std::uint32_t y = 0; y < q; ++y) {
            std::uint32_t yn1 = F.pow(y, mp.n - 1);
            t1[y] = F.mul(mp.delta1, F.mul(yn1, y)) * q;  // pre-encoded x-coordinate
            t2[y] = F.mul(mp.delta2, yn1);
        }
        for (std::uint32_t x = 0; x < q; ++x) {
            std::uint32_t* row = &sm.succ[static_cast<std::size_t>(x) * q];
            for (std::uint32_t y = 0; y < q; ++y) row[y] = t1[y] + F.mul(t2[y], x);
        }
    } else {
        std::uint32_t s4b = F.pow(F.mul(F.from_int(4), E.b), (mp.n - 1) / 2);
        for (std::uint32_t y = 0; y < q; ++y) {
            std::uint32_t sc = F.mul(s4b, F.pow(y, mp.n - 1));
            t1[y] = F.mul(sc, mp.delta1);
            t2[y] = F.mul(sc, F.mul(mp.delta2, y));
        }
        for (std::uint32_t x = 0; x < q; ++x) {
            std::uint32_t* row = &sm.succ[static_cast<std::size_t>(x) * q];
            for (std::uint32_t y = 0; y < q; ++y) row[y] = F.mul(t1[y], x) * q + t2[y];
        }
    }
    if (audit) {
        std::mt19937_64 rng(seed);
        const std::uint64_t samples = (n_nodes + 99) / 100;
        for (std::uint64_t k = 0; k < samples; ++k) {
            std::uint32_t idx = static_cast<std::uint32_t>(rng() % n_nodes);
            ExtElem want = eval_map_direct(E, mp, E.decode(idx));
            if (E.encode(want) != sm.succ[idx])
                throw std::logic_error("build_successors: audit sample disagrees with direct evaluation");
        }
    }
    return sm;
}

std::uint64_t dual_eval_mismatches(const ExtCtx& E, const MapParams& mp,
                                   const SuccessorMap& sm) {
    const FieldCtx& F = E.fq;
    const std::uint32_t q = F.q;
    const std::uint32_t apc = F.add(mp.a, mp.c), amc = F.sub(mp.a, mp.c);
    // f(X) = (c X^q + a X) * (X^q - X)^{n-1}; the second factor is <0, -2y>^{n-1},
    // a function of y alone. With P(y) = <Px, Py> the product expands to
    //   <(a+c)x*Px + b(a-c)y*Py, (a+c)x*Py + (a-c)y*Px>.
    std::vector<std::uint32_t> px(q), py(q), ky1(q), ky2(q);
    for (std::uint32_t y = 0; y < q; ++y) {
        ExtElem w{0, F.neg(F.add(y, y))};
        ExtElem P = ext_pow(E, w, mp.n - 1);
        px[y] = P.x;
        py[y] = P.y;
        std::uint32_t ay = F.mul(amc, y);
        ky1[y] = F.mul(E.b, F.mul(ay, P.y));
        ky2[y] = F.mul(ay, P.x);
    }
    std::uint64_t bad = 0;
    for (std::uint32_t x = 0; x < q; ++x) {
        const std::uint32_t ax = F.mul(apc, x);
        const std::uint32_t* row = &sm.succ[static_cast<std::size_t>(x) * q];
        for (std::uint32_t y = 0; y < q; ++y) {
            std::uint32_t ex = F.add(F.mul(ax, px[y]), ky1[y]);
            std::uint32_t ey = F.add(F.mul(ax, py[y]), ky2[y]);
            if (ex * q + ey != row[y]) ++bad;
        }
    }
    return bad;
}

CycleCensus cycle_census(const SuccessorMap& sm) { return run_walk(sm).census; }

TreeShape hanging_tree(const SuccessorMap& sm, std::uint32_t cyclic_node) {
    if (cyclic_node >= sm.size())
        throw std::invalid_argument("hanging_tree: node out of range");
    Walk w = run_walk(sm);
    if (!w.cyclic[cyclic_node])
        throw std::invalid_argument("hanging_tree: node is not on a cycle");
    Csr csr = tree_children(sm, w.cyclic);
    return shape_from_tree(cyclic_node, [&](std::uint32_t v) { return csr[v]; });
}

GraphReport graph_report(const SuccessorMap& sm) {
    const std::uint32_t n = sm.size();
    Walk w = run_walk(sm);
    GraphReport rep;
    std::vector<std::uint64_t> sizes(w.n_comps, 0);
    for (std::uint32_t v = 0; v < n; ++v) ++sizes[w.comp[v]];
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    rep.component_sizes = std::move(sizes);
    Csr csr = tree_children(sm, w.cyclic);
    auto kids = [&](std::uint32_t v) { return csr[v]; };
    // Bottom-up integer AHU over all hanging trees at once: a vertex's code is
    // the interned sorted tuple of its tree children's codes, so equal codes on
    // cyclic vertices <=> isomorphic hanging trees. The string form is built
    // once per distinct class instead of once per cyclic vertex.
    std::vector<std::uint32_t> code(n, 0), pending(n);
    std::vector<std::uint32_t> stack;
    for (std::uint32_t v = 0; v < n; ++v) {
        pending[v] = static_cast<std::uint32_t>(csr[v].size());
        if (pending[v] == 0) stack.push_back(v);
    }
    std::map<std::vector<std::uint32_t>, std::uint32_t> table;
    table.emplace(std::vector<std::uint32_t>{}, 0);  // code 0 = leaf
    std::vector<std::uint32_t> key;
    while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        if (csr[v].empty()) {
            code[v] = 0;
        } else {
            key.assign(csr[v].begin(), csr[v].end());
            for (auto& c : key) c = code[c];
            std::sort(key.begin(), key.end());
            code[v] = table.try_emplace(key, static_cast<std::uint32_t>(table.size()))
                          .first->second;
        }
        if (!w.cyclic[v] && --pending[sm.succ[v]] == 0) stack.push_back(sm.succ[v]);
    }
    std::map<std::uint32_t, std::pair<std::uint32_t, std::uint64_t>> by_code;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (!w.cyclic[v]) continue;
        if (v == 0) {
            rep.zero_profile = shape_from_tree(v, kids);
            continue;
        }
        ++by_code.try_emplace(code[v], std::make_pair(v, std::uint64_t{0})).first->second.second;
    }
    std::map<std::string, std::pair<TreeShape, std::uint64_t>> classes;
    for (const auto& [cd, rv] : by_code) {
        TreeShape ts = shape_from_tree(rv.first, kids);
        std::string ck = ts.canonical;
        classes.emplace(std::move(ck), std::make_pair(std::move(ts), rv.second));
    }
    rep.census = std::move(w.census);
    rep.nonzero_tree_classes.reserve(classes.size());
    for (auto& [ck, val] : classes) rep.nonzero_tree_classes.emplace_back(std::move(val));
    return rep;
}

std::vector<std::uint32_t> component_ids(const SuccessorMap& sm) { return run_walk(sm).comp; }

std::map<std::uint64_t, std::uint64_t> in_degree_histogram(const SuccessorMap& sm) {
    std::vector<std::uint64_t> indeg(sm.size(), 0);
    for (auto v : sm.succ) ++indeg[v];
    std::map<std::uint64_t, std::uint64_t> hist;
    for (auto d : indeg) ++hist[d];
    return hist;
}

}  // namespace ffgraph
