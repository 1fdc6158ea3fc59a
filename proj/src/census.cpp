#include "ffgraph/census.hpp"

#include <numeric>
#include <stdexcept>

#include "ffgraph/numtheory.hpp"

namespace ffgraph {

namespace {

// g(n^i) and g(n^i - 1) without overflowing: reduce the power mod q-1 first.
std::uint64_t g_pow(const FieldCtx& F, std::uint64_t n, std::uint64_t i) {
    std::uint64_t m = F.q - 1;
    return std::gcd(pow_mod(n, i, m), m);
}

std::uint64_t g_powm1(const FieldCtx& F, std::uint64_t n, std::uint64_t i) {
    std::uint64_t m = F.q - 1;
    return std::gcd((pow_mod(n, i, m) + m - 1) % m, m);
}

std::uint64_t modinv(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, newt = 1, r = static_cast<std::int64_t>(m),
                 newr = static_cast<std::int64_t>(a % m);
    while (newr != 0) {
        std::int64_t quo = r / newr;
        t = std::exchange(newt, t - quo * newt);
        r = std::exchange(newr, r - quo * newr);
    }
    if (r != 1) throw std::invalid_argument("modinv: not invertible");
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(m) : t);
}

// Number of levels below the root of the full predicted tree: least i with
// g(n^i) equal to the n-part s of q-1.
std::uint32_t full_tree_levels(const FieldCtx& F, std::uint64_t n) {
    std::uint64_t s = coprime_split(F.q - 1, n).s_part;
    for (std::uint32_t i = 0;; ++i)
        if (g_pow(F, n, i) == s) return i;
}

// Even n: number of elements among +-gamma*delta2 that are (n-1)-th power
// residues, where gamma^2 = delta1/delta2. Zero unless chi_2(a^2-c^2) = -1.
std::uint64_t delta_o_of(const ExtCtx& E, const MapParams& mp) {
    const FieldCtx& F = E.fq;
    if (mp.delta1 == 0 || mp.delta2 == 0) return 0;
    std::uint32_t a2c2 = F.sub(F.mul(mp.a, mp.a), F.mul(mp.c, mp.c));
    if (F.chi_m(2, a2c2) != -1) return 0;
    std::uint32_t ratio = F.mul(mp.delta1, F.inv(mp.delta2));
    std::uint32_t lg = F.discrete_log(ratio);  // even: chi_2(ratio) = +1 here
    std::uint32_t gamma = F.exp_tab[lg / 2];
    std::uint64_t d = 0;
    if (F.chi_m(static_cast<std::int64_t>(mp.n - 1), F.mul(gamma, mp.delta2)) == 1) ++d;
    if (F.chi_m(static_cast<std::int64_t>(mp.n - 1), F.mul(F.neg(gamma), mp.delta2)) == 1) ++d;
    return d;
}

// l0 for odd n: exponent with (4b)^{(n-1)/2} * delta2 = alpha^{l0}.
std::uint64_t odd_shift_log(const ExtCtx& E, const MapParams& mp) {
    const FieldCtx& F = E.fq;
    std::uint32_t v = F.mul(F.pow(F.mul(F.from_int(4), E.b), (mp.n - 1) / 2), mp.delta2);
    return F.discrete_log(v);
}

struct EvenOffsets {
    std::uint64_t l0 = 0;  // delta1*delta2 = alpha^{l0}
    std::uint64_t t0 = 1;  // least admissible offset
    CoprimeSplit split;
    std::uint64_t g = 1;  // g(n-1)
};

EvenOffsets even_offsets(const ExtCtx& E, const MapParams& mp) {
    const FieldCtx& F = E.fq;
    EvenOffsets eo;
    eo.l0 = F.discrete_log(F.mul(mp.delta1, mp.delta2));
    eo.split = coprime_split(F.q - 1, mp.n);
    eo.g = F.g_of(static_cast<std::int64_t>(mp.n - 1));
    if (eo.g > 1) {
        // Admissible offsets satisfy s*t = l0 (mod g(n-1)); g(n-1) is odd and
        // coprime to s, so solve for t and lift into 1..g.
        eo.t0 = modinv(eo.split.s_part % eo.g, eo.g) * (eo.l0 % eo.g) % eo.g;
        if (eo.t0 == 0) eo.t0 = eo.g;
    }
    return eo;
}

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

std::uint64_t vp_of(std::uint64_t p, std::uint64_t v) {  // valuation, 0 at v=0 guarded by callers
    return valuation(p, bigint(v));
}

}  // namespace

TreeShape build_tree_shape(const FieldCtx& fq, std::uint64_t n, TreeVariant variant,
                           std::uint32_t levels) {
    const std::uint64_t g1 = fq.g_of(static_cast<std::int64_t>(n));
    if (g1 == 1) throw std::invalid_argument("build_tree_shape: g(n) = 1 admits no tree");
    if (levels == 0) throw std::invalid_argument("build_tree_shape: levels must be >= 1");
    const bool zero = variant == TreeVariant::zero;
    const std::uint64_t q = fq.q;
    TreeBuilder tb;
    std::vector<std::vector<std::uint32_t>> level_nodes(levels + 1);
    level_nodes[0] = {tb.root()};
    const std::uint64_t first = (zero ? q * g1 : g1) - 1;
    for (std::uint64_t k = 0; k < first; ++k) level_nodes[1].push_back(tb.attach(tb.root()));
    for (std::uint32_t i = 1; i < levels; ++i) {
        const std::uint64_t gi = g_pow(fq, n, i), gim1 = g_pow(fq, n, i - 1),
                            gip1 = g_pow(fq, n, i + 1);
        // Label level-i vertices ascending, skipping multiples of the ratio
        // g(n^i)/g(n^{i-1}); in the zero variant the first level's labels run
        // through 1..q*g(n) instead, so its skip threshold carries the factor q.
        const std::uint64_t skip = (zero && i == 1) ? q * g1 : gi / gim1;
        const std::uint64_t thresh = (zero ? q * gi * g1 : gi * g1) / gip1;
        const std::uint64_t cnt = zero ? q * g1 : g1;
        std::uint64_t label = 0;
        for (std::uint32_t v : level_nodes[i]) {
            ++label;
            while (label % skip == 0) ++label;
            if (label % thresh == 0)
                for (std::uint64_t k = 0; k < cnt; ++k)
                    level_nodes[i + 1].push_back(tb.attach(v));
        }
    }
    return tb.finalize();
}

CycleCensus predict_odd_cycles_even_n(const ExtCtx& E, const MapParams& mp,
                                      std::uint64_t length_cap, bool* uncovered) {
    if (!mp.even) throw std::invalid_argument("predict_odd_cycles_even_n: n must be even");
    CycleCensus out;
    const FieldCtx& F = E.fq;
    const std::uint64_t delta_o = delta_o_of(E, mp);
    if (delta_o == 0) return out;
    const std::uint64_t g = F.g_of(static_cast<std::int64_t>(mp.n - 1));
    const auto split = coprime_split(F.q - 1, mp.n);
    const std::uint64_t lam2 =
        split.r_part == 1 ? 1 : mult_order(mp.n % split.r_part, split.r_part);
    for (std::uint64_t L : divisors_of(lam2)) {
        if (L % 2 == 0 || L > length_cap) continue;
        std::int64_t acc = 0;
        for (std::uint64_t i : divisors_of(L))
            acc += static_cast<std::int64_t>(mobius(L / i)) *
                   static_cast<std::int64_t>(g_powm1(F, mp.n, i));
        const std::int64_t num = static_cast<std::int64_t>(delta_o) * acc;
        const std::int64_t den = static_cast<std::int64_t>(g * L);
        if (num < 0 || num % den != 0) {
            if (uncovered) *uncovered = true;
            continue;
        }
        if (num > 0) out.counts[L] = static_cast<std::uint64_t>(num / den);
    }
    return out;
}

CycleCensus predict_even_cycles_even_n(const ExtCtx& E, const MapParams& mp, bool* uncovered) {
    if (!mp.even) throw std::invalid_argument("predict_even_cycles_even_n: n must be even");
    CycleCensus out;
    if (mp.delta1 == 0 || mp.delta2 == 0) return out;  // graph collapses onto zero
    const FieldCtx& F = E.fq;
    const std::uint64_t qm1 = F.q - 1;
    const EvenOffsets eo = even_offsets(E, mp);
    // Periodic pairs grouped by the order of n^2 modulo (n^2-1)*d; each
    // admissible offset t contributes (q-1)*g(n-1) elements with
    // d = r/gcd(r, t).
    std::map<std::uint64_t, std::uint64_t> by_k;
    for (std::uint64_t t = eo.t0; t <= eo.split.r_part; t += eo.g) {
        const std::uint64_t d = eo.split.r_part / std::gcd(eo.split.r_part, t);
        const std::uint64_t mod = (mp.n * mp.n - 1) * d;
        const std::uint64_t k = mult_order(mp.n * mp.n % mod, mod);
        by_k[k] += qm1 * eo.g;
    }
    const CycleCensus oddc = predict_odd_cycles_even_n(E, mp, ~0ull, uncovered);
    for (auto [k, cnt] : by_k) {
        std::uint64_t sub = 0;
        if (k % 2 == 1) {
            auto it = oddc.counts.find(k);
            if (it != oddc.counts.end()) sub = k * it->second;
        }
        if (cnt < sub || (cnt - sub) % (2 * k) != 0) {
            if (uncovered) *uncovered = true;
            continue;
        }
        const std::uint64_t val = (cnt - sub) / (2 * k);
        if (val > 0) out.counts[2 * k] += val;
    }
    return out;
}

FixedPointCounts predict_fixed_odd_n(const ExtCtx& E, const MapParams& mp) {
    if (mp.even) throw std::invalid_argument("predict_fixed_odd_n: n must be odd");
    const FieldCtx& F = E.fq;
    FixedPointCounts fp;
    const bool cond = F.chi_m(static_cast<std::int64_t>((mp.n - 1) / 2), mp.delta2) == 1 &&
                      F.chi_m(static_cast<std::int64_t>(mp.n - 1), mp.delta2) == -1;
    const std::uint64_t g = F.g_of(static_cast<std::int64_t>(mp.n - 1));
    if (cond) {
        fp.n_axis = g;
        if (mp.delta1 == mp.delta2) fp.n_mixed = (F.q - 1) * g;
    }
    fp.total = fp.n_axis + fp.n_mixed + 1;
    return fp;
}

std::uint64_t compute_tau0(const ExtCtx& E, const MapParams& mp) {
    if (mp.even) throw std::invalid_argument("compute_tau0: n must be odd");
    if (mp.delta2 == 0) throw std::invalid_argument("compute_tau0: requires delta2 != 0");
    const FieldCtx& F = E.fq;
    const std::uint64_t qm1 = F.q - 1;
    const std::uint64_t l0 = odd_shift_log(E, mp);
    const std::uint64_t nm1 = mp.n - 1;
    if (l0 == 0 || std::gcd(nm1, l0) == nm1) return 1;
    std::uint64_t tau0 = 1;
    std::uint64_t m = nm1;
    while (m % 2 == 0) m /= 2;
    auto odd_prime = [&](std::uint64_t pp) {
        const std::uint64_t vn = vp_of(pp, nm1);
        const std::uint64_t vl = l0 % pp == 0 ? vp_of(pp, l0) : 0;
        const std::uint64_t vq = qm1 % pp == 0 ? vp_of(pp, qm1) : 0;
        if (vn > vl && vq > vl) tau0 *= ipow(pp, vq - vl);
    };
    for (std::uint64_t pp = 3; pp * pp <= m; pp += 2) {
        if (m % pp) continue;
        odd_prime(pp);
        while (m % pp == 0) m /= pp;
    }
    if (m > 1) odd_prime(m);
    // Two-adic part: odd l0 forces even multipliers outright; even l0 binds
    // only while nu_2(n-1) and nu_2(q-1) both exceed nu_2(l0).
    const std::uint64_t v2l = l0 % 2 == 0 ? vp_of(2, l0) : 0;
    const std::uint64_t v2q = vp_of(2, qm1);
    const std::uint64_t v2n = vp_of(2, nm1);
    const std::uint64_t h = (mp.n + 1) / 2;
    const std::uint64_t v2h = h % 2 == 0 ? vp_of(2, h) : 0;
    std::uint64_t eps = 0;
    if (v2l == 0)
        eps = std::max<std::int64_t>(1, static_cast<std::int64_t>(v2q) -
                                            static_cast<std::int64_t>(v2h));
    else if (v2n > v2l && v2q > v2l)
        eps = v2q - v2l;
    return tau0 << eps;
}

std::uint64_t compute_tau0_statement(const ExtCtx& E, const MapParams& mp) {
    if (mp.even) throw std::invalid_argument("compute_tau0_statement: n must be odd");
    if (mp.delta2 == 0) throw std::invalid_argument("compute_tau0_statement: requires delta2 != 0");
    const FieldCtx& F = E.fq;
    const std::uint64_t qm1 = F.q - 1;
    const std::uint64_t l0 = odd_shift_log(E, mp);
    const std::uint64_t nm1 = mp.n - 1;
    if (l0 == 0 || std::gcd(nm1, l0) == nm1) return 1;
    std::uint64_t tau0 = 1;
    std::uint64_t m = nm1;
    while (m % 2 == 0) m /= 2;
    auto odd_prime = [&](std::uint64_t pp) {
        const std::uint64_t vn = vp_of(pp, nm1);
        const std::uint64_t vl = l0 % pp == 0 ? vp_of(pp, l0) : 0;
        const std::uint64_t vq = qm1 % pp == 0 ? vp_of(pp, qm1) : 0;
        if (vn > vl && vq > vl) tau0 *= ipow(pp, vq - vl);
    };
    for (std::uint64_t pp = 3; pp * pp <= m; pp += 2) {
        if (m % pp) continue;
        odd_prime(pp);
        while (m % pp == 0) m /= pp;
    }
    if (m > 1) odd_prime(m);
    const std::uint64_t v2l = l0 % 2 == 0 ? vp_of(2, l0) : 0;
    std::uint64_t eps = 0;
    if (v2l == 0) {
        const std::uint64_t v2q = vp_of(2, qm1);
        const std::uint64_t h = (mp.n + 1) / 2;
        const std::uint64_t v2h = h % 2 == 0 ? vp_of(2, h) : 0;
        eps = v2q > v2h ? v2q - v2h : 0;
    }
    return tau0 << eps;
}

std::uint64_t compute_tau(const ExtCtx& E, const MapParams& mp) {
    if (mp.even) throw std::invalid_argument("compute_tau: n must be odd");
    if (mp.delta1 == 0 || mp.delta2 == 0)
        throw std::invalid_argument("compute_tau: requires delta1*delta2 != 0");
    const FieldCtx& F = E.fq;
    const std::uint64_t lg = F.discrete_log(F.mul(mp.delta1, F.inv(mp.delta2)));
    const std::uint64_t ord = (F.q - 1) / std::gcd(static_cast<std::uint64_t>(F.q - 1), lg);
    return std::lcm(ord, compute_tau0(E, mp));
}

CycleCensus predict_cycles_odd_n(const ExtCtx& E, const MapParams& mp, std::uint64_t t_cap,
                                 bool* uncovered) {
    if (mp.even) throw std::invalid_argument("predict_cycles_odd_n: n must be odd");
    CycleCensus out;
    if (mp.delta2 == 0) return out;  // whole graph hangs on zero
    const FieldCtx& F = E.fq;
    const std::uint64_t qm1 = F.q - 1;
    const auto split = coprime_split(qm1, mp.n);
    const std::uint64_t mod0 = split.r_part * (mp.n - 1);
    const std::uint64_t lam = mod0 == 1 ? 1 : mult_order(mp.n % mod0, mod0);
    auto a_of = [&](std::uint64_t m) {
        const std::uint64_t gu = std::gcd(geom_sum_mod(mp.n, m, qm1), qm1);
        return gu * std::gcd(mp.n - 1, qm1 / gu);
    };
    const FixedPointCounts fp = predict_fixed_odd_n(E, mp);
    const std::uint64_t tau0 = compute_tau0(E, mp);
    // Cycles through elements with zero x-coordinate: lengths t*tau0.
    for (std::uint64_t d : divisors_of(std::lcm(lam, tau0))) {
        if (d == 1 || d % tau0 != 0) continue;
        const std::uint64_t t = d / tau0;
        if (t > t_cap) continue;
        std::int64_t acc = 0;
        for (std::uint64_t j : divisors_of(t))
            acc += static_cast<std::int64_t>(mobius(t / j)) *
                   (static_cast<std::int64_t>(a_of(j * tau0)) -
                    static_cast<std::int64_t>(fp.n_axis));
        if (acc < 0 || acc % static_cast<std::int64_t>(d) != 0) {
            if (uncovered) *uncovered = true;
            continue;
        }
        if (acc > 0) out.counts[d] += static_cast<std::uint64_t>(acc) / d;
    }
    if (mp.delta1 != 0) {
        // Cycles through elements with both coordinates nonzero: lengths t*tau.
        const std::uint64_t tau = compute_tau(E, mp);
        for (std::uint64_t d : divisors_of(std::lcm(lam, tau))) {
            if (d == 1 || d % tau != 0) continue;
            const std::uint64_t t = d / tau;
            if (t > t_cap) continue;
            std::int64_t acc = 0;
            for (std::uint64_t j : divisors_of(t))
                acc += static_cast<std::int64_t>(mobius(t / j)) *
                       (static_cast<std::int64_t>(qm1) *
                            static_cast<std::int64_t>(a_of(j * tau)) -
                        static_cast<std::int64_t>(fp.n_mixed));
            if (acc < 0 || acc % static_cast<std::int64_t>(d) != 0) {
                if (uncovered) *uncovered = true;
                continue;
            }
            if (acc > 0) out.counts[d] += static_cast<std::uint64_t>(acc) / d;
        }
    }
    return out;
}

std::optional<TreeShape> predict_trees(const ExtCtx& E, const MapParams& mp) {
    const FieldCtx& F = E.fq;
    if (mp.trivial) return std::nullopt;
    if (F.g_of(static_cast<std::int64_t>(mp.n)) == 1) return std::nullopt;
    if (mp.delta2 == 0 || (mp.even && mp.delta1 == 0))
        return std::nullopt;  // no nonzero cyclic vertices
    const TreeVariant var =
        (!mp.even && mp.delta1 == 0) ? TreeVariant::zero : TreeVariant::standard;
    return build_tree_shape(F, mp.n, var, full_tree_levels(F, mp.n));
}

std::pair<TreeShape, std::uint64_t> predict_zero_component(const ExtCtx& E, const MapParams& mp) {
    const FieldCtx& F = E.fq;
    const std::uint64_t q = F.q;
    TreeBuilder tb;
    auto star = [&](std::uint64_t k) {
        for (std::uint64_t i = 0; i < k; ++i) tb.attach(tb.root());
    };
    // Root gets c1 children, the first `with` of them get `each` children.
    auto two_level = [&](std::uint64_t c1, std::uint64_t with, std::uint64_t each) {
        for (std::uint64_t i = 0; i < c1; ++i) {
            std::uint32_t v = tb.attach(tb.root());
            if (i < with)
                for (std::uint64_t k = 0; k < each; ++k) tb.attach(v);
        }
    };
    std::uint64_t size;
    if (mp.trivial) {
        star(q * q - 1);
        size = q * q;
    } else if (mp.even) {
        const std::uint64_t g1 = F.g_of(static_cast<std::int64_t>(mp.n));
        if (mp.delta1 == 0) {
            two_level(2 * q - 2, q - 1, q - 1);
            size = q * q;
        } else if (mp.delta2 == 0) {
            two_level(q - 1, (q - 1) / g1, q * g1);
            size = q * q;
        } else {
            two_level(q - 1, (q - 1) / g1, g1);
            size = 2 * q - 1;
        }
    } else {
        if (mp.delta2 == 0) {
            two_level(2 * q - 2, q - 1, q - 1);
            size = q * q;
        } else {
            star(q - 1);
            size = q;
        }
    }
    return {tb.finalize(), size};
}

Prediction predict(const ExtCtx& E, const MapParams& mp) {
    const FieldCtx& F = E.fq;
    const std::uint64_t q2 = static_cast<std::uint64_t>(F.q) * F.q;
    Prediction P;
    P.even = mp.even;
    P.trivial = mp.trivial;
    P.delta1_zero = mp.delta1 == 0;
    P.delta2_zero = mp.delta2 == 0;
    P.chi2_a2mc2 = F.chi_m(2, F.sub(F.mul(mp.a, mp.a), F.mul(mp.c, mp.c)));
    auto [zshape, zsize] = predict_zero_component(E, mp);
    P.zero_profile = std::move(zshape);
    P.zero_size = zsize;

    if (mp.trivial) {
        P.census.counts[1] = 1;
        P.provenance[1] = "trivial";
    } else if (mp.even && mp.delta1 == 0) {
        P.census.counts[1] = 1;
        P.provenance[1] = "delta1zero";
    } else if (mp.delta2 == 0) {  // either parity
        P.census.counts[1] = 1;
        P.provenance[1] = "delta2zero";
    } else if (mp.even) {
        P.delta_o = delta_o_of(E, mp);
        const EvenOffsets eo = even_offsets(E, mp);
        P.l0 = eo.l0;
        P.t0 = eo.t0;
        const CycleCensus oddc = predict_odd_cycles_even_n(E, mp, ~0ull, &P.uncovered);
        for (auto [len, cnt] : oddc.counts) {
            P.census.counts[len] += cnt;
            P.provenance[len] = "OddCycle";
        }
        P.census.counts[1] += 1;  // zero fixed point joins the Delta_o count
        P.provenance[1] = "OddCycle";
        const CycleCensus evc = predict_even_cycles_even_n(E, mp, &P.uncovered);
        for (auto [len, cnt] : evc.counts) {
            P.census.counts[len] += cnt;
            P.provenance[len] = "evenlength";
        }
    } else {
        const FixedPointCounts fp = predict_fixed_odd_n(E, mp);
        P.census.counts[1] = fp.total;
        P.provenance[1] = "fixedodd";
        P.l0 = odd_shift_log(E, mp);
        P.tau0 = compute_tau0(E, mp);
        if (mp.delta1 != 0) P.tau = compute_tau(E, mp);
        const CycleCensus cyc = predict_cycles_odd_n(E, mp, ~0ull, &P.uncovered);
        for (auto [len, cnt] : cyc.counts) {
            P.census.counts[len] += cnt;
            P.provenance[len] = "oddcycles";
        }
    }

    P.nonzero_tree = predict_trees(E, mp);
    P.e = P.nonzero_tree ? static_cast<std::int64_t>(P.nonzero_tree->height) - 1 : -1;
    const std::uint64_t tree_total = P.nonzero_tree ? P.nonzero_tree->total_size() : 1;
    P.audit_total = P.zero_size + (P.census.total_cyclic() - 1) * tree_total;
    P.audit_ok = P.audit_total == q2;
    return P;
}

}  // namespace ffgraph
