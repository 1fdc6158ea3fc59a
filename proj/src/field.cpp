#include "ffgraph/field.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ffgraph {

namespace {

// Dense polynomials over F_p, coefficients low-to-high, not necessarily trimmed.
using Poly = std::vector<std::uint32_t>;

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) {
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
        if (f[i] != 0) return i;
    return -1;
}

// Remainder of f modulo the monic polynomial m.
Poly poly_rem(Poly f, const Poly& m, std::uint32_t p) {
    int dm = degree(m);
    for (int i = degree(f); i >= dm; --i) {
        std::uint32_t c = f[i];
        if (c == 0) continue;
        for (int j = 0; j <= dm; ++j) {
            std::uint32_t sub = static_cast<std::uint64_t>(c) * m[j] % p;
            f[i - dm + j] = (f[i - dm + j] + p - sub) % p;
        }
    }
    f.resize(dm);
    trim(f);
    return f;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = (out[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p;
    }
    return poly_rem(std::move(out), m, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& m, std::uint32_t p) {
    Poly result{1};
    base = poly_rem(std::move(base), m, p);
    while (e > 0) {
        if (e & 1) result = poly_mulmod(result, base, m, p);
        base = poly_mulmod(base, base, m, p);
        e >>= 1;
    }
    return result;
}

Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // Make b monic so poly_rem applies.
        std::uint32_t lead = b.back();
        if (lead != 1) {
            std::uint32_t linv = 1;
            for (std::uint32_t k = 1; k < p; ++k)
                if (static_cast<std::uint64_t>(lead) * k % p == 1) { linv = k; break; }
            for (auto& c : b) c = static_cast<std::uint64_t>(c) * linv % p;
        }
        Poly r = poly_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t m) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            out.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) out.push_back(m);
    return out;
}

// Rabin test: f monic of degree s is irreducible over F_p iff x^{p^s} = x
// (mod f) and gcd(x^{p^{s/t}} - x, f) is constant for every prime t | s.
bool poly_irreducible(const Poly& f, std::uint32_t p, std::uint32_t s) {
    if (degree(f) != static_cast<int>(s)) return false;
    if (s == 1) return true;
    Poly x{0, 1};
    auto frob_power = [&](std::uint32_t k) {  // x^{p^k} mod f
        Poly t = x;
        for (std::uint32_t i = 0; i < k; ++i) t = poly_powmod(std::move(t), p, f, p);
        return t;
    };
    Poly top = frob_power(s);
    trim(top);
    Poly xt = x;
    if (top != xt) return false;
    for (std::uint64_t t : prime_divisors(s)) {
        Poly h = frob_power(s / static_cast<std::uint32_t>(t));
        // h - x
        if (h.size() < 2) h.resize(2, 0);
        h[1] = (h[1] + p - 1) % p;
        trim(h);
        Poly g = poly_gcd(f, h, p);
        if (degree(g) > 0) return false;
    }
    return true;
}

Poly index_to_poly(std::uint32_t idx, std::uint32_t p) {
    Poly out;
    while (idx > 0) {
        out.push_back(idx % p);
        idx /= p;
    }
    return out;
}

std::uint32_t poly_to_index(const Poly& f, std::uint32_t p) {
    std::uint32_t out = 0;
    for (std::size_t i = f.size(); i-- > 0;) out = out * p + f[i];
    return out;
}

}  // namespace

bool is_prime(std::uint64_t m) {
    if (m < 2) return false;
    for (std::uint64_t d = 2; d * d <= m; ++d)
        if (m % d == 0) return false;
    return true;
}

std::uint32_t FieldCtx::add_digits(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t out = 0, place = 1;
    for (std::uint32_t i = 0; i < s; ++i) {
        out += (a % p + b % p) % p * place;
        a /= p;
        b /= p;
        place *= p;
    }
    return out;
}

std::uint64_t FieldCtx::g_of(std::int64_t m) const {
    std::uint64_t am = m < 0 ? 0 - static_cast<std::uint64_t>(m) : static_cast<std::uint64_t>(m);
    return std::gcd(am, static_cast<std::uint64_t>(q - 1));
}

FieldCtx build_field(std::uint32_t p, std::uint32_t s, const std::vector<std::uint32_t>& modulus,
                     std::uint32_t cap, std::uint32_t generator_override) {
    if (p < 3 || p % 2 == 0 || !is_prime(p))
        throw std::invalid_argument("build_field: p must be an odd prime");
    if (s == 0) throw std::invalid_argument("build_field: s must be positive");
    std::uint64_t q64 = 1;
    for (std::uint32_t i = 0; i < s; ++i) {
        q64 *= p;
        if (q64 > cap) throw std::invalid_argument("build_field: q exceeds cap");
    }
    const std::uint32_t q = static_cast<std::uint32_t>(q64);

    Poly f;
    if (!modulus.empty()) {
        if (modulus.size() != s + 1 || modulus.back() != 1)
            throw std::invalid_argument("build_field: modulus must be monic of degree s");
        for (std::uint32_t c : modulus)
            if (c >= p) throw std::invalid_argument("build_field: modulus coefficient out of range");
        f = Poly(modulus.begin(), modulus.end());
        if (!poly_irreducible(f, p, s))
            throw std::invalid_argument("build_field: modulus is reducible");
    } else {
        // Canonical modulus: smallest packed coefficient integer among monic
        // irreducibles of degree s (same packing as the element encoding).
        for (std::uint32_t m = 0; m < q; ++m) {
            Poly cand = index_to_poly(m, p);
            cand.resize(s + 1, 0);
            cand[s] = 1;
            if (poly_irreducible(cand, p, s)) {
                f = std::move(cand);
                break;
            }
        }
    }

    FieldCtx ctx;
    ctx.p = p;
    ctx.s = s;
    ctx.q = q;
    ctx.modulus.assign(f.begin(), f.end());

    auto mul_raw = [&](std::uint32_t a, std::uint32_t b) {
        return poly_to_index(poly_mulmod(index_to_poly(a, p), index_to_poly(b, p), f, p), p);
    };
    auto pow_raw = [&](std::uint32_t a, std::uint64_t e) {
        std::uint32_t r = 1;
        while (e > 0) {
            if (e & 1) r = mul_raw(r, a);
            a = mul_raw(a, a);
            e >>= 1;
        }
        return r;
    };

    const auto qm1_primes = prime_divisors(q - 1);
    auto has_full_order = [&](std::uint32_t g) {
        for (std::uint64_t t : qm1_primes)
            if (pow_raw(g, (q - 1) / t) == 1) return false;
        return true;
    };

    if (generator_override != 0) {
        if (generator_override >= q || !has_full_order(generator_override))
            throw std::invalid_argument("build_field: generator override lacks order q-1");
        ctx.generator = generator_override;
    } else {
        for (std::uint32_t g = 2; g < q; ++g) {
            if (has_full_order(g)) {
                ctx.generator = g;
                break;
            }
        }
    }
    if (ctx.generator == 0) throw std::logic_error("build_field: no generator found");

    ctx.exp_tab.assign(2 * (q - 1), 0);
    ctx.log_tab.assign(q, 0);
    std::uint32_t cur = 1;
    for (std::uint32_t e = 0; e < q - 1; ++e) {
        ctx.exp_tab[e] = cur;
        ctx.exp_tab[q - 1 + e] = cur;
        ctx.log_tab[cur] = e;
        cur = mul_raw(cur, ctx.generator);
    }
    if (cur != 1) throw std::logic_error("build_field: generator order mismatch");

    ctx.neg_tab.assign(q, 0);
    for (std::uint32_t a = 0; a < q; ++a) {
        std::uint32_t out = 0, place = 1, v = a;
        for (std::uint32_t i = 0; i < s; ++i) {
            out += (p - v % p) % p * place;
            v /= p;
            place *= p;
        }
        ctx.neg_tab[a] = out;
    }

    ctx.inv_tab.assign(q, 0);
    for (std::uint32_t a = 1; a < q; ++a)
        ctx.inv_tab[a] = ctx.exp_tab[(q - 1 - ctx.log_tab[a]) % (q - 1)];

    if (q <= FieldCtx::kTableCap) {
        ctx.add_tab.assign(static_cast<std::size_t>(q) * q, 0);
        ctx.mul_tab.assign(static_cast<std::size_t>(q) * q, 0);
        for (std::uint32_t a = 0; a < q; ++a) {
            for (std::uint32_t b = 0; b < q; ++b) {
                ctx.add_tab[a * q + b] = ctx.add_digits(a, b);
                ctx.mul_tab[a * q + b] =
                    (a == 0 || b == 0) ? 0 : ctx.exp_tab[ctx.log_tab[a] + ctx.log_tab[b]];
            }
        }
    }
    return ctx;
}

std::uint32_t find_nonresidue(const FieldCtx& fq) {
    for (std::uint32_t x = 1; x < fq.q; ++x)
        if (fq.chi_m(2, x) == -1) return x;
    throw std::logic_error("find_nonresidue: none found");
}

std::string modulus_to_string(const std::vector<std::uint32_t>& modulus) {
    std::ostringstream out;
    for (std::size_t i = 0; i < modulus.size(); ++i) {
        if (i) out << ',';
        out << modulus[i];
    }
    return out.str();
}

std::vector<std::uint32_t> parse_modulus(const std::string& text) {
    std::vector<std::uint32_t> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        std::size_t pos = 0;
        unsigned long v = std::stoul(tok, &pos);
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        if (pos != tok.size()) throw std::invalid_argument("parse_modulus: bad coefficient");
        out.push_back(static_cast<std::uint32_t>(v));
    }
    if (out.empty()) throw std::invalid_argument("parse_modulus: empty coefficient list");
    return out;
}

}  // namespace ffgraph
