// Exact arithmetic in F_q = F_{p^s} for odd prime p. Elements are encoded as
// integers 0..q-1 packing polynomial coefficients base p (constant digit least
// significant). Construction is deterministic: canonical modulus and canonical
// generator unless overridden. Discrete-log/exp tables are built eagerly; for
// small q full add/mul tables are kept so hot loops are table lookups.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ffgraph {

inline constexpr std::uint32_t kDefaultFieldCap = 1u << 13;

struct FieldCtx {
    std::uint32_t p = 0;
    std::uint32_t s = 0;
    std::uint32_t q = 0;
    std::vector<std::uint32_t> modulus;   // s+1 coefficients, constant first, monic
    std::uint32_t generator = 0;
    std::vector<std::uint32_t> log_tab;   // index -> discrete log; [0] unused
    std::vector<std::uint32_t> exp_tab;   // length 2(q-1): exp_tab[e] = gen^e
    std::vector<std::uint32_t> neg_tab;   // additive inverse
    std::vector<std::uint32_t> inv_tab;   // multiplicative inverse; [0] = 0 sentinel
    std::vector<std::uint32_t> add_tab;   // q*q table when q <= kTableCap, else empty
    std::vector<std::uint32_t> mul_tab;   // likewise

    static constexpr std::uint32_t kTableCap = 512;

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        return add_tab.empty() ? add_digits(a, b) : add_tab[a * q + b];
    }
    std::uint32_t neg(std::uint32_t a) const { return neg_tab[a]; }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg_tab[b]); }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        if (!mul_tab.empty()) return mul_tab[a * q + b];
        if (a == 0 || b == 0) return 0;
        return exp_tab[log_tab[a] + log_tab[b]];
    }
    std::uint32_t inv(std::uint32_t a) const {
        if (a == 0) throw std::domain_error("inv: zero has no inverse");
        return inv_tab[a];
    }
    // a^e; 0^0 = 1 by convention.
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
        if (a == 0) return e == 0 ? 1 : 0;
        std::uint64_t le = static_cast<std::uint64_t>(log_tab[a]) % (q - 1) * (e % (q - 1)) % (q - 1);
        return exp_tab[le];
    }
    std::uint32_t discrete_log(std::uint32_t a) const {
        if (a == 0) throw std::domain_error("discrete_log: zero has no logarithm");
        return log_tab[a];
    }
    // g(m) = gcd(|m|, q-1); m = 0 yields q-1.
    std::uint64_t g_of(std::int64_t m) const;
    // Power character: chi_m(x) = +1 when g(m) divides log x, -1 otherwise, 0 at x = 0.
    int chi_m(std::int64_t m, std::uint32_t x) const {
        if (x == 0) return 0;
        return log_tab[x] % g_of(m) == 0 ? 1 : -1;
    }
    // Embed an integer (reduced mod p) as a constant polynomial.
    std::uint32_t from_int(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(p);
        if (r < 0) r += p;
        return static_cast<std::uint32_t>(r);
    }

    std::uint32_t add_digits(std::uint32_t a, std::uint32_t b) const;
};

// Builds the context. When `modulus` is empty the canonical one is used: the
// monic irreducible of degree s whose packed coefficient integer is smallest.
// generator_override = 0 means the canonical generator (smallest index of
// multiplicative order q-1). Throws std::invalid_argument on composite or even
// p, q over cap, reducible or malformed modulus, or an override without full order.
FieldCtx build_field(std::uint32_t p, std::uint32_t s,
                     const std::vector<std::uint32_t>& modulus = {},
                     std::uint32_t cap = kDefaultFieldCap,
                     std::uint32_t generator_override = 0);

// Quadratic nonresidue of smallest element index.
std::uint32_t find_nonresidue(const FieldCtx& fq);

// Comma-separated coefficient list, constant term first, e.g. x^2+2 <-> "2,0,1".
std::string modulus_to_string(const std::vector<std::uint32_t>& modulus);
std::vector<std::uint32_t> parse_modulus(const std::string& text);

bool is_prime(std::uint64_t m);

}  // namespace ffgraph
