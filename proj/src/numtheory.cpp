#include "ffgraph/numtheory.hpp"

#include <numeric>
#include <stdexcept>

namespace ffgraph {

int mobius(std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("mobius: m must be positive");
    int sign = 1;
    for (std::uint64_t d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            m /= d;
            if (m % d == 0) return 0;  // square factor
            sign = -sign;
        }
    }
    if (m > 1) sign = -sign;
    return sign;
}

std::uint64_t euler_phi(std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("euler_phi: m must be positive");
    std::uint64_t result = m;
    for (std::uint64_t d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            result -= result / d;
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

unsigned valuation(std::uint64_t p, const bigint& a) {
    if (p < 2) throw std::invalid_argument("valuation: p must be >= 2");
    if (a == 0) throw std::invalid_argument("valuation: a must be nonzero");
    bigint v = a < 0 ? bigint(-a) : a;
    unsigned k = 0;
    while (v % p == 0) {
        v /= p;
        ++k;
    }
    return k;
}

std::uint64_t mult_order(std::uint64_t base, std::uint64_t modulus) {
    if (modulus < 2) throw std::invalid_argument("mult_order: modulus must be >= 2");
    base %= modulus;
    if (std::gcd(base, modulus) != 1)
        throw std::invalid_argument("mult_order: base not coprime to modulus");
    std::uint64_t x = base % modulus, k = 1;
    while (x != 1) {
        x = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * base % modulus);
        ++k;
    }
    return k;
}

bigint u_of(std::uint64_t n, unsigned j) {
    bigint sum = 0, pw = 1;
    for (unsigned i = 0; i < j; ++i) {
        sum += pw;
        pw *= n;
    }
    return sum;
}

std::uint64_t geom_sum_mod(std::uint64_t n, std::uint64_t j, std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("geom_sum_mod: m must be positive");
    if (m == 1) return 0;
    // Process bits of j from the top, tracking (u(t) mod m, n^t mod m) for the
    // prefix t: doubling uses u(2t) = u(t)*(1 + n^t), appending a one-bit adds n^{2t}.
    auto mulm = [m](std::uint64_t a, std::uint64_t b) {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
    };
    std::uint64_t s = 0, pw = 1;  // t = 0
    n %= m;
    for (int bit = 63; bit >= 0; --bit) {
        if (j >> bit == 0) continue;
        s = mulm(s, (1 + pw) % m);
        pw = mulm(pw, pw);
        if ((j >> bit) & 1) {
            s = (s + pw) % m;
            pw = mulm(pw, n);
        }
    }
    return s;
}

unsigned lte_valuation(std::uint64_t n, unsigned j, std::uint64_t p) {
    if (j == 0) throw std::invalid_argument("lte_valuation: j must be positive");
    if (n % 2 == 0) throw std::invalid_argument("lte_valuation: n must be odd");
    if (p < 2) throw std::invalid_argument("lte_valuation: p must be a prime");
    if (p == 2) {
        // nu_2(n^j - 1) = nu_2(n-1) + nu_2(n+1) + nu_2(j) - 1 for even j, and
        // nu_2(u(j)) drops the nu_2(n-1) term. Odd j makes u(j) odd.
        if (j % 2 == 1) return 0;
        return valuation(2, bigint(n + 1)) + valuation(2, bigint(j)) - 1;
    }
    unsigned vp_nm1 = (n - 1) % p == 0 ? valuation(p, bigint(n - 1)) : 0;
    if (vp_nm1 > 0) {
        // p | n-1: nu_p(n^j - 1) = nu_p(n-1) + nu_p(j), so nu_p(u(j)) = nu_p(j).
        return j % p == 0 ? valuation(p, bigint(j)) : 0;
    }
    // Lemma case does not apply; compute directly.
    return valuation(p, u_of(n, j));
}

CoprimeSplit coprime_split(std::uint64_t qm1, std::uint64_t n) {
    if (qm1 == 0 || n == 0)
        throw std::invalid_argument("coprime_split: arguments must be positive");
    std::uint64_t r = qm1;
    for (std::uint64_t g = std::gcd(r, n); g > 1; g = std::gcd(r, n)) r /= g;
    return CoprimeSplit{qm1 / r, r};
}

std::vector<std::uint64_t> divisors_of(std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("divisors_of: m must be positive");
    std::vector<std::uint64_t> small, large;
    for (std::uint64_t d = 1; d * d <= m; ++d) {
        if (m % d == 0) {
            small.push_back(d);
            if (d != m / d) large.push_back(m / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("pow_mod: modulus must be positive");
    if (m == 1) return 0;
    std::uint64_t result = 1;
    base %= m;
    while (e > 0) {
        if (e & 1)
            result = static_cast<std::uint64_t>(
                static_cast<unsigned __int128>(result) * base % m);
        base = static_cast<std::uint64_t>(static_cast<unsigned __int128>(base) * base % m);
        e >>= 1;
    }
    return result;
}

}  // namespace ffgraph
