#include "ffgraph/extension.hpp"

#include <sstream>
#include <stdexcept>

namespace ffgraph {

ExtCtx build_ext(FieldCtx fq, std::uint32_t b) {
    if (b == 0)
        b = find_nonresidue(fq);
    else if (b >= fq.q || fq.chi_m(2, b) != -1)
        throw std::invalid_argument("build_ext: b must be a quadratic nonresidue");
    return ExtCtx{std::move(fq), b};
}

ExtElem ext_add(const ExtCtx& E, ExtElem u, ExtElem v) {
    return {E.fq.add(u.x, v.x), E.fq.add(u.y, v.y)};
}

ExtElem ext_sub(const ExtCtx& E, ExtElem u, ExtElem v) {
    return {E.fq.sub(u.x, v.x), E.fq.sub(u.y, v.y)};
}

ExtElem ext_mul(const ExtCtx& E, ExtElem u, ExtElem v) {
    const FieldCtx& F = E.fq;
    return {F.add(F.mul(u.x, v.x), F.mul(E.b, F.mul(u.y, v.y))),
            F.add(F.mul(u.x, v.y), F.mul(u.y, v.x))};
}

ExtElem ext_scale(const ExtCtx& E, std::uint32_t k, ExtElem u) {
    return {E.fq.mul(k, u.x), E.fq.mul(k, u.y)};
}

ExtElem ext_pow(const ExtCtx& E, ExtElem u, std::uint64_t e) {
    ExtElem r{1, 0};
    while (e > 0) {
        if (e & 1) r = ext_mul(E, r, u);
        u = ext_mul(E, u, u);
        e >>= 1;
    }
    return r;
}

ExtElem frobenius(const ExtCtx& E, ExtElem u) {
    return {u.x, E.fq.neg(u.y)};
}

std::string ext_to_string(ExtElem u) {
    std::ostringstream out;
    out << u.x << '+' << u.y << "*B";
    return out.str();
}

ExtElem parse_ext(const ExtCtx& E, const std::string& text) {
    std::size_t plus = text.find('+');
    if (plus == std::string::npos || text.size() < plus + 3 ||
        text.compare(text.size() - 2, 2, "*B") != 0)
        throw std::invalid_argument("parse_ext: expected form x+y*B");
    std::size_t px = 0, py = 0;
    unsigned long x = std::stoul(text.substr(0, plus), &px);
    std::string ypart = text.substr(plus + 1, text.size() - plus - 3);
    unsigned long y = std::stoul(ypart, &py);
    if (px != plus || py != ypart.size() || x >= E.fq.q || y >= E.fq.q)
        throw std::invalid_argument("parse_ext: coordinate out of range");
    return {static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)};
}

MapParams derive_deltas(const ExtCtx& E, std::uint32_t a, std::uint32_t c, std::uint64_t n,
                        bool allow_trivial) {
    if (n < 2) throw std::invalid_argument("derive_deltas: n must be at least 2");
    const FieldCtx& F = E.fq;
    if (a >= F.q || c >= F.q)
        throw std::invalid_argument("derive_deltas: coefficient index out of range");
    MapParams mp;
    mp.a = a;
    mp.c = c;
    mp.n = n;
    mp.even = n % 2 == 0;
    mp.trivial = (a == 0 && c == 0);
    if (mp.trivial && !allow_trivial)
        throw std::invalid_argument("derive_deltas: a = c = 0 needs explicit trivial-map mode");
    if (mp.even) {
        std::uint32_t m2 = F.pow(F.neg(F.from_int(2)), n - 1);  // (-2)^{n-1}
        mp.delta1 = F.mul(F.sub(a, c), F.mul(m2, F.pow(E.b, n / 2)));
        mp.delta2 = F.mul(F.add(a, c), F.mul(m2, F.pow(E.b, (n - 2) / 2)));
    } else {
        mp.delta1 = F.add(a, c);
        mp.delta2 = F.sub(a, c);
    }
    return mp;
}

ExtElem eval_map_direct(const ExtCtx& E, const MapParams& mp, ExtElem X) {
    ExtElem fr = frobenius(E, X);
    ExtElem head = ext_add(E, ext_scale(E, mp.c, fr), ext_scale(E, mp.a, X));
    ExtElem tail = ext_pow(E, ext_sub(E, fr, X), mp.n - 1);
    return ext_mul(E, head, tail);
}

ExtElem eval_map_coords(const ExtCtx& E, const MapParams& mp, ExtElem X) {
    const FieldCtx& F = E.fq;
    if (mp.even) {
        std::uint32_t yn1 = F.pow(X.y, mp.n - 1);
        return {F.mul(mp.delta1, F.mul(yn1, X.y)), F.mul(mp.delta2, F.mul(X.x, yn1))};
    }
    std::uint32_t sc = F.mul(F.pow(F.mul(F.from_int(4), E.b), (mp.n - 1) / 2),
                             F.pow(X.y, mp.n - 1));
    return {F.mul(sc, F.mul(mp.delta1, X.x)), F.mul(sc, F.mul(mp.delta2, X.y))};
}

}  // namespace ffgraph
