// The quadratic extension F_{q^2} = F_q(B) with B^2 = b a fixed nonresidue,
// elements stored as coordinate pairs <x, y> = x + y*B. Provides generic
// extension arithmetic, the Frobenius x + y*B -> x - y*B, and the map under
// study f(X) = (c X^q + a X)(X^q - X)^{n-1} in two forms: the direct product
// evaluation and the closed coordinate formulas with their delta constants.
#pragma once

#include <cstdint>
#include <string>

#include "ffgraph/field.hpp"

namespace ffgraph {

struct ExtElem {
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    bool operator==(const ExtElem&) const = default;
};

struct ExtCtx {
    FieldCtx fq;
    std::uint32_t b = 0;  // nonresidue: B^2 = b

    std::uint32_t size() const { return fq.q * fq.q; }
    std::uint32_t encode(ExtElem e) const { return e.x * fq.q + e.y; }
    ExtElem decode(std::uint32_t idx) const { return {idx / fq.q, idx % fq.q}; }
};

// b = 0 selects find_nonresidue(fq); otherwise b must be a nonresidue index.
ExtCtx build_ext(FieldCtx fq, std::uint32_t b = 0);

ExtElem ext_add(const ExtCtx& E, ExtElem u, ExtElem v);
ExtElem ext_sub(const ExtCtx& E, ExtElem u, ExtElem v);
ExtElem ext_mul(const ExtCtx& E, ExtElem u, ExtElem v);
ExtElem ext_scale(const ExtCtx& E, std::uint32_t k, ExtElem u);
ExtElem ext_pow(const ExtCtx& E, ExtElem u, std::uint64_t e);
// X -> X^q, i.e. <x, y> -> <x, -y>.
ExtElem frobenius(const ExtCtx& E, ExtElem u);

// "x+y*B" with both coordinates as canonical element indices.
std::string ext_to_string(ExtElem u);
ExtElem parse_ext(const ExtCtx& E, const std::string& text);

struct MapParams {
    std::uint32_t a = 0;
    std::uint32_t c = 0;
    std::uint64_t n = 0;
    bool even = false;       // parity of n
    std::uint32_t delta1 = 0;
    std::uint32_t delta2 = 0;
    bool trivial = false;    // a = c = 0: the map is identically zero
};

// Computes the coordinate-form constants. Requires n >= 2; (a, c) = (0, 0) is
// rejected unless allow_trivial is set.
MapParams derive_deltas(const ExtCtx& E, std::uint32_t a, std::uint32_t c, std::uint64_t n,
                        bool allow_trivial = false);

// Direct route: Frobenius, extension products and powers, no delta shortcuts.
ExtElem eval_map_direct(const ExtCtx& E, const MapParams& mp, ExtElem X);
// Coordinate route: even n gives <d1*y^n, d2*x*y^{n-1}>; odd n gives
// (4b)^{(n-1)/2} * y^{n-1} * <d1*x, d2*y>.
ExtElem eval_map_coords(const ExtCtx& E, const MapParams& mp, ExtElem X);

}  // namespace ffgraph
