// Closed-form predictions for the functional graph of f: cycle censuses from
// the character/order theorems, hanging-tree shapes from the level
// construction, and the zero-component profile — assembled into a Prediction
// with an element-count self audit. Brute force is never consulted here.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "ffgraph/extension.hpp"
#include "ffgraph/orbits.hpp"
#include "ffgraph/treeshape.hpp"

namespace ffgraph {

struct Prediction {
    CycleCensus census;
    TreeShape zero_profile;
    std::uint64_t zero_size = 0;
    std::optional<TreeShape> nonzero_tree;  // hanging tree over nonzero cyclic vertices
    std::map<std::uint64_t, std::string> provenance;  // cycle length -> rule tag

    // Derived quantities, recorded for reports.
    bool even = false;
    bool trivial = false;
    bool delta1_zero = false;
    bool delta2_zero = false;
    int chi2_a2mc2 = 0;         // chi_2(a^2 - c^2)
    std::uint64_t delta_o = 0;  // even n: number of odd-cycle seeds among +-gamma*delta2
    std::uint64_t tau0 = 0;     // odd n: minimal cycle length parameter (delta2 != 0)
    std::uint64_t tau = 0;      // odd n: mixed-coordinate cycle parameter (delta1*delta2 != 0)
    std::uint64_t l0 = 0;       // discrete log driving the affine shift (parity-specific)
    std::uint64_t t0 = 0;       // even n: least admissible offset
    std::int64_t e = -1;        // tree depth parameter; -1 when no tree is predicted

    bool uncovered = false;   // some census clause failed to enumerate cleanly
    bool audit_ok = false;    // zero_size + (cyclic nonzero) * tree size == q^2
    std::uint64_t audit_total = 0;
};

enum class TreeVariant { standard, zero };

// Builds the predicted hanging tree with the given number of levels below the
// root by the left-to-right labeling construction. Throws when g(n) = 1 (no
// tree exists) or levels = 0.
TreeShape build_tree_shape(const FieldCtx& fq, std::uint64_t n, TreeVariant variant,
                           std::uint32_t levels);

// Even n: counts of cycles of odd length (zero cycle excluded), nonempty only
// when chi_2(a^2 - c^2) = -1. Lengths above length_cap are dropped.
CycleCensus predict_odd_cycles_even_n(const ExtCtx& E, const MapParams& mp,
                                      std::uint64_t length_cap, bool* uncovered = nullptr);

// Even n, delta1*delta2 != 0: counts of cycles of even length from the
// admissible-offset enumeration.
CycleCensus predict_even_cycles_even_n(const ExtCtx& E, const MapParams& mp,
                                       bool* uncovered = nullptr);

struct FixedPointCounts {
    std::uint64_t n_axis = 0;   // fixed points with exactly one zero coordinate
    std::uint64_t n_mixed = 0;  // fixed points with both coordinates nonzero
    std::uint64_t total = 0;    // including the zero element
};

// Odd n: closed-form fixed-point counts.
FixedPointCounts predict_fixed_odd_n(const ExtCtx& E, const MapParams& mp);

// Odd n, delta2 != 0: tau0 = minimal length over cycles with a zero
// x-coordinate (per the order/valuation formula), and tau = lcm with the
// order of delta1/delta2 (needs delta1 != 0).
std::uint64_t compute_tau0(const ExtCtx& E, const MapParams& mp);
std::uint64_t compute_tau(const ExtCtx& E, const MapParams& mp);
// Variant reading of the two-adic part as literally stated in the source
// theorem; kept for divergence reporting only.
std::uint64_t compute_tau0_statement(const ExtCtx& E, const MapParams& mp);

// Odd n: cycle counts for lengths > 1, classes merged. t_cap bounds the
// divisor enumeration (lengths beyond are dropped).
CycleCensus predict_cycles_odd_n(const ExtCtx& E, const MapParams& mp, std::uint64_t t_cap,
                                 bool* uncovered = nullptr);

// Predicted hanging tree over nonzero cyclic vertices; nullopt when the
// theorems predict none.
std::optional<TreeShape> predict_trees(const ExtCtx& E, const MapParams& mp);

// Predicted zero-component profile and its size.
std::pair<TreeShape, std::uint64_t> predict_zero_component(const ExtCtx& E, const MapParams& mp);

// Full assembly with provenance tags and the element-count self audit.
Prediction predict(const ExtCtx& E, const MapParams& mp);

}  // namespace ffgraph
