// Brute-force oracle: materialize the successor array of f on all q^2 points,
// decompose the functional graph into components, census the cycles, and
// extract canonical hanging-tree shapes.
#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ffgraph/extension.hpp"
#include "ffgraph/treeshape.hpp"

namespace ffgraph {

struct SuccessorMap {
    std::vector<std::uint32_t> succ;  // succ[x*q + y] = encoded image
    std::uint32_t size() const { return static_cast<std::uint32_t>(succ.size()); }
};

struct CycleCensus {
    std::map<std::uint64_t, std::uint64_t> counts;  // cycle length -> number of cycles
    bool operator==(const CycleCensus&) const = default;
    std::uint64_t total_cyclic() const {
        std::uint64_t t = 0;
        for (auto [len, cnt] : counts) t += len * cnt;
        return t;
    }
};

struct GraphReport {
    CycleCensus census;
    TreeShape zero_profile;  // hanging tree rooted at <0,0>, cycle self-loop removed
    // Distinct hanging-tree shapes over nonzero cyclic vertices, with how many
    // cyclic vertices carry each; sorted by canonical string.
    std::vector<std::pair<TreeShape, std::uint64_t>> nonzero_tree_classes;
    std::vector<std::uint64_t> component_sizes;  // sorted descending
};

inline constexpr std::uint64_t kDefaultGraphCap = 1ull << 26;  // nodes

// Fills succ via eval_map_coords. With audit=true a ~1% pseudo-random sample
// (seeded) is recomputed through eval_map_direct; disagreement throws.
SuccessorMap build_successors(const ExtCtx& E, const MapParams& mp, bool audit = false,
                              std::uint64_t seed = 1, std::uint64_t cap = kDefaultGraphCap);

// Number of nodes where eval_map_direct disagrees with the stored successor.
std::uint64_t dual_eval_mismatches(const ExtCtx& E, const MapParams& mp,
                                   const SuccessorMap& sm);

// Exact census via an iterative three-state walk (no deep recursion).
CycleCensus cycle_census(const SuccessorMap& sm);

// Canonical shape of the tree of non-periodic predecessors flowing into
// cyclic_node (the in-cycle predecessor edge excluded). Throws if the node is
// not on a cycle.
TreeShape hanging_tree(const SuccessorMap& sm, std::uint32_t cyclic_node);

GraphReport graph_report(const SuccessorMap& sm);

std::map<std::uint64_t, std::uint64_t> in_degree_histogram(const SuccessorMap& sm);

// Component id per node (ids assigned in discovery order of the walk).
std::vector<std::uint32_t> component_ids(const SuccessorMap& sm);

}  // namespace ffgraph
