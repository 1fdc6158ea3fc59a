// Canonical forms for rooted trees: AHU-style encoding (children encodings
// sorted lexicographically inside brackets), plus height and per-level vertex
// counts. Equal canonical strings iff the rooted trees are isomorphic.
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ffgraph {

struct TreeShape {
    std::string canonical;
    std::uint32_t height = 0;
    std::vector<std::uint64_t> level_sizes;  // level 0 = root

    bool operator==(const TreeShape&) const = default;
    std::uint64_t total_size() const {
        std::uint64_t t = 0;
        for (auto v : level_sizes) t += v;
        return t;
    }
};

// Generic extraction: children_of(v) must yield a container of child ids.
// Iterative preorder walk; parents precede children, so the reverse sweep
// encodes bottom-up without recursion.
template <class ChildrenFn>
TreeShape shape_from_tree(std::uint32_t root, ChildrenFn&& children_of) {
    std::vector<std::uint32_t> order;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> work{{root, 0}};
    std::vector<std::uint64_t> levels;
    while (!work.empty()) {
        auto [v, d] = work.back();
        work.pop_back();
        order.push_back(v);
        if (levels.size() <= d) levels.resize(d + 1, 0);
        ++levels[d];
        for (auto c : children_of(v)) work.emplace_back(static_cast<std::uint32_t>(c), d + 1);
    }
    // Node id -> preorder position, for child encoding lookups.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pos(order.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) pos[i] = {order[i], i};
    std::sort(pos.begin(), pos.end());
    auto pos_of = [&](std::uint32_t v) {
        return std::lower_bound(pos.begin(), pos.end(), std::make_pair(v, std::uint32_t{0}))
            ->second;
    };
    std::vector<std::string> enc(order.size());
    for (std::size_t i = order.size(); i-- > 0;) {
        std::vector<std::string> kids;
        for (auto c : children_of(order[i]))
            kids.push_back(std::move(enc[pos_of(static_cast<std::uint32_t>(c))]));
        std::sort(kids.begin(), kids.end());
        std::string s = "(";
        for (auto& k : kids) s += k;
        s += ")";
        enc[i] = std::move(s);
    }
    TreeShape shape;
    shape.canonical = std::move(enc[0]);
    shape.level_sizes = std::move(levels);
    shape.height = static_cast<std::uint32_t>(shape.level_sizes.size() - 1);
    return shape;
}

// Incremental construction helper for predicted shapes.
class TreeBuilder {
  public:
    TreeBuilder() { kids_.emplace_back(); }  // node 0 = root
    std::uint32_t root() const { return 0; }
    std::uint32_t attach(std::uint32_t parent) {
        std::uint32_t id = static_cast<std::uint32_t>(kids_.size());
        kids_.emplace_back();
        kids_[parent].push_back(id);
        return id;
    }
    const std::vector<std::uint32_t>& children(std::uint32_t v) const { return kids_[v]; }
    TreeShape finalize() const {
        return shape_from_tree(0, [this](std::uint32_t v) -> const std::vector<std::uint32_t>& {
            return kids_[v];
        });
    }

  private:
    std::vector<std::vector<std::uint32_t>> kids_;
};

}  // namespace ffgraph
