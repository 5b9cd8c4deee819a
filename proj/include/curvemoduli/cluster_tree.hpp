#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "branch.hpp"
#include "errors.hpp"

namespace curvemoduli {

// Largest number of branches we accept. Keeps every quantity downstream
// (multiplicities, sigma, totals) comfortably inside int64.
inline constexpr std::int64_t max_total_branches = 1000000;

// One center of the minimal embedded resolution. Blowing up center k creates
// the exceptional component D_k; the children are the centers lying on D_k.
//
//   m              branches of the curve passing through the center
//   n              branches attached to D_k once the resolution is finished,
//                  i.e. passing through the center but through no deeper one
//   divisor_count  exceptional components through the center: 0 for the
//                  origin, 1 for every infinitely near (free) point
struct Node {
    int id = 0;      // 1-based; parents precede children
    int parent = 0;  // 0 for the root
    std::vector<int> children;
    std::int64_t m = 0;
    std::int64_t n = 0;
    int divisor_count = 0;

    bool operator==(const Node&) const = default;
};

// The combinatorial tree of the resolution. Node ids are depth-first preorder
// (root 1, children in the order their subtrees were discovered), and every
// node satisfies m = n + sum of children's m.
//
// The empty tree is valid and stands for a smooth curve: a single branch
// needs no blow up at all.
class ClusterTree {
  public:
    ClusterTree() = default;

    explicit ClusterTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) { validate(); }

    int size() const { return static_cast<int>(nodes_.size()); }
    bool empty() const { return nodes_.empty(); }
    const std::vector<Node>& nodes() const { return nodes_; }

    const Node& node(int id) const
    {
        if (id < 1 || id > size())
            throw input_error("node id " + std::to_string(id) + " out of range");
        return nodes_[static_cast<std::size_t>(id) - 1];
    }

    // Branches of the whole curve; the root sees all of them.
    std::int64_t total_branches() const { return nodes_.empty() ? 0 : nodes_[0].m; }

    bool operator==(const ClusterTree&) const = default;

  private:
    void validate() const
    {
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const Node& v = nodes_[i];
            const std::string tag = "node " + std::to_string(v.id) + ": ";
            if (v.id != static_cast<int>(i) + 1)
                throw input_error("nodes must be numbered 1..N in storage order");
            if (v.id == 1) {
                if (v.parent != 0 || v.divisor_count != 0)
                    throw input_error(tag + "root must have no parent and no divisor through it");
            } else {
                if (v.parent < 1 || v.parent >= v.id)
                    throw input_error(tag + "parent must be an earlier node");
                if (v.divisor_count != 1)
                    throw input_error(tag + "non-root centers lie on exactly one divisor");
            }
            if (v.n < 0)
                throw input_error(tag + "negative branch count");
            std::int64_t sum = v.n;
            int previous = v.id;
            for (int c : v.children) {
                if (c <= previous || c > static_cast<int>(nodes_.size()))
                    throw input_error(tag + "children must be later nodes in increasing order");
                if (nodes_[static_cast<std::size_t>(c) - 1].parent != v.id)
                    throw input_error(tag + "child list disagrees with parent links");
                sum += nodes_[static_cast<std::size_t>(c) - 1].m;
                previous = c;
            }
            if (v.m != sum)
                throw input_error(tag + "m must equal n plus the children's m");
            if (v.m < 1)
                throw input_error(tag + "center without branches");
        }
        for (std::size_t i = 1; i < nodes_.size(); ++i) {
            const Node& p = nodes_[static_cast<std::size_t>(nodes_[i].parent) - 1];
            bool listed = false;
            for (int c : p.children)
                listed = listed || c == nodes_[i].id;
            if (!listed)
                throw input_error("node " + std::to_string(nodes_[i].id) +
                                  ": missing from parent's child list");
        }
        if (!nodes_.empty() && nodes_[0].m > max_total_branches)
            throw input_error("too many branches (limit " + std::to_string(max_total_branches) + ")");
    }

    std::vector<Node> nodes_;
};

// Dense integer matrix, used for the proximity matrix and its inverse.
struct IntMatrix {
    std::vector<std::vector<std::int64_t>> rows;

    static IntMatrix identity(int n)
    {
        IntMatrix m;
        m.rows.assign(static_cast<std::size_t>(n),
                      std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
        for (int i = 0; i < n; ++i)
            m.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
        return m;
    }

    bool operator==(const IntMatrix&) const = default;
};

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b)
{
    const std::size_t n = a.rows.size();
    IntMatrix out;
    out.rows.assign(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a.rows[i][k] == 0)
                continue;
            for (std::size_t j = 0; j < n; ++j)
                out.rows[i][j] += a.rows[i][k] * b.rows[k][j];
        }
    return out;
}

// Unipotent upper triangular: 1 on the diagonal, -1 at (parent, child).
inline IntMatrix proximity_matrix(const ClusterTree& tree)
{
    IntMatrix p = IntMatrix::identity(tree.size());
    for (const Node& v : tree.nodes())
        if (v.parent != 0)
            p.rows[static_cast<std::size_t>(v.parent) - 1][static_cast<std::size_t>(v.id) - 1] = -1;
    return p;
}

// Inverse of the proximity matrix: (i, j) = 1 iff i is j or an ancestor of j.
inline IntMatrix ancestor_matrix(const ClusterTree& tree)
{
    IntMatrix a = IntMatrix::identity(tree.size());
    for (const Node& v : tree.nodes())
        for (int i = v.parent; i != 0; i = tree.node(i).parent)
            a.rows[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(v.id) - 1] = 1;
    return a;
}

// Parent (if any) followed by the children, in increasing id order.
inline std::vector<int> neighbors(const ClusterTree& tree, int k)
{
    const Node& v = tree.node(k);
    std::vector<int> out;
    if (v.parent != 0)
        out.push_back(v.parent);
    out.insert(out.end(), v.children.begin(), v.children.end());
    return out;
}

namespace detail {

struct GroupKey {
    bool keyed_by_orientation;
    Orientation orientation;
    Rational coeff;

    bool operator<(const GroupKey& other) const
    {
        if (keyed_by_orientation && orientation != other.orientation)
            return orientation < other.orientation;
        return coeff < other.coeff;
    }
};

// Recursive grouping of branches by shared infinitely near points. A group
// entering depth p shares the first p-1 coefficients (and the chart, once
// p >= 2); it splits by the degree-p coefficient. Subgroups of one branch are
// the branches attached to this node's divisor, larger subgroups are the
// children: a point of the curve stays a blow-up center exactly while at
// least two branches pass through it.
inline int build_group(const std::vector<Branch>& branches, const std::vector<int>& members,
                       std::size_t depth, int parent, std::vector<Node>& nodes)
{
    const int id = static_cast<int>(nodes.size()) + 1;
    nodes.push_back(Node{id, parent, {}, static_cast<std::int64_t>(members.size()), 0,
                         parent == 0 ? 0 : 1});

    std::map<GroupKey, std::vector<int>> groups;
    std::vector<GroupKey> order;
    for (int b : members) {
        const Branch& branch = branches[static_cast<std::size_t>(b)];
        if (branch.coeffs.size() < depth)
            throw input_error(
                "branches " + std::to_string(members[0] + 1) + " and " + std::to_string(b + 1) +
                " are unseparated: jets agree through the shorter truncation degree");
        GroupKey key{depth == 1, branch.orientation, branch.coeffs[depth - 1]};
        auto [it, fresh] = groups.try_emplace(key);
        if (fresh)
            order.push_back(key);
        it->second.push_back(b);
    }

    std::int64_t attached = 0;
    for (const GroupKey& key : order) {
        const std::vector<int>& sub = groups[key];
        if (sub.size() == 1) {
            attached += 1;
        } else {
            // the recursion grows `nodes`: take the child id first, the
            // reference into `nodes` only after
            const int child = build_group(branches, sub, depth + 1, id, nodes);
            nodes[static_cast<std::size_t>(id) - 1].children.push_back(child);
        }
    }
    nodes[static_cast<std::size_t>(id) - 1].n = attached;
    return id;
}

}  // namespace detail

// Tree of the minimal resolution of a union of normalized branches. Fails if
// any two branches cannot be told apart within their truncation degrees.
inline ClusterTree build_tree(const std::vector<Branch>& branches)
{
    if (branches.empty())
        throw input_error("curve needs at least one branch");
    if (static_cast<std::int64_t>(branches.size()) > max_total_branches)
        throw input_error("too many branches (limit " + std::to_string(max_total_branches) + ")");
    if (branches.size() == 1)
        return ClusterTree{};
    std::vector<int> all(branches.size());
    for (std::size_t i = 0; i < branches.size(); ++i)
        all[i] = static_cast<int>(i);
    std::vector<Node> nodes;
    detail::build_group(branches, all, 1, 0, nodes);
    return ClusterTree(std::move(nodes));
}

// Nested description of a tree by attachment counts only: n for the node,
// then the children. Ids are assigned in depth-first preorder.
struct NestedCounts {
    std::int64_t n = 0;
    std::vector<NestedCounts> children;
};

namespace detail {

inline int counts_to_nodes(const NestedCounts& spec, int parent, std::vector<Node>& nodes)
{
    const int id = static_cast<int>(nodes.size()) + 1;
    nodes.push_back(Node{id, parent, {}, 0, spec.n, parent == 0 ? 0 : 1});
    std::int64_t m = spec.n;
    for (const NestedCounts& child : spec.children) {
        const int c = counts_to_nodes(child, id, nodes);
        nodes[static_cast<std::size_t>(id) - 1].children.push_back(c);
        m += nodes[static_cast<std::size_t>(c) - 1].m;
    }
    nodes[static_cast<std::size_t>(id) - 1].m = m;
    return id;
}

}  // namespace detail

// Builds a tree from attachment counts and checks it is realizable as a
// minimal resolution: every center must carry at least two branches,
// otherwise nothing forces the blow up.
inline ClusterTree tree_from_counts(const NestedCounts& spec)
{
    std::vector<Node> nodes;
    detail::counts_to_nodes(spec, 0, nodes);
    for (const Node& v : nodes) {
        if (v.n < 0)
            throw input_error("node " + std::to_string(v.id) + ": negative branch count");
        if (v.n > max_total_branches)
            throw input_error("node " + std::to_string(v.id) + ": too many branches (limit " +
                              std::to_string(max_total_branches) + ")");
        if (v.m < 2)
            throw input_error("node " + std::to_string(v.id) +
                              " has fewer than two branches through it; a minimal resolution "
                              "never blows up such a point");
    }
    return ClusterTree(std::move(nodes));
}

// Germ of the curve at center k together with the divisor branch through it:
// the subtree rooted at k, re-rooted and renumbered. At every infinitely near
// center the previous exceptional component acts as one extra smooth branch;
// it is transverse to the curve there, so it adds one branch through the new
// root and detaches after a single blow up. At the origin (k = 1) nothing is
// added and the local curve is the whole tree.
inline ClusterTree local_curve(const ClusterTree& tree, int k)
{
    const Node& top = tree.node(k);

    std::vector<int> subtree;
    std::vector<int> stack{k};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        subtree.push_back(v);
        const auto& children = tree.node(v).children;
        for (auto it = children.rbegin(); it != children.rend(); ++it)
            stack.push_back(*it);
    }

    std::vector<int> new_id(static_cast<std::size_t>(tree.size()) + 1, 0);
    for (std::size_t i = 0; i < subtree.size(); ++i)
        new_id[static_cast<std::size_t>(subtree[i])] = static_cast<int>(i) + 1;

    std::vector<Node> nodes;
    nodes.reserve(subtree.size());
    for (int old : subtree) {
        const Node& v = tree.node(old);
        Node w;
        w.id = new_id[static_cast<std::size_t>(old)];
        w.parent = old == k ? 0 : new_id[static_cast<std::size_t>(v.parent)];
        for (int c : v.children)
            w.children.push_back(new_id[static_cast<std::size_t>(c)]);
        w.m = v.m;
        w.n = v.n;
        w.divisor_count = old == k ? 0 : 1;
        if (old == k) {
            w.m += top.divisor_count;
            w.n += top.divisor_count;
        }
        nodes.push_back(std::move(w));
    }
    return ClusterTree(std::move(nodes));
}

// Uniform pseudo-random tree for property tests. Reduction of the raw engine
// output is done by hand so a seed produces the same tree on every platform;
// the standard distributions are implementation defined.
inline ClusterTree random_tree(std::uint64_t seed, int max_nodes)
{
    if (max_nodes < 1)
        throw input_error("random_tree: max_nodes must be at least 1");
    std::mt19937_64 rng(seed);
    auto pick = [&rng](std::uint64_t bound) { return rng() % bound; };

    const int total = 1 + static_cast<int>(pick(static_cast<std::uint64_t>(max_nodes)));
    std::vector<std::vector<int>> kids(static_cast<std::size_t>(total) + 1);
    for (int v = 2; v <= total; ++v)
        kids[1 + pick(static_cast<std::uint64_t>(v) - 1)].push_back(v);

    // renumber in preorder
    std::vector<int> order;
    std::vector<int> stack{1};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        order.push_back(v);
        const auto& ch = kids[static_cast<std::size_t>(v)];
        for (auto it = ch.rbegin(); it != ch.rend(); ++it)
            stack.push_back(*it);
    }
    std::vector<int> new_id(static_cast<std::size_t>(total) + 1, 0);
    for (std::size_t i = 0; i < order.size(); ++i)
        new_id[static_cast<std::size_t>(order[i])] = static_cast<int>(i) + 1;

    std::vector<Node> nodes(static_cast<std::size_t>(total));
    for (std::size_t i = 0; i < order.size(); ++i) {
        const int old = order[i];
        Node& v = nodes[i];
        v.id = static_cast<int>(i) + 1;
        v.divisor_count = old == 1 ? 0 : 1;
        for (int c : kids[static_cast<std::size_t>(old)])
            v.children.push_back(new_id[static_cast<std::size_t>(c)]);
    }
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (int c : nodes[i].children)
            nodes[static_cast<std::size_t>(c) - 1].parent = static_cast<int>(i) + 1;

    // leaves need n >= 2 to be genuine centers; interior nodes may have none
    for (Node& v : nodes)
        v.n = v.children.empty() ? 2 + static_cast<std::int64_t>(pick(4))
                                 : static_cast<std::int64_t>(pick(4));
    for (std::size_t i = nodes.size(); i-- > 0;) {
        nodes[i].m = nodes[i].n;
        for (int c : nodes[i].children)
            nodes[i].m += nodes[static_cast<std::size_t>(c) - 1].m;
    }
    return ClusterTree(std::move(nodes));
}

// The same curve with one generic smooth branch adjoined: it passes through
// the origin in a fresh direction, so only the root counts change.
inline ClusterTree with_generic_branch(const ClusterTree& tree)
{
    if (tree.empty())
        throw input_error("with_generic_branch: tree is empty");
    std::vector<Node> nodes = tree.nodes();
    nodes[0].m += 1;
    nodes[0].n += 1;
    return ClusterTree(std::move(nodes));
}

}  // namespace curvemoduli
