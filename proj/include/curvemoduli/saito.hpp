#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cluster_tree.hpp"
#include "errors.hpp"

namespace curvemoduli {

// delta[k-1] is the flag of the exceptional component D_k: 1 when D_k is
// invariant for the generic vector fields tangent to the curve, 0 when it is
// dicritical (generically transverse). The admissible assignment of flags is
// unique and determines the local model of the foliation, hence everything
// this library computes.
using DeltaVector = std::vector<int>;
using IntVector = std::vector<std::int64_t>;

// Even/odd case split used by the valuation formulas.
template <class T>
T parity_bracket(std::int64_t n, const T& even_value, const T& odd_value)
{
    return n % 2 == 0 ? even_value : odd_value;
}

// Invariant components through center k: none at the origin, the parent's
// flag at an infinitely near point (a free point lies on one divisor).
inline DeltaVector small_delta_vector(const ClusterTree& tree, const DeltaVector& delta)
{
    if (static_cast<int>(delta.size()) != tree.size())
        throw invariant_error("delta vector has the wrong length");
    DeltaVector sd(delta.size(), 0);
    for (const Node& v : tree.nodes())
        if (v.parent != 0)
            sd[static_cast<std::size_t>(v.id) - 1] = delta[static_cast<std::size_t>(v.parent) - 1];
    return sd;
}

// Share of center k in the valuation ledger of a generic tangent vector
// field: roughly half of m - small_delta, rounded by parity, with the flag
// added back in the even case.
inline std::int64_t s_entry(std::int64_t m, std::int64_t small_delta, int delta)
{
    const std::int64_t w = m - small_delta;
    return parity_bracket<std::int64_t>(w, w / 2 + delta, (w + 1) / 2);
}

inline IntVector s_vector(const ClusterTree& tree, const DeltaVector& delta)
{
    const DeltaVector sd = small_delta_vector(tree, delta);
    IntVector s(delta.size(), 0);
    for (const Node& v : tree.nodes()) {
        const std::size_t i = static_cast<std::size_t>(v.id) - 1;
        s[i] = s_entry(v.m, sd[i], delta[i]);
    }
    return s;
}

// The proximity matrix applied to s: each center keeps its own share after
// passing the children theirs. e_vector(tree, delta) is the candidate
// multiplicity excess at every center for the given flags.
inline IntVector e_vector(const ClusterTree& tree, const IntVector& s)
{
    if (static_cast<int>(s.size()) != tree.size())
        throw invariant_error("s vector has the wrong length");
    IntVector e(s);
    for (const Node& v : tree.nodes())
        for (int c : v.children)
            e[static_cast<std::size_t>(v.id) - 1] -= s[static_cast<std::size_t>(c) - 1];
    return e;
}

inline IntVector e_vector(const ClusterTree& tree, const DeltaVector& delta)
{
    return e_vector(tree, s_vector(tree, delta));
}

struct Violation {
    int node = 0;
    std::string detail;

    bool operator==(const Violation&) const = default;
};

struct SaitoSolution {
    DeltaVector delta;
    DeltaVector small_delta;
    IntVector S_vec;
    IntVector E_vec;
    bool admissible = false;
    std::vector<Violation> violations;

    bool operator==(const SaitoSolution&) const = default;
};

// Compatibility conditions for a flag assignment with excess vector E:
//   * invariant component (Delta_k = 1): E_k >= n_k, one tangency for each
//     branch attached to D_k;
//   * dicritical component (Delta_k = 0): E_k >= 2 - (invariant neighbors),
//     where the neighbors of D_k are the components it meets, i.e. parent
//     and children in the tree. The bound may be negative, and deep in the
//     tree the excess may legitimately be negative with it.
inline SaitoSolution check_admissible(const ClusterTree& tree, const DeltaVector& delta,
                                      const IntVector& e)
{
    if (static_cast<int>(delta.size()) != tree.size() ||
        static_cast<int>(e.size()) != tree.size())
        throw invariant_error("delta or E vector has the wrong length");
    SaitoSolution sol;
    sol.delta = delta;
    sol.small_delta = small_delta_vector(tree, delta);
    sol.S_vec = s_vector(tree, delta);
    sol.E_vec = e;
    for (const Node& v : tree.nodes()) {
        const std::size_t i = static_cast<std::size_t>(v.id) - 1;
        const std::string eps = "eps_" + std::to_string(v.id) + " = " + std::to_string(e[i]);
        if (delta[i] == 1) {
            if (e[i] < v.n)
                sol.violations.push_back(
                    {v.id, eps + " < n_" + std::to_string(v.id) + " = " + std::to_string(v.n) +
                               " [invariant]"});
        } else {
            std::int64_t invariant_neighbors = 0;
            for (int u : neighbors(tree, v.id))
                invariant_neighbors += delta[static_cast<std::size_t>(u) - 1];
            const std::int64_t bound = 2 - invariant_neighbors;
            if (e[i] < bound)
                sol.violations.push_back({v.id, eps + " < 2 - " +
                                                    std::to_string(invariant_neighbors) + " = " +
                                                    std::to_string(bound) + " [dicritical]"});
        }
    }
    sol.admissible = sol.violations.empty();
    return sol;
}

// One line per node spelling out the binding condition, for reports.
inline std::vector<std::string> admissibility_checks(const ClusterTree& tree,
                                                     const SaitoSolution& sol)
{
    std::vector<std::string> lines;
    for (const Node& v : tree.nodes()) {
        const std::size_t i = static_cast<std::size_t>(v.id) - 1;
        std::string line = "node " + std::to_string(v.id) + ": ";
        std::int64_t bound = 0;
        if (sol.delta[i] == 1) {
            bound = v.n;
            line += "Delta=1: need eps >= n; eps_" + std::to_string(v.id) + " = " +
                    std::to_string(sol.E_vec[i]) + ", n_" + std::to_string(v.id) + " = " +
                    std::to_string(v.n);
        } else {
            std::int64_t invariant_neighbors = 0;
            for (int u : neighbors(tree, v.id))
                invariant_neighbors += sol.delta[static_cast<std::size_t>(u) - 1];
            bound = 2 - invariant_neighbors;
            line += "Delta=0: need eps >= 2 - invariant neighbors; eps_" +
                    std::to_string(v.id) + " = " + std::to_string(sol.E_vec[i]) + ", bound = " +
                    std::to_string(bound);
        }
        line += sol.E_vec[i] >= bound ? " [ok]" : " [violated]";
        lines.push_back(std::move(line));
    }
    return lines;
}

// Every flag assignment on up to `max_nodes` nodes, filtered by the
// compatibility conditions. Exhaustive, therefore exponential: serves as the
// reference implementation the fast solver is checked against.
inline std::vector<SaitoSolution> enumerate_admissible(const ClusterTree& tree,
                                                       int max_nodes = 20)
{
    const int n = tree.size();
    if (n > max_nodes)
        throw input_error("exhaustive search over " + std::to_string(n) +
                          " nodes exceeds the bound " + std::to_string(max_nodes));
    if (n > 62)
        throw input_error("exhaustive search is limited to 62 nodes");
    std::vector<SaitoSolution> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        DeltaVector delta(static_cast<std::size_t>(n), 0);
        for (int k = 0; k < n; ++k)
            delta[static_cast<std::size_t>(k)] = static_cast<int>((mask >> k) & 1);
        SaitoSolution sol = check_admissible(tree, delta, e_vector(tree, delta));
        if (sol.admissible)
            out.push_back(std::move(sol));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fast solver.
//
// The flag of a node interacts with the rest of the tree through two numbers
// only: the small delta it receives from its parent, and the flag it shows to
// its parent. So solve bottom up, once per possible small delta (the
// "context", 0 or 1; the root only ever sees 0). For each context evaluate
// both candidate flags:
//
//   flag 1: children solved under context 1, admissible iff eps >= n;
//   flag 0: children solved under context 0, admissible iff
//           eps >= 2 - context - (children's chosen flags under context 0),
//           the context term dropped at the root.
//
// Exactly one candidate passes at every node and context; if not, the tree is
// outside the domain of the theory or the implementation is broken, and we
// fail loudly. Walking down from the root (each child's context is the
// parent's chosen flag) assembles the unique admissible assignment in linear
// time.
// ---------------------------------------------------------------------------

struct CandidateEval {
    std::int64_t s = 0;      // share of this node under the candidate flag
    std::int64_t eps = 0;    // share minus the children's shares
    std::int64_t bound = 0;  // least eps the candidate needs
    bool passes = false;
};

struct ContextEntry {
    std::array<CandidateEval, 2> candidate;  // indexed by flag value
    int chosen = -1;
};

struct SolverTable {
    // context[c][k-1] describes node k under small delta c. The root is only
    // meaningful under context 0.
    std::array<std::vector<ContextEntry>, 2> context;
};

inline SolverTable solve_contexts(const ClusterTree& tree)
{
    SolverTable table;
    table.context[0].resize(static_cast<std::size_t>(tree.size()));
    table.context[1].resize(static_cast<std::size_t>(tree.size()));
    for (int k = tree.size(); k >= 1; --k) {
        const Node& v = tree.node(k);
        const std::size_t i = static_cast<std::size_t>(k) - 1;
        for (int ctx = 0; ctx <= (v.parent == 0 ? 0 : 1); ++ctx) {
            ContextEntry& entry = table.context[static_cast<std::size_t>(ctx)][i];
            for (int flag = 0; flag <= 1; ++flag) {
                CandidateEval& cand = entry.candidate[static_cast<std::size_t>(flag)];
                cand.s = s_entry(v.m, ctx, flag);
                cand.eps = cand.s;
                std::int64_t child_flags = 0;
                for (int c : v.children) {
                    const ContextEntry& ce =
                        table.context[static_cast<std::size_t>(flag)][static_cast<std::size_t>(c) - 1];
                    cand.eps -= ce.candidate[static_cast<std::size_t>(ce.chosen)].s;
                    child_flags += ce.chosen;
                }
                if (flag == 1) {
                    cand.bound = v.n;
                    cand.passes = cand.eps >= cand.bound;
                } else {
                    cand.bound = 2 - (v.parent == 0 ? 0 : ctx) - child_flags;
                    cand.passes = cand.eps >= cand.bound;
                }
            }
            const int passed = (entry.candidate[0].passes ? 1 : 0) +
                               (entry.candidate[1].passes ? 1 : 0);
            if (passed != 1)
                throw invariant_error("uniqueness violated at node " + std::to_string(k) +
                                      " (context " + std::to_string(ctx) + "): " +
                                      (passed == 0 ? "no" : "both") + " candidate flags admissible");
            entry.chosen = entry.candidate[1].passes ? 1 : 0;
        }
    }
    return table;
}

// The unique admissible solution, in time linear in the tree.
inline SaitoSolution find_admissible(const ClusterTree& tree)
{
    if (tree.empty()) {
        SaitoSolution sol;
        sol.admissible = true;
        return sol;
    }
    const SolverTable table = solve_contexts(tree);
    DeltaVector delta(static_cast<std::size_t>(tree.size()), 0);
    delta[0] = table.context[0][0].chosen;
    for (int k = 2; k <= tree.size(); ++k) {
        const int parent = tree.node(k).parent;
        const int ctx = delta[static_cast<std::size_t>(parent) - 1];
        delta[static_cast<std::size_t>(k) - 1] =
            table.context[static_cast<std::size_t>(ctx)][static_cast<std::size_t>(k) - 1].chosen;
    }
    SaitoSolution sol = check_admissible(tree, delta, e_vector(tree, delta));
    if (!sol.admissible)
        throw invariant_error("solver assembled an inadmissible solution");
    return sol;
}

// Fast solve plus, on trees small enough, agreement with the exhaustive
// reference: exactly one admissible assignment and it matches.
inline SaitoSolution find_admissible_checked(const ClusterTree& tree, int max_nodes = 20)
{
    SaitoSolution sol = find_admissible(tree);
    if (tree.size() <= max_nodes && tree.size() <= 62) {
        const std::vector<SaitoSolution> all = enumerate_admissible(tree, max_nodes);
        if (all.size() != 1)
            throw invariant_error("uniqueness violated: exhaustive search found " +
                                  std::to_string(all.size()) + " admissible solutions");
        if (!(all[0] == sol))
            throw invariant_error("exhaustive search disagrees with the fast solver");
    }
    return sol;
}

}  // namespace curvemoduli
