#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <limits>
#include <random>
#include <vector>

#include <curvemoduli/cluster_tree.hpp>

using namespace curvemoduli;

namespace {

NestedCounts counts(std::int64_t n, std::vector<NestedCounts> children = {})
{
    return NestedCounts{n, std::move(children)};
}

ClusterTree chain(const std::vector<std::int64_t>& ns)
{
    NestedCounts spec{ns.back(), {}};
    for (std::size_t i = ns.size() - 1; i-- > 0;)
        spec = NestedCounts{ns[i], {spec}};
    return tree_from_counts(spec);
}

Branch branch_of(Orientation o, std::initializer_list<const char*> coeffs)
{
    Branch b;
    b.orientation = o;
    for (const char* c : coeffs)
        b.coeffs.push_back(parse_rational(c));
    return b;
}

Rational random_coeff(std::mt19937_64& rng)
{
    static const Rational pool[] = {Rational(0), Rational(1), Rational(-1), Rational(1, 2)};
    return pool[rng() % std::size(pool)];
}

// random branch sets that keep regrouping: tiny coefficient pool, fixed jet
// length so no pair ends up unseparated by accident unless identical
std::vector<Branch> random_branch_set(std::mt19937_64& rng, std::size_t count,
                                      std::size_t degree)
{
    std::vector<Branch> out;
    for (std::size_t i = 0; i < count; ++i) {
        Branch b;
        b.orientation = rng() % 4 == 0 ? Orientation::x_of_y : Orientation::y_of_x;
        b.coeffs.push_back(b.orientation == Orientation::x_of_y ? Rational(0)
                                                                : random_coeff(rng));
        for (std::size_t d = 1; d < degree; ++d)
            b.coeffs.push_back(random_coeff(rng));
        out.push_back(std::move(b));
    }
    return out;
}

bool any_unseparated(const std::vector<Branch>& branches)
{
    for (std::size_t i = 0; i < branches.size(); ++i)
        for (std::size_t j = i + 1; j < branches.size(); ++j)
            if (!contact_order(branches[i], branches[j]).separated)
                return true;
    return false;
}

// Independent tree construction from the pairwise contact matrix alone: the
// node at depth l groups branches related by "contact >= l" (the relation is
// transitive because contact is an ultrametric), and only groups with at
// least two members are blow-up centers. Classes keep the order of their
// first member, matching the builder's convention.
int oracle_group(const std::vector<std::vector<std::int64_t>>& contact,
                 const std::vector<int>& members, std::int64_t level, int parent,
                 std::vector<Node>& nodes)
{
    const int id = static_cast<int>(nodes.size()) + 1;
    nodes.push_back(Node{id, parent, {}, static_cast<std::int64_t>(members.size()), 0,
                         parent == 0 ? 0 : 1});
    std::vector<std::vector<int>> classes;
    for (int b : members) {
        bool placed = false;
        for (auto& cls : classes)
            if (!placed && contact[static_cast<std::size_t>(cls.front())]
                                  [static_cast<std::size_t>(b)] >= level) {
                cls.push_back(b);
                placed = true;
            }
        if (!placed)
            classes.push_back({b});
    }
    std::int64_t attached = 0;
    for (const auto& cls : classes) {
        if (cls.size() == 1) {
            attached += 1;
        } else {
            const int child = oracle_group(contact, cls, level + 1, id, nodes);
            nodes[static_cast<std::size_t>(id) - 1].children.push_back(child);
        }
    }
    nodes[static_cast<std::size_t>(id) - 1].n = attached;
    return id;
}

ClusterTree oracle_tree(const std::vector<Branch>& branches)
{
    const std::size_t n = branches.size();
    std::vector<std::vector<std::int64_t>> contact(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            contact[i][j] = i == j ? std::numeric_limits<std::int64_t>::max()
                                   : contact_order(branches[i], branches[j]).order;
    std::vector<int> all;
    for (std::size_t i = 0; i < n; ++i)
        all.push_back(static_cast<int>(i));
    std::vector<Node> nodes;
    oracle_group(contact, all, 2, 0, nodes);
    return ClusterTree(nodes);
}

}  // namespace

TEST_CASE("tree_from_counts builds the chain with consistent multiplicities")
{
    const ClusterTree t = chain({4, 2, 4});
    REQUIRE(t.size() == 3);
    CHECK(t.node(1).m == 10);
    CHECK(t.node(2).m == 6);
    CHECK(t.node(3).m == 4);
    CHECK(t.node(1).parent == 0);
    CHECK(t.node(2).parent == 1);
    CHECK(t.node(3).parent == 2);
    CHECK(t.node(1).children == std::vector<int>{2});
    CHECK(t.node(1).divisor_count == 0);
    CHECK(t.node(3).divisor_count == 1);
    CHECK(t.total_branches() == 10);
}

TEST_CASE("tree_from_counts rejects non-minimal and invalid trees")
{
    CHECK_THROWS_AS(tree_from_counts(counts(1)), input_error);
    CHECK_THROWS_AS(tree_from_counts(counts(0)), input_error);
    CHECK_THROWS_AS(tree_from_counts(counts(0, {counts(1)})), input_error);
    CHECK_THROWS_AS(tree_from_counts(counts(-2)), input_error);
    CHECK_THROWS_AS(tree_from_counts(counts(2000000)), input_error);
    CHECK_NOTHROW(tree_from_counts(counts(2)));
    CHECK_NOTHROW(tree_from_counts(counts(0, {counts(2), counts(2)})));
}

TEST_CASE("ClusterTree validation rejects malformed node lists")
{
    // ids must be 1..N in order
    CHECK_THROWS_AS(ClusterTree({Node{2, 0, {}, 2, 2, 0}}), input_error);
    // the root carries no divisor
    CHECK_THROWS_AS(ClusterTree({Node{1, 0, {}, 2, 2, 1}}), input_error);
    // parent must precede the child
    CHECK_THROWS_AS(ClusterTree({Node{1, 2, {}, 2, 2, 0}}), input_error);
    // child lists must match parent links
    CHECK_THROWS_AS(ClusterTree({Node{1, 0, {}, 4, 2, 0}, Node{2, 1, {}, 2, 2, 1}}),
                    input_error);
    // m must be n plus the children's m
    CHECK_THROWS_AS(ClusterTree({Node{1, 0, {2}, 5, 2, 0}, Node{2, 1, {}, 2, 2, 1}}),
                    input_error);
    // at least one branch everywhere
    CHECK_THROWS_AS(ClusterTree({Node{1, 0, {}, 0, 0, 0}}), input_error);
    CHECK_NOTHROW(ClusterTree({Node{1, 0, {2}, 4, 2, 0}, Node{2, 1, {}, 2, 2, 1}}));
    // a solver-level tree may carry a single branch even though curve input
    // paths reject it
    CHECK_NOTHROW(ClusterTree({Node{1, 0, {}, 1, 1, 0}}));
}

TEST_CASE("build_tree on a single branch is empty")
{
    const ClusterTree t = build_tree({branch_of(Orientation::y_of_x, {"1", "2"})});
    CHECK(t.empty());
    CHECK(t.size() == 0);
    CHECK(t.total_branches() == 0);
}

TEST_CASE("build_tree refuses empty input and unseparated branches")
{
    CHECK_THROWS_AS(build_tree({}), input_error);
    const Branch a = branch_of(Orientation::y_of_x, {"0", "1", "3"});
    const Branch b = branch_of(Orientation::y_of_x, {"0", "1", "3", "5"});
    CHECK_THROWS_WITH(build_tree({a, b}), Catch::Matchers::ContainsSubstring("unseparated"));
    CHECK_THROWS_AS(build_tree({a, a}), input_error);
}

TEST_CASE("two branches with contact k give a chain of k nodes")
{
    // the shared points are the origin plus k-1 infinitely near ones, and
    // each carries both branches, so each is a center
    for (std::int64_t k = 1; k <= 5; ++k) {
        // y = 0 against y = x^k, jets exactly long enough to separate
        Branch axis, power;
        axis.orientation = power.orientation = Orientation::y_of_x;
        for (std::int64_t d = 0; d < k; ++d) {
            axis.coeffs.push_back(Rational(0));
            power.coeffs.push_back(d == k - 1 ? Rational(1) : Rational(0));
        }
        REQUIRE(contact_order(axis, power) == ContactOrder::at(k));
        const ClusterTree t = build_tree({axis, power});
        REQUIRE(t.size() == k);
        for (int id = 1; id <= t.size(); ++id) {
            CHECK(t.node(id).m == 2);
            CHECK(t.node(id).n == (id == t.size() ? 2 : 0));
        }
    }
}

TEST_CASE("build_tree matches the contact-matrix oracle")
{
    std::mt19937_64 rng(5150);
    int checked = 0;
    while (checked < 150) {
        const std::size_t count = 2 + rng() % 5;
        const std::vector<Branch> raw = random_branch_set(rng, count, 4);
        std::vector<Branch> branches;
        for (const Branch& b : raw)
            branches.push_back(normalize_branch(b));
        if (any_unseparated(branches))
            continue;
        ++checked;
        CHECK(build_tree(branches) == oracle_tree(branches));
    }
}

TEST_CASE("proximity and ancestor matrices are inverse to each other")
{
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const ClusterTree t = random_tree(seed, 12);
        const IntMatrix p = proximity_matrix(t);
        const IntMatrix a = ancestor_matrix(t);
        CHECK(multiply(p, a) == IntMatrix::identity(t.size()));
        CHECK(multiply(a, p) == IntMatrix::identity(t.size()));
    }
}

TEST_CASE("proximity matrix of the chain")
{
    const IntMatrix p = proximity_matrix(chain({4, 2, 4}));
    const std::vector<std::vector<std::int64_t>> expected = {
        {1, -1, 0}, {0, 1, -1}, {0, 0, 1}};
    CHECK(p.rows == expected);
}

TEST_CASE("neighbors lists parent then children")
{
    const ClusterTree t = chain({4, 2, 4});
    CHECK(neighbors(t, 1) == std::vector<int>{2});
    CHECK(neighbors(t, 2) == std::vector<int>{1, 3});
    CHECK(neighbors(t, 3) == std::vector<int>{2});
    CHECK_THROWS_AS(neighbors(t, 4), input_error);
}

TEST_CASE("local_curve at the root is the whole tree")
{
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const ClusterTree t = random_tree(seed, 10);
        CHECK(local_curve(t, 1) == t);
    }
}

TEST_CASE("local_curve adjoins the divisor branch at deeper centers")
{
    const ClusterTree t = chain({4, 2, 4});

    const ClusterTree at2 = local_curve(t, 2);
    REQUIRE(at2.size() == 2);
    CHECK(at2.node(1).m == 7);
    CHECK(at2.node(1).n == 3);
    CHECK(at2.node(2).m == 4);
    CHECK(at2.node(2).n == 4);

    const ClusterTree at3 = local_curve(t, 3);
    REQUIRE(at3.size() == 1);
    CHECK(at3.node(1).m == 5);
    CHECK(at3.node(1).n == 5);
}

TEST_CASE("local_curve stays valid on random trees")
{
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
        const ClusterTree t = random_tree(seed, 12);
        for (int k = 1; k <= t.size(); ++k) {
            const ClusterTree loc = local_curve(t, k);  // constructor validates
            CHECK(loc.node(1).m == t.node(k).m + t.node(k).divisor_count);
            CHECK(loc.size() >= 1);
        }
    }
}

TEST_CASE("random_tree is deterministic in the seed")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
        CHECK(random_tree(seed, 12) == random_tree(seed, 12));
    bool all_equal = true;
    for (std::uint64_t seed = 1; seed < 20; ++seed)
        all_equal = all_equal && random_tree(seed, 12) == random_tree(seed + 1, 12);
    CHECK_FALSE(all_equal);
    CHECK_THROWS_AS(random_tree(1, 0), input_error);
}

TEST_CASE("random_tree respects the size bound")
{
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const ClusterTree t = random_tree(seed, 7);
        CHECK(t.size() >= 1);
        CHECK(t.size() <= 7);
    }
}

TEST_CASE("with_generic_branch bumps only the root")
{
    const ClusterTree t = chain({4, 2, 4});
    const ClusterTree t2 = with_generic_branch(t);
    CHECK(t2.node(1).m == 11);
    CHECK(t2.node(1).n == 5);
    CHECK(t2.node(2) == t.node(2));
    CHECK(t2.node(3) == t.node(3));
    CHECK_THROWS_AS(with_generic_branch(ClusterTree{}), input_error);
}

TEST_CASE("build_tree is invariant under branch permutations up to relabeling")
{
    // permuting the input can only permute sibling subtrees; compare through
    // a canonical form that sorts children
    struct Canon {
        static std::vector<std::int64_t> key(const ClusterTree& t, int id)
        {
            std::vector<std::vector<std::int64_t>> child_keys;
            for (int c : t.node(id).children)
                child_keys.push_back(key(t, c));
            std::sort(child_keys.begin(), child_keys.end());
            std::vector<std::int64_t> flat = {t.node(id).m, t.node(id).n,
                                              static_cast<std::int64_t>(child_keys.size())};
            for (const auto& k : child_keys) {
                flat.push_back(static_cast<std::int64_t>(k.size()));
                flat.insert(flat.end(), k.begin(), k.end());
            }
            return flat;
        }
    };
    std::mt19937_64 rng(31337);
    int checked = 0;
    while (checked < 60) {
        const std::size_t count = 2 + rng() % 5;
        std::vector<Branch> branches;
        for (const Branch& b : random_branch_set(rng, count, 4))
            branches.push_back(normalize_branch(b));
        if (any_unseparated(branches))
            continue;
        ++checked;
        const ClusterTree base = build_tree(branches);
        std::vector<Branch> shuffled = branches;
        for (std::size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[rng() % i]);
        const ClusterTree permuted = build_tree(shuffled);
        CHECK(Canon::key(base, 1) == Canon::key(permuted, 1));
    }
}
