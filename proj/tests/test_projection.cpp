#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "comem/errors.hpp"
#include "comem/graph.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

using namespace comem;
using namespace comem::testing;

namespace {

AffiliationDataset small_dataset(
    const std::vector<std::pair<std::string, std::vector<std::string>>> &membersByGroup) {
    std::vector<GroupRecord> groups;
    std::vector<MembershipRecord> memberships;
    for (const auto &[gid, users] : membersByGroup) {
        groups.push_back({gid, "Group " + gid, "", "X", Visibility::Public, {}});
        for (const auto &u : users) {
            memberships.push_back({u, gid});
        }
    }
    return AffiliationDataset(std::move(groups), std::move(memberships));
}

double edge_weight(const CoMembershipGraph &g, const std::string &a, const std::string &b) {
    const int i = g.indexOf(a);
    const int j = g.indexOf(b);
    REQUIRE(i >= 0);
    REQUIRE(j >= 0);
    for (const auto &[u, w] : g.neighbors(i)) {
        if (u == j) {
            return w;
        }
    }
    return 0.0;
}

} // namespace

TEST_CASE("project computes the normalised overlap weight") {
    const auto ds = small_dataset({{"gi", {"a", "b", "c"}}, {"gj", {"b", "c", "d"}}});
    const auto g = project(ds);
    CHECK(edge_weight(g, "gi", "gj") == 0.5); // 2 shared / 4 in the union
}

TEST_CASE("project gives weight 1 for identical member sets") {
    const auto ds = small_dataset({{"gi", {"a", "b"}}, {"gj", {"a", "b"}}});
    CHECK(edge_weight(project(ds), "gi", "gj") == 1.0);
}

TEST_CASE("groups without shared users stay unlinked") {
    const auto ds = small_dataset(
        {{"m1", {"u1", "u2"}}, {"m2", {"u2", "u3"}}, {"m3", {"u7", "u8"}}});
    const auto g = project(ds);
    CHECK(edge_weight(g, "m1", "m2") > 0.0);
    CHECK(g.neighbors(g.indexOf("m3")).empty());
    CHECK(g.nodeCount() == 3); // isolated nodes are kept
}

TEST_CASE("project matches the brute-force set oracle on random instances") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto ds = random_bipartite(seed, 20, 50);
        const auto g = project(ds);
        for (std::size_t i = 0; i < ds.groups().size(); ++i) {
            for (std::size_t j = i + 1; j < ds.groups().size(); ++j) {
                const auto &gi = ds.groups()[i].id;
                const auto &gj = ds.groups()[j].id;
                const std::set<std::string> mi(ds.membersOf(gi).begin(), ds.membersOf(gi).end());
                const std::set<std::string> mj(ds.membersOf(gj).begin(), ds.membersOf(gj).end());
                CHECK(edge_weight(g, gi, gj) == jaccard_oracle(mi, mj));
            }
        }
    }
}

TEST_CASE("all stored weights are in (0,1] and 1 only for equal member sets") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto ds = random_bipartite(seed, 15, 40);
        const auto g = project(ds);
        g.forEachEdge([&](int i, int j, double w) {
            CHECK(w > 0.0);
            CHECK(w <= 1.0);
            const auto &mi = ds.membersOf(g.node(i).id);
            const auto &mj = ds.membersOf(g.node(j).id);
            if (w == 1.0) {
                CHECK(mi == mj);
            } else {
                CHECK(mi != mj);
            }
        });
    }
}

TEST_CASE("min_weight floor drops edges at or below the floor") {
    const auto ds = small_dataset({{"gi", {"a", "b", "c"}}, {"gj", {"b", "c", "d"}},
                                   {"gk", {"c", "x", "y", "z"}}});
    const auto g = project(ds, 0.2);
    CHECK(edge_weight(g, "gi", "gj") == 0.5);
    CHECK(edge_weight(g, "gi", "gk") == 0.0); // 1/6 <= 0.2 dropped

    // the floor is strict: a weight exactly at the floor is dropped
    const auto ds2 = small_dataset({{"gi", {"a", "b"}}, {"gj", {"b", "c"}}});
    CHECK(edge_weight(project(ds2, 1.0 / 3.0), "gi", "gj") == 0.0);
}

TEST_CASE("project is invariant under group order and user duplication") {
    const auto base = small_dataset(
        {{"g1", {"a", "b", "c"}}, {"g2", {"b", "c"}}, {"g3", {"c", "d"}}});
    const auto g1 = project(base);

    // shuffled group order
    std::vector<GroupRecord> shuffled;
    shuffled.push_back({"g3", "Group g3", "", "X", Visibility::Public, {}});
    shuffled.push_back({"g1", "Group g1", "", "X", Visibility::Public, {}});
    shuffled.push_back({"g2", "Group g2", "", "X", Visibility::Public, {}});
    std::vector<MembershipRecord> memberships(base.memberships().begin(),
                                              base.memberships().end());
    std::reverse(memberships.begin(), memberships.end());
    const auto g2 = project(AffiliationDataset(std::move(shuffled), std::move(memberships)));
    CHECK(g1.edgeList().size() == g2.edgeList().size());
    g1.forEachEdge([&](int i, int j, double w) {
        CHECK(edge_weight(g2, g1.node(i).id, g1.node(j).id) == w);
    });

    // duplicating every user leaves each Jaccard ratio unchanged
    std::vector<MembershipRecord> doubled(base.memberships().begin(), base.memberships().end());
    for (const auto &m : base.memberships()) {
        doubled.push_back({m.userId + "_clone", m.groupId});
    }
    std::vector<GroupRecord> groupsCopy(base.groups().begin(), base.groups().end());
    const auto g3 = project(AffiliationDataset(std::move(groupsCopy), std::move(doubled)));
    g1.forEachEdge([&](int i, int j, double w) {
        CHECK(edge_weight(g3, g1.node(i).id, g1.node(j).id) == doctest::Approx(w).epsilon(1e-15));
    });
}

TEST_CASE("compute_stats on a triangle") {
    const auto g = graph_from_ids({"a", "b", "c"},
                                  {{"a", "b", 0.5}, {"b", "c", 0.5}, {"a", "c", 0.5}});
    const auto stats = compute_stats(g, {0.01});
    CHECK(stats.density == 1.0);
    CHECK(stats.weightQuantiles.at(0.01) == 0.0);
    CHECK(stats.componentCount == 1);
    CHECK(stats.largestComponentSize == 3);
}

TEST_CASE("compute_stats on two disjoint edges") {
    const auto g = graph_from_ids({"a", "b", "c", "d"}, {{"a", "b", 0.2}, {"c", "d", 0.9}});
    const auto stats = compute_stats(g, {0.5, 1.0});
    CHECK(stats.density == doctest::Approx(2.0 / 6.0));
    CHECK(stats.componentCount == 2);
    CHECK(stats.weightQuantiles.at(0.5) == 0.5);
    CHECK(stats.weightQuantiles.at(1.0) == 1.0);
}

TEST_CASE("compute_stats density matches a direct recount on random graphs") {
    for (std::uint64_t seed = 7; seed < 12; ++seed) {
        const auto g = random_weighted_graph(seed, 30, 0.3);
        const auto stats = compute_stats(g, {});
        std::int64_t m = 0;
        g.forEachEdge([&](int, int, double) { ++m; });
        CHECK(stats.edgeCount == m);
        CHECK(stats.density == doctest::Approx(static_cast<double>(m) / (30.0 * 29.0 / 2.0)));
    }
}

TEST_CASE("compute_stats conventions on degenerate graphs") {
    const auto lonely = graph_from_ids({"a"}, {});
    const auto stats = compute_stats(lonely, {0.1});
    CHECK(stats.density == 0.0);
    CHECK(stats.weightQuantiles.at(0.1) == 0.0);
    CHECK(stats.componentCount == 1);
}

TEST_CASE("induced_subgraph keeps listed nodes and interior edges") {
    const auto g = graph_from_ids({"a", "b", "c"},
                                  {{"a", "b", 0.3}, {"b", "c", 0.6}, {"a", "c", 0.9}});

    const auto full = induced_subgraph(g, {"a", "b", "c"});
    CHECK(full.nodeCount() == 3);
    CHECK(full.edgeCount() == 3);

    const auto single = induced_subgraph(g, {"b"});
    CHECK(single.nodeCount() == 1);
    CHECK(single.edgeCount() == 0);

    const auto pair = induced_subgraph(g, {"a", "c"});
    CHECK(pair.nodeCount() == 2);
    CHECK(pair.edgeCount() == 1);
    CHECK(edge_weight(pair, "a", "c") == 0.9);

    CHECK_THROWS_WITH_AS(induced_subgraph(g, {"a", "zz"}), doctest::Contains("zz"), DataError);
}

TEST_CASE("graph construction validates its invariants") {
    CHECK_THROWS_AS(graph_from_ids({"a", "b"}, {{"a", "a", 0.5}}), DataError);
    CHECK_THROWS_AS(graph_from_ids({"a", "b"}, {{"a", "b", 0.0}}), DataError);
    CHECK_THROWS_AS(graph_from_ids({"a", "b"}, {{"a", "b", -0.1}}), DataError);
    CHECK_THROWS_AS(graph_from_ids({"a", "b"}, {{"a", "b", 0.5}, {"b", "a", 0.5}}), DataError);
}
