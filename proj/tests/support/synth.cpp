#include "support/synth.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <random>
#include <set>
#include <unordered_map>

#include "comem/io.hpp"

namespace comem::testing {

namespace {

std::string padded(const std::string &prefix, int value, int width) {
    std::string digits = std::to_string(value);
    while (static_cast<int>(digits.size()) < width) {
        digits.insert(digits.begin(), '0');
    }
    return prefix + digits;
}

double uniform_weight(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> dist(0.05, 1.0);
    return dist(rng);
}

} // namespace

CoMembershipGraph graph_from_ids(
    const std::vector<std::string> &ids,
    const std::vector<std::tuple<std::string, std::string, double>> &edges) {
    std::vector<NodeInfo> infos;
    std::unordered_map<std::string, int> index;
    for (const auto &id : ids) {
        index[id] = static_cast<int>(infos.size());
        infos.push_back({id, "Node " + id, "", 0});
    }
    std::vector<Edge> out;
    for (const auto &[s, t, w] : edges) {
        out.push_back({index.at(s), index.at(t), w});
    }
    return CoMembershipGraph(std::move(infos), out);
}

AffiliationDataset random_bipartite(std::uint64_t seed, int maxGroups, int maxUsers) {
    std::mt19937_64 rng(seed);
    const int groupCount = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(maxGroups - 1));
    const int userCount = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(maxUsers));

    std::vector<GroupRecord> groups;
    for (int g = 0; g < groupCount; ++g) {
        GroupRecord rec;
        rec.id = padded("g", g, 3);
        rec.name = "Group " + std::to_string(g);
        rec.city = "Testville";
        groups.push_back(std::move(rec));
    }
    std::vector<MembershipRecord> memberships;
    std::uniform_int_distribution<int> degree(0, std::min(groupCount, 8));
    for (int u = 0; u < userCount; ++u) {
        const int joins = degree(rng);
        std::set<int> chosen;
        while (static_cast<int>(chosen.size()) < joins) {
            chosen.insert(static_cast<int>(rng() % static_cast<std::uint64_t>(groupCount)));
        }
        for (int g : chosen) {
            memberships.push_back({padded("u", u, 4), padded("g", g, 3)});
        }
    }
    return AffiliationDataset(std::move(groups), std::move(memberships));
}

CoMembershipGraph random_weighted_graph(std::uint64_t seed, int nodes, double edgeProb,
                                        bool connected) {
    std::mt19937_64 rng(seed);
    std::vector<NodeInfo> infos;
    for (int i = 0; i < nodes; ++i) {
        infos.push_back({padded("n", i, 3), "Node " + std::to_string(i), "", 0});
    }
    std::set<std::pair<int, int>> present;
    std::vector<Edge> edges;
    if (connected) {
        for (int i = 1; i < nodes; ++i) {
            const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i));
            present.insert({j, i});
            edges.push_back({j, i, uniform_weight(rng)});
        }
    }
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int i = 0; i < nodes; ++i) {
        for (int j = i + 1; j < nodes; ++j) {
            if (present.count({i, j})) {
                continue;
            }
            if (coin(rng) < edgeProb) {
                edges.push_back({i, j, uniform_weight(rng)});
            }
        }
    }
    return CoMembershipGraph(std::move(infos), edges);
}

CoMembershipGraph two_clique_graph(int cliqueSize, double internalWeight, double bridgeWeight) {
    std::vector<NodeInfo> infos;
    for (int i = 0; i < cliqueSize; ++i) {
        infos.push_back({padded("a", i, 2), "A " + std::to_string(i), "", 0});
    }
    for (int i = 0; i < cliqueSize; ++i) {
        infos.push_back({padded("b", i, 2), "B " + std::to_string(i), "", 0});
    }
    std::vector<Edge> edges;
    for (int i = 0; i < cliqueSize; ++i) {
        for (int j = i + 1; j < cliqueSize; ++j) {
            edges.push_back({i, j, internalWeight});
            edges.push_back({cliqueSize + i, cliqueSize + j, internalWeight});
        }
    }
    edges.push_back({cliqueSize - 1, cliqueSize, bridgeWeight});
    return CoMembershipGraph(std::move(infos), edges);
}

Cover two_clique_truth(const CoMembershipGraph &g, int cliqueSize) {
    Cover truth;
    for (const auto &node : g.nodes()) {
        truth.universe.push_back(node.id);
    }
    Community a;
    a.id = 1;
    Community b;
    b.id = 2;
    for (int i = 0; i < cliqueSize; ++i) {
        a.nodes.push_back(padded("a", i, 2));
        b.nodes.push_back(padded("b", i, 2));
    }
    truth.communities = {a, b};
    return truth;
}

CoMembershipGraph overlap_clique_graph(std::uint64_t seed) {
    // Clique A: a0..a5 + s0, s1; clique B: b0..b5 + s0, s1. Background: 60
    // nodes in a sparse weak random graph, disconnected from the cliques.
    std::mt19937_64 rng(seed);
    std::vector<NodeInfo> infos;
    std::vector<std::string> aIds;
    std::vector<std::string> bIds;
    for (int i = 0; i < 6; ++i) {
        aIds.push_back(padded("a", i, 2));
        infos.push_back({aIds.back(), "", "", 0});
    }
    for (int i = 0; i < 6; ++i) {
        bIds.push_back(padded("b", i, 2));
        infos.push_back({bIds.back(), "", "", 0});
    }
    aIds.push_back("s0");
    aIds.push_back("s1");
    bIds.push_back("s0");
    bIds.push_back("s1");
    infos.push_back({"s0", "", "", 0});
    infos.push_back({"s1", "", "", 0});

    const int backgroundStart = static_cast<int>(infos.size());
    const int backgroundCount = 60;
    for (int i = 0; i < backgroundCount; ++i) {
        infos.push_back({padded("z", i, 2), "", "", 0});
    }

    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < infos.size(); ++i) {
        index[infos[i].id] = static_cast<int>(i);
    }
    std::vector<Edge> edges;
    std::set<std::pair<int, int>> present; // (s0, s1) sits in both cliques; add each pair once
    auto addClique = [&](const std::vector<std::string> &ids) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) {
                const int a = std::min(index[ids[i]], index[ids[j]]);
                const int b = std::max(index[ids[i]], index[ids[j]]);
                if (present.insert({a, b}).second) {
                    edges.push_back({a, b, 1.0});
                }
            }
        }
    };
    addClique(aIds);
    addClique(bIds);

    std::uniform_real_distribution<double> weak(0.02, 0.08);
    auto addBackgroundEdge = [&](int i, int j) {
        if (i == j) {
            return;
        }
        const int a = backgroundStart + std::min(i, j);
        const int b = backgroundStart + std::max(i, j);
        if (present.insert({a, b}).second) {
            edges.push_back({a, b, weak(rng)});
        }
    };
    for (int i = 0; i < backgroundCount; ++i) {
        // ring plus a few chords keeps the background connected and its
        // total strength meaningful
        addBackgroundEdge(i, (i + 1) % backgroundCount);
        if (i % 3 == 0) {
            addBackgroundEdge(i, static_cast<int>(rng() %
                                                  static_cast<std::uint64_t>(backgroundCount)));
        }
    }
    return CoMembershipGraph(std::move(infos), edges);
}

CoMembershipGraph noise_graph(std::uint64_t seed, int nodes, double edgeProb) {
    std::mt19937_64 rng(seed);
    std::vector<NodeInfo> infos;
    for (int i = 0; i < nodes; ++i) {
        infos.push_back({padded("n", i, 3), "", "", 0});
    }
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> weight(0.01, 0.05);
    std::vector<Edge> edges;
    for (int i = 0; i < nodes; ++i) {
        for (int j = i + 1; j < nodes; ++j) {
            if (coin(rng) < edgeProb) {
                edges.push_back({i, j, weight(rng)});
            }
        }
    }
    return CoMembershipGraph(std::move(infos), edges);
}

CoMembershipGraph planted_blocks_graph(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int blockCount = 3;
    const int blockSize = 10;
    const int n = blockCount * blockSize;
    std::vector<NodeInfo> infos;
    for (int i = 0; i < n; ++i) {
        infos.push_back({padded("n", i, 3), "", "", 0});
    }
    std::uniform_real_distribution<double> strong(0.4, 0.9);
    std::uniform_real_distribution<double> weak(0.005, 0.02);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const bool sameBlock = i / blockSize == j / blockSize;
            if (sameBlock) {
                edges.push_back({i, j, strong(rng)});
            } else if (coin(rng) < 0.15) {
                edges.push_back({i, j, weak(rng)});
            }
        }
    }
    return CoMembershipGraph(std::move(infos), edges);
}

CityFixtureInfo write_city_fixture(const std::string &dir, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CityFixtureInfo info;
    info.city = "Springfield";

    const int keptCount = 1500;
    const std::vector<std::string> themeWords = {
        "code",     "data",    "cloud",   "web",     "startup", "market",  "yoga",
        "wellness", "hiking",  "trail",   "music",   "guitar",  "dance",   "salsa",
        "language", "spanish", "photo",   "camera",  "film",    "writing", "fiction",
        "cycling",  "running", "football", "chess",  "crafts",  "cooking", "wine",
    };

    std::vector<GroupRecord> groups;
    for (int i = 0; i < keptCount; ++i) {
        GroupRecord g;
        g.id = padded("g", i, 4);
        const std::string &word = themeWords[static_cast<std::size_t>(i) % themeWords.size()];
        g.name = "Springfield " + word + " circle " + std::to_string(i);
        g.description = "A " + word + " community meeting weekly to practice " + word +
                        " together and share " +
                        themeWords[static_cast<std::size_t>(rng() % themeWords.size())] +
                        " sessions with friends.";
        g.city = info.city;
        groups.push_back(std::move(g));
    }
    // A handful of groups the canonical filters must drop.
    for (int i = 0; i < 20; ++i) {
        GroupRecord g;
        g.id = padded("x", i, 3);
        g.name = "Shelbyville circle " + std::to_string(i);
        g.description = "Across the river.";
        g.city = "Shelbyville";
        groups.push_back(std::move(g));
    }
    for (int i = 0; i < 10; ++i) {
        GroupRecord g;
        g.id = padded("p", i, 3);
        g.name = "Springfield private circle " + std::to_string(i);
        g.description = "Invite only.";
        g.city = info.city;
        g.visibility = Visibility::Private;
        groups.push_back(std::move(g));
    }
    info.totalGroups = static_cast<int>(groups.size());
    info.keptGroups = keptCount;

    std::vector<MembershipRecord> memberships;
    int nextUser = 0;
    auto user = [&] { return padded("u", nextUser++, 6); };

    // Planted blocks over contiguous id ranges, a few nodes shared between
    // consecutive blocks.
    std::uniform_int_distribution<int> blockSizeDist(40, 90);
    std::uniform_int_distribution<int> blockJoins(6, 12);
    int cursor = 0;
    while (cursor < keptCount) {
        const int size = std::min(blockSizeDist(rng), keptCount - cursor);
        const int start = std::max(0, cursor - 4); // overlap the previous block slightly
        const int end = cursor + size;
        const int blockUsers = 2 * size;
        for (int u = 0; u < blockUsers; ++u) {
            const std::string uid = user();
            const int joins = blockJoins(rng);
            std::set<int> chosen;
            while (static_cast<int>(chosen.size()) < std::min(joins, end - start)) {
                chosen.insert(start +
                              static_cast<int>(rng() % static_cast<std::uint64_t>(end - start)));
            }
            for (int g : chosen) {
                memberships.push_back({uid, padded("g", g, 4)});
            }
        }
        cursor = end;
    }

    // Dense weak background: casual users joining groups everywhere.
    std::uniform_int_distribution<int> casualJoins(45, 55);
    for (int u = 0; u < 900; ++u) {
        const std::string uid = user();
        const int joins = casualJoins(rng);
        std::set<int> chosen;
        while (static_cast<int>(chosen.size()) < joins) {
            chosen.insert(static_cast<int>(rng() % static_cast<std::uint64_t>(keptCount)));
        }
        for (int g : chosen) {
            memberships.push_back({uid, padded("g", g, 4)});
        }
    }

    // Memberships for the filtered-out groups.
    for (int i = 0; i < 20; ++i) {
        for (int k = 0; k < 3; ++k) {
            memberships.push_back({user(), padded("x", i, 3)});
        }
    }
    for (int i = 0; i < 10; ++i) {
        for (int k = 0; k < 3; ++k) {
            memberships.push_back({user(), padded("p", i, 3)});
        }
    }

    std::filesystem::create_directories(dir);
    io::atomic_write(dir + "/groups.json",
                     [&](std::ostream &out) { io::write_groups_json(out, groups); });
    io::atomic_write(dir + "/memberships.json", [&](std::ostream &out) {
        io::write_memberships_json(out, memberships);
    });
    return info;
}

} // namespace comem::testing
