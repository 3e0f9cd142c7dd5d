// comem - co-membership network analysis pipeline.
//
// Subcommands run one stage each against a shared output directory:
//   ingest -> stats -> centrality / communities -> label -> export
// `run` executes the whole pipeline and writes a manifest.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "comem/affiliation.hpp"
#include "comem/centrality.hpp"
#include "comem/community.hpp"
#include "comem/errors.hpp"
#include "comem/graph.hpp"
#include "comem/io.hpp"
#include "comem/labelling.hpp"
#include "comem/version.hpp"

namespace fs = std::filesystem;

namespace {

struct PipelineConfig {
    std::string groups;
    std::string memberships;
    std::string groupsFormat;      // "json" | "csv" | "" = infer from extension
    std::string membershipsFormat;
    std::string city;              // empty = no city filter
    bool publicOnly = false;
    std::int64_t minMembers = 0;
    double minWeight = 0.0;
    std::vector<double> thresholds = {0.01, 0.05, 0.1, 0.25, 0.5, 1.0};
    comem::DetectionParams detection;
    int labelTop = 10;
    int labelMinLen = 2;
    std::string stopwords;         // empty = bundled list
    std::string outputDir = "out";
    std::vector<std::string> formats = {"graphml", "gexf", "json", "tsv"};
};

struct Overrides {
    std::optional<std::string> groups, memberships, groupsFormat, membershipsFormat;
    std::optional<std::string> city, stopwords, outputDir;
    std::optional<bool> publicOnly;
    std::optional<std::int64_t> minMembers;
    std::optional<double> minWeight, resolution, consensus, dedup;
    std::optional<int> minSize, trials, maxCleanupIters, labelTop, labelMinLen;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<double>> thresholds;
    std::optional<std::vector<std::string>> formats;
};

bool parse_bool(const std::string &value, const std::string &key) {
    if (value == "true" || value == "yes" || value == "1") {
        return true;
    }
    if (value == "false" || value == "no" || value == "0") {
        return false;
    }
    throw std::invalid_argument("config: key '" + key + "' expects a boolean, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string &value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) {
            out.push_back(item.substr(b, e - b + 1));
        }
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw comem::DataError("cannot open config file \"" + path + "\"");
    }
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const auto b = line.find_first_not_of(" \t");
        if (b == std::string::npos || line[b] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(lineNo) +
                                        " is not of the form key = value");
        }
        auto trim = [](std::string s) {
            const auto lo = s.find_first_not_of(" \t");
            const auto hi = s.find_last_not_of(" \t");
            return lo == std::string::npos ? std::string{} : s.substr(lo, hi - lo + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("config: line " + std::to_string(lineNo) + ": empty key");
        }
        kv[key] = value;
    }
    return kv;
}

void apply_config(PipelineConfig &cfg, const std::map<std::string, std::string> &kv) {
    for (const auto &[key, value] : kv) {
        try {
            if (key == "groups") {
                cfg.groups = value;
            } else if (key == "memberships") {
                cfg.memberships = value;
            } else if (key == "groups_format") {
                cfg.groupsFormat = value;
            } else if (key == "memberships_format") {
                cfg.membershipsFormat = value;
            } else if (key == "city") {
                cfg.city = value;
            } else if (key == "public_only") {
                cfg.publicOnly = parse_bool(value, key);
            } else if (key == "min_members") {
                cfg.minMembers = std::stoll(value);
            } else if (key == "min_weight") {
                cfg.minWeight = std::stod(value);
            } else if (key == "stats_thresholds") {
                cfg.thresholds.clear();
                for (const auto &item : split_list(value)) {
                    cfg.thresholds.push_back(std::stod(item));
                }
            } else if (key == "resolution") {
                cfg.detection.resolution = std::stod(value);
            } else if (key == "min_size") {
                cfg.detection.minSize = std::stoi(value);
            } else if (key == "trials") {
                cfg.detection.nTrials = std::stoi(value);
            } else if (key == "consensus") {
                cfg.detection.consensusFraction = std::stod(value);
            } else if (key == "dedup") {
                cfg.detection.dedupJaccard = std::stod(value);
            } else if (key == "seed") {
                cfg.detection.rngSeed = std::stoull(value);
            } else if (key == "max_cleanup_iters") {
                cfg.detection.maxCleanupIters = std::stoi(value);
            } else if (key == "label_top") {
                cfg.labelTop = std::stoi(value);
            } else if (key == "label_min_len") {
                cfg.labelMinLen = std::stoi(value);
            } else if (key == "stopwords") {
                cfg.stopwords = value;
            } else if (key == "output_dir") {
                cfg.outputDir = value;
            } else if (key == "formats") {
                cfg.formats = split_list(value);
            } else {
                throw std::invalid_argument("config: unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument &) {
            throw;
        } catch (const std::exception &) {
            throw std::invalid_argument("config: key '" + key + "' has invalid value '" + value +
                                        "'");
        }
    }
}

PipelineConfig resolve_config(const std::string &configPath, const Overrides &o) {
    PipelineConfig cfg;
    if (!configPath.empty()) {
        apply_config(cfg, read_config_file(configPath));
    }
    if (o.groups) cfg.groups = *o.groups;
    if (o.memberships) cfg.memberships = *o.memberships;
    if (o.groupsFormat) cfg.groupsFormat = *o.groupsFormat;
    if (o.membershipsFormat) cfg.membershipsFormat = *o.membershipsFormat;
    if (o.city) cfg.city = *o.city;
    if (o.publicOnly) cfg.publicOnly = *o.publicOnly;
    if (o.minMembers) cfg.minMembers = *o.minMembers;
    if (o.minWeight) cfg.minWeight = *o.minWeight;
    if (o.thresholds) cfg.thresholds = *o.thresholds;
    if (o.resolution) cfg.detection.resolution = *o.resolution;
    if (o.minSize) cfg.detection.minSize = *o.minSize;
    if (o.trials) cfg.detection.nTrials = *o.trials;
    if (o.consensus) cfg.detection.consensusFraction = *o.consensus;
    if (o.dedup) cfg.detection.dedupJaccard = *o.dedup;
    if (o.seed) cfg.detection.rngSeed = *o.seed;
    if (o.maxCleanupIters) cfg.detection.maxCleanupIters = *o.maxCleanupIters;
    if (o.labelTop) cfg.labelTop = *o.labelTop;
    if (o.labelMinLen) cfg.labelMinLen = *o.labelMinLen;
    if (o.stopwords) cfg.stopwords = *o.stopwords;
    if (o.outputDir) cfg.outputDir = *o.outputDir;
    if (o.formats) cfg.formats = *o.formats;
    return cfg;
}

comem::InputFormat infer_format(const std::string &declared, const std::string &path) {
    if (declared == "json") {
        return comem::InputFormat::Json;
    }
    if (declared == "csv") {
        return comem::InputFormat::Csv;
    }
    if (!declared.empty()) {
        throw std::invalid_argument("format must be 'json' or 'csv', got '" + declared + "'");
    }
    const auto dot = path.rfind('.');
    if (dot != std::string::npos && path.substr(dot) == ".csv") {
        return comem::InputFormat::Csv;
    }
    return comem::InputFormat::Json;
}

std::string artifact_path(const PipelineConfig &cfg, const std::string &file) {
    return (fs::path(cfg.outputDir) / file).string();
}

void require_artifact(const PipelineConfig &cfg, const std::string &file,
                      const std::string &producer) {
    if (!fs::exists(artifact_path(cfg, file))) {
        throw comem::DataError("missing artifact '" + file + "' in '" + cfg.outputDir +
                               "'; run `comem " + producer + "` first");
    }
}

comem::AffiliationDataset load_input_dataset(const PipelineConfig &cfg) {
    if (cfg.groups.empty()) {
        throw std::invalid_argument("no groups file given (--groups or config key 'groups')");
    }
    if (cfg.memberships.empty()) {
        throw std::invalid_argument(
            "no memberships file given (--memberships or config key 'memberships')");
    }
    std::ifstream groupsIn(cfg.groups, std::ios::binary);
    if (!groupsIn) {
        throw comem::DataError("cannot open groups file \"" + cfg.groups + "\"");
    }
    auto groups = comem::load_groups(groupsIn, infer_format(cfg.groupsFormat, cfg.groups));
    std::ifstream membershipsIn(cfg.memberships, std::ios::binary);
    if (!membershipsIn) {
        throw comem::DataError("cannot open memberships file \"" + cfg.memberships + "\"");
    }
    auto memberships = comem::load_memberships(
        membershipsIn, infer_format(cfg.membershipsFormat, cfg.memberships));
    return comem::AffiliationDataset(std::move(groups), std::move(memberships));
}

comem::AffiliationDataset read_dataset_artifacts(const PipelineConfig &cfg) {
    require_artifact(cfg, "groups.json", "ingest");
    require_artifact(cfg, "memberships.json", "ingest");
    std::ifstream groupsIn(artifact_path(cfg, "groups.json"), std::ios::binary);
    auto groups = comem::load_groups(groupsIn, comem::InputFormat::Json);
    std::ifstream membershipsIn(artifact_path(cfg, "memberships.json"), std::ios::binary);
    auto memberships = comem::load_memberships(membershipsIn, comem::InputFormat::Json);
    return comem::AffiliationDataset(std::move(groups), std::move(memberships));
}

comem::CoMembershipGraph read_graph_artifact(const PipelineConfig &cfg) {
    require_artifact(cfg, "graph.json", "stats");
    std::ifstream in(artifact_path(cfg, "graph.json"), std::ios::binary);
    return comem::io::read_graph_json(in);
}

comem::Cover read_cover_artifact(const PipelineConfig &cfg) {
    require_artifact(cfg, "cover.json", "communities");
    std::ifstream in(artifact_path(cfg, "cover.json"), std::ios::binary);
    return comem::io::read_cover_json(in);
}

comem::StopwordSet load_stopword_config(const PipelineConfig &cfg) {
    if (cfg.stopwords.empty()) {
        return comem::default_stopwords();
    }
    std::ifstream in(cfg.stopwords, std::ios::binary);
    if (!in) {
        throw comem::DataError("cannot open stopword file \"" + cfg.stopwords + "\"");
    }
    return comem::load_stopwords(in);
}

// ---------------------------------------------------------------------------
// Stages

comem::AffiliationDataset stage_ingest(const PipelineConfig &cfg) {
    const auto raw = load_input_dataset(cfg);
    comem::FilterOptions filter;
    if (!cfg.city.empty()) {
        filter.city = cfg.city;
    }
    filter.publicOnly = cfg.publicOnly;
    filter.minMembers = cfg.minMembers;
    auto filtered = comem::filter_dataset(raw, filter);

    fs::create_directories(cfg.outputDir);
    comem::io::atomic_write(artifact_path(cfg, "groups.json"), [&](std::ostream &out) {
        comem::io::write_groups_json(out, filtered.groups());
    });
    comem::io::atomic_write(artifact_path(cfg, "memberships.json"), [&](std::ostream &out) {
        comem::io::write_memberships_json(out, filtered.memberships());
    });
    std::cout << "ingest: kept " << filtered.groupCount() << " of " << raw.groupCount()
              << " groups, " << filtered.membershipCount() << " memberships\n";
    return filtered;
}

comem::CoMembershipGraph stage_stats(const PipelineConfig &cfg,
                                     const comem::AffiliationDataset &ds) {
    auto graph = comem::project(ds, cfg.minWeight);
    const auto stats = comem::compute_stats(graph, cfg.thresholds);
    fs::create_directories(cfg.outputDir);
    comem::io::atomic_write(artifact_path(cfg, "graph.json"), [&](std::ostream &out) {
        comem::io::write_graph_json(out, graph);
    });
    comem::io::atomic_write(artifact_path(cfg, "stats.json"), [&](std::ostream &out) {
        comem::io::write_stats_json(out, stats);
    });
    std::cout << "stats: " << stats.nodeCount << " nodes, " << stats.edgeCount
              << " edges, density " << stats.density << ", " << stats.componentCount
              << " component(s)\n";
    return graph;
}

void write_centrality_artifact(const PipelineConfig &cfg, const comem::CentralityReport &report,
                               const comem::CoMembershipGraph &graph) {
    const std::string file = "centrality_" + comem::to_string(report.measure) + ".tsv";
    comem::io::atomic_write(artifact_path(cfg, file), [&](std::ostream &out) {
        comem::io::write_centrality_tsv(out, report, graph);
    });
}

void stage_centrality(const PipelineConfig &cfg, const comem::CoMembershipGraph &graph,
                      const std::string &measure, comem::DistanceMode mode, bool normalized,
                      int top, comem::PowerIterationOptions power = {}) {
    std::vector<comem::CentralityReport> reports;
    if (measure == "eigenvector" || measure == "all") {
        reports.push_back(comem::eigenvector_centrality(graph, power));
    }
    if (measure == "betweenness" || measure == "all") {
        reports.push_back(comem::betweenness_centrality(graph, mode, normalized));
    }
    if (measure == "degree" || measure == "all") {
        reports.push_back(comem::degree_centrality(graph));
    }
    fs::create_directories(cfg.outputDir);
    for (const auto &report : reports) {
        write_centrality_artifact(cfg, report, graph);
        if (top > 0) {
            std::cout << "# " << comem::to_string(report.measure) << "\n";
            comem::io::write_centrality_tsv(std::cout, report, graph, top);
        }
    }
}

comem::Cover stage_communities(const PipelineConfig &cfg, const comem::CoMembershipGraph &graph) {
    auto cover = comem::detect_cover(graph, cfg.detection);
    const auto overlap = comem::overlap_stats(cover, graph);
    fs::create_directories(cfg.outputDir);
    comem::io::atomic_write(artifact_path(cfg, "cover.json"), [&](std::ostream &out) {
        comem::io::write_cover_json(out, cover);
    });
    comem::io::atomic_write(artifact_path(cfg, "overlap.json"), [&](std::ostream &out) {
        comem::io::write_overlap_json(out, overlap, cover);
    });
    std::cout << "communities: " << cover.communities.size() << " found (resolution "
              << cfg.detection.resolution << ", min size " << cfg.detection.minSize << ")\n";
    return cover;
}

void stage_label(const PipelineConfig &cfg, const comem::AffiliationDataset &ds,
                 const comem::Cover &cover) {
    const auto stopwords = load_stopword_config(cfg);
    std::map<std::string, std::string> names;
    std::map<std::string, std::string> descriptions;
    for (const auto &g : ds.groups()) {
        names[g.id] = g.name;
        descriptions[g.id] = g.description;
    }
    const auto nameMatrix =
        comem::tfidf_normalize(comem::build_term_matrix(names, stopwords, cfg.labelMinLen));
    const auto descMatrix =
        comem::tfidf_normalize(comem::build_term_matrix(descriptions, stopwords, cfg.labelMinLen));
    const auto labels = comem::make_label_set(nameMatrix, descMatrix, cover, cfg.labelTop);

    fs::create_directories(cfg.outputDir);
    comem::io::atomic_write(artifact_path(cfg, "labels.json"), [&](std::ostream &out) {
        comem::io::write_labels_json(out, labels);
    });
    comem::io::atomic_write(artifact_path(cfg, "labels.tsv"), [&](std::ostream &out) {
        comem::io::write_labels_tsv(out, labels, cover);
    });
    std::cout << "label: labelled " << cover.communities.size() << " communities\n";
}

comem::CoMembershipGraph intra_community_subgraph(const comem::CoMembershipGraph &graph,
                                                  const comem::Cover &cover) {
    // Same nodes, but only edges whose endpoints share at least one
    // community.
    std::vector<std::vector<int>> nodeCommunities(
        static_cast<std::size_t>(graph.nodeCount()));
    for (const auto &community : cover.communities) {
        for (const auto &id : community.nodes) {
            const int idx = graph.indexOf(id);
            if (idx < 0) {
                throw comem::DataError("cover references unknown node \"" + id + "\"");
            }
            nodeCommunities[static_cast<std::size_t>(idx)].push_back(community.id);
        }
    }
    std::vector<comem::Edge> kept;
    graph.forEachEdge([&](int i, int j, double w) {
        const auto &a = nodeCommunities[static_cast<std::size_t>(i)];
        const auto &b = nodeCommunities[static_cast<std::size_t>(j)];
        for (int ca : a) {
            for (int cb : b) {
                if (ca == cb) {
                    kept.push_back({i, j, w});
                    return;
                }
            }
        }
    });
    return comem::CoMembershipGraph(graph.nodes(), kept);
}

void stage_export(const PipelineConfig &cfg, const comem::CoMembershipGraph &graph,
                  const std::string &format, bool intraOnly, const comem::Cover *cover) {
    const comem::CoMembershipGraph *target = &graph;
    comem::CoMembershipGraph filtered;
    if (intraOnly) {
        if (cover == nullptr) {
            throw comem::DataError("intra-community export requires a cover");
        }
        filtered = intra_community_subgraph(graph, *cover);
        target = &filtered;
    }
    const std::string stem = intraOnly ? "graph.intra." : "graph.";
    fs::create_directories(cfg.outputDir);
    if (format == "graphml") {
        comem::io::atomic_write(artifact_path(cfg, stem + "graphml"), [&](std::ostream &out) {
            comem::io::write_graphml(out, *target);
        });
    } else if (format == "gexf") {
        comem::io::atomic_write(artifact_path(cfg, stem + "gexf"), [&](std::ostream &out) {
            comem::io::write_gexf(out, *target);
        });
    } else if (format == "json") {
        comem::io::atomic_write(artifact_path(cfg, stem + "json"), [&](std::ostream &out) {
            comem::io::write_graph_json(out, *target);
        });
    } else {
        throw std::invalid_argument("export format must be graphml, gexf, or json; got '" +
                                    format + "'");
    }
    std::cout << "export: wrote " << artifact_path(cfg, stem + format) << "\n";
}

nlohmann::json config_to_json(const PipelineConfig &cfg) {
    return {{"groups", cfg.groups},
            {"memberships", cfg.memberships},
            {"groups_format", cfg.groupsFormat},
            {"memberships_format", cfg.membershipsFormat},
            {"city", cfg.city},
            {"public_only", cfg.publicOnly},
            {"min_members", cfg.minMembers},
            {"min_weight", cfg.minWeight},
            {"stats_thresholds", cfg.thresholds},
            {"resolution", cfg.detection.resolution},
            {"min_size", cfg.detection.minSize},
            {"trials", cfg.detection.nTrials},
            {"consensus", cfg.detection.consensusFraction},
            {"dedup", cfg.detection.dedupJaccard},
            {"seed", cfg.detection.rngSeed},
            {"max_cleanup_iters", cfg.detection.maxCleanupIters},
            {"label_top", cfg.labelTop},
            {"label_min_len", cfg.labelMinLen},
            {"stopwords", cfg.stopwords},
            {"output_dir", cfg.outputDir},
            {"formats", cfg.formats}};
}

// Re-raise with the failing stage in the message, preserving the type (and
// with it the exit code).
template <class F>
auto named_stage(const char *stage, F &&fn) {
    try {
        return fn();
    } catch (const comem::NonConvergenceError &e) {
        throw comem::NonConvergenceError("stage " + std::string(stage) + ": " + e.what(),
                                         e.lastIterate());
    } catch (const comem::DataError &e) {
        throw comem::DataError("stage " + std::string(stage) + ": " + e.what());
    } catch (const std::invalid_argument &e) {
        throw std::invalid_argument("stage " + std::string(stage) + ": " + e.what());
    }
}

void cmd_run(const PipelineConfig &cfg) {
    const auto started = std::chrono::steady_clock::now();

    auto dataset = named_stage("ingest", [&] { return stage_ingest(cfg); });
    auto graph = named_stage("stats", [&] { return stage_stats(cfg, dataset); });
    named_stage("centrality", [&] {
        stage_centrality(cfg, graph, "all", comem::DistanceMode::InverseWeight, true, 0);
    });
    auto cover = named_stage("communities", [&] { return stage_communities(cfg, graph); });
    named_stage("label", [&] { stage_label(cfg, dataset, cover); });
    named_stage("export", [&] {
        for (const auto &format : cfg.formats) {
            if (format == "graphml" || format == "gexf") {
                stage_export(cfg, graph, format, false, &cover);
            } else if (format != "json" && format != "tsv") {
                throw std::invalid_argument("unknown export format '" + format + "'");
            }
            // json and tsv artifacts are always written by their stages
        }
    });

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    nlohmann::json manifest = {
        {"tool", "comem"},
        {"version", comem::kVersion},
        {"versions",
         {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                        "." + std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
        {"rng_seed", cfg.detection.rngSeed},
        {"config", config_to_json(cfg)},
        {"elapsed_seconds", elapsed}};
    comem::io::atomic_write(artifact_path(cfg, "manifest.json"),
                            [&](std::ostream &out) { out << manifest.dump(2) << '\n'; });
    std::cout << "run: completed in " << elapsed << " s; artifacts in " << cfg.outputDir << "\n";
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"co-membership network analysis toolkit"};
    app.require_subcommand(1);

    std::string configPath;
    Overrides o;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--config", configPath, "flat key = value configuration file");
        cmd->add_option("--out", o.outputDir, "output directory (default: out)");
    };
    auto add_ingest_options = [&](CLI::App *cmd) {
        cmd->add_option("--groups", o.groups, "groups file (JSON array or CSV)");
        cmd->add_option("--memberships", o.memberships, "memberships file (JSON array or CSV)");
        cmd->add_option("--groups-format", o.groupsFormat, "json|csv (default: by extension)")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--memberships-format", o.membershipsFormat,
                        "json|csv (default: by extension)")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--city", o.city, "keep only groups hosted in this city (case-insensitive)");
        cmd->add_flag_callback(
            "--public-only", [&] { o.publicOnly = true; }, "keep only public groups");
        cmd->add_option("--min-members", o.minMembers,
                        "keep only groups with at least this many members");
    };
    auto add_detection_options = [&](CLI::App *cmd) {
        cmd->add_option("--resolution", o.resolution, "significance threshold in (0,1)");
        cmd->add_option("--min-size", o.minSize, "discard communities smaller than this");
        cmd->add_option("--trials", o.trials, "number of detection passes");
        cmd->add_option("--consensus", o.consensus,
                        "fraction of trials a community must appear in");
        cmd->add_option("--dedup", o.dedup, "near-duplicate Jaccard threshold");
        cmd->add_option("--seed", o.seed, "rng seed");
        cmd->add_option("--max-cleanup-iters", o.maxCleanupIters, "clean-up iteration cap");
    };
    auto add_label_options = [&](CLI::App *cmd) {
        cmd->add_option("--top", o.labelTop, "terms per label list");
        cmd->add_option("--min-len", o.labelMinLen, "minimum token length");
        cmd->add_option("--stopwords", o.stopwords,
                        "stopword file, one word per line (default: bundled English list)");
    };

    CLI::App *runCmd = app.add_subcommand("run", "run the full pipeline");
    add_common(runCmd);
    add_ingest_options(runCmd);
    runCmd->add_option("--min-weight", o.minWeight, "drop projected edges with weight <= this");
    runCmd->add_option("--thresholds", o.thresholds, "weight thresholds for the stats report")
        ->delimiter(',');
    add_detection_options(runCmd);
    add_label_options(runCmd);
    runCmd->add_option("--formats", o.formats, "graph export formats (graphml,gexf,json,tsv)")
        ->delimiter(',');

    CLI::App *ingestCmd =
        app.add_subcommand("ingest", "load, validate, and filter affiliation data");
    add_common(ingestCmd);
    add_ingest_options(ingestCmd);

    CLI::App *statsCmd = app.add_subcommand(
        "stats", "project the co-membership graph and report its statistics");
    add_common(statsCmd);
    statsCmd->add_option("--min-weight", o.minWeight, "drop projected edges with weight <= this");
    statsCmd->add_option("--thresholds", o.thresholds, "weight thresholds for the stats report")
        ->delimiter(',');

    std::string measure = "all";
    int topN = 0;
    std::string distanceMode = "inverse_weight";
    bool rawScores = false;
    comem::PowerIterationOptions power;
    CLI::App *centralityCmd = app.add_subcommand("centrality", "rank nodes by centrality");
    add_common(centralityCmd);
    centralityCmd->add_option("--measure", measure, "eigenvector|betweenness|degree|all")
        ->check(CLI::IsMember({"eigenvector", "betweenness", "degree", "all"}));
    centralityCmd->add_option("--top", topN, "print the top-k table to stdout");
    centralityCmd
        ->add_option("--distance-mode", distanceMode, "betweenness edge distance: inverse_weight|unit")
        ->check(CLI::IsMember({"inverse_weight", "unit"}));
    centralityCmd->add_flag("--raw", rawScores, "report unnormalised betweenness scores");
    centralityCmd->add_option("--tol", power.tol, "power iteration convergence tolerance");
    centralityCmd->add_option("--max-iter", power.maxIter, "power iteration budget");

    CLI::App *communitiesCmd =
        app.add_subcommand("communities", "detect overlapping communities");
    add_common(communitiesCmd);
    add_detection_options(communitiesCmd);

    CLI::App *labelCmd = app.add_subcommand("label", "label communities from group metadata");
    add_common(labelCmd);
    add_label_options(labelCmd);

    std::string exportFormat;
    bool intraOnly = false;
    CLI::App *exportCmd = app.add_subcommand("export", "write the graph in an exchange format");
    add_common(exportCmd);
    exportCmd->add_option("--format", exportFormat, "graphml|gexf|json")
        ->required()
        ->check(CLI::IsMember({"graphml", "gexf", "json"}));
    exportCmd->add_flag("--intra-community-only", intraOnly,
                        "keep only edges inside a detected community");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 1;
    }

    try {
        const PipelineConfig cfg = resolve_config(configPath, o);
        if (runCmd->parsed()) {
            cmd_run(cfg);
        } else if (ingestCmd->parsed()) {
            named_stage("ingest", [&] { stage_ingest(cfg); });
        } else if (statsCmd->parsed()) {
            named_stage("stats", [&] {
                const auto ds = read_dataset_artifacts(cfg);
                stage_stats(cfg, ds);
            });
        } else if (centralityCmd->parsed()) {
            named_stage("centrality", [&] {
                const auto graph = read_graph_artifact(cfg);
                const auto mode = distanceMode == "unit" ? comem::DistanceMode::Unit
                                                         : comem::DistanceMode::InverseWeight;
                stage_centrality(cfg, graph, measure, mode, !rawScores, topN, power);
            });
        } else if (communitiesCmd->parsed()) {
            named_stage("communities", [&] {
                const auto graph = read_graph_artifact(cfg);
                stage_communities(cfg, graph);
            });
        } else if (labelCmd->parsed()) {
            named_stage("label", [&] {
                const auto ds = read_dataset_artifacts(cfg);
                const auto cover = read_cover_artifact(cfg);
                stage_label(cfg, ds, cover);
            });
        } else if (exportCmd->parsed()) {
            named_stage("export", [&] {
                const auto graph = read_graph_artifact(cfg);
                comem::Cover cover;
                if (intraOnly) {
                    cover = read_cover_artifact(cfg);
                }
                stage_export(cfg, graph, exportFormat, intraOnly, &cover);
            });
        }
    } catch (const comem::NonConvergenceError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const comem::DataError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
