#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "comem/errors.hpp"
#include "comem/labelling.hpp"

using namespace comem;

TEST_CASE("tokenize lowercases, splits, and filters") {
    const StopwordSet stop = {"the", "meetup", "group"};
    const auto counts = tokenize("The Dublin Meetup Group", stop);
    REQUIRE(counts.size() == 1);
    CHECK(counts.at("dublin") == 1);
}

TEST_CASE("tokenize of empty text is empty") {
    CHECK(tokenize("", {}).empty());
}

TEST_CASE("tokenize splits on every non-alphanumeric character") {
    const auto counts = tokenize("Node.js Dublin Node.js", {});
    CHECK(counts.at("node") == 2);
    CHECK(counts.at("js") == 2);
    CHECK(counts.at("dublin") == 1);
}

TEST_CASE("tokenize keeps numeric tokens and honours min_len") {
    const auto counts = tokenize("30s over-40 r ux 2024", {}, 2);
    CHECK(counts.count("30s") == 1);
    CHECK(counts.count("40") == 1);
    CHECK(counts.count("2024") == 1);
    CHECK(counts.count("ux") == 1);
    CHECK(counts.count("r") == 0); // below min_len
}

TEST_CASE("tokenize keeps non-ASCII codepoints inside tokens") {
    const auto counts = tokenize("caf\xC3\xA9 society", {});
    CHECK(counts.count("caf\xC3\xA9") == 1);
    CHECK(counts.count("society") == 1);
}

TEST_CASE("stopword files support comments and blank lines") {
    std::istringstream in("# comment\nthe\n\n  Meetup  \n# another\ngroup\n");
    const auto words = load_stopwords(in);
    CHECK(words == StopwordSet{"the", "meetup", "group"});
}

TEST_CASE("bundled stopword file matches the built-in list") {
    std::ifstream in(std::string(COMEM_SOURCE_DIR) + "/data/stopwords_en.txt");
    REQUIRE(in.good());
    CHECK(load_stopwords(in) == default_stopwords());
}

namespace {

TermMatrix three_doc_matrix() {
    const std::map<std::string, std::string> docs = {
        {"d1", "alpha beta alpha"},
        {"d2", "beta gamma"},
        {"d3", "alpha delta delta gamma"},
    };
    return build_term_matrix(docs, {});
}

} // namespace

TEST_CASE("term matrix holds raw counts with sorted rows and vocabulary") {
    const auto m = three_doc_matrix();
    CHECK(m.docIds() == std::vector<std::string>{"d1", "d2", "d3"});
    CHECK(m.terms() == std::vector<std::string>{"alpha", "beta", "delta", "gamma"});
    CHECK(m.value("d1", "alpha") == 2.0);
    CHECK(m.value("d1", "beta") == 1.0);
    CHECK(m.value("d1", "gamma") == 0.0);
    CHECK(m.value("d3", "delta") == 2.0);
    // a term shared by two documents has two nonzero column entries
    CHECK(m.value("d2", "beta") == 1.0);
}

TEST_CASE("all-stopword text becomes an all-zero row") {
    const auto m = build_term_matrix({{"d1", "the and of"}, {"d2", "code"}}, {"the", "and", "of"});
    CHECK(m.value("d1", "code") == 0.0);
    CHECK(m.values().row(0).sum() == 0.0);
}

TEST_CASE("tfidf weights match the independently computed oracle") {
    const auto weighted = tfidf_normalize(three_doc_matrix());
    REQUIRE(weighted.weighted());
    // values computed with an independent implementation of
    // (1 + ln tf) * ln(N / df) with unit-norm rows
    CHECK(weighted.value("d1", "alpha") == doctest::Approx(0.8610369959439765).epsilon(1e-12));
    CHECK(weighted.value("d1", "beta") == doctest::Approx(0.5085423203783268).epsilon(1e-12));
    CHECK(weighted.value("d2", "beta") == doctest::Approx(0.7071067811865476).epsilon(1e-12));
    CHECK(weighted.value("d2", "gamma") == doctest::Approx(0.7071067811865476).epsilon(1e-12));
    CHECK(weighted.value("d3", "alpha") == doctest::Approx(0.2083058203439343).epsilon(1e-12));
    CHECK(weighted.value("d3", "delta") == doctest::Approx(0.9556240737976839).epsilon(1e-12));
    CHECK(weighted.value("d3", "gamma") == doctest::Approx(0.2083058203439343).epsilon(1e-12));
}

TEST_CASE("term present in every document weighs zero") {
    const auto m = build_term_matrix(
        {{"d1", "common alpha"}, {"d2", "common beta"}, {"d3", "common"}}, {});
    const auto weighted = tfidf_normalize(m);
    CHECK(weighted.value("d1", "common") == 0.0);
    CHECK(weighted.value("d2", "common") == 0.0);
    CHECK(weighted.value("d3", "common") == 0.0);
    CHECK(weighted.value("d1", "alpha") == 1.0); // only surviving term, unit norm
}

TEST_CASE("single-document corpus weighs everything zero") {
    const auto weighted = tfidf_normalize(build_term_matrix({{"d1", "alpha beta"}}, {}));
    CHECK(weighted.value("d1", "alpha") == 0.0);
    CHECK(weighted.value("d1", "beta") == 0.0);
}

TEST_CASE("every nonzero row of the weighted matrix has unit norm") {
    const auto weighted = tfidf_normalize(three_doc_matrix());
    for (int row = 0; row < weighted.values().outerSize(); ++row) {
        const double norm = weighted.values().row(row).norm();
        if (norm > 0.0) {
            CHECK(std::fabs(norm - 1.0) <= 1e-9);
        }
    }
}

namespace {

Cover cover_over(const std::vector<std::string> &universe,
                 const std::vector<std::vector<std::string>> &communities) {
    Cover cover;
    cover.universe = universe;
    int id = 1;
    for (const auto &nodes : communities) {
        Community c;
        c.id = id++;
        c.nodes = nodes;
        cover.communities.push_back(std::move(c));
    }
    return cover;
}

} // namespace

TEST_CASE("label_communities ranks terms by mean weight") {
    const auto weighted = tfidf_normalize(three_doc_matrix());

    SUBCASE("singleton community gets its own top terms") {
        const auto labels = label_communities(weighted, cover_over({"d1", "d2", "d3"}, {{"d3"}}), 2);
        CHECK(labels.at(1) == std::vector<std::string>{"delta", "alpha"});
    }

    SUBCASE("two identical rows label like either row") {
        const auto docs = std::map<std::string, std::string>{
            {"d1", "alpha beta"}, {"d2", "alpha beta"}, {"d3", "gamma"}};
        const auto w = tfidf_normalize(build_term_matrix(docs, {}));
        const auto both = label_communities(w, cover_over({"d1", "d2", "d3"}, {{"d1", "d2"}}), 5);
        const auto single = label_communities(w, cover_over({"d1", "d2", "d3"}, {{"d1"}}), 5);
        CHECK(both.at(1) == single.at(1));
    }

    SUBCASE("zero-mean terms are never emitted") {
        const auto labels =
            label_communities(weighted, cover_over({"d1", "d2", "d3"}, {{"d2"}}), 10);
        CHECK(labels.at(1) == std::vector<std::string>{"beta", "gamma"}); // only 2, not 10
    }

    SUBCASE("missing document row is an error naming the group") {
        CHECK_THROWS_WITH_AS(
            label_communities(weighted, cover_over({"d1"}, {{"d1", "nope"}}), 3),
            doctest::Contains("nope"), DataError);
    }
}

TEST_CASE("equal mean values emit in lexicographic order") {
    const auto docs = std::map<std::string, std::string>{
        {"d1", "zeta alpha"}, {"d2", "zeta alpha"}, {"d3", "other"}};
    const auto w = tfidf_normalize(build_term_matrix(docs, {}));
    const auto labels = label_communities(w, cover_over({"d1", "d2", "d3"}, {{"d1", "d2"}}), 5);
    CHECK(labels.at(1) == std::vector<std::string>{"alpha", "zeta"});
}

TEST_CASE("labels are invariant under document insertion order") {
    std::map<std::string, std::string> docs = {
        {"a", "alpha beta"}, {"m", "beta gamma"}, {"z", "alpha delta"}};
    std::map<std::string, std::string> reversed(docs.rbegin(), docs.rend());
    const auto w1 = tfidf_normalize(build_term_matrix(docs, {}));
    const auto w2 = tfidf_normalize(build_term_matrix(reversed, {}));
    const auto cover = cover_over({"a", "m", "z"}, {{"a", "z"}});
    CHECK(label_communities(w1, cover, 4) == label_communities(w2, cover, 4));
}

TEST_CASE("make_label_set combines name and description pipelines") {
    const auto names = tfidf_normalize(build_term_matrix(
        {{"d1", "alpha beta"}, {"d2", "gamma"}, {"d3", "alpha"}}, {}));
    const auto descriptions = tfidf_normalize(build_term_matrix(
        {{"d1", "long text about delta"}, {"d2", "epsilon"}, {"d3", "delta"}}, {"about"}));
    const auto labels = make_label_set(names, descriptions, cover_over({"d1", "d2", "d3"},
                                                                       {{"d1", "d3"}}), 3);
    CHECK(labels.nameLabels.count(1) == 1);
    CHECK(labels.descriptionLabels.count(1) == 1);
}
