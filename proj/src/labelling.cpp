#include "comem/labelling.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Dense>

#include "comem/errors.hpp"

namespace comem {

namespace {

// Bundled list; data/stopwords_en.txt carries the same words and is the
// user-replaceable copy.
constexpr const char *kDefaultStopwords[] = {
    "a",      "about",  "above",  "after",   "again",   "against", "all",    "am",
    "an",     "and",    "any",    "are",     "as",      "at",      "be",     "because",
    "been",   "before", "being",  "below",   "between", "both",    "but",    "by",
    "can",    "could",  "did",    "do",      "does",    "doing",   "down",   "during",
    "each",   "few",    "for",    "from",    "further", "had",     "has",    "have",
    "having", "he",     "her",    "here",    "hers",    "herself", "him",    "himself",
    "his",    "how",    "i",      "if",      "in",      "into",    "is",     "it",
    "its",    "itself", "just",   "me",      "more",    "most",    "my",     "myself",
    "no",     "nor",    "not",    "now",     "of",      "off",     "on",     "once",
    "only",   "or",     "other",  "our",     "ours",    "ourselves", "out",  "over",
    "own",    "same",   "she",    "should",  "so",      "some",    "such",   "than",
    "that",   "the",    "their",  "theirs",  "them",    "themselves", "then", "there",
    "these",  "they",   "this",   "those",   "through", "to",      "too",    "under",
    "until",  "up",     "very",   "was",     "we",      "were",    "what",   "when",
    "where",  "which",  "while",  "who",     "whom",    "why",     "will",   "with",
    "you",    "your",   "yours",  "yourself", "yourselves",
    // platform words
    "meetup", "meetups", "group", "groups",
};

std::string ascii_lower(std::string s) {
    for (char &c : s) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return s;
}

bool is_ascii_alnum(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

std::string trim(const std::string &s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return s.substr(b, e - b);
}

} // namespace

const StopwordSet &default_stopwords() {
    static const StopwordSet words(std::begin(kDefaultStopwords), std::end(kDefaultStopwords));
    return words;
}

StopwordSet load_stopwords(std::istream &in) {
    StopwordSet words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const std::string word = trim(line);
        if (word.empty() || word[0] == '#') {
            continue;
        }
        words.insert(ascii_lower(word));
    }
    return words;
}

std::map<std::string, int> tokenize(const std::string &text, const StopwordSet &stopwords,
                                    int minLen) {
    if (minLen < 1) {
        throw std::invalid_argument("tokenize: minLen must be >= 1");
    }
    std::map<std::string, int> counts;
    std::string token;
    int codepoints = 0;

    auto flush = [&] {
        if (!token.empty()) {
            if (codepoints >= minLen && !stopwords.count(token)) {
                ++counts[token];
            }
            token.clear();
        }
        codepoints = 0;
    };

    std::size_t i = 0;
    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (c < 0x80) {
            if (is_ascii_alnum(c)) {
                token += static_cast<char>(std::tolower(c));
                ++codepoints;
            } else {
                flush();
            }
            ++i;
        } else {
            // Non-ASCII codepoints count as token characters; copy the whole
            // UTF-8 sequence. ASCII-only lowercasing.
            std::size_t len = 1;
            if ((c & 0xE0) == 0xC0) {
                len = 2;
            } else if ((c & 0xF0) == 0xE0) {
                len = 3;
            } else if ((c & 0xF8) == 0xF0) {
                len = 4;
            }
            len = std::min(len, text.size() - i);
            token.append(text, i, len);
            ++codepoints;
            i += len;
        }
    }
    flush();
    return counts;
}

TermMatrix::TermMatrix(std::vector<std::string> docIds, std::vector<std::string> terms,
                       Eigen::SparseMatrix<double, Eigen::RowMajor> values, bool weighted)
    : docIds_(std::move(docIds)), terms_(std::move(terms)), values_(std::move(values)),
      weighted_(weighted) {}

int TermMatrix::docIndex(const std::string &docId) const {
    auto it = std::lower_bound(docIds_.begin(), docIds_.end(), docId);
    if (it == docIds_.end() || *it != docId) {
        return -1;
    }
    return static_cast<int>(it - docIds_.begin());
}

int TermMatrix::termIndex(const std::string &term) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
    if (it == terms_.end() || *it != term) {
        return -1;
    }
    return static_cast<int>(it - terms_.begin());
}

double TermMatrix::value(const std::string &docId, const std::string &term) const {
    const int row = docIndex(docId);
    const int col = termIndex(term);
    if (row < 0 || col < 0) {
        return 0.0;
    }
    return values_.coeff(row, col);
}

TermMatrix build_term_matrix(const std::map<std::string, std::string> &docs,
                             const StopwordSet &stopwords, int minLen) {
    std::vector<std::string> docIds;
    docIds.reserve(docs.size());
    std::vector<std::map<std::string, int>> counts;
    counts.reserve(docs.size());
    std::set<std::string> vocabulary;
    for (const auto &[id, text] : docs) {
        docIds.push_back(id);
        counts.push_back(tokenize(text, stopwords, minLen));
        for (const auto &[term, count] : counts.back()) {
            vocabulary.insert(term);
        }
    }
    std::vector<std::string> terms(vocabulary.begin(), vocabulary.end());
    std::unordered_map<std::string, int> termIndex;
    termIndex.reserve(terms.size());
    for (std::size_t t = 0; t < terms.size(); ++t) {
        termIndex.emplace(terms[t], static_cast<int>(t));
    }

    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t row = 0; row < counts.size(); ++row) {
        for (const auto &[term, count] : counts[row]) {
            triplets.emplace_back(static_cast<int>(row), termIndex.at(term),
                                  static_cast<double>(count));
        }
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor> values(static_cast<int>(docIds.size()),
                                                        static_cast<int>(terms.size()));
    values.setFromTriplets(triplets.begin(), triplets.end());
    return TermMatrix(std::move(docIds), std::move(terms), std::move(values), false);
}

TermMatrix tfidf_normalize(const TermMatrix &raw) {
    if (raw.weighted()) {
        throw std::invalid_argument("tfidf_normalize: matrix already weighted");
    }
    const auto &counts = raw.values();
    const int docCount = static_cast<int>(raw.docIds().size());
    const int termCount = static_cast<int>(raw.terms().size());

    std::vector<int> documentFrequency(static_cast<std::size_t>(termCount), 0);
    for (int row = 0; row < counts.outerSize(); ++row) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(counts, row); it;
             ++it) {
            if (it.value() > 0.0) {
                ++documentFrequency[static_cast<std::size_t>(it.col())];
            }
        }
    }

    std::vector<Eigen::Triplet<double>> triplets;
    for (int row = 0; row < counts.outerSize(); ++row) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(counts, row); it;
             ++it) {
            if (it.value() <= 0.0) {
                continue;
            }
            const double idf = std::log(static_cast<double>(docCount) /
                                        documentFrequency[static_cast<std::size_t>(it.col())]);
            const double tf = 1.0 + std::log(it.value());
            const double weight = tf * idf;
            if (weight != 0.0) {
                triplets.emplace_back(row, static_cast<int>(it.col()), weight);
            }
        }
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor> weighted(docCount, termCount);
    weighted.setFromTriplets(triplets.begin(), triplets.end());

    for (int row = 0; row < weighted.outerSize(); ++row) {
        double squared = 0.0;
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(weighted, row); it;
             ++it) {
            squared += it.value() * it.value();
        }
        if (squared > 0.0) {
            const double norm = std::sqrt(squared);
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(weighted, row); it;
                 ++it) {
                it.valueRef() /= norm;
            }
        }
    }
    return TermMatrix(raw.docIds(), raw.terms(), std::move(weighted), true);
}

std::map<int, std::vector<std::string>> label_communities(const TermMatrix &m, const Cover &cover,
                                                          int topTerms) {
    if (topTerms < 1) {
        throw std::invalid_argument("label_communities: topTerms must be >= 1");
    }
    if (!m.weighted()) {
        throw std::invalid_argument("label_communities: term matrix must be tf-idf weighted");
    }

    std::map<int, std::vector<std::string>> labels;
    for (const auto &community : cover.communities) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<int>(m.terms().size()));
        for (const auto &nodeId : community.nodes) {
            const int row = m.docIndex(nodeId);
            if (row < 0) {
                throw DataError("label_communities: community " + std::to_string(community.id) +
                                " references group \"" + nodeId + "\" with no document row");
            }
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m.values(), row);
                 it; ++it) {
                mean[it.col()] += it.value();
            }
        }
        if (!community.nodes.empty()) {
            mean /= static_cast<double>(community.nodes.size());
        }

        std::vector<int> order;
        for (int t = 0; t < mean.size(); ++t) {
            if (mean[t] > 0.0) {
                order.push_back(t);
            }
        }
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (mean[a] != mean[b]) {
                return mean[a] > mean[b];
            }
            return m.terms()[static_cast<std::size_t>(a)] < m.terms()[static_cast<std::size_t>(b)];
        });
        if (order.size() > static_cast<std::size_t>(topTerms)) {
            order.resize(static_cast<std::size_t>(topTerms));
        }
        std::vector<std::string> terms;
        terms.reserve(order.size());
        for (int t : order) {
            terms.push_back(m.terms()[static_cast<std::size_t>(t)]);
        }
        labels.emplace(community.id, std::move(terms));
    }
    return labels;
}

LabelSet make_label_set(const TermMatrix &names, const TermMatrix &descriptions,
                        const Cover &cover, int topTerms) {
    LabelSet labels;
    labels.topTerms = topTerms;
    labels.nameLabels = label_communities(names, cover, topTerms);
    labels.descriptionLabels = label_communities(descriptions, cover, topTerms);
    return labels;
}

} // namespace comem
