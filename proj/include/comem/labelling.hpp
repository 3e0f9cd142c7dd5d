#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "comem/community.hpp"

namespace comem {

using StopwordSet = std::set<std::string>;

/// Bundled English list plus platform words. Mirrors data/stopwords_en.txt.
const StopwordSet &default_stopwords();

/// One word per line, UTF-8, '#' starts a comment line; words are
/// lowercased.
StopwordSet load_stopwords(std::istream &in);

/// Lowercased term counts. Tokens split on any non-alphanumeric ASCII
/// character (non-ASCII codepoints are kept as token characters); tokens in
/// the stopword set or shorter than minLen codepoints are dropped.
std::map<std::string, int> tokenize(const std::string &text, const StopwordSet &stopwords,
                                    int minLen = 2);

/// Document-term matrix: rows are group ids (sorted), columns a sorted term
/// vocabulary. Holds raw counts as built, tf-idf weights with unit-norm
/// rows after tfidf_normalize.
class TermMatrix {
public:
    TermMatrix() = default;
    TermMatrix(std::vector<std::string> docIds, std::vector<std::string> terms,
               Eigen::SparseMatrix<double, Eigen::RowMajor> values, bool weighted);

    const std::vector<std::string> &docIds() const { return docIds_; }
    const std::vector<std::string> &terms() const { return terms_; }
    const Eigen::SparseMatrix<double, Eigen::RowMajor> &values() const { return values_; }
    bool weighted() const { return weighted_; }

    int docIndex(const std::string &docId) const;  // -1 if absent
    int termIndex(const std::string &term) const;  // -1 if absent
    double value(const std::string &docId, const std::string &term) const;

private:
    std::vector<std::string> docIds_;
    std::vector<std::string> terms_;
    Eigen::SparseMatrix<double, Eigen::RowMajor> values_;
    bool weighted_ = false;
};

TermMatrix build_term_matrix(const std::map<std::string, std::string> &docs,
                             const StopwordSet &stopwords, int minLen = 2);

/// (1 + ln tf) * ln(N / df) weighting followed by row normalisation to unit
/// Euclidean length. Terms present in every document weigh zero.
TermMatrix tfidf_normalize(const TermMatrix &raw);

/// Per community: mean of the member rows, then the top `topTerms` terms by
/// mean value (descending, ties lexicographic). Zero-valued terms are never
/// emitted, so lists may be shorter than topTerms. Throws DataError when a
/// community references a group with no row.
std::map<int, std::vector<std::string>> label_communities(const TermMatrix &m, const Cover &cover,
                                                          int topTerms);

/// Ranked labels per community from the name fields and from the
/// description fields.
struct LabelSet {
    int topTerms = 10;
    std::map<int, std::vector<std::string>> nameLabels;
    std::map<int, std::vector<std::string>> descriptionLabels;
};

LabelSet make_label_set(const TermMatrix &names, const TermMatrix &descriptions,
                        const Cover &cover, int topTerms);

} // namespace comem
