#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

// Page content -> L2-normalized TF-IDF vectors, plus the cosine distance
// used for type clustering.
namespace scamtrace::textfeat {

using TokenList = std::vector<std::string>;

struct TfidfModel {
    std::map<std::string, std::uint32_t> vocabulary;
    std::size_t doc_count = 0;
    std::map<std::string, std::size_t> doc_freq;
};

struct SparseVector {
    // (index, weight) entries sorted by index; stored weights are > 0.
    std::vector<std::pair<std::uint32_t, double>> entries;
    std::uint32_t dimension = 0;

    double norm() const;
    bool empty() const { return entries.empty(); }
};

// Lowercase, split on Unicode whitespace, strip non-[a-z0-9], drop empty /
// digit-bearing / stop-word / address tokens (address check runs on the
// original token before any stripping).
TokenList preprocess(const std::string& text, const std::set<std::string>& stop_words);

TfidfModel fit_tfidf(const std::vector<TokenList>& corpus);  // throws EmptyCorpus

// tf * (ln((1+N)/(1+df)) + 1), L2-normalized; unseen terms ignored.
SparseVector transform(const TfidfModel& model, const TokenList& doc);

double idf(const TfidfModel& model, const std::string& term);

// 1 - dot(u, v); 1 when either vector is empty. Throws DimensionMismatch.
double cosine_distance(const SparseVector& u, const SparseVector& v);

// The default English stop-word list (same content as data/stopwords_en.txt).
const std::set<std::string>& default_stop_words();

}  // namespace scamtrace::textfeat
