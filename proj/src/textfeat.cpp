#include "scamtrace/textfeat.hpp"

#include <algorithm>
#include <cmath>

#include "scamtrace/corpus.hpp"
#include "scamtrace/errors.hpp"

namespace scamtrace::textfeat {

namespace {

bool is_unicode_space(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0a: case 0x0b: case 0x0c: case 0x0d: case 0x20:
        case 0x85: case 0xa0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202f: case 0x205f: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200a;
    }
}

// Decodes one UTF-8 code point; malformed bytes decode as themselves.
char32_t next_codepoint(const std::string& s, std::size_t& i) {
    unsigned char c = s[i];
    int extra = 0;
    char32_t cp = c;
    if (c >= 0xf0) { extra = 3; cp = c & 0x07; }
    else if (c >= 0xe0) { extra = 2; cp = c & 0x0f; }
    else if (c >= 0xc0) { extra = 1; cp = c & 0x1f; }
    if (i + extra >= s.size()) { ++i; return c; }
    for (int k = 1; k <= extra; ++k) {
        unsigned char cc = s[i + k];
        if ((cc & 0xc0) != 0x80) { ++i; return c; }
        cp = (cp << 6) | (cc & 0x3f);
    }
    i += extra + 1;
    return cp;
}

}  // namespace

TokenList preprocess(const std::string& text, const std::set<std::string>& stop_words) {
    TokenList out;
    std::size_t i = 0;
    std::string raw;
    auto flush = [&] {
        if (raw.empty()) return;
        std::string token = std::move(raw);
        raw.clear();
        if (!corpus::extract_addresses(token).empty()) return;
        std::string norm;
        bool has_digit = false;
        for (char c : token) {
            unsigned char uc = static_cast<unsigned char>(c);
            if (std::isupper(uc)) c = static_cast<char>(std::tolower(uc));
            if (c >= 'a' && c <= 'z') {
                norm += c;
            } else if (c >= '0' && c <= '9') {
                norm += c;
                has_digit = true;
            }
        }
        if (norm.empty() || has_digit) return;
        if (stop_words.count(norm)) return;
        out.push_back(std::move(norm));
    };
    while (i < text.size()) {
        std::size_t start = i;
        char32_t cp = next_codepoint(text, i);
        if (is_unicode_space(cp)) {
            flush();
        } else {
            raw.append(text, start, i - start);
        }
    }
    flush();
    return out;
}

TfidfModel fit_tfidf(const std::vector<TokenList>& docs) {
    TfidfModel model;
    model.doc_count = docs.size();
    for (const auto& doc : docs) {
        std::set<std::string> seen(doc.begin(), doc.end());
        for (const auto& term : seen) ++model.doc_freq[term];
    }
    if (docs.empty() || model.doc_freq.empty())
        throw EmptyCorpus("no terms in corpus");
    std::uint32_t index = 0;
    for (const auto& [term, df] : model.doc_freq) model.vocabulary[term] = index++;
    return model;
}

double idf(const TfidfModel& model, const std::string& term) {
    auto it = model.doc_freq.find(term);
    if (it == model.doc_freq.end()) return 0.0;
    return std::log((1.0 + static_cast<double>(model.doc_count)) /
                    (1.0 + static_cast<double>(it->second))) +
           1.0;
}

SparseVector transform(const TfidfModel& model, const TokenList& doc) {
    std::map<std::string, std::size_t> counts;
    for (const auto& tok : doc)
        if (model.vocabulary.count(tok)) ++counts[tok];

    SparseVector vec;
    vec.dimension = static_cast<std::uint32_t>(model.vocabulary.size());
    for (const auto& [term, tf] : counts) {
        double w = static_cast<double>(tf) * idf(model, term);
        vec.entries.emplace_back(model.vocabulary.at(term), w);
    }
    std::sort(vec.entries.begin(), vec.entries.end());
    double n = vec.norm();
    if (n > 0)
        for (auto& [idx, w] : vec.entries) w /= n;
    return vec;
}

double SparseVector::norm() const {
    double sq = 0;
    for (const auto& [idx, w] : entries) sq += w * w;
    return std::sqrt(sq);
}

double cosine_distance(const SparseVector& u, const SparseVector& v) {
    if (u.dimension != v.dimension)
        throw DimensionMismatch("cosine_distance dimensions differ");
    if (u.empty() || v.empty()) return 1.0;
    double dot = 0;
    auto a = u.entries.begin();
    auto b = v.entries.begin();
    while (a != u.entries.end() && b != v.entries.end()) {
        if (a->first < b->first) ++a;
        else if (b->first < a->first) ++b;
        else { dot += a->second * b->second; ++a; ++b; }
    }
    return std::clamp(1.0 - dot, 0.0, 1.0);
}

}  // namespace scamtrace::textfeat
