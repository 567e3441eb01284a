#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scamtrace/analysis.hpp"
#include "scamtrace/chain.hpp"
#include "scamtrace/cli.hpp"
#include "scamtrace/io.hpp"
#include "scamtrace/clusterer.hpp"
#include "scamtrace/corpus.hpp"
#include "scamtrace/synth.hpp"
#include "scamtrace/textfeat.hpp"
#include "scamtrace/types.hpp"

namespace py = pybind11;
using namespace scamtrace;

namespace {

clusterer::Metric matrix_metric(const std::vector<std::vector<double>>& d) {
    return [&d](std::size_t i, std::size_t j) { return d[i][j]; };
}

std::vector<std::pair<std::string, std::string>> addresses_as_pairs(
    const std::set<CryptoAddress>& addrs) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& a : addrs) out.emplace_back(chain_name(a.chain), a.canonical);
    return out;
}

}  // namespace

PYBIND11_MODULE(_scamtrace, m) {
    m.doc() = "scam-website clustering and fund-flow forensics (C++ core)";

    m.def("extract_addresses", [](const std::string& text) {
        return addresses_as_pairs(corpus::extract_addresses(text));
    }, py::arg("text"), "Validated (chain, address) pairs found in free text");

    m.def("extract_analytics_ids", &corpus::extract_analytics_ids, py::arg("html"));
    m.def("decompose_email", &corpus::decompose_email, py::arg("email"));

    m.def("preprocess", [](const std::string& text,
                           const std::optional<std::set<std::string>>& stop_words) {
        return textfeat::preprocess(text, stop_words ? *stop_words
                                                     : textfeat::default_stop_words());
    }, py::arg("text"), py::arg("stop_words") = std::nullopt);

    m.def("tfidf_vectors", [](const std::vector<std::vector<std::string>>& docs) {
        auto model = textfeat::fit_tfidf(docs);
        std::vector<std::map<std::uint32_t, double>> out;
        for (const auto& doc : docs) {
            auto vec = textfeat::transform(model, doc);
            out.emplace_back(vec.entries.begin(), vec.entries.end());
        }
        return out;
    }, py::arg("docs"), "L2-normalized tf-idf vectors as {column: weight} dicts");

    m.def("cosine_distance_matrix", [](const std::vector<std::vector<std::string>>& docs) {
        auto model = textfeat::fit_tfidf(docs);
        std::vector<textfeat::SparseVector> vecs;
        for (const auto& doc : docs) vecs.push_back(textfeat::transform(model, doc));
        std::vector<std::vector<double>> d(docs.size(), std::vector<double>(docs.size(), 0.0));
        for (std::size_t i = 0; i < vecs.size(); ++i)
            for (std::size_t j = i + 1; j < vecs.size(); ++j)
                d[i][j] = d[j][i] = textfeat::cosine_distance(vecs[i], vecs[j]);
        return d;
    }, py::arg("docs"));

    m.def("dbscan", [](const std::vector<std::vector<double>>& distances, double eps,
                       std::size_t min_pts, unsigned threads) {
        return clusterer::dbscan(distances.size(), matrix_metric(distances), {eps, min_pts},
                                 threads).labels;
    }, py::arg("distances"), py::arg("eps"), py::arg("min_pts") = 5, py::arg("threads") = 1);

    m.def("select_eps", [](const std::vector<std::vector<double>>& distances, std::size_t k) {
        return clusterer::select_eps(distances.size(), matrix_metric(distances), k);
    }, py::arg("distances"), py::arg("k") = 5);

    m.def("adjusted_rand_index", [](const std::vector<int>& a, const std::vector<int>& b) {
        clusterer::ClusterAssignment ca, cb;
        ca.labels = a;
        cb.labels = b;
        return clusterer::adjusted_rand_index(ca, cb);
    }, py::arg("a"), py::arg("b"), "NOISE (-1) is scored as singleton clusters");

    m.def("pairwise_f1", [](const std::vector<int>& predicted, const std::vector<int>& truth) {
        clusterer::ClusterAssignment cp, ct;
        cp.labels = predicted;
        ct.labels = truth;
        return clusterer::pairwise_f1(cp, ct);
    }, py::arg("predicted"), py::arg("truth"));

    m.def("build_clusters", [](const std::string& transactions_jsonl_path) {
        auto txs = io::load_transactions(transactions_jsonl_path);
        auto clusters = chain::build_clusters(txs);
        std::vector<std::vector<std::string>> out;
        for (const auto& c : clusters) {
            std::vector<std::string> addrs;
            for (const auto& a : c.addresses) addrs.push_back(a.canonical);
            out.push_back(std::move(addrs));
        }
        return out;
    }, py::arg("transactions_jsonl_path"),
       "Common-spend clusters as address lists, from a transactions JSONL file");

    m.def("run_cli", [](const std::vector<std::string>& args) { return cli::run(args); },
          py::arg("args"), "Run a pipeline command; returns the exit code");
}
