#include "scamtrace/fetch.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "scamtrace/corpus.hpp"
#include "scamtrace/errors.hpp"

namespace scamtrace::fetch {

namespace {

std::string encode_query(const std::string& q) {
    static const char* hexd = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : q) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hexd[c >> 4];
            out += hexd[c & 0xf];
        }
    }
    return out;
}

// The result link may be absolute; only its path is fetched from the same
// endpoint the search ran against.
std::string result_path(const std::string& url) {
    auto scheme = url.find("://");
    if (scheme == std::string::npos) return url.empty() || url[0] != '/' ? "/" + url : url;
    auto slash = url.find('/', scheme + 3);
    return slash == std::string::npos ? "/" : url.substr(slash);
}

}  // namespace

std::vector<WebsiteSnapshot> fetch_domain_snapshots(const std::string& host, int port,
                                                    const std::string& domain) {
    httplib::Client client(host, port);
    client.set_connection_timeout(5);
    client.set_read_timeout(10);

    auto search = client.Get("/search?q=" + encode_query("domain:" + domain));
    if (!search || search->status != 200)
        throw IoError("search request failed for " + domain);

    nlohmann::json body;
    try {
        body = nlohmann::json::parse(search->body);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedRecord(std::string("bad search response: ") + e.what());
    }
    if (!body.contains("results") || !body["results"].is_array())
        throw MalformedRecord("search response has no results array");

    std::vector<WebsiteSnapshot> out;
    for (const auto& hit : body["results"]) {
        if (!hit.contains("task") || !hit["task"].contains("time")) continue;
        nlohmann::json rec;
        rec["domain"] = domain;
        rec["snapshot_time"] = hit["task"]["time"];
        rec["page_text"] = "";
        if (hit.contains("page")) {
            if (hit["page"].contains("ip")) rec["ip"] = hit["page"]["ip"];
            if (hit["page"].contains("country")) rec["server_country"] = hit["page"]["country"];
        }
        if (hit.contains("result") && hit["result"].is_string()) {
            auto page = client.Get(result_path(hit["result"].get<std::string>()));
            if (page && page->status == 200) {
                nlohmann::json content = nlohmann::json::parse(page->body, nullptr, false);
                if (content.is_object()) {
                    if (content.contains("text")) rec["page_text"] = content["text"];
                    if (content.contains("html")) rec["raw_html"] = content["html"];
                } else {
                    rec["page_text"] = page->body;
                }
            }
        }
        out.push_back(corpus::parse_snapshot(rec.dump()));
    }
    return out;
}

}  // namespace scamtrace::fetch
