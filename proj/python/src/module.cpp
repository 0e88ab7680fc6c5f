#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "plateful/cli.hpp"
#include "plateful/search.hpp"
#include "plateful/server.hpp"

namespace py = pybind11;
using namespace plateful;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "plateful");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::shared_ptr<Api> open_api(const std::string& reviews, const std::string& services,
                              const std::string& embeddings, std::size_t embed_dim, const std::string& ranker,
                              const std::string& sentiment)
{
    EngineInputs in;
    in.reviews = load_reviews(reviews);
    if (!services.empty()) {
        in.services = load_services(services);
        check_service_refs(in.reviews, in.services);
    }
    if (!embeddings.empty()) {
        in.embeddings = std::make_shared<const EmbeddingTable>(load_embeddings(embeddings, embed_dim));
    }
    if (!ranker.empty()) {
        in.ranker = std::make_shared<const RankerModel>(load_ranker(ranker));
    }
    if (!sentiment.empty()) {
        in.sentiment = std::make_shared<const SentimentClassifier>(load_classifier(sentiment));
    }
    return std::make_shared<Api>(EngineState::build(std::move(in)));
}

// Responses cross the boundary as (status, JSON text); the Python side parses.
std::pair<int, std::string> reply(const ApiResponse& r)
{
    return {r.status, r.body.dump()};
}

}  // namespace

PYBIND11_MODULE(_plateful, m)
{
    auto error = py::register_exception<Error>(m, "Error");
    py::register_exception<IoError>(m, "IoError", error);
    py::register_exception<DataError>(m, "DataError", error);
    py::register_exception<ArgumentError>(m, "ArgumentError", error);
    py::register_exception<ModelMissingError>(m, "ModelMissingError", error);

    m.def("tokenize", [](const std::string& text) { return tokenize(text); });
    m.def("extract_tags", [](const std::string& text) {
        std::vector<std::string> out;
        for (const auto& p : extract_pairs_from_text(text)) {
            out.push_back(p.text());
        }
        return out;
    });
    m.def("cosine", [](const std::vector<double>& u, const std::vector<double>& v) { return cosine(u, v); });
    m.def("average_precision_at_k",
          [](const std::vector<std::string>& ranked, const std::set<std::string>& relevant, std::size_t k) {
              return average_precision_at_k(ranked, relevant, k);
          });
    m.def("reciprocal_rank", [](const std::vector<std::string>& ranked, const std::set<std::string>& relevant) {
        return reciprocal_rank(ranked, relevant);
    });

    m.def(
        "lexical_search",
        [](const std::vector<std::pair<std::string, std::string>>& docs, const std::string& query,
           const std::string& scorer, std::size_t k) {
            std::vector<IndexedDoc> indexed;
            for (const auto& [id, text] : docs) {
                indexed.push_back({id, tokenize(text)});
            }
            auto index = build_index(indexed, "text");
            if (scorer != "tfidf" && scorer != "bm25") {
                throw ArgumentError("unknown scorer " + scorer);
            }
            Scorer s = scorer == "tfidf" ? Scorer::tfidf : Scorer::bm25;
            std::vector<std::pair<std::string, double>> out;
            for (const auto& d : search_field(index, Bm25Params{}, tokenize(query), k, s)) {
                out.emplace_back(d.doc_id, d.score);
            }
            return out;
        },
        py::arg("docs"), py::arg("query"), py::arg("scorer") = "bm25", py::arg("k") = 10);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            auto r = cli(args);
            return py::make_tuple(r.code, r.out, r.err);
        },
        py::arg("args"));

    py::class_<Api, std::shared_ptr<Api>>(m, "_Api")
        .def(py::init(&open_api), py::arg("reviews"), py::arg("services") = "", py::arg("embeddings") = "",
             py::arg("embed_dim") = 50, py::arg("ranker") = "", py::arg("sentiment") = "")
        .def("health", [](const Api& a) { return reply(a.health()); })
        .def("list_services", [](const Api& a) { return reply(a.list_services()); })
        .def("list_reviews",
             [](const Api& a, const std::string& id, const QueryParams& p) { return reply(a.list_reviews(id, p)); })
        .def("search", [](const Api& a, const QueryParams& p) { return reply(a.search(p)); })
        .def("submit_review", [](Api& a, const std::string& body) { return reply(a.submit_review(body)); });
}
