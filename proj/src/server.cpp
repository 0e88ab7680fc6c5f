#include "plateful/server.hpp"

#include <algorithm>
#include <charconv>
#include <ctime>
#include <optional>

#include <httplib.h>

#include "plateful/search.hpp"

namespace plateful {

using nlohmann::json;

namespace {

ApiResponse error_response(int status, const std::string& message)
{
    return {status, json{{"error", message}}};
}

std::optional<long long> parse_int(const std::string& s)
{
    long long v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

json tags_json(const std::vector<ColoredTag>& tags)
{
    json out = json::array();
    for (const auto& t : tags) {
        out.push_back({{"text", t.text()},
                       {"polarity", std::string(to_string(t.polarity))},
                       {"negated", t.pair.negated},
                       {"count", t.count}});
    }
    return out;
}

json service_json(const FoodService& s)
{
    return {{"id", s.id}, {"name", s.name}, {"categories", s.categories}, {"location", s.location}};
}

json review_json(const Review& r, const ReviewInsight& insight)
{
    return {{"id", r.id},
            {"service_id", r.service_id},
            {"text", r.text},
            {"categories", r.categories},
            {"timestamp", r.timestamp},
            {"sentiment_class", insight.sentiment_class},
            {"polarity", std::string(to_string(insight.polarity))},
            {"tags", tags_json(insight.tags)}};
}

std::optional<std::string> param(const QueryParams& params, const std::string& key)
{
    auto it = params.find(key);
    if (it == params.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::string fresh_review_id(const EngineState& state)
{
    for (std::size_t n = state.reviews().size() + 1;; ++n) {
        std::string id = "user-" + std::to_string(n);
        if (state.find_review(id) == nullptr) {
            return id;
        }
    }
}

}  // namespace

Api::Api(std::shared_ptr<const EngineState> state) : m_state(std::move(state))
{
    if (!m_state) {
        throw ArgumentError("engine state is required");
    }
}

std::shared_ptr<const EngineState> Api::snapshot() const
{
    std::lock_guard lock(m_snapshot_mutex);
    return m_state;
}

ApiResponse Api::health() const
{
    return {200, json{{"status", "ok"}}};
}

ApiResponse Api::list_services() const
{
    auto state = snapshot();
    json out = json::array();
    for (const auto& s : state->services()) {
        out.push_back(service_json(s));
    }
    return {200, out};
}

ApiResponse Api::list_reviews(const std::string& service_id, const QueryParams& params) const
{
    auto state = snapshot();
    const FoodService* service = state->find_service(service_id);
    if (service == nullptr) {
        return error_response(404, "unknown service '" + service_id + "'");
    }
    long long page = 1;
    long long page_size = 10;
    if (auto p = param(params, "page")) {
        auto v = parse_int(*p);
        if (!v || *v < 1) {
            return error_response(400, "page must be a positive integer");
        }
        page = *v;
    }
    if (auto p = param(params, "page_size")) {
        auto v = parse_int(*p);
        if (!v || *v < 1 || *v > 1000) {
            return error_response(400, "page_size must be an integer in 1..1000");
        }
        page_size = *v;
    }

    std::vector<const Review*> owned;
    for (const auto& r : state->reviews()) {
        if (r.service_id == service_id) {
            owned.push_back(&r);
        }
    }
    std::sort(owned.begin(), owned.end(), [](const Review* a, const Review* b) {
        if (a->timestamp != b->timestamp) {
            return a->timestamp > b->timestamp;
        }
        return a->id < b->id;
    });

    json reviews = json::array();
    auto first = static_cast<unsigned long long>(page - 1) * static_cast<unsigned long long>(page_size);
    for (auto i = first; i < owned.size() && i < first + static_cast<unsigned long long>(page_size); ++i) {
        reviews.push_back(review_json(*owned[i], state->insight(owned[i]->id)));
    }
    return {200, json{{"service", service_json(*service)},
                      {"page", page},
                      {"page_size", page_size},
                      {"total", owned.size()},
                      {"reviews", reviews}}};
}

ApiResponse Api::search(const QueryParams& params) const
{
    auto q = param(params, "q");
    if (!q) {
        return error_response(400, "missing query parameter 'q'");
    }
    SearchConfig config;
    if (auto m = param(params, "mode")) {
        auto mode = parse_mode(*m);
        if (!mode) {
            return error_response(400, "unknown mode '" + *m + "'");
        }
        config.mode = *mode;
    }
    if (auto k = param(params, "k")) {
        auto v = parse_int(*k);
        if (!v || *v < 1 || *v > 1000) {
            return error_response(400, "k must be an integer in 1..1000");
        }
        config.result_count = static_cast<std::size_t>(*v);
        config.candidate_depth = std::max(config.candidate_depth, config.result_count);
    }

    auto state = snapshot();
    std::vector<SearchResult> results;
    try {
        results = run_query(*q, config, *state);
    } catch (const ModelMissingError& e) {
        return error_response(409, e.what());
    }
    json out = json::array();
    for (const auto& r : results) {
        out.push_back({{"doc_id", r.doc_id},
                       {"rank", r.rank},
                       {"score", r.score},
                       {"snippet", r.snippet},
                       {"tags", tags_json(state->insight(r.doc_id).tags)}});
    }
    return {200, json{{"mode", to_string(config.mode)}, {"results", out}}};
}

ApiResponse Api::submit_review(const std::string& body)
{
    json obj;
    try {
        obj = json::parse(body);
    } catch (const json::parse_error&) {
        return error_response(400, "body is not valid JSON");
    }
    if (!obj.is_object()) {
        return error_response(400, "body must be a JSON object");
    }
    auto text = obj.find("text");
    if (text == obj.end() || !text->is_string() || text->get<std::string>().empty()) {
        return error_response(400, "field 'text' must be a nonempty string");
    }
    auto service_id = obj.find("service_id");
    if (service_id == obj.end() || !service_id->is_string()) {
        return error_response(400, "field 'service_id' must be a string");
    }
    if (obj.contains("id") && (!obj["id"].is_string() || obj["id"].get<std::string>().empty())) {
        return error_response(400, "field 'id' must be a nonempty string");
    }
    if (obj.contains("categories")) {
        const auto& c = obj["categories"];
        if (!c.is_array() || !std::all_of(c.begin(), c.end(), [](const json& x) { return x.is_string(); })) {
            return error_response(400, "field 'categories' must be a list of strings");
        }
    }
    if (obj.contains("timestamp") && !obj["timestamp"].is_number_integer()) {
        return error_response(400, "field 'timestamp' must be an integer");
    }

    std::lock_guard writer(m_writer_mutex);
    auto state = snapshot();
    const SentimentClassifier* classifier = state->sentiment();
    if (classifier == nullptr) {
        return error_response(409, "no sentiment model loaded");
    }
    const FoodService* service = state->find_service(service_id->get<std::string>());
    if (service == nullptr) {
        return error_response(404, "unknown service '" + service_id->get<std::string>() + "'");
    }

    Review review;
    review.id = obj.contains("id") ? obj["id"].get<std::string>() : fresh_review_id(*state);
    if (state->find_review(review.id) != nullptr) {
        return error_response(400, "review id '" + review.id + "' already exists");
    }
    review.service_id = service->id;
    review.text = text->get<std::string>();
    review.categories = dedup_categories(obj.contains("categories")
                                             ? obj["categories"].get<std::vector<std::string>>()
                                             : service->categories);
    review.timestamp = obj.contains("timestamp") ? obj["timestamp"].get<std::int64_t>()
                                                 : static_cast<std::int64_t>(std::time(nullptr));
    Prediction prediction = classifier->predict(review.text);
    review.label = prediction.star_class;

    auto next = state->with_review(review);
    {
        std::lock_guard lock(m_snapshot_mutex);
        m_state = next;
    }
    json out = review_json(*next->find_review(review.id), next->insight(review.id));
    out["probabilities"] = prediction.probabilities;
    return {201, out};
}

struct HttpServer::Impl {
    std::shared_ptr<Api> api;
    httplib::Server server;
};

namespace {

QueryParams flatten(const httplib::Params& params)
{
    QueryParams out;
    for (const auto& [k, v] : params) {
        out.emplace(k, v);  // first value wins
    }
    return out;
}

void reply(httplib::Response& res, const ApiResponse& r)
{
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json; charset=utf-8");
}

}  // namespace

HttpServer::HttpServer(std::shared_ptr<Api> api) : m_impl(std::make_unique<Impl>())
{
    m_impl->api = std::move(api);
    auto& svr = m_impl->server;
    Api* a = m_impl->api.get();
    svr.Get("/api/health", [a](const httplib::Request&, httplib::Response& res) { reply(res, a->health()); });
    svr.Get("/api/services",
            [a](const httplib::Request&, httplib::Response& res) { reply(res, a->list_services()); });
    svr.Get(R"(/api/services/([^/]+)/reviews)", [a](const httplib::Request& req, httplib::Response& res) {
        reply(res, a->list_reviews(req.matches[1].str(), flatten(req.params)));
    });
    svr.Get("/api/search", [a](const httplib::Request& req, httplib::Response& res) {
        reply(res, a->search(flatten(req.params)));
    });
    svr.Post("/api/reviews",
             [a](const httplib::Request& req, httplib::Response& res) { reply(res, a->submit_review(req.body)); });
    svr.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            message = e.what();
        } catch (...) {
        }
        reply(res, error_response(500, message));
    });
    svr.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) {
            reply(res, error_response(res.status, res.status == 404 ? "not found" : "request failed"));
        }
    });
}

HttpServer::~HttpServer()
{
    stop();
}

int HttpServer::bind(const std::string& host, int port)
{
    if (port == 0) {
        return m_impl->server.bind_to_any_port(host);
    }
    return m_impl->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::serve()
{
    return m_impl->server.listen_after_bind();
}

void HttpServer::stop()
{
    m_impl->server.stop();
}

}  // namespace plateful
