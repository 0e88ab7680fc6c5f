#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <json.hpp>

#include "plateful/engine.hpp"

namespace plateful {

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

using QueryParams = std::map<std::string, std::string>;

/// JSON API over an engine snapshot. Readers take the current snapshot and
/// never block each other; submissions are serialized, build a complete new
/// snapshot and swap it in.
class Api {
  public:
    explicit Api(std::shared_ptr<const EngineState> state);

    std::shared_ptr<const EngineState> snapshot() const;

    ApiResponse health() const;
    ApiResponse list_services() const;
    ApiResponse list_reviews(const std::string& service_id, const QueryParams& params) const;
    ApiResponse search(const QueryParams& params) const;
    ApiResponse submit_review(const std::string& body);

  private:
    mutable std::mutex m_snapshot_mutex;
    std::mutex m_writer_mutex;
    std::shared_ptr<const EngineState> m_state;
};

/// Serves an Api over HTTP until stop() is called.
class HttpServer {
  public:
    explicit HttpServer(std::shared_ptr<Api> api);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds `port` (0 picks a free one) and returns the bound port, or -1.
    int bind(const std::string& host, int port);
    /// Blocks serving requests on the bound socket.
    bool serve();
    void stop();

  private:
    struct Impl;
    std::unique_ptr<Impl> m_impl;
};

}  // namespace plateful
