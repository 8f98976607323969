#pragma once

#include "cnlkit/session.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

namespace cnl {

// Same shape as the /query response.
std::string to_json(const Answer& a);

struct Reply {
    int status = 200;
    std::string body;  // JSON
};

// JSON endpoints over per-token sessions. Transport-free so it can be driven
// directly; HttpServer puts it on a socket.
class Service {
public:
    explicit Service(std::shared_ptr<const Resources> res);

    // `session_header` is the X-Session value, used when the body has no
    // "session" field.
    Reply handle(std::string_view method, std::string_view path, std::string_view body,
                 std::string_view session_header = {});

    std::size_t session_count() const;

private:
    struct Slot {
        std::mutex m;  // serializes document mutations
        Session session;
        explicit Slot(std::shared_ptr<const Resources> r) : session(std::move(r)) {}
    };
    std::shared_ptr<Slot> slot(const std::string& key);

    std::shared_ptr<const Resources> res_;
    mutable std::mutex registry_;
    std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

class HttpServer {
public:
    explicit HttpServer(Service& svc);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // port 0 picks a free one; returns the bound port.
    int bind(const std::string& host, int port);
    void run();  // blocks until stop()
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace cnl
