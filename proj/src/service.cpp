#include "cnlkit/service.hpp"

#include "cnlkit/error.hpp"

#include <httplib.h>
#include <json.hpp>

namespace cnl {

using json = nlohmann::json;

namespace {

struct BadRequest {
    std::string code, message;
};

Reply reply(int status, const json& j) { return Reply{status, j.dump()}; }

Reply error_reply(int status, const std::string& code, const std::string& message) {
    return reply(status, json{{"error", {{"code", code}, {"message", message}}}});
}

std::vector<std::string> tokens_of(const json& req) {
    if (!req.contains("tokens")) return {};
    const auto& t = req.at("tokens");
    if (!t.is_array()) throw BadRequest{"bad_request", "\"tokens\" must be an array of strings"};
    std::vector<std::string> out;
    for (const auto& x : t) {
        if (!x.is_string()) throw BadRequest{"bad_request", "\"tokens\" must be an array of strings"};
        out.push_back(x.get<std::string>());
    }
    return out;
}

std::string string_field(const json& req, const char* key, bool required) {
    if (!req.contains(key)) {
        if (required) throw BadRequest{"bad_request", std::string("missing \"") + key + "\""};
        return {};
    }
    if (!req.at(key).is_string()) throw BadRequest{"bad_request", std::string("\"") + key + "\" must be a string"};
    return req.at(key).get<std::string>();
}

std::size_t limit_of(const json& req, std::size_t dflt) {
    if (!req.contains("limit")) return dflt;
    if (!req.at("limit").is_number_unsigned()) throw BadRequest{"bad_request", "\"limit\" must be a non-negative integer"};
    return req.at("limit").get<std::size_t>();
}

json edge_json(const Edge& e, const Grammar& g) {
    json j{{"id", e.id}, {"from", e.from}, {"to", e.to}, {"cat", e.cat}, {"dot", e.dot}};
    const std::string* next = e.next(g);
    j["complete"] = next == nullptr;
    if (next) j["next"] = *next;
    return j;
}

json answer_json(const Answer& a) {
    const auto& r = a.result;
    json answers = json::array();
    for (const auto& b : r.answers) {
        json row = json::object();
        for (const auto& [v, t] : b) row[v] = lpda::print_term(t);
        answers.push_back(std::move(row));
    }
    json prov = json::array();
    for (const auto& ps : r.provenance) {
        json row = json::array();
        for (const auto& p : ps) row.push_back({{"label", p.label}, {"source", p.source}});
        prov.push_back(std::move(row));
    }
    return json{{"goal", a.goal},
                {"status", lpda::status_name(r.status)},
                {"ground", r.ground},
                {"answers", std::move(answers)},
                {"provenance", std::move(prov)},
                {"undecided", r.undefined_instances},
                {"inconsistent", r.inconsistent}};
}

} // namespace

std::string to_json(const Answer& a) { return answer_json(a).dump(); }

Service::Service(std::shared_ptr<const Resources> res) : res_(std::move(res)) {}

std::shared_ptr<Service::Slot> Service::slot(const std::string& key) {
    std::lock_guard lock(registry_);
    auto& s = sessions_[key];
    if (!s) s = std::make_shared<Slot>(res_);
    return s;
}

std::size_t Service::session_count() const {
    std::lock_guard lock(registry_);
    return sessions_.size();
}

Reply Service::handle(std::string_view method, std::string_view path, std::string_view body,
                      std::string_view session_header) {
    if (method == "GET" && path == "/health")
        return reply(200, json{{"status", "ok"}, {"sessions", session_count()}});
    if (method != "POST") return error_reply(405, "method_not_allowed", std::string(method) + " " + std::string(path));

    json req;
    if (body.empty()) {
        req = json::object();
    } else {
        try {
            req = json::parse(body);
        } catch (const json::parse_error& e) {
            return error_reply(400, "malformed_json", e.what());
        }
    }
    if (!req.is_object()) return error_reply(400, "malformed_json", "request body must be a JSON object");

    try {
        std::string key = string_field(req, "session", false);
        if (key.empty()) key = std::string(session_header);
        if (key.empty()) key = "default";
        const Resources& r = *res_;

        if (path == "/parse") {
            auto tokens = tokens_of(req);
            json out{{"edges", json::array()}, {"trees", json::array()}, {"errors", json::array()}};
            try {
                Chart c = parse(r.grammar, r.lexicon, tokens);
                for (const Edge* e : c.edges()) out["edges"].push_back(edge_json(*e, r.grammar));
                for (const auto& t : extract_trees(c, limit_of(req, 64))) out["trees"].push_back(t.str());
                out["complete"] = sentence_complete(c);
            } catch (const Error& e) {
                out["errors"].push_back({{"code", errc_name(e.code())}, {"message", e.what()}});
                out["complete"] = false;
            }
            return reply(200, out);
        }
        if (path == "/lookahead") {
            auto tokens = tokens_of(req);
            Chart c = parse(r.grammar, r.lexicon, tokens);
            json cats = json::array(), words = json::array();
            std::set<std::string> seen;
            for (const auto& s : lookahead(c, limit_of(req, 8))) {
                cats.push_back(s.category);
                for (const auto& w : s.words)
                    if (seen.insert(w).second) words.push_back(w);
            }
            return reply(200, json{{"categories", cats}, {"words", words}, {"complete", sentence_complete(c)}});
        }
        if (path == "/sentence") {
            const std::string text = string_field(req, "text", true);
            const std::string note = string_field(req, "annotation", false);
            auto s = slot(key);
            std::lock_guard lock(s->m);
            auto [rec, frag] = s->session.add(text, note);
            json out{{"id", rec.id}, {"mode", mode_name(rec.mode)}, {"form", rec.form}, {"drs", frag}};
            if (rec.exception) out["exception_to"] = rec.exception->targets;
            if (!rec.cancel_targets.empty()) out["cancels"] = rec.cancel_targets;
            return reply(200, out);
        }
        if (path == "/document") {
            const std::string text = string_field(req, "text", true);
            auto s = slot(key);
            std::lock_guard lock(s->m);
            s->session.load(text);
            json ids = json::array();
            for (const auto& rec : s->session.current()->document.records) ids.push_back(rec.id);
            return reply(200, json{{"ids", ids}});
        }
        if (path == "/translate") {
            std::shared_ptr<const Snapshot> snap;
            {
                auto s = slot(key);
                std::lock_guard lock(s->m);
                snap = s->session.current();
            }
            return reply(200, json{{"program", snap->translation.text()},
                                   {"drs", print_discourse(snap->document.discourse)},
                                   {"notices", snap->translation.notices}});
        }
        if (path == "/query") {
            const std::string goal = string_field(req, "goal", true);
            std::shared_ptr<const Snapshot> snap;
            {
                auto s = slot(key);
                std::lock_guard lock(s->m);
                snap = s->session.snapshot();
            }
            // the engine runs outside the lock on an immutable snapshot
            return reply(200, answer_json(ask(*snap, r, goal)));
        }
        if (path == "/reset") {
            auto s = slot(key);
            std::lock_guard lock(s->m);
            s->session.clear();
            return reply(200, json{{"status", "ok"}});
        }
        return error_reply(404, "not_found", std::string(path));
    } catch (const BadRequest& e) {
        return error_reply(400, e.code, e.message);
    } catch (const Error& e) {
        return error_reply(e.code() == Errc::no_knowledge_base ? 409 : 422, errc_name(e.code()), e.what());
    }
}

struct HttpServer::Impl {
    Service* svc;
    httplib::Server server;
};

HttpServer::HttpServer(Service& svc) : impl_(std::make_unique<Impl>()) {
    impl_->svc = &svc;
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
        Reply r = impl_->svc->handle(req.method, req.path, req.body, req.get_header_value("X-Session"));
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    impl_->server.Get(".*", route);
    impl_->server.Post(".*", route);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        int p = impl_->server.bind_to_any_port(host);
        if (p < 0) throw Error(Errc::validation, "cannot bind " + host);
        return p;
    }
    if (!impl_->server.bind_to_port(host, port)) throw Error(Errc::validation, "cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_->server.is_running()) impl_->server.stop();
}

} // namespace cnl
