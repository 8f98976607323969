#include "cnlkit/error.hpp"
#include "cnlkit/service.hpp"
#include "fixtures.hpp"

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <thread>

using namespace cnl;
using json = nlohmann::json;

namespace {

const std::string kData = CNLKIT_DATA_DIR;

std::shared_ptr<const Resources> shipped() {
    static auto r = Resources::load_default();
    return r;
}

std::shared_ptr<const Resources> toy() {
    static auto r = Resources::load(kData + "/cnl/lexicon.pl", kData + "/cnl/toy.grammar", kData + "/cnl/scales.txt");
    return r;
}

// A live server on an ephemeral port for the lifetime of the fixture.
struct LiveServer {
    Service svc;
    HttpServer http;
    int port;
    std::thread th;

    explicit LiveServer(std::shared_ptr<const Resources> r)
        : svc(std::move(r)), http(svc), port(http.bind("127.0.0.1", 0)), th([this] { http.run(); }) {
        httplib::Client c("127.0.0.1", port);
        for (int i = 0; i < 200 && !c.Get("/health"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    ~LiveServer() {
        http.stop();
        th.join();
    }

    struct Res {
        int status;
        json body;
    };
    Res post(const std::string& path, const std::string& body, const std::string& session = {}) {
        httplib::Client c("127.0.0.1", port);
        httplib::Headers h;
        if (!session.empty()) h.emplace("X-Session", session);
        auto r = c.Post(path, h, body, "application/json");
        REQUIRE(r);
        json j = json::parse(r->body);
        // every response survives serialize -> parse unchanged
        CHECK(json::parse(j.dump()) == j);
        return {r->status, j};
    }
    Res post(const std::string& path, const json& body, const std::string& session = {}) {
        return post(path, body.dump(), session);
    }
};

std::string run_cli(const std::string& args, int* rc) {
    std::string cmd = std::string(CNLKIT_CLI) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    int st = pclose(p);
    *rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return out;
}

} // namespace

TEST_CASE("health and malformed requests") {
    LiveServer s(shipped());
    httplib::Client c("127.0.0.1", s.port);
    auto h = c.Get("/health");
    REQUIRE(h);
    CHECK(h->status == 200);
    CHECK(json::parse(h->body)["status"] == "ok");

    auto bad = s.post("/parse", std::string("{\"tokens\": [\"Tom\""));
    CHECK(bad.status == 400);
    CHECK(bad.body["error"]["code"] == "malformed_json");
    CHECK(s.post("/parse", std::string("[1,2]")).body["error"]["code"] == "malformed_json");
    CHECK(s.post("/parse", json{{"tokens", "Tom"}}).status == 400);
    CHECK(s.post("/nowhere", json::object()).status == 404);
}

TEST_CASE("parse endpoint") {
    LiveServer s(shipped());
    auto empty = s.post("/parse", json{{"tokens", json::array()}});
    CHECK(empty.status == 200);
    CHECK(empty.body["trees"].empty());

    auto ok = s.post("/parse", json{{"tokens", {"Tom", "walks"}}});
    CHECK(ok.status == 200);
    CHECK(ok.body["trees"].size() >= 1);
    CHECK(ok.body["complete"] == true);
    CHECK_FALSE(ok.body["edges"].empty());

    auto typo = s.post("/parse", json{{"tokens", {"Tom", "wakls"}}});
    CHECK(typo.status == 200);
    REQUIRE(typo.body["errors"].size() == 1);
    CHECK(typo.body["errors"][0]["code"] == "unknown_word");
}

TEST_CASE("lookahead endpoint over the toy grammar") {
    LiveServer s(toy());
    auto r = s.post("/lookahead", json{{"tokens", {"Tom", "walks"}}});
    CHECK(r.status == 200);
    CHECK(r.body["categories"] == json::array({"Adv"}));
    CHECK(r.body["words"] == json::array({"slowly"}));
    CHECK(r.body["complete"] == true);

    auto start = s.post("/lookahead", json{{"tokens", json::array()}});
    CHECK(start.body["categories"] == json::array({"N"}));
    CHECK(start.body["complete"] == false);

    auto done = s.post("/lookahead", json{{"tokens", {"Tom", "walks", "slowly"}}});
    CHECK(done.body["categories"].empty());
    CHECK(done.body["complete"] == true);
}

TEST_CASE("discount queries over a loaded document") {
    LiveServer s(shipped());
    auto empty = s.post("/query", json{{"goal", "discount(Mary,salmon,?A)"}});
    CHECK(empty.status == 409);
    CHECK(empty.body["error"]["code"] == "no_knowledge_base");

    auto load = s.post("/document", json{{"text", fixtures::slurp("fixtures/discount.cnl")}});
    REQUIRE(load.status == 200);
    CHECK(load.body["ids"].size() == 18);

    auto mary = s.post("/query", json{{"goal", "discount(Mary,salmon,?A)"}});
    CHECK(mary.status == 200);
    CHECK(mary.body["answers"] == json::parse(R"([{"A":"5.00"}])"));

    auto john = s.post("/query", json{{"goal", "How much discount does John get for buying a coke?"}});
    CHECK(john.body["answers"] == json::parse(R"([{"Amount":"2.50"}])"));
    CHECK(john.body["provenance"][0][0]["label"] == "r2");
    CHECK(john.body["provenance"][0][0]["source"] == "9.m");

    auto lobster = s.post("/query", json{{"goal", "discount(John,lobster,?A)"}});
    CHECK(lobster.body["status"] == "unknown");
    CHECK(lobster.body["answers"].empty());

    auto junk = s.post("/query", json{{"goal", "discount(John,"}});
    CHECK(junk.status == 422);
    CHECK(junk.body["error"]["code"] == "parse_error");
}

TEST_CASE("sessions are keyed by field or header") {
    LiveServer s(shipped());
    CHECK(s.post("/sentence", json{{"text", "Tom walks."}, {"session", "a"}}).status == 200);
    CHECK(s.post("/query", json{{"goal", "walk(Tom)"}}, "a").body["status"] == "yes");
    CHECK(s.post("/query", json{{"goal", "walk(Tom)"}, {"session", "a"}}).body["status"] == "yes");
    CHECK(s.post("/query", json{{"goal", "walk(Tom)"}}, "b").status == 409);
}

TEST_CASE("committing sentences") {
    LiveServer s(shipped());
    auto a = s.post("/sentence", json{{"text", "Penguins are birds."}});
    CHECK(a.body["id"] == "p1.s1");
    CHECK(a.body["mode"] == "defeasible");
    CHECK(a.body["drs"].get<std::string>().find("IF") != std::string::npos);
    auto b = s.post("/sentence", json{{"text", "Typically, birds fly."}});
    CHECK(b.body["id"] == "p1.s2");
    auto c = s.post("/sentence", json{{"text", "Penguins do not fly."}, {"annotation", "except"}});
    CHECK(c.body["id"] == "p1.s3");
    CHECK(c.body["exception_to"] == json::array({"p1.s2"}));

    auto dangling = s.post("/sentence", json{{"text", "Tweety does not fly."}, {"annotation", "exception to p9.s99"}});
    CHECK(dangling.status == 422);
    CHECK(dangling.body["error"]["code"] == "dangling_target");
    auto unparsable = s.post("/sentence", json{{"text", "Tweety fly birds the."}});
    CHECK(unparsable.status == 422);
    CHECK(unparsable.body["error"]["message"].get<std::string>().find("expected one of") != std::string::npos);

    // rejected sentences do not consume ids
    CHECK(s.post("/sentence", json{{"text", "Tweety is a bird."}}).body["id"] == "p1.s4");
    CHECK(s.post("/query", json{{"goal", "fly(Tweety)"}}).body["status"] == "yes");
    CHECK(s.post("/sentence", json{{"text", "Tweety is a penguin."}}).status == 200);
    auto after = s.post("/query", json{{"goal", "fly(Tweety)"}});
    CHECK(after.body["status"] == "no");
    CHECK(after.body["inconsistent"] == false);

    // ids stay unique after a reset
    CHECK(s.post("/reset", json::object()).status == 200);
    CHECK(s.post("/sentence", json{{"text", "Tom walks."}}).body["id"] == "p1.s6");
}

TEST_CASE("composed and batch translations agree byte for byte") {
    LiveServer s(shipped());
    const std::string doc = fixtures::slurp("fixtures/discount.cnl");
    for (const auto& raw : split_document(doc)) {
        std::string note;
        for (const auto& w : raw.annotation) note += (note.empty() ? "" : " ") + w;
        auto r = s.post("/sentence", json{{"text", raw.id + " " + raw.body}, {"annotation", note}});
        REQUIRE_MESSAGE(r.status == 200, r.body.dump());
        CHECK(r.body["id"] == raw.id);
    }
    auto composed = s.post("/translate", json::object()).body["program"].get<std::string>();

    int rc = -1;
    auto batch = run_cli("translate --no-drs " + kData + "/fixtures/discount.cnl", &rc);
    CHECK(rc == 0);
    CHECK(composed == batch);
    CHECK(composed == translate(process_document(doc, shipped()->lexicon, shipped()->grammar), shipped()->scales).text());
}

TEST_CASE("translate endpoint on an empty session") {
    LiveServer s(shipped());
    auto r = s.post("/translate", json::object());
    CHECK(r.status == 200);
    CHECK(r.body["program"] == "");
}

TEST_CASE("concurrent sessions") {
    LiveServer s(shipped());
    const std::string doc = fixtures::slurp("fixtures/discount.cnl");
    std::vector<std::thread> ts;
    std::atomic<int> good{0};
    for (int i = 0; i < 8; ++i)
        ts.emplace_back([&, i] {
            const std::string key = "k" + std::to_string(i % 3);
            httplib::Client c("127.0.0.1", s.port);
            httplib::Headers h{{"X-Session", key}};
            c.Post("/document", h, json{{"text", doc}}.dump(), "application/json");
            for (int k = 0; k < 5; ++k) {
                auto r = c.Post("/query", h, json{{"goal", "discount(Mary,salmon,?A)"}}.dump(), "application/json");
                if (r && r->status == 200 && json::parse(r->body)["answers"] == json::parse(R"([{"A":"5.00"}])")) ++good;
            }
        });
    for (auto& t : ts) t.join();
    CHECK(good == 40);
    CHECK(s.svc.session_count() == 3);
}

TEST_CASE("session save and restore") {
    Session a(shipped());
    a.load(fixtures::slurp("fixtures/tweety.cnl"));
    a.add("Tweety is a penguin.", "");
    Session b(shipped());
    b.restore(a.save());
    CHECK(b.current()->translation.text() == a.current()->translation.text());
    CHECK(b.add("Tom walks.", "").first.id != "p1.s5");
    CHECK_THROWS_AS(b.restore("{\"sentences\": 3}"), Error);
}

TEST_CASE("cli exit codes and messages") {
    int rc = -1;
    const std::string d = kData + "/fixtures/discount.cnl";
    auto out = run_cli("ask " + d + " \"How much discount does John get for buying a coke?\"", &rc);
    CHECK(rc == 0);
    CHECK(out.find("2.50") != std::string::npos);
    CHECK(out.find("r2/9.m") != std::string::npos);

    out = run_cli("ask " + d + " \"discount(John,lobster,?A)\"", &rc);
    CHECK(rc == 1);
    CHECK(out.find("unknown") != std::string::npos);

    out = run_cli("asp solve " + kData + "/asp/odd_loop.lp", &rc);
    CHECK(out.find("Answer") != std::string::npos);
    CHECK(rc == 0);

    out = run_cli("circ " + kData + "/circ/eagle.circ --entails \"fly(eagle)\"", &rc);
    CHECK(rc == 0);
    out = run_cli("circ " + kData + "/circ/eagle.circ --entails \"ab(eagle)\"", &rc);
    CHECK(rc == 1);

    std::string typo = fixtures::slurp("fixtures/discount.cnl");
    typo.replace(typo.find("lobster."), 7, "lobstre");
    const std::string path = std::string(CNLKIT_TMP_DIR) + "/typo.cnl";
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        std::fputs(typo.c_str(), f);
        std::fclose(f);
    }
    out = run_cli("translate " + path, &rc);
    CHECK(rc == 2);
    CHECK(out.find("unknown word 'lobstre'") != std::string::npos);
    CHECK(out.find("9.d") != std::string::npos);
    CHECK(out.find("expected one of") != std::string::npos);

    const std::string empty = std::string(CNLKIT_TMP_DIR) + "/empty.cnl";
    std::fclose(std::fopen(empty.c_str(), "w"));
    out = run_cli("translate " + empty, &rc);
    CHECK(rc == 0);
    CHECK(out.empty());

    out = run_cli("--grammar " + kData + "/cnl/toy.grammar parse Tom walks", &rc);
    CHECK(rc == 0);
    CHECK(out.find("next: Adv (slowly)") != std::string::npos);
}
