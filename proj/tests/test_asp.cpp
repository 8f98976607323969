#include "cnlkit/asp.hpp"
#include "cnlkit/error.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace cnl;
using namespace cnl::asp;

namespace {

std::string slurp(const std::string& rel) {
    std::ifstream in(std::string(CNLKIT_DATA_DIR) + "/" + rel);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::set<std::string>> solve_text(const std::string& text, bool project = false) {
    auto g = ground(parse_asp(text));
    std::vector<std::set<std::string>> out;
    for (const auto& m : stable_models(g)) {
        CHECK(verify_answer_set(g, m));
        std::set<std::string> s;
        for (const auto& t : render(g, m, project)) s.insert(t.str());
        out.push_back(std::move(s));
    }
    return out;
}

// Brute-force Gelfond-Lifschitz check written independently of the library.
struct MiniRule {
    int head;  // -1 constraint
    std::vector<int> pos, neg;
};

std::vector<std::set<int>> brute_stable(int n, const std::vector<MiniRule>& rules) {
    std::vector<std::set<int>> out;
    for (int mask = 0; mask < (1 << n); ++mask) {
        auto in = [&](int a) { return (mask >> a) & 1; };
        int lm = 0;
        for (bool ch = true; ch;) {
            ch = false;
            for (const auto& r : rules) {
                if (r.head < 0) continue;
                bool blocked = false;
                for (int b : r.neg) blocked |= in(b) != 0;
                if (blocked) continue;
                bool ok = true;
                for (int a : r.pos) ok &= ((lm >> a) & 1) != 0;
                if (ok && !((lm >> r.head) & 1)) {
                    lm |= 1 << r.head;
                    ch = true;
                }
            }
        }
        if (lm != mask) continue;
        bool viol = false;
        for (const auto& r : rules) {
            if (r.head >= 0) continue;
            bool body = true;
            for (int a : r.pos) body &= in(a) != 0;
            for (int b : r.neg) body &= in(b) == 0;
            viol |= body;
        }
        if (viol) continue;
        std::set<int> s;
        for (int a = 0; a < n; ++a)
            if (in(a)) s.insert(a);
        out.push_back(s);
    }
    return out;
}

} // namespace

TEST_CASE("range facts expand") {
    auto p = parse_asp("position(1..6).");
    REQUIRE(p.rules.size() == 6);
    CHECK(p.rules[0].head[0].str() == "position(1)");
    CHECK(p.rules[5].head[0].str() == "position(6)");
}

TEST_CASE("constraint and empty program parse") {
    auto p = parse_asp(":- allocated_to(olivier,6).");
    REQUIRE(p.rules.size() == 1);
    CHECK(p.rules[0].kind == Rule::Kind::constraint);
    CHECK(p.rules[0].head.empty());
    CHECK(parse_asp("").rules.empty());
    CHECK(parse_asp("% only a comment\n").rules.empty());
}

TEST_CASE("syntax errors carry line and column") {
    try {
        parse_asp("a.\nb :- c(.\n");
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::parse);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("column") != std::string::npos);
    }
}

TEST_CASE("choice syntax") {
    auto p = parse_asp("1 { a(X,Y) : d(Y) } 1 :- r(X).");
    REQUIRE(p.rules.size() == 1);
    const auto& r = p.rules[0];
    CHECK(r.kind == Rule::Kind::choice);
    CHECK(r.lower->str() == "1");
    CHECK(r.upper->str() == "1");
    REQUIRE(r.elements.size() == 1);
    CHECK(r.elements[0].condition.size() == 1);
}

TEST_CASE("reduct examples") {
    auto g = ground(parse_asp("q :- not p. p :- not q."));
    auto p = *g.atoms.find(Term::sym("p"));
    auto red = reduct(g, {p});
    REQUIRE(red.size() == 1);
    CHECK(red[0].head == p);
    CHECK(red[0].body.empty());

    auto g2 = ground(parse_asp("q :- not p."));
    auto red2 = reduct(g2, {});
    REQUIRE(red2.size() == 1);
    CHECK(g2.atoms.at(red2[0].head).str() == "q");

    auto g3 = ground(parse_asp("a. b :- a."));
    CHECK(reduct(g3, {}).size() == 2);
}

TEST_CASE("even and odd loops") {
    auto even = solve_text("q :- not p. p :- not q.");
    REQUIRE(even.size() == 2);
    CHECK(even[0] == std::set<std::string>{"p"});
    CHECK(even[1] == std::set<std::string>{"q"});
    CHECK(solve_text("p :- not p.").empty());
    // by the reduct definition q is supported: {q} is the unique model
    auto single = solve_text("q :- not p.");
    REQUIRE(single.size() == 1);
    CHECK(single[0] == std::set<std::string>{"q"});
}

TEST_CASE("strong negation consistency") {
    CHECK(solve_text("a. -a.").empty());
    auto m = solve_text("-a. b :- not a.");
    REQUIRE(m.size() == 1);
    CHECK(m[0] == std::set<std::string>{"-a", "b"});
}

TEST_CASE("disjunction is rejected at grounding") {
    CHECK_THROWS_AS(ground(parse_asp("a | b.")), Error);
}

TEST_CASE("unsafe variables are reported") {
    try {
        ground(parse_asp("p(X) :- not q(X)."));
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::unsafe_rule);
    }
}

TEST_CASE("coloring fixture has 27 models") {
    auto g = ground(parse_asp(slurp("asp/coloring.lp")));
    auto models = stable_models(g);
    CHECK(models.size() == 27);
    for (const auto& m : models) CHECK(verify_answer_set(g, m));
    CHECK(stable_models(g, 5).size() == 5);
}

TEST_CASE("marathon fixture") {
    auto models = solve_text(slurp("asp/marathon.lp"), true);
    REQUIRE(models.size() == 1);
    CHECK(models[0] == std::set<std::string>{"answer(ignace,1)", "answer(dominique,2)", "answer(pascal,3)",
                                             "answer(philippe,4)", "answer(olivier,5)", "answer(naren,6)"});
}

TEST_CASE("jobs fixture and cardinalities") {
    auto g = ground(parse_asp(slurp("asp/jobs.lp")));
    auto models = stable_models(g);
    REQUIRE(models.size() == 1);
    std::set<std::string> holds;
    for (const auto& t : render(g, models[0], false))
        if (t.name == "hold") holds.insert(t.str());
    CHECK(holds == std::set<std::string>{"hold(thelma,chef)", "hold(roberta,guard)", "hold(steve,nurse)",
                                         "hold(pete,operator)", "hold(steve,police)", "hold(roberta,teacher)",
                                         "hold(pete,actor)", "hold(thelma,boxer)"});
    for (const auto& r : g.rules) {
        if (r.kind != GroundRule::Kind::choice) continue;
        auto n = std::count_if(r.choice_heads.begin(), r.choice_heads.end(),
                               [&](int h) { return models[0].count(h) > 0; });
        CHECK(n == r.lower);
        CHECK(n == r.upper);
    }
}

TEST_CASE("care queries") {
    auto g = ground(parse_asp(slurp("asp/care.lp")));
    auto models = stable_models(g);
    REQUIRE(models.size() == 1);
    CHECK(asp_query(g, models, parse_query("-care(john,sam)")) == Answer::yes);
    CHECK(asp_query(g, models, parse_query("care(alice,sam)")) == Answer::unknown);
    CHECK(asp_query(g, models, parse_query("child(sam)")) == Answer::yes);
    CHECK(asp_query(g, models, parse_query("care(john,sam)")) == Answer::no);
    CHECK(asp_query(g, models, parse_query("child(sam), care(alice,sam)")) == Answer::unknown);
    auto s = render_line(g, models[0]);
    CHECK(s.find("ab(d(care(alice,sam)))") != std::string::npos);
    CHECK(s.find("-care(john,sam)") != std::string::npos);
    auto none = ground(parse_asp("p :- not p."));
    CHECK(asp_query(none, stable_models(none), parse_query("p")) == Answer::no_models);
}

TEST_CASE("builtins and arithmetic") {
    auto m = solve_text("n(1..4). big(X) :- n(X), X > 2. s(Y) :- n(X), Y = X + 10, X < 2.");
    REQUIRE(m.size() == 1);
    CHECK(m[0].count("big(3)"));
    CHECK(m[0].count("big(4)"));
    CHECK(!m[0].count("big(2)"));
    CHECK(m[0].count("s(11)"));
}

TEST_CASE("random normal programs agree with brute force") {
    std::mt19937 rng(7);
    for (int iter = 0; iter < 300; ++iter) {
        int n = 1 + static_cast<int>(rng() % 7);
        int nr = static_cast<int>(rng() % 9);
        std::vector<MiniRule> rules;
        std::string text;
        for (int k = 0; k < nr; ++k) {
            MiniRule r;
            r.head = (rng() % 6 == 0) ? -1 : static_cast<int>(rng() % n);
            int len = static_cast<int>(rng() % 3);
            for (int j = 0; j < len; ++j) {
                int a = static_cast<int>(rng() % n);
                if (rng() % 2) r.pos.push_back(a);
                else r.neg.push_back(a);
            }
            if (r.head < 0 && r.pos.empty() && r.neg.empty()) r.pos.push_back(0);
            std::string body;
            for (int a : r.pos) body += (body.empty() ? "" : ", ") + std::string("a") + std::to_string(a);
            for (int b : r.neg) body += (body.empty() ? "" : ", ") + std::string("not a") + std::to_string(b);
            text += (r.head >= 0 ? "a" + std::to_string(r.head) : std::string()) +
                    (body.empty() ? "" : " :- " + body) + ".\n";
            rules.push_back(r);
        }
        auto expected = brute_stable(n, rules);
        std::set<std::set<std::string>> want;
        for (const auto& m : expected) {
            std::set<std::string> s;
            for (int a : m) s.insert("a" + std::to_string(a));
            want.insert(s);
        }
        auto got = solve_text(text);
        std::set<std::set<std::string>> have(got.begin(), got.end());
        CHECK_MESSAGE(have == want, text);
        CHECK(have.size() == got.size());
        for (const auto& a : got)
            for (const auto& b : got)
                if (a != b)
                    CHECK_FALSE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    }
}
