#include "cnlkit/asp.hpp"
#include "cnlkit/error.hpp"
#include "cnlkit/lpda.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace cnl;
using namespace cnl::lpda;

namespace {

std::string slurp(const std::string& rel) {
    std::ifstream in(std::string(CNLKIT_DATA_DIR) + "/" + rel);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Truth t_of(const Engine& e, const char* lit) { return e.truth(parse_literal(lit)); }

} // namespace

TEST_CASE("lpda syntax round trip") {
    auto p = parse_lpda("@{r1} discount(?C,?P,?A) :- buy(?C,?P), beverage(?P), ?A is 1.50.\n"
                        "neg fly(?X) :- penguin(?X), not neg bird(?X).\n"
                        "@r2 neg stupendous(Mary).\n"
                        "opposes(p(?X), neg p(?X)).\n"
                        "student(#1).\n");
    REQUIRE(p.rules.size() == 5);
    CHECK(p.rules[0].defeasible());
    CHECK(print_rule(p.rules[0]) == "@{r1} discount(?C,?P,?A):-buy(?C,?P),beverage(?P),?A is 1.50.");
    CHECK(print_rule(p.rules[1]) == "neg fly(?X):-penguin(?X),not neg bird(?X).");
    CHECK(print_rule(p.rules[2]) == "@{r2} neg stupendous(Mary).");
    CHECK(print_rule(p.rules[4]) == "student(#1).");
    auto again = parse_lpda(print_program(p));
    CHECK(print_program(again) == print_program(p));
}

TEST_CASE("double negations normalize") {
    CHECK(print_term(parse_literal("neg neg p(a)")) == "p(a)");
    auto g = parse_goal("not not p(a), not neg q");
    auto& l0 = std::get<Literal>(g[0]);
    CHECK_FALSE(l0.naf);
    auto& l1 = std::get<Literal>(g[1]);
    CHECK(l1.naf);
    CHECK(l1.atom.is_strong_neg());
    CHECK_THROWS_AS(parse_lpda("not p :- q."), Error);
}

TEST_CASE("grounding with is") {
    auto g = ground(parse_lpda("buy(John,coke). beverage(coke).\n"
                               "@{r1} discount(?C,?P,?A) :- buy(?C,?P), beverage(?P), ?A is 1.50."));
    int count = 0;
    for (const auto& r : g.rules)
        if (r.handle >= 0) {
            ++count;
            CHECK(print_term(g.atoms.at(r.head)) == "discount(John,coke,1.50)");
        }
    CHECK(count == 1);
    auto facts = ground(parse_lpda("p(a)."));
    REQUIRE(facts.rules.size() == 1);
    CHECK(facts.rules[0].pos.empty());
}

TEST_CASE("safety errors") {
    try {
        ground(parse_lpda("p(?X) :- not q(?X)."));
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::unsafe_rule);
        CHECK(std::string(e.what()).find("?X") != std::string::npos);
    }
    CHECK_THROWS_AS(ground(parse_lpda("p(?Y) :- q(?X), ?Y > ?X.")), Error);
    CHECK_NOTHROW(ground(parse_lpda("q(1). p(?Y) :- q(?X), ?Y is ?X + 1.")));
}

TEST_CASE("reduce_defeasible shapes") {
    auto g = ground(parse_lpda("b(t). @{r1} f(t) :- b(t). g(t) :- b(t)."));
    auto np = reduce_defeasible(g);
    auto defeated = np.atoms.find(parse_literal("'$defeated'(handle(r1,f(t)))"));
    auto candidate = np.atoms.find(parse_literal("'$candidate'(handle(r1,f(t)))"));
    REQUIRE(defeated);
    REQUIRE(candidate);
    bool guarded = false, cand = false, definite = false;
    for (const auto& r : np.rules) {
        const auto head = print_term(np.atoms.at(r.head));
        if (head == "f(t)") guarded = r.neg == std::vector<int>{*defeated};
        if (r.head == *candidate) cand = r.neg.empty() && r.pos.size() == 1;
        if (head == "g(t)") definite = r.neg.empty();
    }
    CHECK(guarded);
    CHECK(cand);
    CHECK(definite);

    auto two = ground(parse_lpda("@{r} p(a). @{r} p(b)."));
    CHECK(two.handles.size() == 2);
    CHECK(print_term(two.handles[0].term) != print_term(two.handles[1].term));
}

TEST_CASE("wfm basics") {
    Engine loop(parse_lpda("p :- not p."));
    CHECK(t_of(loop, "p") == Truth::u);
    Engine q(parse_lpda("q :- not p."));
    CHECK(t_of(q, "q") == Truth::t);
    CHECK(t_of(q, "p") == Truth::f);
    Engine even(parse_lpda("a :- not b. b :- not a. c :- a."));
    CHECK(t_of(even, "a") == Truth::u);
    CHECK(t_of(even, "c") == Truth::u);
}

TEST_CASE("alternating fixpoint is monotone") {
    Engine e(parse_lpda(slurp("lpda/discount.lpda")));
    const auto& tr = e.model().trace;
    REQUIRE(!tr.empty());
    for (std::size_t i = 1; i < tr.size(); ++i) {
        CHECK(tr[i].first >= tr[i - 1].first);
        CHECK(tr[i].second <= tr[i - 1].second);
    }
}

TEST_CASE("discount program") {
    Engine e(parse_lpda(slurp("lpda/discount.lpda")));
    CHECK(e.consistent());
    CHECK(t_of(e, "discount(John,coke,2.50)") == Truth::t);
    CHECK(t_of(e, "discount(John,coke,1.50)") == Truth::f);
    CHECK(t_of(e, "discount(John,lobster,7.50)") == Truth::u);
    CHECK(t_of(e, "discount(John,lobster,5.00)") == Truth::u);
    CHECK(t_of(e, "discount(Mary,salmon,5.00)") == Truth::t);
    CHECK(t_of(e, "discount(Mary,salmon,5)") == Truth::t);
    CHECK(t_of(e, "'$refuted'(handle(r1,discount(John,coke,1.50)))") == Truth::t);

    auto coke = e.query("discount(John,coke,?A)");
    CHECK(coke.status == QueryResult::Status::yes);
    REQUIRE(coke.answers.size() == 1);
    CHECK(coke.answers[0].at("A").value == *Decimal::parse("2.50"));
    CHECK(coke.answers[0].at("A").value.str() == "2.50");
    REQUIRE(coke.provenance.size() == 1);
    REQUIRE(coke.provenance[0].size() == 1);
    CHECK(coke.provenance[0][0].label == "r2");

    auto lobster = e.query("discount(John,lobster,?A)");
    CHECK(lobster.status == QueryResult::Status::unknown);
    CHECK(lobster.answers.empty());
    CHECK(lobster.undefined_instances == 2);

    auto salmon = e.query("discount(Mary,salmon,?A)");
    REQUIRE(salmon.answers.size() == 1);
    CHECK(salmon.answers[0].at("A").value.str() == "5.00");

    CHECK(e.query("member(John)").status == QueryResult::Status::yes);
    CHECK(e.query("member(Bob)").status == QueryResult::Status::no);
    CHECK(e.query("discount(John,lobster,7.50)").status == QueryResult::Status::unknown);
}

TEST_CASE("argumentation theory edge cases") {
    Engine alone(parse_lpda("b(t). @{r1} f(t) :- b(t)."));
    CHECK(t_of(alone, "f(t)") == Truth::t);
    CHECK(t_of(alone, "'$defeated'(handle(r1,f(t)))") == Truth::f);

    // canceled rule cannot rebut; label-level cancel
    Engine cancel(parse_lpda("@{a} p. @{b} neg p. cancel(b)."));
    CHECK(t_of(cancel, "p") == Truth::t);
    CHECK(t_of(cancel, "neg p") == Truth::f);

    // defeated exception does not refute (8.a-8.f shape)
    Engine chain(parse_lpda("@{a} join(boa) :- offer(boa). @{b} join(amazon) :- offer(amazon).\n"
                            "offer(boa). offer(amazon). bankrupt(amazon).\n"
                            "opposes(join(?X), join(?Y)) :- ?X != ?Y. overrides(b,a). cancel(b) :- bankrupt(amazon)."));
    CHECK(t_of(chain, "join(boa)") == Truth::t);
    CHECK(t_of(chain, "join(amazon)") == Truth::f);

    // strict conclusion defeats an opposing default
    Engine strict(parse_lpda("bird(t). penguin(t). @{r1} fly(?X) :- bird(?X). neg fly(?X) :- penguin(?X)."));
    CHECK(t_of(strict, "fly(t)") == Truth::f);
    CHECK(t_of(strict, "neg fly(t)") == Truth::t);
    CHECK(strict.consistent());
}

TEST_CASE("inconsistency is flagged, not thrown") {
    Engine e(parse_lpda("p. neg p."));
    CHECK_FALSE(e.consistent());
    auto r = e.query("p");
    CHECK(r.inconsistent);
    CHECK(e.dump().find("inconsistent") != std::string::npos);
}

TEST_CASE("dump sections are sorted") {
    Engine e(parse_lpda("b. a. c :- not a."));
    CHECK(e.dump() == "T:\n  a\n  b\nF:\n  c\nU:\n");
}

TEST_CASE("wfm agrees with the unique stable model on stratified programs") {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 500; ++iter) {
        int n = 1 + static_cast<int>(rng() % 12);
        int nr = static_cast<int>(rng() % 16);
        std::string lp, asp_text;
        for (int k = 0; k < nr; ++k) {
            int h = static_cast<int>(rng() % n);
            std::vector<std::string> body;
            int len = static_cast<int>(rng() % 4);
            for (int j = 0; j < len; ++j) {
                if (rng() % 2 && h > 0) body.push_back("not a" + std::to_string(rng() % h));
                else body.push_back("a" + std::to_string(rng() % (h + 1)));
            }
            std::string b;
            for (const auto& x : body) b += (b.empty() ? "" : ", ") + x;
            std::string rule = "a" + std::to_string(h) + (b.empty() ? "" : " :- " + b) + ".\n";
            lp += rule;
            asp_text += rule;
        }
        Engine e(parse_lpda(lp));
        auto g = asp::ground(asp::parse_asp(asp_text));
        auto models = asp::stable_models(g);
        REQUIRE_MESSAGE(models.size() == 1, lp);
        for (int a = 0; a < n; ++a) {
            auto name = "a" + std::to_string(a);
            auto id = g.atoms.find(Term::sym(name));
            bool in = id && models[0].count(*id);
            Truth v = e.truth(Term::sym(name));
            CHECK_MESSAGE(v == (in ? Truth::t : Truth::f), lp);
        }
    }
}

TEST_CASE("unopposed defeasible rules behave as definite ones") {
    std::mt19937 rng(5);
    for (int iter = 0; iter < 200; ++iter) {
        int n = 2 + static_cast<int>(rng() % 6);
        std::string defeasible, plain;
        for (int k = 0; k < 8; ++k) {
            int h = static_cast<int>(rng() % n);
            std::string b;
            for (int j = 0, len = static_cast<int>(rng() % 3); j < len; ++j)
                b += (b.empty() ? "" : ", ") + std::string(rng() % 3 == 0 ? "not " : "") + "a" +
                     std::to_string(rng() % n);
            std::string body = b.empty() ? "" : " :- " + b;
            std::string head = "a" + std::to_string(h);
            plain += head + body + ".\n";
            defeasible += (rng() % 2 ? "@{d" + std::to_string(k) + "} " : std::string()) + head + body + ".\n";
        }
        Engine a(parse_lpda(defeasible)), b(parse_lpda(plain));
        for (int x = 0; x < n; ++x) {
            auto name = Term::sym("a" + std::to_string(x));
            CHECK_MESSAGE(a.truth(name) == b.truth(name), defeasible);
        }
    }
}
