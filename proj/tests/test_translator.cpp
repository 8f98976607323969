#include "cnlkit/error.hpp"
#include "cnlkit/translator.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace cnl;
using fixtures::grammar;
using fixtures::lexicon;
namespace lp = cnl::lpda;

namespace {

const ScaleTable& scales() {
    static const ScaleTable s = load_scales_file(std::string(CNLKIT_DATA_DIR) + "/cnl/scales.txt");
    return s;
}

Translation tr(std::string_view text) { return translate(process_document(text, lexicon(), grammar()), scales()); }
Translation tr_file(const std::string& name) { return tr(fixtures::slurp("fixtures/" + name)); }

bool has_line(const Translation& t, const std::string& line) {
    for (const auto& r : t.program.rules)
        if (lp::print_rule(r) == line) return true;
    return false;
}

std::size_t count_head(const lp::Program& p, const std::string& functor) {
    std::size_t n = 0;
    for (const auto& r : p.rules)
        if (r.head.name == functor) ++n;
    return n;
}

lp::Truth truth(const lp::Engine& e, std::string_view lit) { return e.truth(lp::parse_literal(lit)); }

} // namespace

TEST_CASE("scale table") {
    auto s = load_scales("% weakest first\nscale(some, all).\n\nscale(warm, hot, scalding).\n");
    REQUIRE(s.scales().size() == 2);
    std::size_t pos = 9;
    auto* sc = s.find("hot", &pos);
    REQUIRE(sc);
    CHECK(pos == 1);
    CHECK(sc->back() == "scalding");
    CHECK(s.find("tepid") == nullptr);

    CHECK_THROWS_AS(load_scales("scale(a, b).\nscale(b, c).\n"), Error);  // shared symbol
    CHECK_THROWS_AS(load_scales("scale(a).\n"), Error);
    CHECK_THROWS_AS(load_scales("scales(a, b).\n"), Error);
}

TEST_CASE("overrides closure") {
    auto p = lp::parse_lpda("overrides(a,b).\noverrides(b,c).\n");
    auto c = overrides_closure(p);
    std::set<std::string> got;
    for (const auto& r : c.rules) got.insert(lp::print_rule(r));
    CHECK(got == std::set<std::string>{"overrides(a,b).", "overrides(b,c).", "overrides(a,c)."});

    CHECK(overrides_closure(lp::Program{}).rules.empty());

    try {
        overrides_closure(lp::parse_lpda("overrides(a,b).\noverrides(b,c).\noverrides(c,a).\n"));
        FAIL("cycle accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::cycle);
    }
}

TEST_CASE("overrides closure matches Warshall on random DAGs") {
    std::mt19937 rng(7);
    for (int round = 0; round < 100; ++round) {
        const int n = 2 + static_cast<int>(rng() % 8);
        bool reach[10][10] = {};
        std::string text;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() % 3 == 0) {
                    reach[i][j] = true;
                    text += "overrides(l" + std::to_string(i) + ",l" + std::to_string(j) + ").\n";
                }
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (reach[i][k] && reach[k][j]) reach[i][j] = true;
        std::set<std::string> want;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (reach[i][j]) want.insert("overrides(l" + std::to_string(i) + ",l" + std::to_string(j) + ").");
        std::set<std::string> got;
        for (const auto& r : overrides_closure(lp::parse_lpda(text)).rules) got.insert(lp::print_rule(r));
        CHECK(got == want);
    }
}

TEST_CASE("disjunction encodings") {
    std::vector<Term> alts{lp::parse_literal("vote(j,o)"), lp::parse_literal("vote(j,r)")};
    auto inc = encode_disjunction(false, alts);
    REQUIRE(inc.size() == 2);
    CHECK(lp::print_rule(inc[0]) == "vote(j,o):-neg vote(j,r).");
    CHECK(lp::print_rule(inc[1]) == "vote(j,r):-neg vote(j,o).");
    auto exc = encode_disjunction(true, alts);
    CHECK(lp::print_rule(exc[0]) == "neg vote(j,r):-vote(j,o).");
    CHECK(lp::print_rule(exc[1]) == "neg vote(j,o):-vote(j,r).");
    for (const auto& r : inc) CHECK_FALSE(r.defeasible());

    alts.push_back(lp::parse_literal("vote(j,x)"));
    try {
        encode_disjunction(false, alts);
        FAIL("three alternatives accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::unsupported);
    }
}

TEST_CASE("discount program") {
    auto t = tr_file("discount.cnl");
    CHECK(has_line(t, "overrides(r2,r1)."));
    CHECK(count_head(t.program, "overrides") == 1);
    CHECK(count_head(t.program, "cancel") == 2);
    CHECK(count_head(t.program, "opposes") == 1);
    CHECK(has_line(t, "@{f3} buy(John,coke)."));
    CHECK(has_line(t, "@{r5} customer(?Storemember):-storemember(?Storemember)."));
    CHECK(has_line(t, "opposes(discount(?Customer,?Product,?Amount1),discount(?Customer,?Product,?Amount2)):-"
                      "?Amount1!=?Amount2."));
    CHECK(t.label_source.at("r2") == "9.m");
    CHECK(t.label_source.at("r1") == "9.l");

    lp::Engine e(t.program);
    CHECK(e.consistent());
    CHECK(truth(e, "discount(John,coke,2.50)") == lp::Truth::t);
    CHECK(truth(e, "discount(John,coke,1.50)") == lp::Truth::f);
    // 7.50 and 5.00 rebut each other for John; nothing decides between them
    CHECK(truth(e, "discount(John,lobster,7.50)") == lp::Truth::u);
    CHECK(truth(e, "discount(John,lobster,5.00)") == lp::Truth::u);
    // Mary is blacklisted: the 7.50 rule is cancelled, 5.00 stands alone
    CHECK(truth(e, "discount(Mary,salmon,5.00)") == lp::Truth::t);
    CHECK(truth(e, "discount(Mary,salmon,7.50)") == lp::Truth::f);
}

TEST_CASE("how-much question yields open goal and provenance") {
    auto doc = process_document(fixtures::slurp("fixtures/discount.cnl"), lexicon(), grammar());
    auto t = translate(doc, scales());
    lp::Engine e(t.program);

    auto q = process_question(doc, "How much discount does John get for buying a coke?", lexicon(), grammar());
    auto goal = question_goal(q);
    REQUIRE(goal.size() == 1);
    CHECK(lp::print_term(std::get<lp::Literal>(goal[0]).atom) == "discount(John,coke,?Amount)");
    auto r = e.query(goal);
    REQUIRE(r.status == lp::QueryResult::Status::yes);
    REQUIRE(r.answers.size() == 1);
    CHECK(lp::print_term(r.answers[0].at("Amount")) == "2.50");
    REQUIRE(r.provenance[0].size() == 1);
    CHECK(r.provenance[0][0].label == "r2");
    CHECK(r.provenance[0][0].source == "9.m");

    auto m = e.query(question_goal(process_question(doc, "How much discount does Mary get for buying salmon?",
                                                    lexicon(), grammar())));
    REQUIRE(m.answers.size() == 1);
    CHECK(lp::print_term(m.answers[0].at("Amount")) == "5.00");

    CHECK_THROWS_AS(process_question(doc, "John buys a coke.", lexicon(), grammar()), Error);
}

TEST_CASE("strict sentence has no label") {
    auto t = tr_file("election.cnl");
    REQUIRE(t.program.rules.size() == 1);
    CHECK(lp::print_rule(t.program.rules[0]) == "win(Obama,presidentialelection,2012).");
    CHECK(t.label_source.empty());
}

TEST_CASE("a single defeasible fact holds") {
    auto t = tr("Tom walks.");
    REQUIRE(t.program.rules.size() == 1);
    CHECK(t.program.rules[0].defeasible());
    lp::Engine e(t.program);
    CHECK(truth(e, "walk(Tom)") == lp::Truth::t);
}

TEST_CASE("no annotations means no overrides and no cancellation") {
    auto t = tr("John is a store member.\nJohn buys a bottle of coke.\nA coke is a beverage.\n"
                "If a customer buys a beverage, the customer gets a discount of $1.50 for the beverage.\n");
    CHECK(count_head(t.program, "overrides") == 0);
    CHECK(count_head(t.program, "cancel") == 0);
    CHECK(count_head(t.program, "opposes") == 0);
}

TEST_CASE("labels and source sentences are in bijection") {
    for (const char* f : {"discount.cnl", "offers.cnl", "votes.cnl", "tweety.cnl", "students.cnl", "beauty.cnl"}) {
        CAPTURE(f);
        auto t = tr_file(f);
        std::set<std::string> labels;
        for (const auto& r : t.program.rules) {
            if (!r.defeasible()) continue;
            auto l = lp::print_term(*r.label);
            CHECK(labels.insert(l).second);
            REQUIRE(t.label_source.count(l));
            CHECK(t.label_source.at(l) == r.source);
        }
        CHECK(labels.size() == t.label_source.size());
    }
}

TEST_CASE("quantifier implicature") {
    auto t = tr_file("students.cnl");
    CHECK(t.text() == "student(#1).\npass(#1,e1).\nstudent(#2).\n@{imp1} neg pass(#2,e1).\n");
    {
        lp::Engine e(t.program);
        CHECK(truth(e, "neg pass(#2,e1)") == lp::Truth::t);
    }
    auto strict = tr(fixtures::slurp("fixtures/students.cnl") + "(strict) All students pass exam1.\n");
    lp::Engine e(strict.program);
    CHECK(truth(e, "neg pass(#2,e1)") == lp::Truth::f);
    CHECK(truth(e, "pass(#2,e1)") == lp::Truth::t);
    CHECK(e.consistent());
}

TEST_CASE("skolem constants are never reused") {
    auto t = tr("Some students pass exam1.\nSome students pass exam2.\n");
    std::set<std::string> students;
    for (const auto& r : t.program.rules)
        if (r.head.name == "student") students.insert(lp::print_term(r.head));
    CHECK(students == std::set<std::string>{"student(#1)", "student(#2)", "student(#3)", "student(#4)"});
}

TEST_CASE("predicate scale implicature") {
    auto t = tr_file("beauty.cnl");
    CHECK(has_line(t, "cute(?X):-beautiful(?X)."));
    CHECK(has_line(t, "@{imp1} neg stupendous(Mary)."));
    {
        lp::Engine e(t.program);
        CHECK(truth(e, "neg stupendous(Mary)") == lp::Truth::t);
        CHECK(truth(e, "cute(Mary)") == lp::Truth::t);
    }
    lp::Engine e(tr("Mary is beautiful.\n(strict) Mary is stupendous.\n").program);
    CHECK(truth(e, "neg stupendous(Mary)") == lp::Truth::f);
    CHECK(e.consistent());

    auto top = tr("Mary is stupendous.");
    CHECK(count_head(top.program, "-") == 0);
    CHECK_FALSE(top.notices.empty());
}

TEST_CASE("either-or is exclusive, plain or is inclusive") {
    auto x = tr_file("xor.cnl");
    CHECK(x.text() == "neg vote(John,Romney):-vote(John,Obama).\nneg vote(John,Obama):-vote(John,Romney).\n");
    auto o = tr_file("or.cnl");
    CHECK(o.text() == "vote(John,Obama):-neg vote(John,Romney).\nvote(John,Romney):-neg vote(John,Obama).\n");

    const std::string both = "(strict) John votes for Obama.\n(strict) John votes for Romney.\n";
    CHECK_FALSE(lp::Engine(tr(fixtures::slurp("fixtures/xor.cnl") + both).program).consistent());
    CHECK(lp::Engine(tr(fixtures::slurp("fixtures/or.cnl") + both).program).consistent());

    lp::Engine one(tr(fixtures::slurp("fixtures/xor.cnl") + "(strict) John votes for Obama.\n").program);
    CHECK(truth(one, "neg vote(John,Romney)") == lp::Truth::t);
}

TEST_CASE("tweety lifecycle") {
    auto base = fixtures::slurp("fixtures/tweety.cnl");
    lp::Engine before(tr(base).program);
    CHECK(truth(before, "fly(Tweety)") == lp::Truth::t);
    lp::Engine after(tr(base + "Tweety is a penguin.\n").program);
    CHECK(truth(after, "fly(Tweety)") == lp::Truth::f);
    CHECK(truth(after, "neg fly(Tweety)") == lp::Truth::t);
    CHECK(after.consistent());
}

TEST_CASE("job offers with cancellation") {
    auto t = tr_file("offers.cnl");
    CHECK(has_line(t, "cancel(handle(r2,join(John,Amazon))):-bankrupt(Amazon)."));
    lp::Engine e(t.program);
    CHECK(truth(e, "join(John,BOA)") == lp::Truth::t);
    CHECK(truth(e, "join(John,Amazon)") == lp::Truth::f);

    // without the bankruptcy the preferred offer wins
    auto no_bankrupt = fixtures::slurp("fixtures/offers.cnl");
    no_bankrupt.replace(no_bankrupt.find("8.e Amazon goes bankrupt.\n"), 26, "");
    lp::Engine e2(tr(no_bankrupt).program);
    CHECK(truth(e2, "join(John,Amazon)") == lp::Truth::t);
    CHECK(truth(e2, "join(John,BOA)") == lp::Truth::f);
}

TEST_CASE("conflicting votes stay undecided") {
    lp::Engine e(tr_file("votes.cnl").program);
    CHECK(e.consistent());
    CHECK(truth(e, "vote(Tom,Obama)") == lp::Truth::u);
    CHECK(truth(e, "vote(Tom,Romney)") == lp::Truth::u);
}
