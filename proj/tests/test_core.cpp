#include "cnlkit/decimal.hpp"
#include "cnlkit/error.hpp"
#include "cnlkit/term.hpp"

#include <doctest.h>

using namespace cnl;

TEST_CASE("decimal parsing keeps the written scale") {
    auto d = Decimal::parse("1.50");
    REQUIRE(d);
    CHECK(d->str() == "1.50");
    CHECK(*d == *Decimal::parse("1.5"));
    CHECK(Decimal::parse("abc") == std::nullopt);
    CHECK(Decimal::parse("1.") == std::nullopt);
    CHECK(Decimal::parse("-3")->str() == "-3");
}

TEST_CASE("decimal arithmetic is exact") {
    auto a = *Decimal::parse("0.10");
    auto b = *Decimal::parse("0.20");
    CHECK((a + b) == *Decimal::parse("0.3"));
    CHECK((a + b).str() == "0.30");
    CHECK((*Decimal::parse("7.50") - *Decimal::parse("2.50")).str() == "5.00");
    CHECK((Decimal(10) / Decimal(4)).str() == "2.5");
    CHECK((Decimal(1) / Decimal(3)).str() == "0.333333");
    CHECK(Decimal(1) / Decimal(3) * Decimal(3) == Decimal(1));
    CHECK_THROWS_AS(Decimal(1) / Decimal(0), Error);
    CHECK(*Decimal::parse("2.50") > *Decimal::parse("1.50"));
}

TEST_CASE("term keys identify equal values") {
    auto t1 = Term::fn("d", {Term::sym("John"), Term::num(*Decimal::parse("1.50"))});
    auto t2 = Term::fn("d", {Term::sym("John"), Term::num(*Decimal::parse("1.5"))});
    CHECK(t1 == t2);
    CHECK(t1.key() == t2.key());
    CHECK(t1.str() == "d(John,1.50)");
    CHECK(Term::negate(t1).str(true) == "neg d(John,1.50)");
    CHECK(Term::negate(Term::negate(t1)) == t1);
}

TEST_CASE("match binds variables consistently") {
    Bindings b;
    auto pat = Term::fn("p", {Term::var("X"), Term::var("X")});
    CHECK(match(pat, Term::fn("p", {Term::sym("a"), Term::sym("a")}), b));
    Bindings b2;
    CHECK_FALSE(match(pat, Term::fn("p", {Term::sym("a"), Term::sym("b")}), b2));
}

TEST_CASE("join schedules builtins after their inputs") {
    AtomStore store;
    for (int i = 1; i <= 4; ++i) store.intern(Term::fn("n", {Term::num(Decimal(i))}));
    std::vector<Goal> goals;
    Goal cmp;
    cmp.kind = Goal::Kind::compare;
    cmp.op = "<";
    cmp.lhs = Term::var("X");
    cmp.rhs = Term::var("Y");
    goals.push_back(cmp);
    Goal a;
    a.atom = Term::fn("n", {Term::var("X")});
    goals.push_back(a);
    a.atom = Term::fn("n", {Term::var("Y")});
    goals.push_back(a);
    auto sched = schedule_goals(goals, {});
    REQUIRE(sched);
    int count = 0;
    Bindings b;
    join(*sched, store, b, [&](const Bindings&) { ++count; });
    CHECK(count == 6);

    std::string var;
    Goal lonely;
    lonely.kind = Goal::Kind::compare;
    lonely.op = "!=";
    lonely.lhs = Term::var("Z");
    lonely.rhs = Term::num(Decimal(1));
    CHECK_FALSE(schedule_goals({lonely}, {}, &var));
    CHECK(var == "Z");
}
