#include "cnlkit/error.hpp"
#include "cnlkit/lexicon.hpp"

#include <doctest.h>

#include <random>

using namespace cnl;

TEST_CASE("comparative and superlative share the positive symbol") {
    auto lex = load_lexicon("adv(fast, fast). adv_comp(faster, fast). adv_sup(fastest, fast).");
    CHECK(lex.entries().size() == 3);
    for (const auto& e : lex.entries()) CHECK(e.symbol == "fast");
    auto faster = lex.lookup("faster");
    REQUIRE(faster.size() == 1);
    CHECK(faster[0].pos == Pos::adv_comp);
    CHECK(faster[0].features.degree == Degree::comp);
}

TEST_CASE("empty lexicon loads") {
    auto lex = load_lexicon("");
    CHECK(lex.entries().empty());
    CHECK(lex.lookup("zzzz").empty());
}

TEST_CASE("synonyms share a class") {
    auto lex = load_lexicon("noun(fog, fog). noun(mist, mist). syn(fog, mist).");
    CHECK(lex.lookup("mist")[0].synclass == lex.lookup("fog")[0].synclass);
    CHECK(lex.same_concept("fog", "mist"));
    CHECK(lex.same_concept("fog", "fog"));
    CHECK_FALSE(lex.same_concept("fog", "lobster"));
}

TEST_CASE("illegal words are rejected") {
    auto lex = load_lexicon("illegal(could). noun(dog, dog).");
    try {
        lex.lookup("Could");
        FAIL("expected illegal-word error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::illegal_word);
        CHECK(std::string(e.what()).find("could") != std::string::npos);
    }
    CHECK_THROWS_AS(load_lexicon("illegal(can). noun(can, can)."), Error);
    CHECK_THROWS_AS(load_lexicon("noun(can, can). illegal(can)."), Error);
}

TEST_CASE("malformed lines report the line number") {
    try {
        load_lexicon("noun(dog, dog).\nnoun(cat cat).\n");
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::parse);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(load_lexicon("frobnicate(dog, dog)."), Error);
}

TEST_CASE("duplicates warn, unknown features warn") {
    auto lex = load_lexicon("noun(dog, dog). noun(dog, dog). noun(cat, cat, furry).");
    CHECK(lex.entries().size() == 2);
    CHECK(lex.warnings().size() == 2);
}

TEST_CASE("noun features default to singular neuter") {
    auto lex = load_lexicon("noun(dog, dog). noun(dogs, dog, pl). pnoun(brad, 'Brad', m).");
    CHECK(lex.lookup("dog")[0].features.number == Number::sg);
    CHECK(lex.lookup("dog")[0].features.gender == Gender::n);
    CHECK(lex.lookup("dogs")[0].features.number == Number::pl);
    CHECK(lex.lookup("Brad")[0].symbol == "Brad");
    CHECK(lex.lookup("Brad")[0].features.gender == Gender::m);
}

TEST_CASE("multi-word surfaces") {
    auto lex = load_lexicon("noun('store member', member).");
    CHECK(lex.max_surface_words() == 2);
    CHECK(lex.has_surface("Store Member"));
}

TEST_CASE("same_concept is transitive on random synonym graphs") {
    std::mt19937 rng(7);
    for (int round = 0; round < 50; ++round) {
        Lexicon lex;
        const int n = 12;
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (int k = 0; k < 8; ++k) lex.add_synonym("s" + std::to_string(pick(rng)), "s" + std::to_string(pick(rng)));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    auto sa = "s" + std::to_string(a), sb = "s" + std::to_string(b), sc = "s" + std::to_string(c);
                    if (lex.same_concept(sa, sb) && lex.same_concept(sb, sc)) CHECK(lex.same_concept(sa, sc));
                    CHECK(lex.same_concept(sa, sb) == lex.same_concept(sb, sa));
                }
    }
}

TEST_CASE("loading the serialized form is idempotent") {
    std::mt19937 rng(11);
    const char* words[] = {"dog", "cat", "fog", "mist", "haze", "bird", "worm", "snake"};
    for (int round = 0; round < 30; ++round) {
        Lexicon lex;
        std::uniform_int_distribution<int> pick(0, 7);
        for (int k = 0; k < 6; ++k) {
            LexEntry e;
            e.surface = words[pick(rng)];
            e.symbol = words[pick(rng)];
            e.pos = (k % 2) ? Pos::noun : Pos::adj;
            lex.add_entry(e);
        }
        lex.add_synonym(words[pick(rng)], words[pick(rng)]);
        lex.add_illegal("could");
        auto again = load_lexicon(lex.serialize());
        CHECK(again == lex);
        CHECK(load_lexicon(again.serialize()) == again);
    }
}
