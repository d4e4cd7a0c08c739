#include <catch2/catch_amalgamated.hpp>

#include "singres/rational.hpp"

using namespace singres;

TEST_CASE("rationals normalize eagerly") {
    Rat q(Int(4), Int(-6));
    CHECK(q.num() == -2);
    CHECK(q.den() == 3);
    CHECK(Rat(0, 17) == Rat(0));
    CHECK(Rat(7, 1).is_integer());
    CHECK_THROWS_AS(Rat(1, 0), range_error);
}

TEST_CASE("rational arithmetic stays in lowest terms") {
    Rat a(1, 6), b(1, 3);
    CHECK((a + b) == Rat(1, 2));
    CHECK((b - a) == Rat(1, 6));
    CHECK((a * b) == Rat(1, 18));
    CHECK((a / b) == Rat(1, 2));
    CHECK(-Rat(3, 4) == Rat(-3, 4));
    CHECK(Rat(5, 4) > Rat(1));
    CHECK_THROWS_AS(a / Rat(0), range_error);
}

TEST_CASE("rational text io") {
    CHECK(Rat(-3, 7).str() == "-3/7");
    CHECK(Rat(12).str() == "12");
    CHECK(Rat::parse("22/7") == Rat(22, 7));
    CHECK(Rat::parse("-5") == Rat(-5));
    CHECK_THROWS_AS(Rat::parse("x"), range_error);
}

TEST_CASE("integer helpers") {
    CHECK(floor_div(Int(-7), Int(2)) == -4);
    CHECK(ceil_div(Int(-7), Int(2)) == -3);
    CHECK(ceil_div(Int(7), Int(5)) == 2);
    CHECK(mod_pos(Int(-3), Int(7)) == 4);
    CHECK(*exact_root(Int(27), 3) == 3);
    CHECK(*exact_root(Int(-8), 3) == -2);
    CHECK(!exact_root(Int(8), 2));
    CHECK(!exact_root(Int(-4), 2));
    CHECK(*exact_root(Rat(4, 9), 2) == Rat(2, 3));
    CHECK(floor(Rat(7, 2)) == 3);
    CHECK(ceil(Rat(7, 2)) == 4);
}
