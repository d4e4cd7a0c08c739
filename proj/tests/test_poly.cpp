#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "singres/poly.hpp"

using namespace singres;

namespace {
const int X = 0, Y = 1, Z = 2;

Poly rand_poly(std::mt19937& rng, int maxdeg, int maxc) {
    std::uniform_int_distribution<int> d(0, maxdeg), c(-maxc, maxc), nterms(1, 4);
    Poly p;
    int n = nterms(rng);
    for (int i = 0; i < n; ++i)
        p.add_term({d(rng), d(rng), 0}, Rat(c(rng)));
    return p;
}
} // namespace

TEST_CASE("parse examples") {
    Poly p = parse_poly("y^2 - x^3");
    CHECK(p.coefficient({0, 2, 0}) == Rat(1));
    CHECK(p.coefficient({3, 0, 0}) == Rat(-1));
    CHECK(p.terms().size() == 2);

    CHECK(parse_poly("0").is_zero());

    Poly sq = parse_poly("(x+y)^2");
    CHECK(sq.coefficient({2, 0, 0}) == Rat(1));
    CHECK(sq.coefficient({1, 1, 0}) == Rat(2));
    CHECK(sq.coefficient({0, 2, 0}) == Rat(1));

    CHECK(parse_poly("1/2*x - 3") == parse_poly("-3 + 1/2*x"));
    CHECK(parse_poly("-x*y") == -parse_poly("x*y"));
    CHECK(parse_poly(" z ^ 2 + x * y ").degree(Z) == 2);

    CHECK_THROWS_AS(parse_poly("w + 1"), unknown_variable_error);
    CHECK_THROWS_AS(parse_poly("x +"), syntax_error);
    CHECK_THROWS_AS(parse_poly("(x"), syntax_error);
    CHECK_THROWS_AS(parse_poly("x/2"), syntax_error);
    CHECK_THROWS_AS(parse_poly("2 2"), syntax_error);
}

TEST_CASE("canonical printing round trips") {
    for (const char* s : {"y^2 - x^3", "x*y", "0", "-3 + 1/2*x", "x^3 + y^5",
                          "x^2 + 2*x*y + y^2", "z^2 + x*y"}) {
        Poly p = parse_poly(s);
        CHECK(parse_poly(p.str()) == p);
    }
    CHECK(parse_poly("y^2-x^3").str() == "y^2 - x^3");
    CHECK(parse_poly("(x+y)^2").str() == "x^2 + 2*x*y + y^2");
}

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937 rng(424242);
    for (int t = 0; t < 60; ++t) {
        Poly f = rand_poly(rng, 3, 4), g = rand_poly(rng, 3, 4), h = rand_poly(rng, 3, 4);
        REQUIRE((f + g) * h == f * h + g * h);
        REQUIRE(f * g == g * f);
        REQUIRE((f - f).is_zero());
    }
}

TEST_CASE("exact division") {
    Poly f = parse_poly("x^2 - y^2"), g = parse_poly("x - y");
    auto q = f.divide_exact(g);
    REQUIRE(q);
    CHECK(*q == parse_poly("x + y"));
    CHECK(!parse_poly("x^2 + y").divide_exact(g));
}

TEST_CASE("discriminants") {
    Poly f = parse_poly("z^2 + x*y");
    CHECK(discriminant_wrt(f, Z) == parse_poly("x*y"));

    Poly lin = parse_poly("z - x^2 - y^3");
    CHECK(discriminant_wrt(lin, Z) == parse_poly("1"));

    Poly cone = parse_poly("z^2 + x^3 + y^3");
    CHECK(discriminant_wrt(cone, Z) == parse_poly("x^3 + y^3"));

    CHECK_THROWS_AS(discriminant_wrt(parse_poly("x*z^2 + y"), Z), not_unitary_error);
    CHECK_THROWS_AS(discriminant_wrt(parse_poly("x + y"), Z), not_unitary_error);
}

TEST_CASE("resultant vanishes exactly for common factors") {
    std::mt19937 rng(7777);
    for (int t = 0; t < 25; ++t) {
        Poly a = rand_poly(rng, 2, 3), b = rand_poly(rng, 2, 3), c = rand_poly(rng, 2, 3);
        if (a.degree(Y) < 1 || b.degree(Y) < 1 || c.degree(Y) < 1) continue;
        Poly f = a * c, g = b * c; // share c
        REQUIRE(resultant(f, g, Y).is_zero());
    }
    // coprime pair: nonzero resultant
    CHECK(!resultant(parse_poly("y - x"), parse_poly("y + x"), Y).is_zero());
    CHECK(resultant(parse_poly("y - x"), parse_poly("y - x"), Y).is_zero());
}

TEST_CASE("discriminant of a product is divisible by the squared resultant") {
    std::mt19937 rng(1312);
    int done = 0;
    while (done < 12) {
        // monic-in-y test pair
        Poly f = Poly::variable(Y, 2) + rand_poly(rng, 2, 2) * Poly::variable(Y) +
                 rand_poly(rng, 2, 2);
        Poly g = Poly::variable(Y, 1) + rand_poly(rng, 2, 2);
        Poly prod = f * g;
        Poly disc = resultant(prod, prod.derivative(Y), Y);
        if (disc.is_zero()) continue; // degenerate draw
        Poly r2 = resultant(f, g, Y).pow(2);
        if (r2.is_zero()) continue;
        REQUIRE(disc.divide_exact(r2).has_value());
        ++done;
    }
}

TEST_CASE("newton polygon") {
    auto np = newton_polygon(parse_poly("y^2 - x^3"));
    REQUIRE(np.vertices.size() == 2);
    CHECK(np.vertices[0] == std::pair<int, int>(0, 2));
    CHECK(np.vertices[1] == std::pair<int, int>(3, 0));
    REQUIRE(np.edges.size() == 1);
    CHECK(*np.edges[0].inclination == Rat(3, 2));

    auto mono = newton_polygon(parse_poly("x^2*y"));
    CHECK(mono.vertices.size() == 1);
    CHECK(mono.edges.empty());

    auto np3 = newton_polygon(parse_poly("y^2 - x^2 - x^3"));
    REQUIRE(np3.vertices.size() == 3);
    CHECK(np3.vertices[1] == std::pair<int, int>(2, 0));
    CHECK(*np3.edges[0].inclination == Rat(1));
    CHECK(!np3.edges[1].inclination); // horizontal piece on the axis

    // inclinations strictly decrease read from the axis end
    auto big = newton_polygon(parse_poly("y^4 + x*y^2 + x^2*y + x^5"));
    for (size_t i = 1; i < big.edges.size(); ++i) {
        REQUIRE(big.edges[i - 1].inclination);
        if (big.edges[i].inclination)
            REQUIRE(*big.edges[i - 1].inclination < *big.edges[i].inclination);
    }
    CHECK_THROWS_AS(newton_polygon(Poly(0)), zero_polynomial_error);
}

TEST_CASE("squarefree tests") {
    CHECK(is_squarefree(parse_poly("y^2 - x^3")));
    CHECK_FALSE(is_squarefree(parse_poly("(y-x)^2")));
    CHECK(is_squarefree(parse_poly("x*y")));
    CHECK(is_squarefree(parse_poly("x^3 + y^3")));
    CHECK(is_squarefree(parse_poly("x^2*y + x*y^2"))); // x*y*(x+y)
    CHECK_FALSE(is_squarefree(parse_poly("x^2*y + 2*x*y^2 + y^3"))); // y*(x+y)^2
    CHECK_THROWS_AS(is_squarefree(Poly(0)), zero_polynomial_error);

    CHECK(squarefree_part(parse_poly("(y-x)^2")) ==
          parse_poly("y - x").primitive_normalized());
    CHECK(squarefree_part(parse_poly("x^2*y^3")) == parse_poly("x*y"));
}

TEST_CASE("gcd on constructed pairs") {
    Poly c = parse_poly("y - x^2");
    Poly f = parse_poly("y + x") * c, g = parse_poly("y - x") * c;
    Poly gg = gcd_bivariate(f, g);
    CHECK(gg == c.primitive_normalized());
    CHECK(gcd_bivariate(parse_poly("x*y"), parse_poly("x + y")).is_constant());
    CHECK(gcd_univariate(parse_poly("x^2 - 1"), parse_poly("x - 1"), 0) ==
          parse_poly("x - 1"));
}
