#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "twi/seq.hpp"

using twi::Seq;

namespace {

Seq random_seq(std::mt19937& rng) {
    std::uniform_int_distribution<int> len(0, 4), term(0, 3);
    std::vector<int> t(static_cast<std::size_t>(len(rng)));
    for (int& x : t) x = term(rng);
    return Seq(std::move(t));
}

} // namespace

TEST_CASE("norm and jvalue") {
    CHECK(Seq().norm() == 0);
    CHECK(Seq({3}).norm() == 3);
    CHECK(Seq({1, 2, 0, 1}).norm() == 4);
    CHECK(Seq().jvalue() == 0);
    CHECK(Seq({3}).jvalue() == 3);
    CHECK(Seq({1, 2}).jvalue() == 7);
}

TEST_CASE("combine: add, sub, leq") {
    CHECK(Seq({1, 2}) + Seq({0, 0, 1}) == Seq({1, 2, 1}));
    CHECK(Seq({2, 1}) - Seq({1, 1}) == Seq({1}));
    CHECK(Seq({1, 1}) <= Seq({2, 1}));
    CHECK_FALSE(Seq({2}) <= Seq({1, 5}));
    CHECK_THROWS_AS(Seq({1}) - Seq({2}), std::domain_error);
    CHECK_THROWS_AS(Seq({1, 1}) - Seq({0, 2}), std::domain_error);
}

TEST_CASE("theta") {
    CHECK(Seq::theta(1) == Seq({1}));
    CHECK(Seq::theta(3) == Seq({0, 0, 1}));
    CHECK(Seq::theta(2).jvalue() == 3);
    CHECK_THROWS_AS(Seq::theta(0), std::domain_error);
}

TEST_CASE("binom_seq") {
    CHECK(twi::binom_seq(Seq({2, 1}), Seq({1, 1})) == 2);
    CHECK(twi::binom_seq(Seq({3, 2, 5}), Seq()) == 1);
    CHECK(twi::binom_seq(Seq({4}), Seq({2})) == 6);
    CHECK_THROWS_AS(twi::binom_seq(Seq({1}), Seq({2})), std::domain_error);
}

TEST_CASE("multinomial_seq") {
    CHECK(twi::multinomial_seq(Seq({2, 1}), {Seq({1}), Seq({1, 1})}) == 2);
    CHECK(twi::multinomial_seq(Seq({5, 2}), {}) == 1);
    CHECK(twi::multinomial_seq(Seq({3}), {Seq({1}), Seq({1}), Seq({1})}) == 6);
    CHECK_THROWS_AS(twi::multinomial_seq(Seq({1}), {Seq({1}), Seq({1})}),
                    std::domain_error);
}

TEST_CASE("factorial_seq") {
    CHECK(twi::factorial_seq(Seq()) == 1);
    CHECK(twi::factorial_seq(Seq({3})) == 6);
    CHECK(twi::factorial_seq(Seq({2, 2})) == 4);
}

TEST_CASE("canonical form") {
    CHECK(Seq({1, 0, 0}) == Seq({1}));
    CHECK(Seq({0, 0}) == Seq());
    CHECK(Seq({1, 0, 0}).support() == 1);
    CHECK(Seq().str() == "0");
    CHECK(Seq({1, 2}).str() == "1,2");
    CHECK(Seq::parse("1,2") == Seq({1, 2}));
    CHECK(Seq::parse("0") == Seq());
    CHECK(Seq::parse("0,0,0") == Seq());
    CHECK_THROWS_AS(Seq::parse("1,-2"), std::domain_error);
    CHECK_THROWS_AS(Seq::parse("x"), std::exception);
}

TEST_CASE("semigroup properties over random sequences") {
    std::mt19937 rng(20240517);
    for (int i = 0; i < 200; ++i) {
        Seq a = random_seq(rng), b = random_seq(rng);
        CHECK((a + b).jvalue() == a.jvalue() + b.jvalue());
        CHECK((a + b).norm() == a.norm() + b.norm());
        CHECK((a + b) - b == a);
        CHECK(Seq(a.terms()) == a);  // canonicalization is idempotent
        if (b <= a) CHECK(twi::multinomial_seq(a, {b}) == twi::binom_seq(a, b));
        CHECK(twi::binom_seq(a, a) == 1);
        CHECK(twi::binom_seq(a, Seq()) == 1);
        CHECK(Seq::parse(a.str()) == a);
    }
}
