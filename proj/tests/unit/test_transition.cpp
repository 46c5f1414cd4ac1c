#include "credalmc/transition.hpp"
#include "generators.hpp"

#include <doctest.h>

using namespace credalmc;
using doctest::Approx;

namespace {

const StateSpace ab{"a", "b"};
const StateSpace abc{"a", "b", "c"};
const Matrix ex53{{0.15, 0.85}, {0.85, 0.15}};
const Matrix cycle2{{0, 1}, {1, 0}};

UpperTransitionOperator ex54() {
    Matrix lo{{9, 9, 162}, {144, 18, 18}, {9, 162, 9}};
    Matrix up{{19, 19, 172}, {154, 28, 28}, {19, 172, 19}};
    for (auto* m : {&lo, &up}) {
        for (auto& r : *m) {
            for (auto& v : r) v /= 200;
        }
    }
    return UpperTransitionOperator::interval(abc, lo, up);
}

void check_gamble(const Gamble& g, std::initializer_list<double> want, double tol = 1e-14) {
    std::size_t i = 0;
    for (double w : want) CHECK(g[i++] == Approx(w).epsilon(tol));
}

} // namespace

TEST_CASE("apply examples") {
    const auto ia = Gamble::indicator(ab, 0);
    check_gamble(apply(UpperTransitionOperator::precise(ab, ex53), ia), {0.15, 0.85});
    check_gamble(apply(UpperTransitionOperator::contaminated(ab, ex53, 0.1), ia), {0.235, 0.865});
    CHECK(apply(ex54(), Gamble(abc, {1, 0.5, 0}))[1] == Approx(0.84).epsilon(1e-14));
}

TEST_CASE("apply_lower examples") {
    const auto ia = Gamble::indicator(ab, 0);
    check_gamble(apply_lower(UpperTransitionOperator::contaminated(ab, ex53, 0.1), ia), {0.135, 0.765});
    const auto p = UpperTransitionOperator::precise(ab, ex53);
    const Gamble h(ab, {0.3, -2});
    check_gamble(apply_lower(p, h), {apply(p, h)[0], apply(p, h)[1]});
    check_gamble(apply_lower(ex54(), Gamble::constant(abc, 0.7)), {0.7, 0.7, 0.7});
}

TEST_CASE("power examples") {
    const Gamble h(ab, {0.2, -1.5});
    const auto c = UpperTransitionOperator::precise(ab, cycle2);
    check_gamble(power(c, h, 0), {0.2, -1.5});
    check_gamble(power(c, h, 2), {0.2, -1.5});
    check_gamble(power(c, h, 3), {-1.5, 0.2});
    check_gamble(power(UpperTransitionOperator::precise(ab, ex53), Gamble::indicator(ab, 0), 2), {0.745, 0.255});
}

TEST_CASE("regularity examples") {
    gen::Rng rng(2);
    for (int i = 0; i < 20; ++i) {
        const auto base = gen::stochastic(rng, 3, 0.5);
        const auto v = is_regular(UpperTransitionOperator::contaminated(abc, base, 0.1));
        CHECK(v.found);
        CHECK(v.n == 1);
    }
    for (std::size_t n_max : {1u, 2u, 10u, 50u}) {
        const auto v = is_regular(UpperTransitionOperator::precise(ab, cycle2), n_max);
        CHECK_FALSE(v.found);
        CHECK(v.n == n_max);
    }
    const auto v = is_regular(ex54(), 9);
    CHECK(v.found);
    CHECK(v.n <= 9);
    CHECK(default_regularity_bound(abc) == 5);
    CHECK_THROWS_AS(is_regular(ex54(), 0), Error);
}

TEST_CASE("regularity finds the smallest witness") {
    // a -> b -> c -> {a, b}: primitive with exponent 5 (the Wielandt-type bound for 3 states).
    const Matrix m{{0, 1, 0}, {0, 0, 1}, {0.5, 0.5, 0}};
    const auto v = is_regular(UpperTransitionOperator::precise(abc, m));
    CHECK(v.found);
    CHECK(v.n == 5);
    CHECK_FALSE(is_regular(UpperTransitionOperator::precise(abc, m), 4).found);
}

TEST_CASE("operator construction errors") {
    CHECK_THROWS_AS(UpperTransitionOperator::precise(ab, Matrix{{1, 0}}), Error);
    CHECK_THROWS_AS(UpperTransitionOperator::precise(ab, Matrix{{0.5, 0.6}, {1, 0}}), Error);
    CHECK_THROWS_AS(UpperTransitionOperator::contaminated(ab, ex53, 0.0), Error);
    CHECK_THROWS_AS(UpperTransitionOperator(ab, {CredalModel::vacuous(abc), CredalModel::vacuous(abc)}), Error);
    CHECK_THROWS_AS(UpperTransitionOperator::contaminated(ab, ex53, 0.1).matrix(), Error);
    CHECK(UpperTransitionOperator::precise(ab, ex53).matrix()[1][0] == 0.85);
}

TEST_CASE("property: operator invariants over every family") {
    gen::Rng rng(17);
    for (int i = 0; i < 1200; ++i) {
        const auto s = gen::space(1 + gen::pick(rng, 4));
        const auto t = i % 7 == 0 ? gen::op_of(rng, s, gen::kFamilies[i % 6]) : gen::op(rng, s);
        const auto g = gen::gamble(rng, s);
        const auto h = gen::gamble(rng, s);
        const double c = gen::uniform(rng, -3, 3);

        CHECK(sup_distance(apply(t, g), apply(t, h)) <= sup_distance(g, h) + 1e-12);
        const auto lo = pointwise_min(g, h);
        const auto up_lo = apply(t, lo);
        const auto up_h = apply(t, h);
        const auto low_h = apply_lower(t, h);
        const auto cst = apply(t, Gamble::constant(s, c));
        for (std::size_t x = 0; x < s.size(); ++x) {
            CHECK(up_lo[x] <= up_h[x] + 1e-12);
            CHECK(low_h[x] <= up_h[x] + 1e-12);
            CHECK(std::abs(cst[x] - c) <= 1e-12);
        }
    }
}

TEST_CASE("property: precise operators are matrix-vector products") {
    gen::Rng rng(19);
    for (int i = 0; i < 500; ++i) {
        const std::size_t n = 1 + gen::pick(rng, 5);
        const auto s = gen::space(n);
        const auto m = gen::stochastic(rng, n);
        const auto t = UpperTransitionOperator::precise(s, m);
        CHECK(t.is_precise());
        const auto h = gen::gamble(rng, s);
        const auto th = apply(t, h);
        for (std::size_t x = 0; x < n; ++x) {
            double want = 0.0;
            for (std::size_t y = 0; y < n; ++y) want += m[x][y] * h[y];
            CHECK(std::abs(th[x] - want) <= 1e-12);
        }
    }
}
