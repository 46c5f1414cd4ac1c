#include "credalmc/chain.hpp"
#include "credalmc/limit.hpp"
#include "generators.hpp"

#include <doctest.h>

using namespace credalmc;
using doctest::Approx;

namespace {

const StateSpace ab{"a", "b"};
const StateSpace abc{"a", "b", "c"};
const Matrix ex53{{0.15, 0.85}, {0.85, 0.15}};
const Matrix cycle2{{0, 1}, {1, 0}};
const Matrix walk{{0.5, 0.5}, {0.5, 0.5}};
const double ex53_limit = 0.5 + 0.05 / 0.37;

// y -> sum_x pi(x) q(y | x), as a gamble for comparison.
Gamble apply_adjoint(const Matrix& q, const MassFunction& pi) {
    std::vector<double> out(q.size(), 0.0);
    for (std::size_t x = 0; x < q.size(); ++x) {
        for (std::size_t y = 0; y < q.size(); ++y) out[y] += pi[x] * q[x][y];
    }
    return Gamble(pi.space(), out);
}

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("limit examples") {
    gen::Rng rng(1);
    for (double eps : {0.05, 0.1, 0.5, 0.9}) {
        const auto h = gen::gamble(rng, ab);
        const auto r = limit_upper(UpperTransitionOperator::contaminated(ab, cycle2, eps), h);
        CHECK(std::abs(r.value - h.max()) <= 1e-9);
        CHECK(r.residual <= kDefaultLimitTolerance);
    }
    const auto rw = limit_upper(UpperTransitionOperator::contaminated(ab, walk, 0.1), Gamble::indicator(ab, 0));
    CHECK(rw.value == Approx(0.55).epsilon(1e-9));
    const auto r53 = limit_upper(UpperTransitionOperator::contaminated(ab, ex53, 0.1), Gamble::indicator(ab, 0));
    CHECK(std::abs(r53.value - ex53_limit) <= 1e-9);
    // value over-approximates: the limit lies in [value - residual, value]
    CHECK(r53.value >= ex53_limit - 1e-15);
    CHECK(r53.value - r53.residual <= ex53_limit + 1e-15);
}

TEST_CASE("limit fails on a precise cycle") {
    const auto c = UpperTransitionOperator::precise(ab, cycle2);
    CHECK(code_of([&] { limit_upper(c, Gamble::indicator(ab, 0), 1e-10, 1000); }) == ErrorCode::NonConvergence);
    CHECK(code_of([&] { limit_upper(c, Gamble::indicator(ab, 0), 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("contamination series") {
    const auto t = UpperTransitionOperator::precise(ab, ex53);
    CHECK(std::abs(contamination_limit(t, 0.1, Gamble::indicator(ab, 0), 1e-12) - ex53_limit) <= 1e-11);
    CHECK(contamination_limit(UpperTransitionOperator::precise(ab, walk), 0.1, Gamble::indicator(ab, 0)) ==
          Approx(0.55).epsilon(1e-9));
    const Gamble h(ab, {-0.3, 0.8});
    CHECK(contamination_limit(UpperTransitionOperator::precise(ab, cycle2), 0.3, h) == Approx(0.8).epsilon(1e-9));
    CHECK(code_of([&] { contamination_limit(t, 1.0, h); }) == ErrorCode::EpsilonOutOfRange);
    CHECK(code_of([&] { contamination_limit(UpperTransitionOperator::contaminated(ab, ex53, 0.1), 0.1, h); }) ==
          ErrorCode::InvalidModel);
}

TEST_CASE("contamination closed form against the recursion") {
    const auto m1 = CredalModel::interval(ab, {0.6, 0.1}, {0.9, 0.4});
    const auto t = UpperTransitionOperator::precise(ab, ex53);
    const ImpreciseMarkovChain c(m1, UpperTransitionOperator::contaminated(ab, ex53, 0.1), 51);
    const auto ia = Gamble::indicator(ab, 0);
    CHECK(contamination_evolve(m1, t, 0.1, ia, 0) == Approx(0.9).epsilon(1e-15));
    CHECK(contamination_evolve(m1, t, 0.1, ia, 1) == Approx(0.487).epsilon(1e-14));
    gen::Rng rng(9);
    for (std::size_t n = 0; n <= 50; ++n) {
        const auto h = n % 2 ? ia : gen::gamble(rng, ab);
        CHECK(std::abs(contamination_evolve(m1, t, 0.1, h, n) - marginal_upper(c, n + 1, h)) <= 1e-12);
    }
}

TEST_CASE("precise stationary distribution") {
    const auto pi = precise_stationary(UpperTransitionOperator::precise(ab, {{0.135, 0.865}, {0.865, 0.135}}));
    CHECK(std::abs(pi[0] - 0.5) <= 1e-9);
    const Matrix sym{{0.2, 0.5, 0.3}, {0.5, 0.1, 0.4}, {0.3, 0.4, 0.3}};
    const auto u = precise_stationary(UpperTransitionOperator::precise(abc, sym));
    for (std::size_t x = 0; x < 3; ++x) CHECK(std::abs(u[x] - 1.0 / 3) <= 1e-9);
    CHECK(code_of([] { precise_stationary(UpperTransitionOperator::precise(ab, {{1, 0}, {0, 1}})); }) ==
          ErrorCode::NotRegular);
}

TEST_CASE("cycle detection examples") {
    const auto cyc = detect_cycle(UpperTransitionOperator::precise(ab, cycle2), Gamble::indicator(ab, 0));
    CHECK(cyc.period == 2);
    CHECK(cyc.representative[0] == 1.0);
    CHECK(cyc.representative[1] == 0.0);

    const auto reg = detect_cycle(UpperTransitionOperator::contaminated(ab, ex53, 0.1), Gamble::indicator(ab, 0));
    CHECK(reg.period == 1);
    CHECK(reg.representative.max() - reg.representative.min() <= 1e-9);

    const auto flat = detect_cycle(UpperTransitionOperator::precise(ab, ex53), Gamble::constant(ab, 3.0));
    CHECK(flat.period == 1);
    CHECK(flat.iteration == 0);

    const Matrix rot{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
    const auto three = detect_cycle(UpperTransitionOperator::precise(abc, rot), Gamble(abc, {1, 0, 0.5}));
    CHECK(three.period == 3);
    const auto back = power(UpperTransitionOperator::precise(abc, rot), three.representative, 3);
    CHECK(sup_distance(back, three.representative) <= 1e-12);

    CHECK(code_of([&] {
              detect_cycle(UpperTransitionOperator::precise(abc, rot), Gamble(abc, {1, 0, 0.5}), 1e-10, 100, 2);
          }) == ErrorCode::NoCycleFound);
}

TEST_CASE("property: limits on random regular operators") {
    gen::Rng rng(13);
    int checked = 0;
    for (int i = 0; i < 120; ++i) {
        const auto s = gen::space(2 + gen::pick(rng, 2));
        const auto t = gen::op(rng, s);
        if (!is_regular(t, 12).found) continue;
        ++checked;
        const double tol = 1e-10;
        const auto h = gen::gamble(rng, s);
        const auto r = limit_upper(t, h, tol);
        CHECK(std::abs(limit_upper(t, apply(t, h), tol).value - r.value) <= 2 * tol);

        // Any three initial models end at the same value.
        for (int k = 0; k < 3; ++k) {
            const ImpreciseMarkovChain c(gen::any_model(rng, s), t, r.iterations + 2);
            CHECK(std::abs(marginal_upper(c, r.iterations + 2, h) - r.value) <= 10 * tol);
        }
        Gamble g = h;
        for (int k = 0; k < 30; ++k) {
            g = apply(t, g);
            CHECK(sup_norm(g) <= sup_norm(h) + 1e-12);
        }
        const auto cyc = detect_cycle(t, h);
        CHECK(cyc.period == 1);
    }
    CHECK(checked >= 60);

    for (int i = 0; i < 100; ++i) {
        const auto s = gen::space(2 + gen::pick(rng, 2));
        const auto m = gen::stochastic(rng, s.size(), 0.0);
        const double eps = gen::uniform(rng, 0.05, 0.9);
        const auto h = gen::gamble(rng, s);
        const double series = contamination_limit(UpperTransitionOperator::precise(s, m), eps, h);
        const double iter = limit_upper(UpperTransitionOperator::contaminated(s, m, eps), h).value;
        CHECK(std::abs(series - iter) <= 2e-10);

        const auto p = UpperTransitionOperator::precise(s, m);
        // A step change of tol does not bound the distance to the fixed
        // point when mixing is slow, so the oracle runs tighter.
        const auto pi = precise_stationary(p, 1e-13);
        CHECK(std::abs(expectation(pi, h) - limit_upper(p, h).value) <= 2e-10);
        CHECK(sup_distance(apply_adjoint(m, pi), Gamble(s, {pi.weights().begin(), pi.weights().end()})) <= 1e-13);
    }
}
