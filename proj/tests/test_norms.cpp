#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "padic/norms.hpp"
#include "padic/operators.hpp"

using namespace padic;

namespace {

double unif(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> random_values(std::mt19937_64& rng, std::size_t len) {
    std::vector<double> v(len);
    for (double& x : v) x = rng() % 3 == 0 ? 0.0 : std::pow(10.0, -1.5 + 3.0 * unif(rng));
    return v;
}

}  // namespace

TEST_CASE("Lebesgue norm examples") {
    PadicContext ctx(2, 1);
    // |x|^{-1/2} chi(|x| < 1) in L^2(|x|^{1/2}): norm^2 = (1-p^-n) sum_{k <= -1} p^{k/2}.
    ShellFunction f0 = ShellFunction::power(ctx, 1.0, Rational(-1, 2), ShellRange::at_most(-1));
    double c = oracle::sum(-2000, -1, [](ShellIndex k) { return oracle::shell(2, 1, k) * std::pow(2.0, -0.5 * static_cast<double>(k)); });
    CHECK(lp_norm(f0, {Rational(2), Rational(1, 2)}).checked() == doctest::Approx(std::sqrt(c)).epsilon(1e-14));
    ShellFunction open_ball = ShellFunction::power(ctx, 1.0, Rational(0), ShellRange::at_most(-1));
    CHECK(lp_norm(open_ball, {}).checked() == doctest::Approx(0.5));
    CHECK(lp_norm(ShellFunction(ctx), {Rational(3)}).checked() == 0.0);
    CHECK_FALSE(lp_norm(ShellFunction::power(ctx, 1.0, Rational(0), ShellRange::all()), {}).converged);
    CHECK_THROWS(lp_norm(open_ball, {Rational(1, 2)}));
}

TEST_CASE("Lebesgue norms of multi-term and finite functions match shell sums") {
    PadicContext ctx(3, 1);
    // 3^{-k} + 3^{-2k} on k >= 0 in L^{3/2}(|x|^{-1/2}).
    ShellFunction f(ctx, {{ShellRange::at_least(0), ExpSum({{1.0, Rational(-2)}, {1.0, Rational(-1)}})}});
    LebesgueParams prm{Rational(3, 2), Rational(-1, 2)};
    double direct = oracle::sum(0, 600, [&](ShellIndex k) {
        return std::pow(f(k), 1.5) * oracle::shell(3, 1, k) * std::pow(3.0, -0.5 * static_cast<double>(k));
    });
    TailSum got = lp_norm(f, prm);
    CHECK(std::abs(got.value - std::pow(direct, 1.0 / 1.5)) <= got.error_bound + 1e-13);

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> v = random_values(rng, 12);
        ShellFunction g = ShellFunction::from_shell_values(ctx, -6, v);
        Rational p1(2 + static_cast<std::int64_t>(rng() % 5), 2);
        Rational beta(static_cast<std::int64_t>(rng() % 5) - 2, 3);
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            ShellIndex k = -6 + static_cast<ShellIndex>(i);
            s += std::pow(v[i], p1.to_double()) * oracle::shell(3, 1, k) * std::pow(3.0, static_cast<double>(k) * beta.to_double());
        }
        CHECK(lp_norm(g, {p1, beta}).checked() == doctest::Approx(std::pow(s, 1.0 / p1.to_double())).epsilon(1e-12));
    }
}

TEST_CASE("weak norm examples") {
    PadicContext ctx(2, 1);
    ShellFunction closed_ball = ShellFunction::power(ctx, 1.0, Rational(0), ShellRange::at_most(0));
    CHECK(weak_norm(closed_ball, {}).checked() == doctest::Approx(1.0));
    ShellFunction two_shells = ShellFunction::from_shell_values(ctx, -1, {1.0, 2.0});
    // max(2 * 0.5, 1 * 0.75).
    CHECK(weak_norm(two_shells, {}).checked() == doctest::Approx(1.0));
    // |x|^{-n} in L^{1,inf}: every level v = p^{-k} has {f >= v} = B_k of measure p^k.
    ShellFunction critical = ShellFunction::power(ctx, 1.0, Rational(-1), ShellRange::all());
    CHECK(weak_norm(critical, {}).checked() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(weak_norm(ShellFunction::power(ctx, 1.0, Rational(-1, 2), ShellRange::all()), {}).converged);
    CHECK_FALSE(weak_norm(ShellFunction::power(ctx, 1.0, Rational(0), ShellRange::at_least(0)), {}).converged);
    CHECK_THROWS(weak_norm(closed_ball, {Rational(1), Rational(-1)}));
}

TEST_CASE("weak norm equals the level-enumeration oracle on short functions") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 300; ++trial) {
        int p = trial % 3 == 0 ? 5 : (trial % 3 == 1 ? 2 : 3);
        int n = 1 + trial % 2;
        PadicContext ctx(p, n);
        std::size_t len = 1 + rng() % 12;
        ShellIndex first = static_cast<ShellIndex>(rng() % 13) - 6;
        std::vector<double> v = random_values(rng, len);
        // Repeated values exercise level ties.
        if (len > 3) v[len - 1] = v[0];
        Rational q(2 + static_cast<std::int64_t>(rng() % 7), 2);
        Rational gamma(static_cast<std::int64_t>(rng() % 4) - 1, 2);
        ShellFunction f = ShellFunction::from_shell_values(ctx, first, v);
        double expect = oracle::weak_by_levels(p, n, gamma.to_double(), q.to_double(), first, v);
        CHECK(weak_norm(f, {q, gamma}).checked() == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("norm properties: homogeneity, Chebyshev, monotonicity") {
    PadicContext ctx(2, 1);
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v = random_values(rng, 10);
        std::vector<double> w(v);
        for (double& x : w) x += rng() % 2 ? std::pow(10.0, -1.0 + unif(rng)) : 0.0;
        ShellFunction f = ShellFunction::from_shell_values(ctx, -5, v);
        ShellFunction g = ShellFunction::from_shell_values(ctx, -5, w);
        const double c = 0.1 + 10.0 * unif(rng);
        Rational q(2 + static_cast<std::int64_t>(rng() % 4), 2);
        Rational gamma(static_cast<std::int64_t>(rng() % 3) - 1, 2);
        WeakParams wp{q, gamma};
        LebesgueParams lp{q, gamma};
        SupParams sp{gamma};
        double wf = weak_norm(f, wp).checked();
        CHECK(weak_norm(f.scaled(c), wp).checked() == doctest::Approx(c * wf).epsilon(1e-13));
        CHECK(lp_norm(f.scaled(c), lp).checked() == doctest::Approx(c * lp_norm(f, lp).checked()).epsilon(1e-13));
        CHECK(sup_norm(f.scaled(c), sp).checked() == doctest::Approx(c * sup_norm(f, sp).checked()).epsilon(1e-13));
        // lambda mu({f > lambda})^{1/q} <= ||f||_{L^q} with the same weight.
        CHECK(wf <= lp_norm(f, lp).checked() * (1 + 1e-13));
        // f <= g pointwise.
        CHECK(wf <= weak_norm(g, wp).checked() * (1 + 1e-13));
        CHECK(lp_norm(f, lp).checked() <= lp_norm(g, lp).checked() * (1 + 1e-13));
        CHECK(sup_norm(f, sp).checked() <= sup_norm(g, sp).checked() * (1 + 1e-13));
    }
}

TEST_CASE("weak norm split around the unit-shell level of the weighted Hardy image") {
    for (auto [p, n] : {std::pair{2, 1}, {3, 2}}) {
        PadicContext ctx(p, n);
        const Rational p1(2), beta(Rational(n) / Rational(2)), gamma(1, 2), alpha(0);
        const Rational q = (gamma + Rational(n)) / ((beta + Rational(n)) / p1 - alpha);
        ShellFunction f0 = ShellFunction::power(ctx, 1.0, -(beta / (p1 - Rational(1))), ShellRange::at_most(-1));
        ShellFunction h = fractional_hardy(f0, alpha);
        WeakParams wp{q, gamma};
        WeakNormSplit s = weak_norm_split(h, wp, h(0));
        const double pd = p, nd = n, qd = q.to_double(), sd = (beta / (p1 - Rational(1))).to_double();
        const double cval = (1 - std::pow(pd, -nd)) * std::pow(pd, sd - nd) / (1 - std::pow(pd, sd - nd));
        const double kval = (1 - std::pow(pd, -nd)) / (1 - std::pow(pd, -nd - gamma.to_double()));
        // Below the threshold the sup is the left limit at h(0) = C over the closed unit ball.
        CHECK(h(0) == doctest::Approx(cval).epsilon(1e-14));
        CHECK(s.below.checked() == doctest::Approx(cval * std::pow(kval, 1 / qd)).epsilon(1e-13));
        // Above it the best level is h(-1) over B_{-1}.
        double above = h(-1) * std::pow(kval * std::pow(pd, -(nd + gamma.to_double())), 1 / qd);
        CHECK(s.at_or_above.checked() == doctest::Approx(above).epsilon(1e-13));
        CHECK(std::max(s.below.value, s.at_or_above.value) == doctest::Approx(weak_norm(h, wp).checked()).epsilon(1e-15));
    }
}

TEST_CASE("sup norm examples") {
    PadicContext ctx(2, 1);
    CHECK(sup_norm(ShellFunction::power(ctx, 1.0, Rational(-3, 4), ShellRange::all()), {Rational(3, 4)}).checked() ==
          doctest::Approx(1.0));
    ShellFunction closed_ball = ShellFunction::power(ctx, 1.0, Rational(0), ShellRange::at_most(0));
    CHECK(sup_norm(closed_ball, {Rational(1)}).checked() == doctest::Approx(1.0));
    CHECK_FALSE(sup_norm(closed_ball, {Rational(-1)}).converged);
}

TEST_CASE("norms of sampled images carry the sample errors") {
    PadicContext ctx(2, 1);
    NumericImage img{-1, {1.0, 2.0, 0.5}, {1e-3, 2e-3, 0.0}};
    TailSum s = sup_norm(img, ctx, {Rational(1)});
    CHECK(s.value == doctest::Approx(2.0));
    CHECK(s.error_bound == doctest::Approx(2e-3));
    TailSum w = weak_norm(img, ctx, {});
    double expect = oracle::weak_by_levels(2, 1, 0.0, 1.0, -1, img.values);
    CHECK(w.value == doctest::Approx(expect));
    CHECK(w.error_bound > 0.0);
    CHECK(w.error_bound < 1e-2);
}
