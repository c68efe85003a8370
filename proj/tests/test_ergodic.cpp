#include <doctest.h>

#include <cmath>
#include <random>

#include "mlc/circle.hpp"
#include "mlc/ergodic.hpp"
#include "mlc/oracles.hpp"

using namespace mlc;

namespace {
SkewSpec cos_skew() {
    // A = -(1/2) tau' with tau = sin(2 pi z)/(2 pi): A(z) = -cos(2 pi z)/2.
    SkewSpec s;
    s.lambda = 0.5;
    s.A = TrigPoly::cosine(1, -0.5);
    return s;
}
}  // namespace

TEST_CASE("skew product forward and inverse") {
    SkewSpec zero;
    zero.A = TrigPoly{};
    auto [z1, s1] = skew_forward(zero, 0.3, 2.0);
    CHECK(z1 == doctest::Approx(0.6));
    CHECK(s1 == doctest::Approx(1.0));

    SkewSpec one;
    one.A = TrigPoly::constant(1.0);
    auto [z2, s2] = skew_forward(one, 0.3, 0.0);
    CHECK(z2 == doctest::Approx(0.6));
    CHECK(s2 == doctest::Approx(1.0));

    const SkewSpec cs = cos_skew();
    auto [z3, s3] = skew_forward(cs, 0.0, 4.0);
    CHECK(z3 == doctest::Approx(0.0));
    CHECK(s3 == doctest::Approx(1.5));

    auto branches = skew_inverse_branches(zero, 0.6, 1.0);
    CHECK(branches[0].first == doctest::Approx(0.3));
    CHECK(branches[0].second == doctest::Approx(2.0));
    CHECK(branches[1].first == doctest::Approx(0.8));
    CHECK(branches[1].second == doctest::Approx(2.0));

    auto b2 = skew_inverse_branches(one, 0.0, 2.0);
    CHECK(b2[0].first == doctest::Approx(0.0));
    CHECK(b2[0].second == doctest::Approx(2.0));
    CHECK(b2[1].first == doctest::Approx(0.5));
    CHECK(b2[1].second == doctest::Approx(2.0));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uy(0.0, 1.0), ur(-3.0, 3.0);
    for (int t = 0; t < 50; ++t) {
        const double y = uy(rng), r = ur(rng);
        for (const auto& [zi, si] : skew_inverse_branches(cs, y, r)) {
            const auto [fy, fr] = skew_forward(cs, zi, si);
            CHECK(wrap_distance(fy, y) < 1e-12);
            CHECK(fr == doctest::Approx(r).epsilon(1e-12));
        }
    }

    SkewSpec bad = cs;
    bad.f = MapSpec::rotation(0.3);
    CHECK_THROWS_AS(skew_inverse_branches(bad, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("tsujii series") {
    SkewSpec zero;
    zero.A = TrigPoly{};
    CHECK(tsujii_series(zero, 0.37, SymbolSequence::constant(1, 12)).value == 0.0);

    SkewSpec cspec;
    cspec.A = TrigPoly::constant(0.7);
    const TsujiiResult r = tsujii_series(cspec, 0.2, SymbolSequence::constant(2, 20));
    CHECK(r.value == doctest::Approx(0.7 * (2.0 - std::pow(2.0, -19.0))).epsilon(1e-14));
    CHECK(r.tail_bound == doctest::Approx(0.7 * std::pow(2.0, -19.0)).epsilon(1e-12));
    CHECK(r.value ==
          doctest::Approx(oracle::geometric_series(0.7, 20, 0.5)).epsilon(1e-14));
}

TEST_CASE("tsujii cocycle identity") {
    // s(f(x), pi(x) a) = A(x) + (1/2) s(x, a): prepending pi(x) to the
    // sequence and starting from f(x) retraces the same orbit.
    const SkewSpec spec = cos_skew();
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    std::uniform_int_distribution<int> ud(1, 2);
    for (int t = 0; t < 50; ++t) {
        const double x = ux(rng);
        SymbolSequence a;
        for (int k = 0; k < 30; ++k) a.digits.push_back(static_cast<std::uint8_t>(ud(rng)));
        SymbolSequence pia;
        pia.digits.push_back(static_cast<std::uint8_t>(branch_index(x)));
        pia.digits.insert(pia.digits.end(), a.digits.begin(), a.digits.end());
        // Prepending pi(x) at matched depth retraces the identical orbit, so
        // the truncated identity is exact up to roundoff.
        const double lhs = tsujii_series(spec, eval_map(spec.f, x), pia).value;
        const double rhs =
            fn_eval(spec.A, x) + 0.5 * tsujii_series(spec, x, a).value;
        CHECK(std::fabs(lhs - rhs) <= 1e-12);
    }
}

TEST_CASE("sup over sequences") {
    SkewSpec zero;
    zero.A = TrigPoly{};
    CHECK(sup_over_sequences_tree(zero, 0.4, 10) == 0.0);

    SkewSpec cspec;
    cspec.A = TrigPoly::constant(0.3);
    const int K = 15;
    CHECK(sup_over_sequences_tree(cspec, 0.4, K) ==
          doctest::Approx(0.3 * (2.0 - std::pow(2.0, 1.0 - K))).epsilon(1e-13));

    CHECK_THROWS_AS(sup_over_sequences_tree(cspec, 0.4, 27), std::invalid_argument);

    // Tree and memoized-grid modes agree to interpolation accuracy.
    const SkewSpec spec = cos_skew();
    for (double x : {0.13, 0.4, 0.77}) {
        const double tree = sup_over_sequences_tree(spec, x, 14);
        const double grid = sup_over_sequences_grid(spec, x, 14, 2048);
        CHECK(tree == doctest::Approx(grid).epsilon(1e-7));
    }
}

TEST_CASE("involution kernel") {
    const SkewSpec spec = cos_skew();
    const SymbolSequence a = SymbolSequence::constant(1, 30);
    CHECK(involution_kernel(spec, 0.3, a, 0.3) == 0.0);

    SkewSpec cspec;
    cspec.A = TrigPoly::constant(0.9);
    CHECK(involution_kernel(cspec, 0.3, a, 0.8) == doctest::Approx(0.0).epsilon(1e-14));

    // Antisymmetry and agreement with the direct two-series subtraction.
    const double direct = tsujii_series(spec, 0.3, a).value -
                          tsujii_series(spec, 0.5, a).value;
    CHECK(involution_kernel(spec, 0.3, a, 0.5) == doctest::Approx(direct).epsilon(1e-14));
    CHECK(involution_kernel(spec, 0.3, a, 0.5) ==
          doctest::Approx(-involution_kernel(spec, 0.5, a, 0.3)).epsilon(1e-14));
}

TEST_CASE("solve_subaction: degenerate potentials") {
    SkewSpec zero;
    zero.A = TrigPoly{};
    const SubactionSolution s0 = solve_subaction(zero, 128, 1e-12, 100);
    CHECK(s0.converged);
    CHECK(s0.bellman_residual <= 1e-12);
    for (double v : s0.b.samples()) CHECK(std::fabs(v) < 1e-12);

    SkewSpec cspec;
    cspec.A = TrigPoly::constant(0.4);
    const SubactionSolution sc = solve_subaction(cspec, 128, 1e-12, 200);
    CHECK(sc.converged);
    for (double v : sc.b.samples()) CHECK(v == doctest::Approx(0.8).epsilon(1e-10));
}

TEST_CASE("solve_subaction: one-mode potential") {
    const SkewSpec spec = cos_skew();
    const SubactionSolution sol = solve_subaction(spec, 2048, 1e-11, 200);
    CHECK(sol.converged);
    CHECK(sol.bellman_residual <= 1e-10);
    CHECK(sol.contraction_ratio > 0.45);
    CHECK(sol.contraction_ratio < 0.55);

    // Bellman certificate: b(z) >= lambda b(y) + A(y) - tol for both
    // preimages, equality at the recorded branch.
    const auto& b = sol.b;
    for (int i = 0; i < 2048; i += 11) {
        const double z = i / 2048.0;
        const double bz = b.samples()[i];
        double best = -1e300;
        for (int br = 1; br <= 2; ++br) {
            const double y = inverse_branch(br, z);
            const double v = 0.5 * b(y) + fn_eval(spec.A, y);
            CHECK(bz >= v - 1e-9);
            best = std::max(best, v);
        }
        CHECK(bz == doctest::Approx(best).epsilon(1e-8));
    }

    // The one-mode subaction has its branch switch at z = 1/2 and an induced
    // kink at the fixed point 0.
    bool has_half = false, has_zero = false;
    for (double bp : b.breakpoints()) {
        if (wrap_distance(bp, 0.5) < 1e-3) has_half = true;
        if (wrap_distance(bp, 0.0) < 1e-3) has_zero = true;
    }
    CHECK(has_half);
    CHECK(has_zero);

    // Cross-method: depth-K tree sup agrees within tail + interpolation.
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    const int K = 20;
    const double tail = std::pow(0.5, K) * 0.5 / 0.5;
    for (int t = 0; t < 8; ++t) {
        const double x = ux(rng);
        const double tree = sup_over_sequences_tree(spec, x, K);
        CHECK(std::fabs(tree - b(x)) <= tail + 1e-6);
    }
}

TEST_CASE("value iteration contracts at rate lambda") {
    const SkewSpec spec = cos_skew();
    // Measured through the exposed contraction_ratio (median of update-norm
    // ratios past the transient).
    const SubactionSolution sol = solve_subaction(spec, 512, 1e-11, 200);
    CHECK(sol.contraction_ratio == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("twist_check") {
    const SkewSpec spec = cos_skew();
    std::vector<double> xs;
    for (int i = 0; i < 32; ++i) {
        const double x = (i + 0.5) / 32.0;
        if (wrap_distance(x, 0.0) > 1e-3 && wrap_distance(x, 0.5) > 1e-3) xs.push_back(x);
    }
    const auto a = SymbolSequence::constant(1, 18);
    const auto b = SymbolSequence::constant(2, 18);

    SUBCASE("degenerate constant potential") {
        SkewSpec cspec;
        cspec.A = TrigPoly::constant(0.4);
        const TwistReport rep = twist_check(cspec, xs, {{a, b}}, 18, 1e-5);
        CHECK(!rep.holds);
        CHECK(rep.min_margin == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("one-mode potential agrees with the dense-grid refinement") {
        const TwistReport coarse = twist_check(spec, xs, {{a, b}}, 18, 1e-5);
        std::vector<double> dense;
        for (int i = 0; i < 128; ++i) {
            const double x = (i + 0.5) / 128.0;
            if (wrap_distance(x, 0.0) > 1e-3 && wrap_distance(x, 0.5) > 1e-3)
                dense.push_back(x);
        }
        const TwistReport fine = twist_check(spec, dense, {{a, b}}, 18, 1e-5);
        CHECK(coarse.holds == fine.holds);
    }
    SUBCASE("precondition violations") {
        CHECK_THROWS_AS(twist_check(spec, xs, {{a, a}}, 18, 1e-5), std::invalid_argument);
        CHECK_THROWS_AS(twist_check(spec, {0.5}, {{a, b}}, 18, 1e-5), std::invalid_argument);
    }
}

TEST_CASE("coboundary residual and Bellman gaps") {
    SUBCASE("zero data") {
        const CoboundaryReport rep = coboundary_residual(
            PeriodicFunction(TrigPoly{}), TrigPoly{}, MapSpec::doubling(), 0.5, 512);
        CHECK(rep.max_residual_se == 0.0);
        CHECK(rep.max_gap == 0.0);
    }
    SUBCASE("subaction gap certificate") {
        const SkewSpec spec = cos_skew();
        const SubactionSolution sol = solve_subaction(spec, 2048, 1e-11, 200);
        const TrigPoly tau = TrigPoly::sine(1, 1.0 / kTwoPi);
        const CoboundaryReport rep = coboundary_residual(
            PeriodicFunction(sol.b), tau, MapSpec::doubling(), 0.5, 2048);
        // The min-over-branch gap vanishes at the certified solution; the
        // everywhere-residual is O(1) off the maximizing branch.
        CHECK(rep.max_gap <= 5e-9);
        CHECK(rep.max_offbranch_gap > 0.5);
        CHECK(rep.max_residual_se > 0.5);
    }
}
