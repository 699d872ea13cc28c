#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <optional>

#include "dejong/bounds.hpp"
#include "dejong/distances.hpp"
#include "dejong/errors.hpp"
#include "dejong/exact_engine.hpp"
#include "dejong/family.hpp"
#include "dejong/pair.hpp"
#include "doctest.h"

using namespace dejong;

namespace {

BoundInputs inputs(double e4, double rho, double kappa, int p = 2, int n = 2,
                   bool symmetric = false) {
    return {.fourth_moment = e4, .rho = rho, .kappa = kappa, .p = p, .n = n,
            .symmetric = symmetric};
}

}  // namespace

TEST_CASE("kolmogorov bound: frozen arithmetic") {
    CHECK(kolmogorov_bound(inputs(3.0, 0.0, 1.0)) == 0.0);
    // 11.9*sqrt(2) + (3.5 + 10.8*2) * 1
    CHECK(kolmogorov_bound(inputs(1.0, 1.0, 4.0)) ==
          doctest::Approx(41.929141392239835).epsilon(1e-15));
    // 11.9*sqrt(1/2) + (3.5 + 10.8*sqrt(2)) * 1/2
    CHECK(kolmogorov_bound(inputs(2.5, 0.5, 2.0)) ==
          doctest::Approx(17.80132393293463).epsilon(1e-15));
}

TEST_CASE("symmetric bound: frozen arithmetic") {
    CHECK(symmetric_bound(3.0, 1, 100) == doctest::Approx(1.9).epsilon(1e-15));
    // 12*sqrt(1/2) + 19/2
    CHECK(symmetric_bound(2.5, 1, 4) == doctest::Approx(17.98528137423857).epsilon(1e-15));
    CHECK_THROWS_AS(symmetric_bound(3.0, 0, 4), OutOfRange);
    CHECK_THROWS_AS(symmetric_bound(3.0, 5, 4), OutOfRange);
}

TEST_CASE("wasserstein bound: frozen arithmetic and coefficients") {
    CHECK(wasserstein_bound(inputs(3.0, 0.0, 1.0)) == 0.0);
    // coefficient of the fourth-moment term: sqrt(2/pi) + 4/3
    CHECK(wasserstein_bound(inputs(4.0, 0.0, 1.0)) ==
          doctest::Approx(2.1312178941361988).epsilon(1e-15));
    // coefficient of the rho term at kappa = 1
    CHECK(wasserstein_bound(inputs(3.0, 1.0, 1.0)) ==
          doctest::Approx(2.430877722658318).epsilon(1e-15));
    CHECK(wasserstein_bound(inputs(1.0, 1.0, 4.0)) ==
          doctest::Approx(7.875752695576275).epsilon(1e-15));
    CHECK(wasserstein_bound(inputs(2.5, 0.5, 2.0)) ==
          doctest::Approx(3.2258887470568283).epsilon(1e-15));
}

TEST_CASE("negative excess kurtosis is legal input") {
    // |E[W^4] - 3| keeps the formulas defined below kurtosis 3.
    CHECK(kolmogorov_bound(inputs(1.0, 0.0, 1.0)) ==
          doctest::Approx(11.9 * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(wasserstein_bound(inputs(2.0, 0.0, 1.0)) ==
          doctest::Approx(2.1312178941361988).epsilon(1e-15));
}

TEST_CASE("proof constants: un-rounded versions of the theorem constants") {
    ProofConstants c = proof_constants();
    CHECK(c.c_fourth == doctest::Approx(11.82842712474619).epsilon(1e-15));   // 9 + 2*sqrt(2)
    CHECK(c.c_rho == doctest::Approx(3.4641016151377544).epsilon(1e-15));     // 2*sqrt(3)
    CHECK(c.c_rho_kappa == doctest::Approx(10.797958971132712).epsilon(1e-15));  // 1 + 4*sqrt(6)
    CHECK(c.c_fourth < 11.9);
    CHECK(c.c_rho < 3.5);
    CHECK(c.c_rho_kappa < 10.8);

    CHECK(proof_kolmogorov_bound(inputs(1.0, 1.0, 4.0)) ==
          doctest::Approx(41.78794161876103).epsilon(1e-15));
    // The theorem's rounded constants always dominate the proof's.
    for (double e4 : {1.0, 2.5, 3.0, 3.7, 6.0})
        for (double rho : {0.0, 0.25, 0.5, 1.0})
            for (double kappa : {0.5, 2.0, 4.0, 6.0}) {
                auto in = inputs(e4, rho, kappa);
                CHECK(proof_kolmogorov_bound(in) <= kolmogorov_bound(in));
            }
}

TEST_CASE("kappa policy") {
    auto sym = kappa_policy(true, 3, std::nullopt);
    CHECK(sym.value == 6.0);
    CHECK(sym.source == KappaSource::PaperSymmetric);
    CHECK(std::string(kappa_source_tag(sym.source)) == "paper-symmetric");

    auto user = kappa_policy(false, 3, 10.0);
    CHECK(user.value == 10.0);
    CHECK(std::string(kappa_source_tag(user.source)) == "user");
    // A user value overrides the symmetric default too.
    CHECK(kappa_policy(true, 3, 10.0).source == KappaSource::User);

    CHECK_THROWS_AS(kappa_policy(false, 3, std::nullopt), KappaUnknown);
    CHECK_THROWS_AS(kappa_policy(false, 3, 0.0), InvalidKappa);
    CHECK_THROWS_AS(kappa_policy(true, 3, -1.0), InvalidKappa);
}

TEST_CASE("invalid inputs throw") {
    CHECK_THROWS_AS(kolmogorov_bound(inputs(3.0, 1.0, 0.0)), InvalidKappa);
    CHECK_THROWS_AS(kolmogorov_bound(inputs(3.0, 1.0, -2.0)), InvalidKappa);
    CHECK_THROWS_AS(wasserstein_bound(inputs(3.0, 1.0, 0.0)), InvalidKappa);
    CHECK_THROWS_AS(kolmogorov_bound(inputs(3.0, -0.5, 1.0)), OutOfRange);
}

TEST_CASE("monotonicity in |E4-3|, rho, kappa") {
    const double grid_e4[] = {3.0, 3.5, 4.0, 5.0, 8.0};
    const double grid_e4_down[] = {3.0, 2.5, 2.0, 1.5, 1.0};  // growing |E4-3| below 3
    const double grid_rho[] = {0.0, 0.1, 0.4, 1.0, 2.0};
    const double grid_kappa[] = {0.5, 1.0, 2.0, 4.0, 8.0};

    auto check_chain = [](auto f) {
        double prev = -1.0;
        bool ok = true;
        auto step = [&](double v) {
            ok = ok && v >= prev;
            prev = v;
        };
        f(step);
        CHECK(ok);
    };

    for (auto bound : {+[](const BoundInputs& in) { return kolmogorov_bound(in); },
                       +[](const BoundInputs& in) { return wasserstein_bound(in); },
                       +[](const BoundInputs& in) { return proof_kolmogorov_bound(in); }}) {
        check_chain([&](auto step) {
            for (double e4 : grid_e4) step(bound(inputs(e4, 0.3, 2.0)));
        });
        check_chain([&](auto step) {
            for (double e4 : grid_e4_down) step(bound(inputs(e4, 0.3, 2.0)));
        });
        check_chain([&](auto step) {
            for (double rho : grid_rho) step(bound(inputs(4.0, rho, 2.0)));
        });
        check_chain([&](auto step) {
            for (double kappa : grid_kappa) step(bound(inputs(4.0, 0.3, kappa)));
        });
    }
    check_chain([&](auto step) {
        for (double e4 : grid_e4) step(symmetric_bound(e4, 1, 9));
    });
    check_chain([&](auto step) {
        for (double e4 : grid_e4_down) step(symmetric_bound(e4, 1, 9));
    });
}

TEST_CASE("dk/dw consistency predicate") {
    CHECK(dk_dw_consistency(0.34134474606854293, 0.5353773215478798));
    CHECK(dk_dw_consistency(0.0, 0.0));
    CHECK(dk_dw_consistency(0.8, 0.64));        // exactly on the boundary
    CHECK_FALSE(dk_dw_consistency(0.9, 0.64));  // 0.9 > 0.8
    CHECK_FALSE(dk_dw_consistency(0.1, -1.0));
}

TEST_CASE("dominance on the symmetric Rademacher battery") {
    struct Member {
        int n, p;
    };
    for (auto [n, p] : {Member{4, 1}, Member{9, 1}, Member{4, 3}, Member{9, 2}}) {
        CAPTURE(n);
        CAPTURE(p);
        auto spec = family::symmetric_rademacher(n, p);
        auto ctx = PairContext<Rational>::build(spec);
        auto dec = hoeffding_decompose(ctx.space, ctx.w);
        auto var = component_variances(dec);
        const double e4 = to_double(moment(ctx.space, spec, 4));
        const double rho = std::sqrt(to_double(rho_squared(var, n)));
        CHECK(to_double(moment(ctx.space, spec, 2)) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(rho == doctest::Approx(std::sqrt(double(p) / n)).epsilon(1e-12));

        auto law = law_from_space(ctx.space, ctx.w);
        const double dk = kolmogorov_exact(law);
        const double dw = wasserstein_exact(law);
        auto kappa = kappa_policy(true, p, std::nullopt);
        auto in = inputs(e4, rho, kappa.value, p, n, true);

        CHECK(kolmogorov_bound(in) >= dk);
        CHECK(proof_kolmogorov_bound(in) >= dk);
        CHECK(symmetric_bound(e4, p, n) >= dk);
        CHECK(wasserstein_bound(in) >= dw);
        CHECK(dk_dw_consistency(dk, dw));

        auto report = make_bound_report(in, kappa.source, dk, dw, std::nullopt, std::nullopt);
        CHECK(report.verdict_kolmogorov == Verdict::Dominates);
        CHECK(report.verdict_symmetric == Verdict::Dominates);
        CHECK(report.verdict_wasserstein == Verdict::Dominates);
        CHECK(report.symmetric.has_value());
        CHECK(report.dk_dw_consistent);
    }
}

TEST_CASE("bound report verdict logic") {
    auto zero = inputs(3.0, 0.0, 1.0);

    auto unknown = make_bound_report(zero, KappaSource::User, std::nullopt, std::nullopt,
                                     std::nullopt, std::nullopt);
    CHECK(unknown.verdict_kolmogorov == Verdict::Unknown);
    CHECK(unknown.verdict_wasserstein == Verdict::Unknown);
    CHECK_FALSE(unknown.symmetric.has_value());
    CHECK(std::string(verdict_tag(Verdict::Unknown)) == "unknown");

    auto exact_tight = make_bound_report(zero, KappaSource::User, 0.0, 0.0, std::nullopt,
                                         std::nullopt);
    CHECK(exact_tight.verdict_kolmogorov == Verdict::Dominates);
    CHECK(exact_tight.verdict_wasserstein == Verdict::Dominates);

    auto exact_violated = make_bound_report(zero, KappaSource::User, 0.1, 0.2, std::nullopt,
                                            std::nullopt);
    CHECK(exact_violated.verdict_kolmogorov == Verdict::Violated);
    CHECK(exact_violated.verdict_wasserstein == Verdict::Violated);
    CHECK(std::string(verdict_tag(exact_violated.verdict_kolmogorov)) == "violated");

    // Empirical estimates get the confidence band subtracted.
    auto inside_band = make_bound_report(zero, KappaSource::User, std::nullopt, std::nullopt,
                                         0.05, 0.1);
    CHECK(inside_band.verdict_kolmogorov == Verdict::Dominates);
    auto outside_band = make_bound_report(zero, KappaSource::User, std::nullopt, std::nullopt,
                                          0.05, 0.01);
    CHECK(outside_band.verdict_kolmogorov == Verdict::Violated);

    // An exact distance outranks an empirical one when both are present.
    auto both = make_bound_report(zero, KappaSource::User, 0.0, std::nullopt, 0.5, 0.01);
    CHECK(both.verdict_kolmogorov == Verdict::Dominates);
}

TEST_CASE("family: symmetric Rademacher construction") {
    auto spec = family::symmetric_rademacher(4, 3);
    CHECK(spec.n == 4);
    CHECK(spec.order() == 3);
    CHECK(spec.symmetric);
    CHECK(spec.kernels.entries.size() == 4);
    CHECK(spec.kernels.entries.front().coeff == Rational(1, 2));
    CHECK(validate_spec(spec).empty());

    CHECK_THROWS_AS(family::symmetric_rademacher(5, 2), OutOfRange);  // C(5,2)=10 not square
    CHECK_THROWS_AS(family::symmetric_rademacher(3, 4), OutOfRange);
}

TEST_CASE("family: weighted Rademacher and real-mode p=1") {
    auto spec = family::weighted_rademacher({Rational(3, 5), Rational(-4, 5)});
    CHECK(validate_spec(spec).empty());
    auto ctx = PairContext<Rational>::build(spec);
    CHECK(moment(ctx.space, spec, 2) == Rational(1));
    CHECK_THROWS_AS(family::weighted_rademacher({Rational(1, 2), Rational(1, 2)}), SpecError);

    auto real = family::p1_rademacher_real(8);
    CHECK(validate_spec(real).empty());
    auto rctx = PairContext<double>::build(real);
    CHECK(moment(rctx.space, real, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(moment(rctx.space, real, 4) == doctest::Approx(3.0 - 2.0 / 8).epsilon(1e-12));
    CHECK(check_degeneracy(rctx.space, real).degenerate);
}

TEST_CASE("family: three-point law moments") {
    auto v = family::three_point();
    CHECK(v.mean() == Rational(0));
    CHECK(v.raw_moment(2) == Rational(1));
    CHECK(v.raw_moment(3) == Rational(1));
    CHECK(v.raw_moment(4) == Rational(3));
}

TEST_CASE("family: cycle mix drives E[W^4] to 3 with rho fixed") {
    auto params = family::cycle_mix_parameters();
    REQUIRE(params.size() == 4);
    Rational prev_gap(-1);
    bool first = true;
    for (const auto& t : params) {
        CAPTURE(rational_str(t));
        auto spec = family::cycle_mix(t);
        CHECK(validate_spec(spec).empty());
        auto ctx = PairContext<Rational>::build(spec);
        auto dec = hoeffding_decompose(ctx.space, ctx.w);
        CHECK(check_degeneracy(ctx.space, spec).degenerate);

        const Rational one(1);
        const Rational denom = one + t * t;
        const Rational a = (one - t * t) / denom;
        const Rational b = (t + t) / denom;
        CHECK(a * a + b * b == one);
        // E[W^4] - 3 = b^4 - 2a^4, shrinking along the parameter sequence.
        const Rational gap = b * b * b * b - 2 * a * a * a * a;
        CHECK(moment(ctx.space, spec, 4) - 3 == gap);
        CHECK(sgn(gap) > 0);
        if (!first) CHECK(gap < prev_gap);
        prev_gap = gap;
        first = false;

        // rho^2 = a^2: coordinate 1 carries a^2, cycle coordinates b^2/2 < a^2.
        CHECK(rho_squared(component_variances(dec), 6) == a * a);
        CHECK(a * a > b * b / 2);

        // The law stays far from normal even as the fourth moment closes in on 3.
        auto law = law_from_space(ctx.space, ctx.w);
        CHECK(kolmogorov_exact(law) >= 0.05);
    }
    CHECK(to_double(prev_gap) < 2e-4);
}
