#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dejong/distances.hpp"
#include "dejong/exact_engine.hpp"

using namespace dejong;

namespace {

// Independent Φ oracle: Taylor/Mills-style series in long double.
// Φ(t) = 1/2 + φ(t) Σ_{k≥0} t^{2k+1} / (1·3·5···(2k+1)), then symmetry.
long double phi_oracle(long double t) {
    if (t < 0) return 1.0L - phi_oracle(-t);
    long double term = t, sum = t, denom = 1.0L;
    for (int k = 1; k < 400; ++k) {
        denom = static_cast<long double>(2 * k + 1);
        term *= t * t / denom;
        sum += term;
        if (term < 1e-25L * sum) break;
    }
    long double pdf = std::exp(-0.5L * t * t) * 0.39894228040143267794L;
    return 0.5L + pdf * sum;
}

// d_W by quantile coupling: ∫₀¹ |F⁻¹(u) − Φ⁻¹(u)| du on a midpoint grid.
double dw_quadrature(const DiscreteLaw& law, int grid = 2'000'000) {
    double acc = 0;
    for (int i = 0; i < grid; ++i) {
        double u = (i + 0.5) / grid;
        double z = normal_quantile(u);
        double cum = 0, inv = law.atoms.back().first;
        for (const auto& [v, p] : law.atoms) {
            cum += p;
            if (cum >= u) {
                inv = v;
                break;
            }
        }
        acc += std::fabs(inv - z);
    }
    return acc / grid;
}

DiscreteLaw rademacher_law() { return {{{-1.0, 0.5}, {1.0, 0.5}}}; }

DiscreteLaw half_sum4_law() {
    return {{{-2.0, 1.0 / 16}, {-1.0, 4.0 / 16}, {0.0, 6.0 / 16}, {1.0, 4.0 / 16}, {2.0, 1.0 / 16}}};
}

}  // namespace

TEST_CASE("normal_cdf matches the series oracle and frozen values") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-13));
    CHECK(normal_cdf(-1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-13));
    for (double t = -9.0; t <= 9.0; t += 0.37) {
        CHECK(normal_cdf(t) ==
              doctest::Approx(static_cast<double>(phi_oracle(t))).epsilon(1e-12));
        CHECK(std::fabs(normal_cdf(t) + normal_cdf(-t) - 1.0) <= 1e-14);
    }
    CHECK(normal_cdf(50.0) == 1.0);
    CHECK(normal_cdf(-50.0) == 0.0);
}

TEST_CASE("normal_pdf") {
    CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
    CHECK(normal_pdf(1.0) == doctest::Approx(0.24197072451914337).epsilon(1e-14));
    CHECK(normal_pdf(-1.0) == normal_pdf(1.0));
}

TEST_CASE("normal_quantile inverts normal_cdf") {
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(normal_quantile(0.8413447460685429) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(normal_quantile(0.9750021048517795) == doctest::Approx(1.96).epsilon(1e-9));
    for (double q = 0.02; q < 1.0; q += 0.07)
        CHECK(normal_cdf(normal_quantile(q)) == doctest::Approx(q).epsilon(1e-12));
    CHECK_THROWS_AS(normal_quantile(0.0), OutOfRange);
    CHECK_THROWS_AS(normal_quantile(1.0), OutOfRange);
    CHECK_THROWS_AS(normal_quantile(-0.3), OutOfRange);
}

TEST_CASE("kolmogorov_exact on laws with known distance") {
    CHECK(kolmogorov_exact(rademacher_law()) ==
          doctest::Approx(0.34134474606854293).epsilon(1e-13));
    CHECK(kolmogorov_exact(half_sum4_law()) == doctest::Approx(0.1875).epsilon(1e-13));
    CHECK(kolmogorov_exact({{{0.0, 1.0}}}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("kolmogorov sup is exhausted at atoms: dense grid never beats it") {
    for (const auto& law : {rademacher_law(), half_sum4_law(),
                            DiscreteLaw{{{-0.7, 0.3}, {0.1, 0.45}, {2.3, 0.25}}}}) {
        double dk = kolmogorov_exact(law);
        double grid_best = 0;
        for (double t = -6.0; t <= 6.0; t += 1e-4) {
            double cum = 0;
            for (const auto& [v, p] : law.atoms)
                if (v <= t) cum += p;
            grid_best = std::max(grid_best, std::fabs(cum - normal_cdf(t)));
        }
        CHECK(grid_best <= dk + 1e-12);
        CHECK(grid_best >= dk - 1e-3);  // grid resolution
    }
}

TEST_CASE("wasserstein_exact frozen values") {
    CHECK(wasserstein_exact(rademacher_law()) ==
          doctest::Approx(0.5353773215478798).epsilon(1e-12));
    // Point mass at 0: E|Z| = sqrt(2/pi).
    CHECK(wasserstein_exact({{{0.0, 1.0}}}) ==
          doctest::Approx(0.7978845608028654).epsilon(1e-12));
}

TEST_CASE("wasserstein_exact agrees with quantile-coupling quadrature") {
    for (const auto& law : {rademacher_law(), half_sum4_law(),
                            DiscreteLaw{{{-0.7, 0.3}, {0.1, 0.45}, {2.3, 0.25}}}}) {
        double exact = wasserstein_exact(law);
        double quad = dw_quadrature(law);
        CHECK(exact == doctest::Approx(quad).epsilon(2e-5));
    }
}

TEST_CASE("wasserstein symmetry halves the work only conceptually") {
    // A symmetric law integrates to twice its right-half integral; check the
    // implementation reproduces the symmetry numerically.
    DiscreteLaw sym{{{-2.0, 0.2}, {-0.5, 0.3}, {0.5, 0.3}, {2.0, 0.2}}};
    DiscreteLaw flipped{{{-2.0, 0.2}, {-0.5, 0.3}, {0.5, 0.3}, {2.0, 0.2}}};
    for (auto& [v, p] : flipped.atoms) v = -v;
    std::reverse(flipped.atoms.begin(), flipped.atoms.end());
    CHECK(wasserstein_exact(sym) == doctest::Approx(wasserstein_exact(flipped)).epsilon(1e-13));
}

TEST_CASE("wasserstein shift sensitivity is 1-Lipschitz") {
    for (double c : {0.01, 0.1, 0.5}) {
        for (auto law : {rademacher_law(), half_sum4_law()}) {
            double base = wasserstein_exact(law);
            for (auto& [v, p] : law.atoms) v += c;
            double shifted = wasserstein_exact(law);
            CHECK(std::fabs(shifted - base) <= c + 1e-12);
        }
    }
}

TEST_CASE("dk <= sqrt(dw) across assorted laws") {
    for (const auto& law :
         {rademacher_law(), half_sum4_law(), DiscreteLaw{{{0.0, 1.0}}},
          DiscreteLaw{{{-0.7, 0.3}, {0.1, 0.45}, {2.3, 0.25}}},
          DiscreteLaw{{{-3.0, 0.5}, {3.0, 0.5}}}}) {
        CHECK(kolmogorov_exact(law) <= std::sqrt(wasserstein_exact(law)) + 1e-12);
    }
}

TEST_CASE("law_from_space groups exactly in rational mode") {
    std::map<std::vector<int>, Rational> coeffs{{{0, 1}, make_rational(1)}};
    auto spec = build_homogeneous_sum(coeffs, {rademacher<Rational>(), rademacher<Rational>()});
    auto space = OutcomeSpace<Rational>::build(spec);
    auto law = law_from_space(space, statistic_table(space, spec));
    REQUIRE(law.atoms.size() == 2);
    CHECK(law.atoms[0].first == doctest::Approx(-1.0));
    CHECK(law.atoms[0].second == doctest::Approx(0.5));
    CHECK(law.atoms[1].first == doctest::Approx(1.0));
    CHECK(law_is_valid(law));
}

TEST_CASE("law_from_samples merges ties and empirical_kolmogorov handles them") {
    auto law = law_from_samples({1.0, 0.0, 0.0, -1.0});
    REQUIRE(law.atoms.size() == 3);
    CHECK(law.atoms[1].second == doctest::Approx(0.5));
    CHECK(law_is_valid(law));

    auto ek = empirical_kolmogorov(std::vector<double>(100, 0.0), 0.05);
    CHECK(ek.estimate == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("empirical distance converges into the DKW band (seeded)") {
    std::mt19937_64 rng(12345);
    std::vector<double> xs(200000);
    for (auto& x : xs) x = (rng() >> 32 & 1) ? 1.0 : -1.0;
    auto ek = empirical_kolmogorov(xs, 0.01);
    double exact = kolmogorov_exact(rademacher_law());
    CHECK(std::fabs(ek.estimate - exact) <= ek.band);
}

TEST_CASE("dkw_band arithmetic") {
    CHECK(dkw_band(1000000, 0.01) == doctest::Approx(0.0016276).epsilon(1e-4));
    CHECK(dkw_band(100, 0.05) == doctest::Approx(std::sqrt(std::log(40.0) / 200.0)).epsilon(1e-14));
    CHECK_THROWS_AS(dkw_band(100, 0.0), OutOfRange);
    CHECK_THROWS_AS(dkw_band(100, 1.0), OutOfRange);
}

TEST_CASE("law validity checks") {
    CHECK(!law_is_valid({}));
    CHECK(!law_is_valid({{{0.0, 0.5}, {0.0, 0.5}}}));          // not strictly increasing
    CHECK(!law_is_valid({{{0.0, 0.5}, {1.0, 0.2}}}));          // probs do not sum to 1
    CHECK(!law_is_valid({{{0.0, 1.2}, {1.0, -0.2}}}));         // negative prob
    CHECK(law_is_valid({{{-1.0, 0.5}, {1.0, 0.5}}}));
}
