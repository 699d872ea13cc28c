#include "dejong/family.hpp"

#include <cmath>
#include <map>

#include <gmpxx.h>

#include "dejong/errors.hpp"

namespace dejong::family {

namespace {

std::vector<std::vector<int>> all_subsets(int n, int p) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == p) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i <= n - (p - static_cast<int>(cur.size())); ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace

UStatisticSpec<Rational> symmetric_rademacher(int n, int p) {
    if (p < 1 || p > n) throw OutOfRange("symmetric_rademacher: need 1 <= p <= n");
    mpz_class count;
    mpz_bin_uiui(count.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(p));
    if (mpz_perfect_square_p(count.get_mpz_t()) == 0)
        throw OutOfRange("symmetric_rademacher: C(n,p) must be a perfect square");
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), count.get_mpz_t());
    Rational coeff{mpz_class(1), root};
    coeff.canonicalize();

    std::map<std::vector<int>, Rational> coeffs;
    for (auto& s : all_subsets(n, p)) coeffs.emplace(std::move(s), coeff);
    auto spec = build_homogeneous_sum(coeffs, std::vector<Variable<Rational>>(
                                                  static_cast<std::size_t>(n), rademacher<Rational>()));
    spec.symmetric = true;
    return spec;
}

UStatisticSpec<Rational> weighted_rademacher(const std::vector<Rational>& weights) {
    if (weights.empty()) throw OutOfRange("weighted_rademacher: empty weight vector");
    Rational norm(0);
    for (const auto& w : weights) norm += w * w;
    if (norm != 1) throw SpecError(SpecError::Kind::NonUnitVariance, "weights are not unit-norm");
    std::map<std::vector<int>, Rational> coeffs;
    for (std::size_t i = 0; i < weights.size(); ++i)
        if (!is_zero(weights[i])) coeffs.emplace(std::vector<int>{static_cast<int>(i)}, weights[i]);
    return build_homogeneous_sum(coeffs, std::vector<Variable<Rational>>(weights.size(),
                                                                         rademacher<Rational>()));
}

UStatisticSpec<double> p1_rademacher_real(int n) {
    if (n < 1) throw OutOfRange("p1_rademacher_real: need n >= 1");
    const double a = 1.0 / std::sqrt(static_cast<double>(n));
    std::map<std::vector<int>, double> coeffs;
    for (int i = 0; i < n; ++i) coeffs.emplace(std::vector<int>{i}, a);
    auto spec = build_homogeneous_sum(
        coeffs, std::vector<Variable<double>>(static_cast<std::size_t>(n), rademacher<double>()));
    spec.symmetric = true;
    return spec;
}

Variable<Rational> three_point() {
    Variable<Rational> v;
    v.atoms = {{Rational(-1), Rational(1, 3)},
               {Rational(0), Rational(1, 2)},
               {Rational(2), Rational(1, 6)}};
    return v;
}

UStatisticSpec<Rational> cycle_mix(const Rational& t) {
    const Rational one(1);
    const Rational denom = one + t * t;
    const Rational a = (one - t * t) / denom;
    const Rational b = (t + t) / denom;
    const Rational half_b = b / 2;
    std::map<std::vector<int>, Rational> coeffs;
    coeffs.emplace(std::vector<int>{0, 1}, a);
    coeffs.emplace(std::vector<int>{2, 3}, half_b);
    coeffs.emplace(std::vector<int>{3, 4}, half_b);
    coeffs.emplace(std::vector<int>{4, 5}, half_b);
    coeffs.emplace(std::vector<int>{2, 5}, half_b);
    return build_homogeneous_sum(coeffs,
                                 std::vector<Variable<Rational>>(6, rademacher<Rational>()));
}

std::vector<Rational> cycle_mix_parameters() {
    return {Rational(1, 2), Rational(47, 100), Rational(233, 500), Rational(4657, 10000)};
}

}  // namespace dejong::family
