#ifndef DEJONG_DISTANCES_HPP
#define DEJONG_DISTANCES_HPP

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "dejong/outcome_space.hpp"

namespace dejong {

double normal_cdf(double t);
double normal_pdf(double t);

// Inverse of normal_cdf by bisection on [-9, 9]; |Φ(result) − q| ≤ 1e−12.
double normal_quantile(double q);

// Finite-support law, atoms sorted by strictly increasing value.
struct DiscreteLaw {
    std::vector<std::pair<double, double>> atoms;  // (value, prob)
};

bool law_is_valid(const DiscreteLaw& law);

DiscreteLaw law_from_samples(std::vector<double> samples);

// Law of the table's value under the product measure. Rational mode groups
// by exact value before any conversion to double.
template <class S>
DiscreteLaw law_from_space(const OutcomeSpace<S>& space, const Table<S>& w) {
    std::map<S, S> mass;
    for_each_cell(space, w, [&](std::uint64_t idx, const std::vector<int>& digits) {
        S p = scalar_traits<S>::one();
        for (std::size_t k = 0; k < digits.size(); ++k)
            p *= space.probs[static_cast<std::size_t>(w.axes[k])][static_cast<std::size_t>(digits[k])];
        mass[w.data[idx]] += p;
    });
    DiscreteLaw law;
    for (const auto& [v, p] : mass)
        law.atoms.emplace_back(scalar_traits<S>::to_double(v), scalar_traits<S>::to_double(p));
    return law;
}

// sup_t |F(t) − Φ(t)|. The sup of a step function against a continuous CDF
// is attained at an atom, approaching from the left or sitting on it, so
// scanning atoms and their left limits is exhaustive.
double kolmogorov_exact(const DiscreteLaw& law);

// ∫ |F(t) − Φ(t)| dt via the antiderivative G(t) = tΦ(t) + φ(t); sign
// changes inside constancy intervals are located by normal_quantile. The
// unbounded end intervals integrate in closed form, so the only numerical
// error is the CDF evaluations themselves (≪ 1e−12).
double wasserstein_exact(const DiscreteLaw& law);

// One-sample Kolmogorov statistic against N(0,1), plus the
// Dvoretzky–Kiefer–Wolfowitz band for confidence 1−δ.
struct EmpiricalDistance {
    double estimate = 0;
    double band = 0;
};
EmpiricalDistance empirical_kolmogorov(std::vector<double> samples, double delta);

double dkw_band(std::uint64_t m, double delta);

}  // namespace dejong

#endif
