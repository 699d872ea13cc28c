#include "dejong/distances.hpp"

#include <algorithm>
#include <cmath>

#include "dejong/errors.hpp"
#include "dejong/scalar.hpp"

namespace dejong {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kTailCut = 9.0;

// Antiderivative of Φ: G' = Φ, G(t) → 0 as t → −∞, t − G(t) → 0 as t → +∞.
double big_g(double t) { return t * normal_cdf(t) + normal_pdf(t); }
}  // namespace

double normal_cdf(double t) {
    double v = 0.5 * std::erfc(-t / std::sqrt(2.0));
    return std::min(1.0, std::max(0.0, v));
}

double normal_pdf(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

double normal_quantile(double q) {
    if (!(q > 0.0) || !(q < 1.0)) throw OutOfRange("quantile argument must be in (0,1)");
    double lo = -kTailCut, hi = kTailCut;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        double mid = 0.5 * (lo + hi);
        if (normal_cdf(mid) < q)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

bool law_is_valid(const DiscreteLaw& law) {
    if (law.atoms.empty()) return false;
    double total = 0;
    for (std::size_t i = 0; i < law.atoms.size(); ++i) {
        if (!(law.atoms[i].second > 0)) return false;
        if (i > 0 && !(law.atoms[i].first > law.atoms[i - 1].first)) return false;
        total += law.atoms[i].second;
    }
    return std::fabs(total - 1.0) <= 1e-9;
}

DiscreteLaw law_from_samples(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    DiscreteLaw law;
    const double w = 1.0 / static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!law.atoms.empty() && law.atoms.back().first == samples[i])
            law.atoms.back().second += w;
        else
            law.atoms.emplace_back(samples[i], w);
    }
    return law;
}

double kolmogorov_exact(const DiscreteLaw& law) {
    double best = 0, cum = 0;
    for (const auto& [v, p] : law.atoms) {
        double phi = normal_cdf(v);
        best = std::max(best, std::fabs(cum - phi));  // left limit F(v⁻)
        cum += p;
        best = std::max(best, std::fabs(cum - phi));  // F(v)
    }
    return best;
}

double wasserstein_exact(const DiscreteLaw& law) {
    // Left tail: F = 0 below the first atom, so ∫_{−∞}^{v₁} Φ = G(v₁).
    double acc = big_g(law.atoms.front().first);
    double cum = 0;
    for (std::size_t i = 0; i + 1 < law.atoms.size(); ++i) {
        cum += law.atoms[i].second;
        const double a = law.atoms[i].first, b = law.atoms[i + 1].first;
        const double ga = big_g(a), gb = big_g(b);
        if (cum <= normal_cdf(a)) {
            acc += gb - ga - cum * (b - a);
        } else if (cum >= normal_cdf(b)) {
            acc += cum * (b - a) - (gb - ga);
        } else {
            double t = normal_quantile(cum);
            acc += cum * (t - a) - (big_g(t) - ga);
            acc += gb - big_g(t) - cum * (b - t);
        }
    }
    // Right tail: F = 1 above the last atom; ∫_{v_m}^{∞} (1−Φ) = G(v_m) − v_m.
    acc += big_g(law.atoms.back().first) - law.atoms.back().first;
    return acc;
}

EmpiricalDistance empirical_kolmogorov(std::vector<double> samples, double delta) {
    std::sort(samples.begin(), samples.end());
    const double m = static_cast<double>(samples.size());
    double best = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double phi = normal_cdf(samples[i]);
        best = std::max(best, std::fabs(static_cast<double>(i) / m - phi));
        best = std::max(best, std::fabs(static_cast<double>(i + 1) / m - phi));
    }
    return {best, dkw_band(samples.size(), delta)};
}

double dkw_band(std::uint64_t m, double delta) {
    if (!(delta > 0.0) || !(delta < 1.0)) throw OutOfRange("delta must be in (0,1)");
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(m)));
}

}  // namespace dejong
