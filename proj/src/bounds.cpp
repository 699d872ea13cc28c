#include "dejong/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "dejong/errors.hpp"
#include "dejong/scalar.hpp"

namespace dejong {

namespace {

void require_valid(const BoundInputs& in) {
    if (!(in.rho >= 0)) throw OutOfRange("rho must be nonnegative");
    if (!(in.kappa > 0)) throw InvalidKappa("kappa must be positive");
}

double excess_fourth(double fourth_moment) { return std::sqrt(std::fabs(fourth_moment - 3.0)); }

Verdict judge(double bound, std::optional<double> exact, std::optional<double> empirical,
              std::optional<double> band) {
    if (exact) return bound >= *exact - kEpsNum ? Verdict::Dominates : Verdict::Violated;
    if (empirical) {
        double slack = band.value_or(0.0);
        return bound >= *empirical - slack - kEpsNum ? Verdict::Dominates : Verdict::Violated;
    }
    return Verdict::Unknown;
}

}  // namespace

const char* kappa_source_tag(KappaSource s) {
    switch (s) {
        case KappaSource::PaperSymmetric: return "paper-symmetric";
        case KappaSource::User: return "user";
    }
    return "user";
}

KappaChoice kappa_policy(bool symmetric, int p, std::optional<double> user_kappa) {
    if (user_kappa) {
        if (!(*user_kappa > 0)) throw InvalidKappa("kappa must be positive");
        return {*user_kappa, KappaSource::User};
    }
    if (symmetric) return {2.0 * p, KappaSource::PaperSymmetric};
    throw KappaUnknown("no kappa available: spec is not symmetric and no user value given");
}

double kolmogorov_bound(const BoundInputs& in) {
    require_valid(in);
    return 11.9 * excess_fourth(in.fourth_moment) + (3.5 + 10.8 * std::sqrt(in.kappa)) * in.rho;
}

double symmetric_bound(double fourth_moment, int p, int n) {
    if (p <= 0 || n < p) throw OutOfRange("symmetric bound needs 1 <= p <= n");
    return 12.0 * excess_fourth(fourth_moment) + 19.0 * p / std::sqrt(static_cast<double>(n));
}

double wasserstein_bound(const BoundInputs& in) {
    require_valid(in);
    const double sqrt_2_over_pi = std::sqrt(2.0 / std::acos(-1.0));
    const double c_fourth = sqrt_2_over_pi + 4.0 / 3.0;
    const double c_rho = sqrt_2_over_pi + 2.0 * std::sqrt(2.0) / std::sqrt(3.0);
    return c_fourth * excess_fourth(in.fourth_moment) + std::sqrt(in.kappa) * c_rho * in.rho;
}

ProofConstants proof_constants() {
    return {9.0 + 2.0 * std::sqrt(2.0), 2.0 * std::sqrt(3.0), 1.0 + 4.0 * std::sqrt(6.0)};
}

double proof_kolmogorov_bound(const BoundInputs& in) {
    require_valid(in);
    ProofConstants c = proof_constants();
    return c.c_fourth * excess_fourth(in.fourth_moment) +
           (c.c_rho + c.c_rho_kappa * std::sqrt(in.kappa)) * in.rho;
}

bool dk_dw_consistency(double dk, double dw) {
    if (dw < 0) return false;
    return dk <= std::sqrt(dw) + kEpsNum;
}

const char* verdict_tag(Verdict v) {
    switch (v) {
        case Verdict::Dominates: return "dominates";
        case Verdict::Violated: return "violated";
        case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

BoundReport make_bound_report(const BoundInputs& in, KappaSource source,
                              std::optional<double> exact_dk, std::optional<double> exact_dw,
                              std::optional<double> empirical_dk,
                              std::optional<double> empirical_band) {
    BoundReport r;
    r.inputs = in;
    r.kappa_source = source;
    r.kolmogorov = kolmogorov_bound(in);
    r.wasserstein = wasserstein_bound(in);
    r.proof_kolmogorov = proof_kolmogorov_bound(in);
    if (in.symmetric) r.symmetric = symmetric_bound(in.fourth_moment, in.p, in.n);
    r.exact_dk = exact_dk;
    r.exact_dw = exact_dw;
    r.empirical_dk = empirical_dk;
    r.empirical_band = empirical_band;
    r.verdict_kolmogorov = judge(r.kolmogorov, exact_dk, empirical_dk, empirical_band);
    if (r.symmetric)
        r.verdict_symmetric = judge(*r.symmetric, exact_dk, empirical_dk, empirical_band);
    r.verdict_wasserstein = judge(r.wasserstein, exact_dw, std::nullopt, std::nullopt);
    if (exact_dk && exact_dw) r.dk_dw_consistent = dk_dw_consistency(*exact_dk, *exact_dw);
    return r;
}

}  // namespace dejong
