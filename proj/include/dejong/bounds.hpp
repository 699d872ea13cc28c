#ifndef DEJONG_BOUNDS_HPP
#define DEJONG_BOUNDS_HPP

#include <optional>
#include <string>

namespace dejong {

struct BoundInputs {
    double fourth_moment = 0;  // E[W⁴]
    double rho = 0;            // ρ_n ≥ 0
    double kappa = 0;          // κ_p > 0
    int p = 0;
    int n = 0;
    bool symmetric = false;
};

enum class KappaSource { PaperSymmetric, User };

struct KappaChoice {
    double value = 0;
    KappaSource source = KappaSource::User;
};

const char* kappa_source_tag(KappaSource s);

// Symmetric specs default to 2p; a user value overrides; otherwise the
// constant is simply unknown and the caller must say so.
KappaChoice kappa_policy(bool symmetric, int p, std::optional<double> user_kappa);

// 11.9·√|E[W⁴]−3| + (3.5 + 10.8·√κ)·ρ
double kolmogorov_bound(const BoundInputs& in);

// 12·√|E[W⁴]−3| + 19·p/√n  (symmetric case)
double symmetric_bound(double fourth_moment, int p, int n);

// (√(2/π)+4/3)·√|E[W⁴]−3| + √κ·(√(2/π)+2√2/√3)·ρ
double wasserstein_bound(const BoundInputs& in);

// The un-rounded constants the proof actually produces; the theorem rounds
// them up to one decimal.
struct ProofConstants {
    double c_fourth;      // 9 + 2√2   (→ 11.9)
    double c_rho;         // 2√3       (→ 3.5)
    double c_rho_kappa;   // 1 + 4√6   (→ 10.8)
};
ProofConstants proof_constants();

// Diagnostic bound with the pre-simplification constants; never exceeds
// kolmogorov_bound on the same inputs.
double proof_kolmogorov_bound(const BoundInputs& in);

// d_K ≤ √d_W up to the numeric tolerance.
bool dk_dw_consistency(double dk, double dw);

enum class Verdict { Dominates, Violated, Unknown };

const char* verdict_tag(Verdict v);

struct BoundReport {
    BoundInputs inputs;
    KappaSource kappa_source = KappaSource::User;
    double kolmogorov = 0;
    std::optional<double> symmetric;  // only for symmetric specs
    double wasserstein = 0;
    double proof_kolmogorov = 0;
    std::optional<double> exact_dk;
    std::optional<double> exact_dw;
    std::optional<double> empirical_dk;
    std::optional<double> empirical_band;
    Verdict verdict_kolmogorov = Verdict::Unknown;
    Verdict verdict_symmetric = Verdict::Unknown;
    Verdict verdict_wasserstein = Verdict::Unknown;
    bool dk_dw_consistent = true;
};

// Evaluates all bounds and verdicts. Exact distances dominate empirical ones
// when both are present; empirical comparisons subtract the DKW band.
BoundReport make_bound_report(const BoundInputs& in, KappaSource source,
                              std::optional<double> exact_dk, std::optional<double> exact_dw,
                              std::optional<double> empirical_dk,
                              std::optional<double> empirical_band);

}  // namespace dejong

#endif
