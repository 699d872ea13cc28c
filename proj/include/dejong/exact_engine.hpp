#ifndef DEJONG_EXACT_ENGINE_HPP
#define DEJONG_EXACT_ENGINE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dejong/outcome_space.hpp"

namespace dejong {

inline std::vector<int> mask_to_subset(std::uint64_t mask) {
    std::vector<int> out;
    for (int i = 0; i < 64; ++i)
        if (mask >> i & 1) out.push_back(i);
    return out;
}

inline std::uint64_t subset_to_mask(const std::vector<int>& subset) {
    std::uint64_t m = 0;
    for (int i : subset) m |= std::uint64_t(1) << i;
    return m;
}

inline constexpr int kSubsetBudget = 24;

template <class S>
struct HoeffdingComponent {
    std::uint64_t mask = 0;
    std::vector<int> subset;
    Table<S> table;
    S sigma2 = scalar_traits<S>::zero();
};

template <class S>
struct Decomposition {
    std::vector<HoeffdingComponent<S>> components;  // zero components omitted

    const HoeffdingComponent<S>* find(std::uint64_t mask) const {
        for (const auto& c : components)
            if (c.mask == mask) return &c;
        return nullptr;
    }
};

template <class S, class F>
S expectation_fn(const OutcomeSpace<S>& space, F&& f) {
    S acc = scalar_traits<S>::zero();
    for (std::uint64_t idx = 0; idx < space.total; ++idx) acc += space.outcome_prob(idx) * f(idx);
    return acc;
}

template <class S>
S expectation(const OutcomeSpace<S>& space, const Table<S>& f) {
    return table_expectation(space, f);
}

// E[f | X_i, i ∈ L] as a table over the axes in L (constant axes dropped
// from the result's dependence set are still logically in L).
template <class S>
Table<S> conditional_expectation(const OutcomeSpace<S>& space, const Table<S>& f,
                                 std::uint64_t cond_mask) {
    Table<S> out = f;
    for (int a = 0; a < space.n; ++a)
        if (!(cond_mask >> a & 1)) out = average_axis(space, out, a);
    return out;
}

namespace detail {

template <class S>
void decompose_rec(const OutcomeSpace<S>& space, Table<S> cur, int axis, std::uint64_t delta_mask,
                   Decomposition<S>& out) {
    if (axis == space.n) {
        HoeffdingComponent<S> c;
        c.mask = delta_mask;
        c.subset = mask_to_subset(delta_mask);
        c.sigma2 = table_second_moment(space, cur);
        c.table = std::move(cur);
        out.components.push_back(std::move(c));
        return;
    }
    if (!(cur.mask >> axis & 1)) {
        // Axis absent: E_a is the identity and Δ_a kills the table.
        decompose_rec(space, std::move(cur), axis + 1, delta_mask, out);
        return;
    }
    Table<S> averaged = average_axis(space, cur, axis);
    subtract_broadcast(space, cur, averaged, axis);
    if (!table_is_zero(cur))
        decompose_rec(space, std::move(cur), axis + 1, delta_mask | (std::uint64_t(1) << axis),
                      out);
    if (!table_is_zero(averaged))
        decompose_rec(space, std::move(averaged), axis + 1, delta_mask, out);
}

}  // namespace detail

// W_J for every J, via the per-axis projector factorization
// W_J = (∏_{j∈J} (I−E_j)) (∏_{j∉J} E_j) W; zero branches are pruned.
template <class S>
Decomposition<S> hoeffding_decompose(const OutcomeSpace<S>& space, const Table<S>& f) {
    if (space.n > kSubsetBudget)
        throw SubsetBudgetExceeded("n = " + std::to_string(space.n) + " exceeds subset budget " +
                                   std::to_string(kSubsetBudget));
    Decomposition<S> out;
    detail::decompose_rec(space, f, 0, 0, out);
    // Drop zero components (the all-E leaf can reach here as an exact zero).
    std::vector<HoeffdingComponent<S>> kept;
    for (auto& c : out.components)
        if (!table_is_zero(c.table)) kept.push_back(std::move(c));
    out.components = std::move(kept);
    return out;
}

template <class S>
struct DegeneracyReport {
    bool degenerate = true;
    std::vector<std::vector<int>> offenders;  // subsets with nonzero W_J, |J| != p
};

template <class S>
DegeneracyReport<S> check_degeneracy(const OutcomeSpace<S>& space, const UStatisticSpec<S>& spec) {
    Decomposition<S> dec = hoeffding_decompose(space, statistic_table(space, spec));
    DegeneracyReport<S> rep;
    for (const auto& c : dec.components)
        if (static_cast<int>(c.subset.size()) != spec.order()) {
            rep.degenerate = false;
            rep.offenders.push_back(c.subset);
        }
    return rep;
}

template <class S>
struct VarianceSummary {
    std::map<std::uint64_t, S> sigma2;  // J → E[W_J²], nonzero components only
    S var = scalar_traits<S>::zero();   // Σ over J ≠ ∅
    S mean_sq = scalar_traits<S>::zero();  // σ²_∅ = E[W]²
};

template <class S>
VarianceSummary<S> component_variances(const Decomposition<S>& dec) {
    VarianceSummary<S> out;
    for (const auto& c : dec.components) {
        out.sigma2[c.mask] = c.sigma2;
        if (c.mask == 0)
            out.mean_sq = c.sigma2;
        else
            out.var += c.sigma2;
    }
    return out;
}

// ρ_n² = max_i Σ_{J ∋ i} σ_J². Callers pass variances of a degenerate
// statistic, so every J present has |J| = p.
template <class S>
S rho_squared(const VarianceSummary<S>& variances, int n) {
    S best = scalar_traits<S>::zero();
    for (int i = 0; i < n; ++i) {
        S acc = scalar_traits<S>::zero();
        for (const auto& [mask, s2] : variances.sigma2)
            if (mask >> i & 1) acc += s2;
        if (acc > best) best = acc;
    }
    return best;
}

// Exact E[W^k], k ∈ 1..8.
template <class S>
S moment(const OutcomeSpace<S>& space, const UStatisticSpec<S>& spec, unsigned k) {
    if (k < 1 || k > 8) throw OutOfRange("moment order must be in 1..8");
    Table<S> w = statistic_table(space, spec);
    S acc = scalar_traits<S>::zero();
    for_each_cell(space, w, [&](std::uint64_t idx, const std::vector<int>& digits) {
        S wprob = scalar_traits<S>::one();
        for (std::size_t q = 0; q < digits.size(); ++q)
            wprob *= space.probs[static_cast<std::size_t>(w.axes[q])][static_cast<std::size_t>(digits[q])];
        acc += wprob * pow_int(w.data[idx], k);
    });
    return acc;
}

}  // namespace dejong

#endif
