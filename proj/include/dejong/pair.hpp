#ifndef DEJONG_PAIR_HPP
#define DEJONG_PAIR_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dejong/exact_engine.hpp"
#include "dejong/outcome_space.hpp"

namespace dejong {

// Exchangeable pair (W, W') by redrawing one uniformly chosen coordinate.
// The joint space over (X, Y_i) per replacement index is enumerated lazily
// inside each sweep; the full (X, Y) product is never materialized.
template <class S>
struct PairContext {
    UStatisticSpec<S> spec;
    OutcomeSpace<S> space;
    Table<S> w;
    int n = 0;
    int p = 0;
    S lambda = scalar_traits<S>::zero();  // p/n

    static PairContext build(const UStatisticSpec<S>& spec,
                             std::uint64_t max_outcomes = kDefaultMaxOutcomes) {
        PairContext ctx;
        ctx.spec = spec;
        ctx.space = OutcomeSpace<S>::build(spec, max_outcomes);
        ctx.w = statistic_table(ctx.space, spec);
        ctx.n = spec.n;
        ctx.p = spec.order();
        ctx.lambda = scalar_traits<S>::from_ratio(spec.order(), spec.n);
        return ctx;
    }
};

// Conditional moments of the increment W' − W given X = x, one fused pass:
// each is a table over W's dependence axes.
template <class S>
struct PairSweep {
    Table<S> cond_mean;    // E[W'−W | X]
    Table<S> cond_sq;      // E[(W'−W)² | X]
    Table<S> cond_fourth;  // E[(W'−W)⁴ | X]
    Table<S> cond_theta;   // E[θ(W'−W) | X]
};

template <class S>
PairSweep<S> pair_sweep(const PairContext<S>& ctx) {
    const auto& sp = ctx.space;
    const auto& w = ctx.w;
    PairSweep<S> out{w, w, w, w};
    const S zero = scalar_traits<S>::zero();
    for (auto* t : {&out.cond_mean, &out.cond_sq, &out.cond_fourth, &out.cond_theta})
        for (auto& x : t->data) x = zero;
    const S inv_n = scalar_traits<S>::from_ratio(1, ctx.n);
    for_each_cell(sp, w, [&](std::uint64_t idx, const std::vector<int>& digits) {
        S m = zero, s2 = zero, s4 = zero, st = zero;
        const S wx = w.data[idx];
        for (std::size_t k = 0; k < w.axes.size(); ++k) {
            const int a = w.axes[k];
            const std::uint64_t stride = w.strides[k];
            const std::uint64_t base = idx - static_cast<std::uint64_t>(digits[k]) * stride;
            const int ma = sp.sizes[static_cast<std::size_t>(a)];
            for (int l = 0; l < ma; ++l) {
                if (l == digits[k]) continue;  // d = 0 contributes nothing
                S d = w.data[base + static_cast<std::uint64_t>(l) * stride] - wx;
                const S& q = sp.probs[static_cast<std::size_t>(a)][static_cast<std::size_t>(l)];
                m += q * d;
                S d2 = d * d;
                s2 += q * d2;
                s4 += q * d2 * d2;
                st += q * theta(d);
            }
        }
        out.cond_mean.data[idx] = m * inv_n;
        out.cond_sq.data[idx] = s2 * inv_n;
        out.cond_fourth.data[idx] = s4 * inv_n;
        out.cond_theta.data[idx] = st * inv_n;
    });
    return out;
}

// max_x |E[W'−W | X=x] + (p/n)·W(x)|; exactly 0 on degenerate specs.
template <class S>
S regression_check(const PairContext<S>& ctx, const PairSweep<S>& sw) {
    S best = scalar_traits<S>::zero();
    for (std::size_t i = 0; i < ctx.w.data.size(); ++i) {
        S r = scalar_traits<S>::abs(sw.cond_mean.data[i] + ctx.lambda * ctx.w.data[i]);
        if (r > best) best = r;
    }
    return best;
}

template <class S>
struct CondSquared {
    Table<S> t;             // T(x) = (n/2p) E[(W'−W)² | X=x]
    S mean_increment_sq;    // E[(W'−W)²], equals 2p/n for normalized specs
    S mean;                 // E[T]
    S var;                  // Var(T)
};

template <class S>
CondSquared<S> conditional_squared_increment(const PairContext<S>& ctx, const PairSweep<S>& sw) {
    CondSquared<S> out{sw.cond_sq, scalar_traits<S>::zero(), scalar_traits<S>::zero(),
                       scalar_traits<S>::zero()};
    const S scale = scalar_traits<S>::from_ratio(ctx.n, 2 * ctx.p);
    for (auto& x : out.t.data) x *= scale;
    out.mean_increment_sq = table_expectation(ctx.space, sw.cond_sq);
    out.mean = table_expectation(ctx.space, out.t);
    out.var = table_second_moment(ctx.space, out.t) - out.mean * out.mean;
    return out;
}

// (n/4p) E[(W'−W)⁴].
template <class S>
S increment_fourth(const PairContext<S>& ctx, const PairSweep<S>& sw) {
    return scalar_traits<S>::from_ratio(ctx.n, 4 * ctx.p) *
           table_expectation(ctx.space, sw.cond_fourth);
}

namespace detail {
// Exact grouping key in rational mode; quantized to kGroupQuantum in real
// mode (values beyond ~9e6 would overflow the quantized key; normalized
// statistics stay far below that).
template <class S>
struct group_key {
    using type = S;
    static type make(const S& v) { return v; }
};
template <>
struct group_key<double> {
    using type = long long;
    static type make(double v) { return std::llround(v / kGroupQuantum); }
};
}  // namespace detail

// Partition of W-table cells by the value of W.
template <class S>
struct WGrouping {
    std::vector<S> values;
    std::vector<S> probs;
    std::vector<int> cell_group;
    std::vector<S> cell_prob;
};

template <class S>
WGrouping<S> group_by_w(const PairContext<S>& ctx) {
    WGrouping<S> g;
    g.cell_group.resize(ctx.w.data.size());
    g.cell_prob.resize(ctx.w.data.size(), scalar_traits<S>::zero());
    std::map<typename detail::group_key<S>::type, int> ids;
    for_each_cell(ctx.space, ctx.w, [&](std::uint64_t idx, const std::vector<int>& digits) {
        S p = scalar_traits<S>::one();
        for (std::size_t k = 0; k < digits.size(); ++k)
            p *= ctx.space.probs[static_cast<std::size_t>(ctx.w.axes[k])]
                                [static_cast<std::size_t>(digits[k])];
        auto key = detail::group_key<S>::make(ctx.w.data[idx]);
        auto [it, inserted] = ids.emplace(key, static_cast<int>(g.values.size()));
        if (inserted) {
            g.values.push_back(ctx.w.data[idx]);
            g.probs.push_back(scalar_traits<S>::zero());
        }
        g.cell_group[idx] = it->second;
        g.cell_prob[idx] = p;
        g.probs[static_cast<std::size_t>(it->second)] += p;
    });
    return g;
}

// E[g | W = w] for a per-outcome table g, one value per group.
template <class S>
std::vector<S> group_means(const WGrouping<S>& g, const Table<S>& t) {
    std::vector<S> acc(g.values.size(), scalar_traits<S>::zero());
    for (std::size_t i = 0; i < t.data.size(); ++i)
        acc[static_cast<std::size_t>(g.cell_group[i])] += g.cell_prob[i] * t.data[i];
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] /= g.probs[k];
    return acc;
}

// Berry–Esseen terms of the imported exchangeable-pairs theorem, evaluated
// both with the theorem's conditioning on W and with the finer conditioning
// on X (conditional Jensen gives term ≤ term_x).
template <class S>
struct ShZhTerms {
    S term1;    // E|1 − (n/2p) E[(W'−W)² | W]|
    S term2;    // (n/p) E|E[θ(W'−W) | W]|
    S term1_x;  // same with conditioning on X
    S term2_x;
};

template <class S>
ShZhTerms<S> shzh_terms(const PairContext<S>& ctx, const PairSweep<S>& sw,
                        const WGrouping<S>& g) {
    using T = scalar_traits<S>;
    ShZhTerms<S> out{T::zero(), T::zero(), T::zero(), T::zero()};
    const S half_scale = T::from_ratio(ctx.n, 2 * ctx.p);
    const S inv_lambda = T::from_ratio(ctx.n, ctx.p);
    auto t_by_w = group_means(g, sw.cond_sq);
    auto theta_by_w = group_means(g, sw.cond_theta);
    for (std::size_t k = 0; k < g.values.size(); ++k) {
        out.term1 += g.probs[k] * T::abs(T::one() - half_scale * t_by_w[k]);
        out.term2 += g.probs[k] * T::abs(theta_by_w[k]);
    }
    out.term2 *= inv_lambda;
    for (std::size_t i = 0; i < ctx.w.data.size(); ++i) {
        out.term1_x += g.cell_prob[i] * T::abs(T::one() - half_scale * sw.cond_sq.data[i]);
        out.term2_x += g.cell_prob[i] * T::abs(sw.cond_theta.data[i]);
    }
    out.term2_x *= inv_lambda;
    return out;
}

// E[W² · (n/2p) E[(W'−W)² | W]], grouped per the paper and, as a
// tower-property cross-check, directly as E[W² T(X)].
template <class S>
struct Lemma3Energy {
    S grouped;
    S direct;
};

template <class S>
Lemma3Energy<S> lemma3_energy(const PairContext<S>& ctx, const PairSweep<S>& sw,
                              const WGrouping<S>& g) {
    using T = scalar_traits<S>;
    const S scale = T::from_ratio(ctx.n, 2 * ctx.p);
    Lemma3Energy<S> out{T::zero(), T::zero()};
    auto t_by_w = group_means(g, sw.cond_sq);
    for (std::size_t k = 0; k < g.values.size(); ++k)
        out.grouped += g.probs[k] * g.values[k] * g.values[k] * scale * t_by_w[k];
    for (std::size_t i = 0; i < ctx.w.data.size(); ++i)
        out.direct += g.cell_prob[i] * ctx.w.data[i] * ctx.w.data[i] * scale * sw.cond_sq.data[i];
    return out;
}

// T's Hoeffding decomposition must equal that of W² with component U_M
// rescaled by (2p−|M|)/2p; components with |M| = 2p drop out.
template <class S>
struct ConditionalHoeffdingReport {
    bool match = false;
    S max_abs_diff = scalar_traits<S>::zero();
    std::size_t w2_components = 0;
};

template <class S>
ConditionalHoeffdingReport<S> hoeffding_of_conditional(const PairContext<S>& ctx,
                                                       const PairSweep<S>& sw) {
    using T = scalar_traits<S>;
    Table<S> w2 = ctx.w;
    for (auto& x : w2.data) x *= x;
    auto dec = hoeffding_decompose(ctx.space, w2);

    Table<S> expected = make_table(ctx.space, ctx.w.mask);
    for (const auto& c : dec.components) {
        const int m = static_cast<int>(c.subset.size());
        if (m > 2 * ctx.p) continue;  // impossible for genuine order-p specs
        Table<S> scaled = c.table;
        const S coeff = T::from_ratio(2 * ctx.p - m, 2 * ctx.p);
        for (auto& x : scaled.data) x *= coeff;
        accumulate(ctx.space, expected, scaled);
    }

    Table<S> t = sw.cond_sq;
    const S scale = T::from_ratio(ctx.n, 2 * ctx.p);
    for (auto& x : t.data) x *= scale;

    ConditionalHoeffdingReport<S> rep;
    rep.w2_components = dec.components.size();
    std::vector<std::uint64_t> estride(t.axes.size(), 0);
    for (std::size_t k = 0; k < t.axes.size(); ++k)
        for (std::size_t q = 0; q < expected.axes.size(); ++q)
            if (expected.axes[q] == t.axes[k]) estride[k] = expected.strides[q];
    for_each_cell(ctx.space, t, [&](std::uint64_t idx, const std::vector<int>& digits) {
        std::uint64_t eidx = 0;
        for (std::size_t k = 0; k < digits.size(); ++k)
            eidx += static_cast<std::uint64_t>(digits[k]) * estride[k];
        S d = T::abs(t.data[idx] - expected.data[eidx]);
        if (d > rep.max_abs_diff) rep.max_abs_diff = d;
    });
    rep.match = T::is_zero(rep.max_abs_diff);
    return rep;
}

// Swaps one axis of a kernel for another (the table layout follows the
// ascending subset order, so the data are permuted accordingly).
template <class S>
Kernel<S> retarget_kernel_axis(const Kernel<S>& k, int old_axis, int new_axis,
                               const std::vector<int>& axis_sizes) {
    Kernel<S> out = k;
    std::size_t k0 = 0;
    for (std::size_t q = 0; q < k.subset.size(); ++q)
        if (k.subset[q] == old_axis) k0 = q;
    out.subset.erase(out.subset.begin() + static_cast<std::ptrdiff_t>(k0));
    std::size_t k1 = 0;
    while (k1 < out.subset.size() && out.subset[k1] < new_axis) ++k1;
    out.subset.insert(out.subset.begin() + static_cast<std::ptrdiff_t>(k1), new_axis);
    if (k.is_product || k0 == k1) return out;

    const std::size_t p = k.subset.size();
    std::vector<int> new_sizes(p);
    for (std::size_t q = 0; q < p; ++q) {
        int axis = out.subset[q];
        new_sizes[q] = axis_sizes[static_cast<std::size_t>(axis == new_axis ? old_axis : axis)];
    }
    std::vector<int> nd(p, 0), od(p, 0);
    out.table.assign(k.table.size(), scalar_traits<S>::zero());
    for (std::size_t idx = 0; idx < out.table.size(); ++idx) {
        // nd → od: positions other than k1 keep their relative order around k0.
        for (std::size_t q = 0; q < p; ++q) {
            if (q == k1) continue;
            std::size_t old_pos = q < k1 ? q : q - 1;       // position among "others"
            if (old_pos >= k0) ++old_pos;                    // skip the old slot
            od[old_pos] = nd[q];
        }
        od[k0] = nd[k1];
        std::uint64_t oidx = 0, stride = 1;
        for (std::size_t q = 0; q < p; ++q) {
            oidx += static_cast<std::uint64_t>(od[q]) * stride;
            stride *= static_cast<std::uint64_t>(axis_sizes[static_cast<std::size_t>(k.subset[q])]);
        }
        out.table[idx] = k.table[oidx];
        for (std::size_t q = 0; q < p; ++q) {
            if (++nd[q] < new_sizes[q]) break;
            nd[q] = 0;
        }
    }
    return out;
}

template <class S>
Kernel<S> negate_kernel(const Kernel<S>& k) {
    Kernel<S> out = k;
    if (out.is_product)
        out.coeff = -out.coeff;
    else
        for (auto& x : out.table) x = -x;
    return out;
}

// D_i = W^{(i)} − W over n+1 variables, variable n+1 being a fresh copy of
// variable i. Kernels not containing i cancel; each kernel containing i
// contributes a retargeted positive copy and a negated original.
template <class S>
struct DifferenceStatistic {
    int index = 0;
    UStatisticSpec<S> spec;
};

template <class S>
DifferenceStatistic<S> difference_statistic(const PairContext<S>& ctx, int i) {
    const auto& base = ctx.spec;
    DifferenceStatistic<S> out;
    out.index = i;
    out.spec.n = base.n + 1;
    out.spec.variables = base.variables;
    out.spec.variables.push_back(base.variables[static_cast<std::size_t>(i)]);
    out.spec.kernels.order = base.order();
    out.spec.symmetric = false;
    std::vector<int> sizes;
    for (const auto& v : out.spec.variables) sizes.push_back(static_cast<int>(v.atoms.size()));
    for (const auto& k : base.kernels.entries) {
        bool has_i = false;
        for (int a : k.subset)
            if (a == i) has_i = true;
        if (!has_i) continue;
        out.spec.kernels.entries.push_back(retarget_kernel_axis(k, i, base.n, sizes));
        out.spec.kernels.entries.push_back(negate_kernel(k));
    }
    return out;
}

// Pointwise product of two tables over the union of their axes.
template <class S>
Table<S> product_table(const OutcomeSpace<S>& space, const Table<S>& a, const Table<S>& b) {
    Table<S> out = make_table(space, a.mask | b.mask);
    std::vector<std::uint64_t> astride(out.axes.size(), 0), bstride(out.axes.size(), 0);
    for (std::size_t k = 0; k < out.axes.size(); ++k) {
        for (std::size_t q = 0; q < a.axes.size(); ++q)
            if (a.axes[q] == out.axes[k]) astride[k] = a.strides[q];
        for (std::size_t q = 0; q < b.axes.size(); ++q)
            if (b.axes[q] == out.axes[k]) bstride[k] = b.strides[q];
    }
    for_each_cell(space, out, [&](std::uint64_t idx, const std::vector<int>& digits) {
        std::uint64_t ai = 0, bi = 0;
        for (std::size_t k = 0; k < digits.size(); ++k) {
            ai += static_cast<std::uint64_t>(digits[k]) * astride[k];
            bi += static_cast<std::uint64_t>(digits[k]) * bstride[k];
        }
        out.data[idx] = a.data[ai] * b.data[bi];
    });
    return out;
}

template <class S>
S product_expectation(const OutcomeSpace<S>& space, const Table<S>& a, const Table<S>& b) {
    return table_expectation(space, product_table(space, a, b));
}

template <class S>
Table<S> theta_table(const Table<S>& t) {
    Table<S> out = t;
    for (auto& x : out.data) x = theta(x);
    return out;
}

// The θ-product identity and its two swap identities, evaluated on the
// (X, Y_i, Y_j) space.
template <class S>
struct ThetaIdentity {
    S lhs;        // E[θ(D_i) θ(D_j)]
    S rhs;        // ¼ E[(θ(D_i^{(j)}) − θ(D_i)) (θ(D_j^{(i)}) − θ(D_j))]
    S swap_one;   // E[θ(D_i^{(j)}) θ(D_j)]   (= −lhs)
    S swap_both;  // E[θ(D_i^{(j)}) θ(D_j^{(i)})]   (= lhs)
};

template <class S>
ThetaIdentity<S> theta_product_identity(const PairContext<S>& ctx, int i, int j,
                                        std::uint64_t max_outcomes = kDefaultMaxOutcomes) {
    const auto& base = ctx.spec;
    const int ai = base.n;      // axis of Y_i
    const int aj = base.n + 1;  // axis of Y_j
    UStatisticSpec<S> lifted;
    lifted.n = base.n + 2;
    lifted.variables = base.variables;
    lifted.variables.push_back(base.variables[static_cast<std::size_t>(i)]);
    lifted.variables.push_back(base.variables[static_cast<std::size_t>(j)]);
    lifted.kernels.order = base.order();
    auto space = OutcomeSpace<S>::build(lifted, max_outcomes);

    std::vector<int> sizes;
    for (const auto& v : lifted.variables) sizes.push_back(static_cast<int>(v.atoms.size()));

    auto difference_kernels = [&](int idx, int new_axis) {
        std::vector<Kernel<S>> out;
        for (const auto& k : base.kernels.entries) {
            bool has = false;
            for (int a : k.subset)
                if (a == idx) has = true;
            if (!has) continue;
            out.push_back(retarget_kernel_axis(k, idx, new_axis, sizes));
            out.push_back(negate_kernel(k));
        }
        return out;
    };
    auto table_of = [&](const std::vector<Kernel<S>>& kernels) {
        std::uint64_t mask = 0;
        for (const auto& k : kernels)
            for (int a : k.subset) mask |= std::uint64_t(1) << a;
        Table<S> t = make_table(space, mask);
        for (const auto& k : kernels) accumulate(space, t, kernel_table(space, k));
        return t;
    };

    auto di_kernels = difference_kernels(i, ai);
    auto dj_kernels = difference_kernels(j, aj);
    auto retarget_all = [&](const std::vector<Kernel<S>>& ks, int from, int to) {
        std::vector<Kernel<S>> out;
        for (const auto& k : ks) {
            bool has = false;
            for (int a : k.subset)
                if (a == from) has = true;
            out.push_back(has ? retarget_kernel_axis(k, from, to, sizes) : k);
        }
        return out;
    };

    Table<S> di = table_of(di_kernels);
    Table<S> dj = table_of(dj_kernels);
    Table<S> dij = table_of(retarget_all(di_kernels, j, aj));  // D_i^{(j)}
    Table<S> dji = table_of(retarget_all(dj_kernels, i, ai));  // D_j^{(i)}

    Table<S> tdi = theta_table(di), tdj = theta_table(dj);
    Table<S> tdij = theta_table(dij), tdji = theta_table(dji);

    ThetaIdentity<S> out{scalar_traits<S>::zero(), scalar_traits<S>::zero(),
                         scalar_traits<S>::zero(), scalar_traits<S>::zero()};
    out.lhs = product_expectation(space, tdi, tdj);
    out.swap_one = product_expectation(space, tdij, tdj);
    out.swap_both = product_expectation(space, tdij, tdji);

    Table<S> ddi = make_table(space, tdij.mask | tdi.mask);
    accumulate(space, ddi, tdij);
    Table<S> negi = tdi;
    for (auto& x : negi.data) x = -x;
    accumulate(space, ddi, negi);
    Table<S> ddj = make_table(space, tdji.mask | tdj.mask);
    accumulate(space, ddj, tdji);
    Table<S> negj = tdj;
    for (auto& x : negj.data) x = -x;
    accumulate(space, ddj, negj);
    out.rhs = product_expectation(space, ddi, ddj) * scalar_traits<S>::from_ratio(1, 4);
    return out;
}

// (θ(y) − θ(x))² ≤ 8x²(y−x)² + 2(y−x)⁴; returns RHS − LHS.
template <class S>
S taylor_quadratic_slack(const S& x, const S& y) {
    S d = y - x;
    S lhs = theta(y) - theta(x);
    lhs = lhs * lhs;
    S rhs = scalar_traits<S>::from_ratio(8, 1) * x * x * d * d +
            scalar_traits<S>::from_ratio(2, 1) * d * d * d * d;
    return rhs - lhs;
}

// Max asymmetry of the joint law of (W, W'): exchangeability means the
// pushforward weight of (a, b) equals that of (b, a).
template <class S>
S exchangeability_check(const PairContext<S>& ctx) {
    using Key = typename detail::group_key<S>::type;
    std::map<std::pair<Key, Key>, S> weight;
    const auto& sp = ctx.space;
    const auto& w = ctx.w;
    const S inv_n = scalar_traits<S>::from_ratio(1, ctx.n);
    for_each_cell(sp, w, [&](std::uint64_t idx, const std::vector<int>& digits) {
        S px = scalar_traits<S>::one();
        for (std::size_t k = 0; k < digits.size(); ++k)
            px *= sp.probs[static_cast<std::size_t>(w.axes[k])][static_cast<std::size_t>(digits[k])];
        Key from = detail::group_key<S>::make(w.data[idx]);
        // Replacement indices outside W's axes keep W' = W.
        S off_mass = scalar_traits<S>::from_ratio(ctx.n - static_cast<int>(w.axes.size()), ctx.n);
        if (!scalar_traits<S>::is_zero(off_mass))
            weight[{from, from}] += px * off_mass;
        for (std::size_t k = 0; k < w.axes.size(); ++k) {
            const int a = w.axes[k];
            const std::uint64_t stride = w.strides[k];
            const std::uint64_t base = idx - static_cast<std::uint64_t>(digits[k]) * stride;
            for (int l = 0; l < sp.sizes[static_cast<std::size_t>(a)]; ++l) {
                S q = sp.probs[static_cast<std::size_t>(a)][static_cast<std::size_t>(l)];
                Key to = detail::group_key<S>::make(
                    w.data[base + static_cast<std::uint64_t>(l) * stride]);
                weight[{from, to}] += px * inv_n * q;
            }
        }
    });
    S worst = scalar_traits<S>::zero();
    for (const auto& [key, mass] : weight) {
        auto it = weight.find({key.second, key.first});
        S other = it == weight.end() ? scalar_traits<S>::zero() : it->second;
        S d = scalar_traits<S>::abs(mass - other);
        if (d > worst) worst = d;
    }
    return worst;
}

template <class S>
struct PairReport {
    int n = 0, p = 0;
    S lambda;
    S regression_max_residual;
    S mean_sq_increment;
    S var_cond_sq;
    S fourth_increment;
    S e2, e4;
    S rho2;
    std::optional<S> kappa;
    std::optional<S> lemma1_slack;  // E[W⁴]−3+κρ² − Var(T)
    std::optional<S> lemma2_slack;  // 2(E[W⁴]−3)+3κρ² − (n/4p)E[(W'−W)⁴]
    S lemma3a_slack;                // E[W⁴] − E[W²·(n/2p)E[(W'−W)²|W]]
    S lemma3b_slack;                // 2E[W⁴] − (n/4p)E[(W'−W)⁴]
    S energy_grouped, energy_direct;
    S shzh_term1, shzh_term2, shzh_term1_x, shzh_term2_x;
    S exchangeability_discrepancy;
    bool hoeff_cond_match = false;
    S hoeff_cond_max_diff;
};

template <class S>
PairReport<S> pair_report(const PairContext<S>& ctx, std::optional<S> kappa) {
    using T = scalar_traits<S>;
    PairReport<S> rep;
    rep.n = ctx.n;
    rep.p = ctx.p;
    rep.lambda = ctx.lambda;

    auto sw = pair_sweep(ctx);
    auto g = group_by_w(ctx);
    rep.regression_max_residual = regression_check(ctx, sw);
    auto cs = conditional_squared_increment(ctx, sw);
    rep.mean_sq_increment = cs.mean_increment_sq;
    rep.var_cond_sq = cs.var;
    rep.fourth_increment = increment_fourth(ctx, sw);
    rep.e2 = moment(ctx.space, ctx.spec, 2);
    rep.e4 = moment(ctx.space, ctx.spec, 4);
    auto dec = hoeffding_decompose(ctx.space, ctx.w);
    rep.rho2 = rho_squared(component_variances(dec), ctx.n);

    rep.kappa = kappa;
    if (kappa) {
        rep.lemma1_slack = rep.e4 - T::from_ratio(3, 1) + *kappa * rep.rho2 - rep.var_cond_sq;
        rep.lemma2_slack = T::from_ratio(2, 1) * (rep.e4 - T::from_ratio(3, 1)) +
                           T::from_ratio(3, 1) * *kappa * rep.rho2 - rep.fourth_increment;
    }
    auto energy = lemma3_energy(ctx, sw, g);
    rep.energy_grouped = energy.grouped;
    rep.energy_direct = energy.direct;
    rep.lemma3a_slack = rep.e4 - energy.grouped;
    rep.lemma3b_slack = T::from_ratio(2, 1) * rep.e4 - rep.fourth_increment;

    auto sz = shzh_terms(ctx, sw, g);
    rep.shzh_term1 = sz.term1;
    rep.shzh_term2 = sz.term2;
    rep.shzh_term1_x = sz.term1_x;
    rep.shzh_term2_x = sz.term2_x;

    rep.exchangeability_discrepancy = exchangeability_check(ctx);
    auto hc = hoeffding_of_conditional(ctx, sw);
    rep.hoeff_cond_match = hc.match;
    rep.hoeff_cond_max_diff = hc.max_abs_diff;
    return rep;
}

}  // namespace dejong

#endif
