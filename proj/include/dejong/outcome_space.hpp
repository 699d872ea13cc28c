#ifndef DEJONG_OUTCOME_SPACE_HPP
#define DEJONG_OUTCOME_SPACE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dejong/errors.hpp"
#include "dejong/model.hpp"

namespace dejong {

// Finite product space with mixed-radix outcome indices; axis 0 varies
// fastest. All exact operations enumerate this space.
template <class S>
struct OutcomeSpace {
    int n = 0;
    std::vector<int> sizes;
    std::vector<std::uint64_t> strides;
    std::uint64_t total = 0;
    std::vector<std::vector<S>> values;  // [axis][digit]
    std::vector<std::vector<S>> probs;

    static OutcomeSpace build(const UStatisticSpec<S>& spec,
                              std::uint64_t max_outcomes = kDefaultMaxOutcomes) {
        OutcomeSpace sp;
        sp.n = spec.n;
        sp.total = 1;
        for (int i = 0; i < spec.n; ++i) {
            const auto& v = spec.variables[static_cast<std::size_t>(i)];
            if (!v.finite())
                throw SamplerOnlyVariable("variable " + std::to_string(i + 1) +
                                          " has no finite support");
            sp.sizes.push_back(static_cast<int>(v.atoms.size()));
            sp.strides.push_back(sp.total);
            sp.total *= v.atoms.size();
            if (sp.total > max_outcomes)
                throw SpaceTooLarge("outcome count exceeds " + std::to_string(max_outcomes));
            std::vector<S> vals, ps;
            for (const auto& a : v.atoms) {
                vals.push_back(a.value);
                ps.push_back(a.prob);
            }
            sp.values.push_back(std::move(vals));
            sp.probs.push_back(std::move(ps));
        }
        return sp;
    }

    int digit(std::uint64_t idx, int axis) const {
        return static_cast<int>((idx / strides[static_cast<std::size_t>(axis)]) %
                                static_cast<std::uint64_t>(sizes[static_cast<std::size_t>(axis)]));
    }

    S outcome_prob(std::uint64_t idx) const {
        S acc = scalar_traits<S>::one();
        for (int a = 0; a < n; ++a) acc *= probs[static_cast<std::size_t>(a)][static_cast<std::size_t>(digit(idx, a))];
        return acc;
    }

    S outcome_value(std::uint64_t idx, int axis) const {
        return values[static_cast<std::size_t>(axis)][static_cast<std::size_t>(digit(idx, axis))];
    }
};

// Function of a subset of axes, stored densely over that sub-product; the
// lowest axis in the mask varies fastest.
template <class S>
struct Table {
    std::uint64_t mask = 0;
    std::vector<int> axes;              // ascending axes present in mask
    std::vector<std::uint64_t> strides; // stride of axes[k] inside data
    std::vector<S> data;

    bool is_constant() const { return axes.empty(); }
    const S& scalar() const { return data[0]; }
};

template <class S>
Table<S> make_table(const OutcomeSpace<S>& space, std::uint64_t mask) {
    Table<S> t;
    t.mask = mask;
    std::uint64_t sz = 1;
    for (int a = 0; a < space.n; ++a)
        if (mask >> a & 1) {
            t.axes.push_back(a);
            t.strides.push_back(sz);
            sz *= static_cast<std::uint64_t>(space.sizes[static_cast<std::size_t>(a)]);
        }
    t.data.assign(sz, scalar_traits<S>::zero());
    return t;
}

template <class S>
Table<S> make_constant(const S& c) {
    Table<S> t;
    t.data = {c};
    return t;
}

// Visits every cell; f(cell_index, digits) sees the digit vector aligned
// with t.axes.
template <class S, class F>
void for_each_cell(const OutcomeSpace<S>& space, const Table<S>& t, F&& f) {
    const std::size_t k = t.axes.size();
    std::vector<int> digits(k, 0);
    const std::uint64_t sz = t.data.size();
    for (std::uint64_t idx = 0; idx < sz; ++idx) {
        f(idx, digits);
        for (std::size_t q = 0; q < k; ++q) {
            if (++digits[q] < space.sizes[static_cast<std::size_t>(t.axes[q])]) break;
            digits[q] = 0;
        }
    }
}

// Value at a full-space outcome; axes outside the mask are ignored.
template <class S>
S value_at(const OutcomeSpace<S>& space, const Table<S>& t, std::uint64_t full_idx) {
    std::uint64_t idx = 0;
    for (std::size_t k = 0; k < t.axes.size(); ++k)
        idx += static_cast<std::uint64_t>(space.digit(full_idx, t.axes[k])) * t.strides[k];
    return t.data[idx];
}

// dst += src; requires src.mask ⊆ dst.mask.
template <class S>
void accumulate(const OutcomeSpace<S>& space, Table<S>& dst, const Table<S>& src) {
    std::vector<std::uint64_t> sstride(dst.axes.size(), 0);
    for (std::size_t k = 0; k < dst.axes.size(); ++k)
        for (std::size_t q = 0; q < src.axes.size(); ++q)
            if (src.axes[q] == dst.axes[k]) sstride[k] = src.strides[q];
    for_each_cell(space, dst, [&](std::uint64_t idx, const std::vector<int>& digits) {
        std::uint64_t sidx = 0;
        for (std::size_t k = 0; k < digits.size(); ++k)
            sidx += static_cast<std::uint64_t>(digits[k]) * sstride[k];
        dst.data[idx] += src.data[sidx];
    });
}

// E_j: averages out one axis against its marginal law. No-op copy when the
// axis is absent.
template <class S>
Table<S> average_axis(const OutcomeSpace<S>& space, const Table<S>& t, int axis) {
    if (!(t.mask >> axis & 1)) return t;
    Table<S> out = make_table(space, t.mask & ~(std::uint64_t(1) << axis));
    std::vector<std::uint64_t> ostride(t.axes.size(), 0);
    std::size_t apos = 0;
    for (std::size_t k = 0, q = 0; k < t.axes.size(); ++k) {
        if (t.axes[k] == axis) {
            apos = k;
            continue;
        }
        ostride[k] = out.strides[q++];
    }
    const auto& pr = space.probs[static_cast<std::size_t>(axis)];
    for_each_cell(space, t, [&](std::uint64_t idx, const std::vector<int>& digits) {
        std::uint64_t oidx = 0;
        for (std::size_t k = 0; k < digits.size(); ++k)
            oidx += static_cast<std::uint64_t>(digits[k]) * ostride[k];
        out.data[oidx] += pr[static_cast<std::size_t>(digits[apos])] * t.data[idx];
    });
    return out;
}

// t -= avg broadcast back along `axis`; avg must be average_axis(t, axis).
template <class S>
void subtract_broadcast(const OutcomeSpace<S>& space, Table<S>& t, const Table<S>& avg,
                        int axis) {
    std::vector<std::uint64_t> astride(t.axes.size(), 0);
    for (std::size_t k = 0, q = 0; k < t.axes.size(); ++k) {
        if (t.axes[k] == axis) continue;
        astride[k] = avg.strides[q++];
    }
    for_each_cell(space, t, [&](std::uint64_t idx, const std::vector<int>& digits) {
        std::uint64_t aidx = 0;
        for (std::size_t k = 0; k < digits.size(); ++k)
            aidx += static_cast<std::uint64_t>(digits[k]) * astride[k];
        t.data[idx] -= avg.data[aidx];
    });
}

// Δ_j = I − E_j, in place.
template <class S>
void subtract_axis_mean(const OutcomeSpace<S>& space, Table<S>& t, int axis) {
    if (!(t.mask >> axis & 1)) {
        for (auto& x : t.data) x = scalar_traits<S>::zero();
        return;
    }
    Table<S> avg = average_axis(space, t, axis);
    subtract_broadcast(space, t, avg, axis);
}

template <class S>
bool table_is_zero(const Table<S>& t) {
    for (const auto& x : t.data)
        if (!scalar_traits<S>::is_zero(x)) return false;
    return true;
}

// Expectation over all axes the table depends on.
template <class S>
S table_expectation(const OutcomeSpace<S>& space, const Table<S>& t) {
    S acc = scalar_traits<S>::zero();
    for_each_cell(space, t, [&](std::uint64_t idx, const std::vector<int>& digits) {
        S w = scalar_traits<S>::one();
        for (std::size_t k = 0; k < digits.size(); ++k)
            w *= space.probs[static_cast<std::size_t>(t.axes[k])][static_cast<std::size_t>(digits[k])];
        acc += w * t.data[idx];
    });
    return acc;
}

template <class S>
S table_second_moment(const OutcomeSpace<S>& space, const Table<S>& t) {
    S acc = scalar_traits<S>::zero();
    for_each_cell(space, t, [&](std::uint64_t idx, const std::vector<int>& digits) {
        S w = scalar_traits<S>::one();
        for (std::size_t k = 0; k < digits.size(); ++k)
            w *= space.probs[static_cast<std::size_t>(t.axes[k])][static_cast<std::size_t>(digits[k])];
        acc += w * t.data[idx] * t.data[idx];
    });
    return acc;
}

// Pointwise equality as functions on the full space (masks may differ).
template <class S>
bool tables_equal(const OutcomeSpace<S>& space, const Table<S>& a, const Table<S>& b) {
    Table<S> probe = make_table(space, a.mask | b.mask);
    bool ok = true;
    std::vector<std::uint64_t> astride(probe.axes.size(), 0), bstride(probe.axes.size(), 0);
    for (std::size_t k = 0; k < probe.axes.size(); ++k) {
        for (std::size_t q = 0; q < a.axes.size(); ++q)
            if (a.axes[q] == probe.axes[k]) astride[k] = a.strides[q];
        for (std::size_t q = 0; q < b.axes.size(); ++q)
            if (b.axes[q] == probe.axes[k]) bstride[k] = b.strides[q];
    }
    for_each_cell(space, probe, [&](std::uint64_t, const std::vector<int>& digits) {
        if (!ok) return;
        std::uint64_t ai = 0, bi = 0;
        for (std::size_t k = 0; k < digits.size(); ++k) {
            ai += static_cast<std::uint64_t>(digits[k]) * astride[k];
            bi += static_cast<std::uint64_t>(digits[k]) * bstride[k];
        }
        if (!scalar_traits<S>::is_zero(a.data[ai] - b.data[bi])) ok = false;
    });
    return ok;
}

// Kernel as a table over its subset's axes. Table kernels use the same
// layout (lowest subset coordinate fastest), so the data copies through.
template <class S>
Table<S> kernel_table(const OutcomeSpace<S>& space, const Kernel<S>& k) {
    std::uint64_t mask = 0;
    for (int i : k.subset) mask |= std::uint64_t(1) << i;
    Table<S> t = make_table(space, mask);
    if (!k.is_product) {
        t.data = k.table;
        return t;
    }
    for_each_cell(space, t, [&](std::uint64_t idx, const std::vector<int>& digits) {
        S acc = k.coeff;
        for (std::size_t q = 0; q < t.axes.size(); ++q)
            acc *= space.values[static_cast<std::size_t>(t.axes[q])][static_cast<std::size_t>(digits[q])];
        t.data[idx] = acc;
    });
    return t;
}

// W as a table over the union of kernel supports.
template <class S>
Table<S> statistic_table(const OutcomeSpace<S>& space, const UStatisticSpec<S>& spec) {
    std::uint64_t mask = 0;
    for (const auto& k : spec.kernels.entries)
        for (int i : k.subset) mask |= std::uint64_t(1) << i;
    Table<S> w = make_table(space, mask);
    for (const auto& k : spec.kernels.entries) accumulate(space, w, kernel_table(space, k));
    return w;
}

}  // namespace dejong

#endif
