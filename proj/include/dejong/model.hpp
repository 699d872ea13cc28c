#ifndef DEJONG_MODEL_HPP
#define DEJONG_MODEL_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dejong/errors.hpp"
#include "dejong/scalar.hpp"

namespace dejong {

enum class SamplerKind { None, StandardNormal };

template <class S>
struct Atom {
    S value;
    S prob;
};

// One coordinate's law: either a finite list of atoms or a named sampler.
// Sampler-only variables are usable by the Monte-Carlo module only; exact
// operations reject them.
template <class S>
struct Variable {
    std::vector<Atom<S>> atoms;
    SamplerKind sampler = SamplerKind::None;

    bool finite() const { return !atoms.empty(); }

    S mean() const {
        S acc = scalar_traits<S>::zero();
        for (const auto& a : atoms) acc += a.value * a.prob;
        return acc;
    }
    // Raw k-th moment E[X^k].
    S raw_moment(unsigned k) const {
        S acc = scalar_traits<S>::zero();
        for (const auto& a : atoms) acc += pow_int(a.value, k) * a.prob;
        return acc;
    }
};

template <class S>
Variable<S> rademacher() {
    Variable<S> v;
    v.atoms = {{scalar_traits<S>::from_ratio(-1, 1), scalar_traits<S>::from_ratio(1, 2)},
               {scalar_traits<S>::from_ratio(1, 1), scalar_traits<S>::from_ratio(1, 2)}};
    return v;
}

// Kernel over a p-subset of coordinates. Product kernels hold the single
// coefficient of a_J * prod x_i; table kernels hold explicit values over the
// subset's joint support, lowest subset coordinate varying fastest.
template <class S>
struct Kernel {
    std::vector<int> subset;  // 0-based, strictly ascending
    bool is_product = true;
    S coeff = scalar_traits<S>::zero();
    std::vector<S> table;
};

template <class S>
struct KernelFamily {
    int order = 0;  // p
    std::vector<Kernel<S>> entries;
};

template <class S>
struct UStatisticSpec {
    int n = 0;
    KernelFamily<S> kernels;
    std::vector<Variable<S>> variables;
    bool symmetric = false;

    int order() const { return kernels.order; }
    bool all_finite() const {
        for (const auto& v : variables)
            if (!v.finite()) return false;
        return true;
    }
};

struct Violation {
    enum class Code {
        OrderExceedsN,
        OrderNotPositive,
        InvalidProbability,
        ProbabilitySum,
        DuplicateAtomValue,
        EmptyVariable,
        KernelSubsetSize,
        KernelSubsetRange,
        KernelSubsetDuplicate,
        KernelTableSize,
        SymmetricFlagViolated,
    };
    Code code;
    std::string detail;
};

inline const char* violation_name(Violation::Code c) {
    switch (c) {
        case Violation::Code::OrderExceedsN: return "OrderExceedsN";
        case Violation::Code::OrderNotPositive: return "OrderNotPositive";
        case Violation::Code::InvalidProbability: return "InvalidProbability";
        case Violation::Code::ProbabilitySum: return "ProbabilitySum";
        case Violation::Code::DuplicateAtomValue: return "DuplicateAtomValue";
        case Violation::Code::EmptyVariable: return "EmptyVariable";
        case Violation::Code::KernelSubsetSize: return "KernelSubsetSize";
        case Violation::Code::KernelSubsetRange: return "KernelSubsetRange";
        case Violation::Code::KernelSubsetDuplicate: return "KernelSubsetDuplicate";
        case Violation::Code::KernelTableSize: return "KernelTableSize";
        case Violation::Code::SymmetricFlagViolated: return "SymmetricFlagViolated";
    }
    return "?";
}

namespace detail {

inline bool is_positive(const Rational& q) { return sgn(q) > 0; }
inline bool is_positive(double x) { return x > 0; }

template <class S>
bool scalar_eq(const S& a, const S& b) {
    if constexpr (scalar_traits<S>::exact)
        return a == b;
    else
        return scalar_traits<S>::is_zero(a - b);
}

template <class S>
std::size_t kernel_table_size(const UStatisticSpec<S>& spec, const std::vector<int>& subset) {
    std::size_t sz = 1;
    for (int i : subset) sz *= spec.variables[static_cast<std::size_t>(i)].atoms.size();
    return sz;
}

template <class S>
bool variables_identical(const Variable<S>& a, const Variable<S>& b) {
    if (a.sampler != b.sampler || a.atoms.size() != b.atoms.size()) return false;
    for (std::size_t k = 0; k < a.atoms.size(); ++k)
        if (!scalar_eq(a.atoms[k].value, b.atoms[k].value) ||
            !scalar_eq(a.atoms[k].prob, b.atoms[k].prob))
            return false;
    return true;
}

// Evaluates a kernel on a tuple of atom indices given in subset order.
template <class S>
S kernel_value_at(const UStatisticSpec<S>& spec, const Kernel<S>& k,
                  const std::vector<int>& digits) {
    if (k.is_product) {
        S acc = k.coeff;
        for (std::size_t q = 0; q < k.subset.size(); ++q)
            acc *= spec.variables[static_cast<std::size_t>(k.subset[q])]
                       .atoms[static_cast<std::size_t>(digits[q])]
                       .value;
        return acc;
    }
    std::size_t idx = 0, stride = 1;
    for (std::size_t q = 0; q < k.subset.size(); ++q) {
        idx += static_cast<std::size_t>(digits[q]) * stride;
        stride *= spec.variables[static_cast<std::size_t>(k.subset[q])].atoms.size();
    }
    return k.table[idx];
}

// True if the table kernel is invariant under every transposition of two
// coordinates (only meaningful when all subset variables share one support).
template <class S>
bool kernel_is_symmetric(const UStatisticSpec<S>& spec, const Kernel<S>& k) {
    if (k.is_product) return true;
    const int p = static_cast<int>(k.subset.size());
    if (p <= 1) return true;
    const int m = static_cast<int>(spec.variables[static_cast<std::size_t>(k.subset[0])].atoms.size());
    std::vector<int> digits(static_cast<std::size_t>(p), 0);
    std::size_t total = kernel_table_size(spec, k.subset);
    for (std::size_t idx = 0; idx < total; ++idx) {
        for (int a = 0; a + 1 < p; ++a) {
            std::vector<int> swapped = digits;
            std::swap(swapped[static_cast<std::size_t>(a)], swapped[static_cast<std::size_t>(a) + 1]);
            if (!scalar_eq(kernel_value_at(spec, k, digits), kernel_value_at(spec, k, swapped)))
                return false;
        }
        for (int q = 0; q < p; ++q) {
            if (++digits[static_cast<std::size_t>(q)] < m) break;
            digits[static_cast<std::size_t>(q)] = 0;
        }
    }
    return true;
}

template <class S>
bool kernels_equal_as_functions(const UStatisticSpec<S>& spec, const Kernel<S>& a,
                                const Kernel<S>& b) {
    // Same function of the argument tuple, ignoring which subset it is attached to.
    std::size_t sz = kernel_table_size(spec, a.subset);
    if (sz != kernel_table_size(spec, b.subset)) return false;
    const int p = static_cast<int>(a.subset.size());
    const int m = static_cast<int>(spec.variables[static_cast<std::size_t>(a.subset[0])].atoms.size());
    std::vector<int> digits(static_cast<std::size_t>(p), 0);
    for (std::size_t idx = 0; idx < sz; ++idx) {
        if (!scalar_eq(kernel_value_at(spec, a, digits), kernel_value_at(spec, b, digits)))
            return false;
        for (int q = 0; q < p; ++q) {
            if (++digits[static_cast<std::size_t>(q)] < m) break;
            digits[static_cast<std::size_t>(q)] = 0;
        }
    }
    return true;
}

}  // namespace detail

// Structural validation. Returns violations instead of throwing; an empty
// list means the spec is well-formed. Degeneracy is not checked here.
template <class S>
std::vector<Violation> validate_spec(const UStatisticSpec<S>& spec) {
    using T = scalar_traits<S>;
    std::vector<Violation> out;
    const int p = spec.kernels.order;
    if (p <= 0) out.push_back({Violation::Code::OrderNotPositive, "p = " + std::to_string(p)});
    if (p > spec.n)
        out.push_back({Violation::Code::OrderExceedsN,
                       "p = " + std::to_string(p) + " > n = " + std::to_string(spec.n)});
    if (spec.n != static_cast<int>(spec.variables.size()))
        out.push_back({Violation::Code::EmptyVariable, "variable count != n"});

    for (std::size_t i = 0; i < spec.variables.size(); ++i) {
        const auto& v = spec.variables[i];
        if (!v.finite()) {
            if (v.sampler == SamplerKind::None)
                out.push_back({Violation::Code::EmptyVariable,
                               "variable " + std::to_string(i + 1) + " has no atoms and no sampler"});
            continue;
        }
        S total = T::zero();
        for (const auto& a : v.atoms) {
            if (!detail::is_positive(a.prob))
                out.push_back({Violation::Code::InvalidProbability,
                               "variable " + std::to_string(i + 1)});
            total += a.prob;
        }
        if (!detail::scalar_eq(total, T::one()))
            out.push_back({Violation::Code::ProbabilitySum, "variable " + std::to_string(i + 1)});
        for (std::size_t a = 0; a < v.atoms.size(); ++a)
            for (std::size_t b = a + 1; b < v.atoms.size(); ++b)
                if (detail::scalar_eq(v.atoms[a].value, v.atoms[b].value)) {
                    out.push_back({Violation::Code::DuplicateAtomValue,
                                   "variable " + std::to_string(i + 1)});
                    a = v.atoms.size();
                    break;
                }
    }

    std::vector<std::vector<int>> seen;
    for (const auto& k : spec.kernels.entries) {
        if (static_cast<int>(k.subset.size()) != p) {
            out.push_back({Violation::Code::KernelSubsetSize, "|J| != p"});
            continue;
        }
        bool in_range = true;
        for (std::size_t q = 0; q < k.subset.size(); ++q) {
            if (k.subset[q] < 0 || k.subset[q] >= spec.n) in_range = false;
            if (q > 0 && k.subset[q] <= k.subset[q - 1]) in_range = false;
        }
        if (!in_range) {
            out.push_back({Violation::Code::KernelSubsetRange, "subset not ascending in [1,n]"});
            continue;
        }
        if (std::find(seen.begin(), seen.end(), k.subset) != seen.end())
            out.push_back({Violation::Code::KernelSubsetDuplicate, "duplicate subset"});
        seen.push_back(k.subset);
        if (!k.is_product) {
            bool finite = true;
            for (int i : k.subset)
                if (!spec.variables[static_cast<std::size_t>(i)].finite()) finite = false;
            if (finite && k.table.size() != detail::kernel_table_size(spec, k.subset))
                out.push_back({Violation::Code::KernelTableSize, "table size mismatch"});
            if (!finite)
                out.push_back({Violation::Code::KernelTableSize,
                               "table kernel over sampler-only variable"});
        }
    }

    if (spec.symmetric && out.empty()) {
        bool ok = true;
        for (std::size_t i = 1; i < spec.variables.size(); ++i)
            if (!detail::variables_identical(spec.variables[0], spec.variables[i])) ok = false;
        // Every p-subset must carry the same symmetric kernel.
        std::size_t expected = 1;
        {
            // C(n, p)
            unsigned long long c = 1;
            for (int q = 0; q < p; ++q)
                c = c * static_cast<unsigned long long>(spec.n - q) /
                    static_cast<unsigned long long>(q + 1);
            expected = static_cast<std::size_t>(c);
        }
        if (spec.kernels.entries.size() != expected) ok = false;
        if (ok) {
            const auto& first = spec.kernels.entries.front();
            const bool finite = spec.variables[0].finite();
            if (finite && !detail::kernel_is_symmetric(spec, first)) ok = false;
            for (const auto& k : spec.kernels.entries) {
                if (k.is_product != first.is_product) { ok = false; break; }
                if (k.is_product) {
                    if (!detail::scalar_eq(k.coeff, first.coeff)) { ok = false; break; }
                } else if (finite && !detail::kernels_equal_as_functions(spec, first, k)) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok)
            out.push_back({Violation::Code::SymmetricFlagViolated,
                           "symmetric flag set but variables/kernels differ"});
    }
    return out;
}

// Y = sum_J a_J prod_{i in J} Y_i over centered, unit-variance variables.
// Every subset must have the same size; that size becomes the order p.
template <class S>
UStatisticSpec<S> build_homogeneous_sum(const std::map<std::vector<int>, S>& coeffs,
                                        const std::vector<Variable<S>>& variables) {
    if (coeffs.empty()) throw SpecError(SpecError::Kind::Invalid, "no coefficients");
    const int p = static_cast<int>(coeffs.begin()->first.size());
    for (const auto& [subset, a] : coeffs)
        if (static_cast<int>(subset.size()) != p)
            throw SpecError(SpecError::Kind::MixedOrder, "subsets of unequal size");
    for (std::size_t i = 0; i < variables.size(); ++i) {
        const auto& v = variables[i];
        if (!v.finite()) {
            if (v.sampler == SamplerKind::StandardNormal) continue;  // centered, unit variance
            throw SpecError(SpecError::Kind::Invalid, "variable has neither atoms nor sampler");
        }
        if (!scalar_traits<S>::is_zero(v.mean()))
            throw SpecError(SpecError::Kind::NonCentered,
                            "variable " + std::to_string(i + 1) + " is not centered");
        if (!detail::scalar_eq(v.raw_moment(2), scalar_traits<S>::one()))
            throw SpecError(SpecError::Kind::NonUnitVariance,
                            "variable " + std::to_string(i + 1) + " does not have unit variance");
    }
    UStatisticSpec<S> spec;
    spec.n = static_cast<int>(variables.size());
    spec.variables = variables;
    spec.kernels.order = p;
    for (const auto& [subset, a] : coeffs) {
        Kernel<S> k;
        k.subset = subset;
        k.is_product = true;
        k.coeff = a;
        spec.kernels.entries.push_back(std::move(k));
    }
    auto violations = validate_spec(spec);
    for (const auto& v : violations)
        if (v.code == Violation::Code::KernelSubsetRange ||
            v.code == Violation::Code::OrderExceedsN)
            throw SpecError(SpecError::Kind::Invalid, violation_name(v.code));
    return spec;
}

// Real-mode view of a rational spec; used by the Monte-Carlo path.
inline UStatisticSpec<double> to_real(const UStatisticSpec<Rational>& spec) {
    UStatisticSpec<double> out;
    out.n = spec.n;
    out.symmetric = spec.symmetric;
    out.kernels.order = spec.kernels.order;
    for (const auto& v : spec.variables) {
        Variable<double> w;
        w.sampler = v.sampler;
        for (const auto& a : v.atoms) w.atoms.push_back({to_double(a.value), to_double(a.prob)});
        out.variables.push_back(std::move(w));
    }
    for (const auto& k : spec.kernels.entries) {
        Kernel<double> r;
        r.subset = k.subset;
        r.is_product = k.is_product;
        r.coeff = to_double(k.coeff);
        for (const auto& t : k.table) r.table.push_back(to_double(t));
        out.kernels.entries.push_back(std::move(r));
    }
    return out;
}

inline const UStatisticSpec<double>& to_real(const UStatisticSpec<double>& spec) { return spec; }

}  // namespace dejong

#endif
