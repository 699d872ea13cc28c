#ifndef DEJONG_ERRORS_HPP
#define DEJONG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dejong {

struct SpaceTooLarge : std::runtime_error {
    explicit SpaceTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct SubsetBudgetExceeded : std::runtime_error {
    explicit SubsetBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct KappaUnknown : std::runtime_error {
    explicit KappaUnknown(const std::string& what) : std::runtime_error(what) {}
};

// Raised by exact operations on variables that only carry a sampler.
struct SamplerOnlyVariable : std::runtime_error {
    explicit SamplerOnlyVariable(const std::string& what) : std::runtime_error(what) {}
};

struct NoSampler : std::runtime_error {
    explicit NoSampler(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct OutOfRange : std::runtime_error {
    explicit OutOfRange(const std::string& what) : std::runtime_error(what) {}
};

// Contract violations when constructing specs programmatically
// (build_homogeneous_sum and friends).
struct SpecError : std::runtime_error {
    enum class Kind { NonCentered, NonUnitVariance, MixedOrder, Invalid };
    Kind kind;
    SpecError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

struct InvalidKappa : std::runtime_error {
    explicit InvalidKappa(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dejong

#endif
