#ifndef DEJONG_MC_HPP
#define DEJONG_MC_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "dejong/model.hpp"

namespace dejong {

// Monte-Carlo evaluation of moments and distances for specs too large to
// enumerate. Every draw is a pure function of (seed, sample index), so
// results are bit-identical across runs and worker counts.

struct RunConfig {
    std::uint64_t seed = 0;
    std::uint64_t samples = 1'000'000;  // m
    double delta = 0.01;                // DKW confidence parameter
    unsigned workers = 1;               // parallelism hint; never changes results
};

namespace philox {

// Philox4x32-10 block function: 128-bit counter, 64-bit key.
std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                   std::array<std::uint32_t, 2> key);

}  // namespace philox

// Per-sample generator: counter = (index lo, index hi, draw block, stream).
class SampleRng {
  public:
    SampleRng(std::uint64_t seed, std::uint64_t sample_index, std::uint32_t stream = 0);

    double uniform01();  // 53-bit uniform in [0, 1)
    double normal();     // Box-Muller; consumes two uniforms

  private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> words_{};
    int word_pos_ = 4;  // 4 = empty
};

// m i.i.d. draws of W, in sample-index order.
std::vector<double> sample_w(const UStatisticSpec<double>& spec, const RunConfig& cfg);

struct MomentEstimate {
    double estimate = 0;
    double std_error = 0;  // plug-in standard error
};

MomentEstimate estimate_fourth_moment(const UStatisticSpec<double>& spec, const RunConfig& cfg);

struct DistanceEstimate {
    double dk_est = 0;
    double dk_band = 0;  // DKW radius at cfg.delta
    double dw_est = 0;   // exact CDF-gap integral of the empirical law
};

DistanceEstimate estimate_distances(const UStatisticSpec<double>& spec, const RunConfig& cfg);

struct SimulationSummary {
    std::uint64_t seed = 0;
    std::uint64_t m = 0;
    double mean = 0;
    double var = 0;  // plug-in (population-form) variance
    double m4 = 0;
    double m4_std_error = 0;
    double dk_est = 0;
    double dk_band = 0;
    double dw_est = 0;
};

// One pass over a single shared sample set: moments plus both distances.
SimulationSummary run_simulation(const UStatisticSpec<double>& spec, const RunConfig& cfg);

}  // namespace dejong

#endif
