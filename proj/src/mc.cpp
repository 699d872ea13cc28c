#include "dejong/mc.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "dejong/distances.hpp"
#include "dejong/errors.hpp"

namespace dejong {

namespace philox {

namespace {
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
}  // namespace

std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                   std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t prod0 = static_cast<std::uint64_t>(kMul0) * counter[0];
        const std::uint64_t prod1 = static_cast<std::uint64_t>(kMul1) * counter[2];
        counter = {static_cast<std::uint32_t>(prod1 >> 32) ^ counter[1] ^ key[0],
                   static_cast<std::uint32_t>(prod1),
                   static_cast<std::uint32_t>(prod0 >> 32) ^ counter[3] ^ key[1],
                   static_cast<std::uint32_t>(prod0)};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return counter;
}

}  // namespace philox

SampleRng::SampleRng(std::uint64_t seed, std::uint64_t sample_index, std::uint32_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{static_cast<std::uint32_t>(sample_index),
               static_cast<std::uint32_t>(sample_index >> 32), 0, stream} {}

void SampleRng::refill() {
    words_ = philox::block(counter_, key_);
    ++counter_[2];
    word_pos_ = 0;
}

double SampleRng::uniform01() {
    if (word_pos_ > 2) refill();
    const std::uint64_t bits = (static_cast<std::uint64_t>(words_[word_pos_ + 1]) << 32) |
                               words_[word_pos_];
    word_pos_ += 2;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double SampleRng::normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    // 1 - u1 lies in (0, 1], keeping the logarithm finite.
    const double radius = std::sqrt(-2.0 * std::log1p(-u1));
    return radius * std::cos(2.0 * std::acos(-1.0) * u2);
}

namespace {

constexpr std::uint64_t kBlockSamples = 65536;

struct VariableSampler {
    SamplerKind sampler = SamplerKind::None;
    std::vector<double> cum;     // cumulative probabilities (finite support)
    std::vector<double> values;  // atom values
};

struct Evaluator {
    std::vector<VariableSampler> vars;
    const UStatisticSpec<double>* spec = nullptr;
    bool needs_indices = false;  // table kernels index atoms by position

    static Evaluator build(const UStatisticSpec<double>& spec) {
        Evaluator ev;
        ev.spec = &spec;
        for (const auto& v : spec.variables) {
            VariableSampler vs;
            vs.sampler = v.sampler;
            if (v.finite()) {
                double acc = 0;
                for (const auto& a : v.atoms) {
                    acc += a.prob;
                    vs.cum.push_back(acc);
                    vs.values.push_back(a.value);
                }
                vs.cum.back() = 1.0;  // guard against rounding in the last bin
            } else if (v.sampler == SamplerKind::None) {
                throw NoSampler("variable has neither atoms nor a sampler");
            }
            ev.vars.push_back(std::move(vs));
        }
        for (const auto& k : spec.kernels.entries)
            if (!k.is_product) {
                ev.needs_indices = true;
                for (int axis : k.subset)
                    if (!spec.variables[static_cast<std::size_t>(axis)].finite())
                        throw NoSampler("table kernel over a sampler-only variable");
            }
        return ev;
    }

    double draw(std::uint64_t seed, std::uint64_t index) const {
        SampleRng rng(seed, index);
        const std::size_t n = vars.size();
        std::vector<double> x(n);
        std::vector<int> digit(needs_indices ? n : 0);
        for (std::size_t j = 0; j < n; ++j) {
            const auto& vs = vars[j];
            if (!vs.values.empty()) {
                const double u = rng.uniform01();
                std::size_t k = 0;
                while (k + 1 < vs.cum.size() && u >= vs.cum[k]) ++k;
                x[j] = vs.values[k];
                if (needs_indices) digit[j] = static_cast<int>(k);
            } else {
                x[j] = rng.normal();
            }
        }
        double w = 0;
        for (const auto& k : spec->kernels.entries) {
            if (k.is_product) {
                double term = k.coeff;
                for (int axis : k.subset) term *= x[static_cast<std::size_t>(axis)];
                w += term;
            } else {
                std::size_t idx = 0, stride = 1;
                for (int axis : k.subset) {
                    idx += stride * static_cast<std::size_t>(digit[static_cast<std::size_t>(axis)]);
                    stride *= spec->variables[static_cast<std::size_t>(axis)].atoms.size();
                }
                w += k.table[idx];
            }
        }
        return w;
    }
};

// Fixed-order blocked average of f over xs: per-block partial sums are added
// in block order, so the result is independent of any parallel generation.
template <class F>
double blocked_average(const std::vector<double>& xs, F f) {
    double total = 0;
    const std::size_t m = xs.size();
    for (std::size_t start = 0; start < m; start += kBlockSamples) {
        const std::size_t stop = std::min(m, start + kBlockSamples);
        double partial = 0;
        for (std::size_t i = start; i < stop; ++i) partial += f(xs[i]);
        total += partial;
    }
    return total / static_cast<double>(m);
}

}  // namespace

std::vector<double> sample_w(const UStatisticSpec<double>& spec, const RunConfig& cfg) {
    if (cfg.samples == 0) throw OutOfRange("sample count must be positive");
    const Evaluator ev = Evaluator::build(spec);
    std::vector<double> out(cfg.samples);
    const unsigned workers = std::max(1u, cfg.workers);
    if (workers == 1) {
        for (std::uint64_t i = 0; i < cfg.samples; ++i) out[i] = ev.draw(cfg.seed, i);
        return out;
    }
    // Workers own disjoint block stripes; each sample value depends only on
    // (seed, index), so the partition cannot change the output.
    const std::uint64_t blocks = (cfg.samples + kBlockSamples - 1) / kBlockSamples;
    std::vector<std::thread> pool;
    for (unsigned wkr = 0; wkr < workers; ++wkr) {
        pool.emplace_back([&, wkr] {
            for (std::uint64_t b = wkr; b < blocks; b += workers) {
                const std::uint64_t start = b * kBlockSamples;
                const std::uint64_t stop = std::min<std::uint64_t>(cfg.samples,
                                                                   start + kBlockSamples);
                for (std::uint64_t i = start; i < stop; ++i) out[i] = ev.draw(cfg.seed, i);
            }
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

MomentEstimate estimate_fourth_moment(const UStatisticSpec<double>& spec, const RunConfig& cfg) {
    const auto xs = sample_w(spec, cfg);
    const double m4 = blocked_average(xs, [](double w) { return w * w * w * w; });
    const double m8 = blocked_average(xs, [](double w) {
        const double w4 = w * w * w * w;
        return w4 * w4;
    });
    const double var4 = std::max(0.0, m8 - m4 * m4);
    return {m4, std::sqrt(var4 / static_cast<double>(xs.size()))};
}

DistanceEstimate estimate_distances(const UStatisticSpec<double>& spec, const RunConfig& cfg) {
    const auto xs = sample_w(spec, cfg);
    const auto ek = empirical_kolmogorov(xs, cfg.delta);
    const double dw = wasserstein_exact(law_from_samples(xs));
    return {ek.estimate, ek.band, dw};
}

SimulationSummary run_simulation(const UStatisticSpec<double>& spec, const RunConfig& cfg) {
    const auto xs = sample_w(spec, cfg);
    SimulationSummary s;
    s.seed = cfg.seed;
    s.m = cfg.samples;
    s.mean = blocked_average(xs, [](double w) { return w; });
    const double m2 = blocked_average(xs, [](double w) { return w * w; });
    s.var = std::max(0.0, m2 - s.mean * s.mean);
    s.m4 = blocked_average(xs, [](double w) { return w * w * w * w; });
    const double m8 = blocked_average(xs, [](double w) {
        const double w4 = w * w * w * w;
        return w4 * w4;
    });
    s.m4_std_error = std::sqrt(std::max(0.0, m8 - s.m4 * s.m4) / static_cast<double>(xs.size()));
    const auto ek = empirical_kolmogorov(xs, cfg.delta);
    s.dk_est = ek.estimate;
    s.dk_band = ek.band;
    s.dw_est = wasserstein_exact(law_from_samples(xs));
    return s;
}

}  // namespace dejong
