#pragma once

#include <cstdint>

#include "ehcoop/params.hpp"

namespace ehcoop {

// Counter-based uniform stream: draw j of seed s is a pure function of
// (s, j). Trials own fixed index windows, so estimates are bit-identical
// for any partitioning of trials across workers.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t start_index = 0);

    double next_unit();       // uniform on [0, 1)
    std::uint64_t next_raw();

private:
    std::uint64_t key_;
    std::uint64_t index_;
};

// Index budget per trial: g_sd, g_sr, g_rd, energy flag.
inline constexpr std::uint64_t kDrawsPerTrial = 4;

// Three independent unit-mean exponential gains by inverse transform.
// energy_ok is left true; the caller samples it against p_ex.
ChannelDraw sample_channel(CounterRng& rng);

// Complete draw for one trial: gains plus the Bernoulli(1 - p_ex)
// energy flag, taken from the trial's own index window. Common random
// numbers across p_ex values: the same (seed, trial) reuses the same
// uniforms, so raising p_ex can only shrink the energy_ok set.
ChannelDraw sample_trial(std::uint64_t seed, std::uint64_t trial, double p_ex);

// One block of the protocol. Direct link first; if it misses the rate
// target the relay substitutes for it, provided it has energy and the
// two-hop SNR clears the doubled-rate threshold. Outage uses strict
// inequality (rate == rate_min succeeds).
bool trial_outcome(const ChannelDraw& draw, const ParamBundle& b);

struct EstimateOptions {
    int workers = 0;           // <= 0 picks hardware concurrency
    double confidence = 0.95;  // two-sided CI level
};

// Seeded Monte Carlo outage estimate. Deterministic in (seed, trials)
// and independent of the worker count.
OutageEstimate estimate_outage(const ParamBundle& b, std::uint64_t trials,
                               std::uint64_t seed,
                               const EstimateOptions& opts = {});

// Trial-count planner: trials needed to reach a target standard error
// at an anticipated outage level, n = p (1 - p) / se^2 rounded up.
// There is no variance reduction; rare events are bought with trials.
std::uint64_t trials_for_standard_error(double p, double target_se);

// Inverse standard normal CDF on (0, 1), |error| < 1 ulp after Halley
// refinement of Acklam's rational approximation.
double normal_quantile(double p);

// Two-sided z multiplier for a confidence level, e.g. 0.95 -> 1.95996.
double confidence_z(double confidence);

}  // namespace ehcoop
