#include "ehcoop/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ehcoop/analytic.hpp"

namespace ehcoop {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double to_unit(std::uint64_t v) {
    return static_cast<double>(v >> 11) * 0x1.0p-53;  // [0, 1)
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t start_index)
    : key_(mix64(seed ^ kGamma)), index_(start_index) {}

std::uint64_t CounterRng::next_raw() {
    return mix64(key_ + (index_++) * kGamma);
}

double CounterRng::next_unit() { return to_unit(next_raw()); }

ChannelDraw sample_channel(CounterRng& rng) {
    ChannelDraw d;
    d.g_sd = -std::log1p(-rng.next_unit());
    d.g_sr = -std::log1p(-rng.next_unit());
    d.g_rd = -std::log1p(-rng.next_unit());
    d.energy_ok = true;
    return d;
}

ChannelDraw sample_trial(std::uint64_t seed, std::uint64_t trial, double p_ex) {
    CounterRng rng(seed, trial * kDrawsPerTrial);
    ChannelDraw d = sample_channel(rng);
    d.energy_ok = rng.next_unit() >= p_ex;
    return d;
}

bool trial_outcome(const ChannelDraw& draw, const ParamBundle& b) {
    if (draw.g_sd * b.rho_s >= b.g1) return false;  // direct link meets the rate
    if (!draw.energy_ok) return true;               // relay has no energy
    return relay_snr(draw.g_sr, draw.g_rd, b) < b.g2;
}

OutageEstimate estimate_outage(const ParamBundle& b, std::uint64_t trials,
                               std::uint64_t seed, const EstimateOptions& opts) {
    if (trials == 0) {
        throw std::invalid_argument("estimate_outage requires trials >= 1");
    }
    if (!(opts.confidence > 0.0 && opts.confidence < 1.0)) {
        throw std::invalid_argument("confidence must lie in (0, 1)");
    }

    unsigned workers = opts.workers > 0
        ? static_cast<unsigned>(opts.workers)
        : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::uint64_t>(workers, trials));

    const double p_ex = b.energy.p_ex;
    std::vector<std::uint64_t> counts(workers, 0);
    std::vector<std::thread> pool;
    pool.reserve(workers);

    const std::uint64_t chunk = trials / workers;
    const std::uint64_t rest = trials % workers;
    std::uint64_t begin = 0;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t end = begin + chunk + (w < rest ? 1 : 0);
        pool.emplace_back([&, w, begin, end] {
            std::uint64_t outages = 0;
            for (std::uint64_t i = begin; i < end; ++i) {
                outages += trial_outcome(sample_trial(seed, i, p_ex), b) ? 1 : 0;
            }
            counts[w] = outages;
        });
        begin = end;
    }
    for (auto& t : pool) t.join();

    std::uint64_t total = 0;
    for (auto c : counts) total += c;

    OutageEstimate est;
    est.trials = trials;
    est.seed = seed;
    est.p_hat = static_cast<double>(total) / static_cast<double>(trials);
    est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) /
                            static_cast<double>(trials));
    const double z = confidence_z(opts.confidence);
    est.ci_lo = std::max(0.0, est.p_hat - z * est.std_err);
    est.ci_hi = std::min(1.0, est.p_hat + z * est.std_err);
    return est;
}

std::uint64_t trials_for_standard_error(double p, double target_se) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("planner requires an outage level in (0, 1)");
    }
    if (!(target_se > 0.0)) {
        throw std::invalid_argument("planner requires a positive target SE");
    }
    const double n = std::ceil(p * (1.0 - p) / (target_se * target_se));
    if (n < 1.0) return 1;
    if (n >= 1.8e19) {
        throw std::invalid_argument("target SE is unreachably small");
    }
    return static_cast<std::uint64_t>(n);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("normal_quantile requires p in (0, 1)");
    }

    // Acklam's rational approximation, |rel err| < 1.2e-9.
    static constexpr double a[6] = {
        -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
        1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double bc[5] = {
        -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
        6.680131188771972e+01, -1.328068155288572e+01};
    static constexpr double c[6] = {
        -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
        -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00};
    static constexpr double d[4] = {
        7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
        3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((bc[0] * r + bc[1]) * r + bc[2]) * r + bc[3]) * r + bc[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley step against the exact CDF.
    const double err = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = err * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double confidence_z(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw std::invalid_argument("confidence must lie in (0, 1)");
    }
    return normal_quantile(0.5 * (1.0 + confidence));
}

}  // namespace ehcoop
