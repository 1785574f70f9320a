#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

namespace ehcoop {

// Transmit powers, noise and rate target of the three-node network.
// Linear units throughout (watts, Hz, bits/s); dB enters only at the CLI.
struct SystemParams {
    double p_s = 1.0;        // source transmit power (W)
    double p_r = 1.0;        // relay transmit power (W)
    double noise = 0.01;     // receiver noise variance (W)
    double bandwidth = 2e6;  // channel bandwidth (Hz)
    double rate_min = 2e5;   // minimum acceptable rate (bits/s)
};

// On-off harvested-energy model. The whole energy process is summarized
// by p_ex, the probability that the relay cannot afford one block of
// transmission. p_av and t_block are descriptive metadata only and never
// enter a computation.
struct EnergyModel {
    double p_ex = 0.0;                   // energy-exhausted probability
    std::optional<double> p_av;          // average harvested power (W)
    std::optional<double> t_block;       // signal block length (s)
};

// One block realization: three fading power gains plus the relay's
// energy state. Gains are |h|^2 of unit-variance complex Gaussians,
// i.e. unit-mean exponentials; phases never matter for outage.
struct ChannelDraw {
    double g_sd = 0.0;
    double g_sr = 0.0;
    double g_rd = 0.0;
    bool energy_ok = true;
};

// Monte Carlo point estimate with a normal-approximation interval.
struct OutageEstimate {
    double p_hat = 0.0;
    std::uint64_t trials = 0;
    double std_err = 0.0;     // sqrt(p_hat (1 - p_hat) / trials)
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::uint64_t seed = 0;
};

// Validated inputs plus the derived quantities every formula uses:
// per-hop SNRs and the two rate thresholds. Immutable once built;
// safe to share across threads.
struct ParamBundle {
    SystemParams system;
    EnergyModel energy;
    double rho_s = 0.0;  // p_s / noise
    double rho_r = 0.0;  // p_r / noise
    double g1 = 0.0;     // 2^(rate_min/bandwidth) - 1, direct threshold
    double g2 = 0.0;     // 2^(2 rate_min/bandwidth) - 1, relay threshold
};

// Checks ranges and fills in the derived fields. Throws
// std::invalid_argument naming the offending field.
ParamBundle validate(const SystemParams& system, const EnergyModel& energy);

// Re-validating an already validated bundle is a no-op (idempotence).
ParamBundle validate(const ParamBundle& bundle);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Params with rho_s = rho_r = 10^(snr_db/10), keeping noise at 1 W.
SystemParams system_from_snr_db(double snr_db, double bandwidth = 2e6,
                                double rate_min = 2e5);

}  // namespace ehcoop
