#include "ehcoop/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ehcoop {

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << field << " must be strictly positive, got " << value;
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

ParamBundle validate(const SystemParams& system, const EnergyModel& energy) {
    require_positive(system.p_s, "p_s");
    require_positive(system.p_r, "p_r");
    require_positive(system.noise, "noise");
    require_positive(system.bandwidth, "bandwidth");
    require_positive(system.rate_min, "rate_min");

    if (!(energy.p_ex >= 0.0 && energy.p_ex <= 1.0)) {
        std::ostringstream msg;
        msg << "p_ex must lie in [0, 1], got " << energy.p_ex;
        throw std::invalid_argument(msg.str());
    }
    if (energy.p_av) require_positive(*energy.p_av, "p_av");
    if (energy.t_block) require_positive(*energy.t_block, "t_block");

    ParamBundle b;
    b.system = system;
    b.energy = energy;
    b.rho_s = system.p_s / system.noise;
    b.rho_r = system.p_r / system.noise;
    // Thresholds 2^r - 1 via expm1 so small spectral loads keep full
    // precision; sharing x keeps g2 = g1 (g1 + 2) tight to a few ulps.
    const double x = system.rate_min / system.bandwidth * kLn2;
    b.g1 = std::expm1(x);
    // The relay threshold carries a doubled spectral load because the
    // two-hop link spends half the block on each hop.
    b.g2 = std::expm1(2.0 * x);
    return b;
}

ParamBundle validate(const ParamBundle& bundle) {
    return validate(bundle.system, bundle.energy);
}

SystemParams system_from_snr_db(double snr_db, double bandwidth, double rate_min) {
    SystemParams s;
    s.p_s = db_to_linear(snr_db);
    s.p_r = s.p_s;
    s.noise = 1.0;
    s.bandwidth = bandwidth;
    s.rate_min = rate_min;
    return s;
}

}  // namespace ehcoop
