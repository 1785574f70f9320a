#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "ehcoop/params.hpp"

using namespace ehcoop;

namespace {

bool within_ulps(double a, double b, int n) {
    if (a == b) return true;
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return std::fabs(a - b) <= n * std::numeric_limits<double>::epsilon() * scale;
}

bool mentions(const std::invalid_argument& e, const char* field) {
    return std::string(e.what()).find(field) != std::string::npos;
}

}  // namespace

TEST_CASE("validate fills derived quantities") {
    SystemParams s{1.0, 1.0, 0.01, 2e6, 2e5};
    const ParamBundle b = validate(s, EnergyModel{});

    CHECK(b.rho_s == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(b.rho_r == doctest::Approx(100.0).epsilon(1e-12));
    // 2^0.1 - 1 and 2^0.2 - 1, mpmath reference values.
    CHECK(b.g1 == doctest::Approx(0.071773462536293164).epsilon(1e-14));
    CHECK(b.g2 == doctest::Approx(0.14869835499703501).epsilon(1e-14));
    CHECK(b.g2 > b.g1);
}

TEST_CASE("validate rejects out-of-range fields by name") {
    SystemParams good{1.0, 1.0, 0.01, 2e6, 2e5};

    SystemParams s = good;
    s.p_s = -1.0;
    CHECK_THROWS_WITH_AS(validate(s, EnergyModel{}),
                         doctest::Contains("p_s"), std::invalid_argument);

    s = good;
    s.p_r = 0.0;
    CHECK_THROWS_WITH_AS(validate(s, EnergyModel{}),
                         doctest::Contains("p_r"), std::invalid_argument);

    s = good;
    s.noise = -0.5;
    CHECK_THROWS_WITH_AS(validate(s, EnergyModel{}),
                         doctest::Contains("noise"), std::invalid_argument);

    s = good;
    s.bandwidth = 0.0;
    CHECK_THROWS_WITH_AS(validate(s, EnergyModel{}),
                         doctest::Contains("bandwidth"), std::invalid_argument);

    s = good;
    s.rate_min = -2e5;
    CHECK_THROWS_WITH_AS(validate(s, EnergyModel{}),
                         doctest::Contains("rate_min"), std::invalid_argument);

    s = good;
    s.noise = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate(s, EnergyModel{}), std::invalid_argument);
}

TEST_CASE("energy model ranges") {
    SystemParams s{1.0, 1.0, 0.01, 2e6, 2e5};

    // Both extremes are meaningful: constant supply and never-on relay.
    CHECK_NOTHROW(validate(s, EnergyModel{0.0, {}, {}}));
    CHECK_NOTHROW(validate(s, EnergyModel{1.0, {}, {}}));

    CHECK_THROWS_WITH_AS(validate(s, EnergyModel{-0.1, {}, {}}),
                         doctest::Contains("p_ex"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(validate(s, EnergyModel{1.5, {}, {}}),
                         doctest::Contains("p_ex"), std::invalid_argument);

    // Metadata is optional but must be positive when present.
    CHECK_NOTHROW(validate(s, EnergyModel{0.1, 0.25, 0.001}));
    CHECK_THROWS_WITH_AS(validate(s, EnergyModel{0.1, -0.25, {}}),
                         doctest::Contains("p_av"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(validate(s, EnergyModel{0.1, {}, 0.0}),
                         doctest::Contains("t_block"), std::invalid_argument);
}

TEST_CASE("validate is idempotent") {
    SystemParams s{2.5, 0.7, 0.003, 1e6, 3e5};
    const ParamBundle once = validate(s, EnergyModel{0.25, 0.4, 0.01});
    const ParamBundle twice = validate(once);

    CHECK(twice.rho_s == once.rho_s);
    CHECK(twice.rho_r == once.rho_r);
    CHECK(twice.g1 == once.g1);
    CHECK(twice.g2 == once.g2);
    CHECK(twice.system.p_s == once.system.p_s);
    CHECK(twice.energy.p_ex == once.energy.p_ex);
}

TEST_CASE("threshold identity g2 = g1 (g1 + 2) over random params") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> power(1e-3, 1e3);
    std::uniform_real_distribution<double> spectral(0.01, 4.0);

    for (int i = 0; i < 1000; ++i) {
        SystemParams s;
        s.p_s = power(gen);
        s.p_r = power(gen);
        s.noise = power(gen);
        s.bandwidth = 1e6;
        s.rate_min = spectral(gen) * s.bandwidth;
        const ParamBundle b = validate(s, EnergyModel{});
        CHECK(within_ulps(b.g2, b.g1 * (b.g1 + 2.0), 4));
        CHECK(b.g1 > 0.0);
        CHECK(b.g2 > b.g1);
        CHECK(b.rho_s > 0.0);
        CHECK(b.rho_r > 0.0);
    }
}

TEST_CASE("dB helpers") {
    CHECK(db_to_linear(20.0) == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(db_to_linear(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(linear_to_db(1000.0) == doctest::Approx(30.0).epsilon(1e-14));

    const ParamBundle b = validate(system_from_snr_db(20.0), EnergyModel{});
    CHECK(b.rho_s == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(b.rho_r == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(b.g1 == doctest::Approx(0.071773462536293164).epsilon(1e-14));
}
