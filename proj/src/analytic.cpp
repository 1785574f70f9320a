#include "ehcoop/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "ehcoop/bessel.hpp"

namespace ehcoop {

namespace {

double clamp_unit(double p, bool* clamped) {
    if (p > 1.0) {
        if (clamped) *clamped = true;
        return 1.0;
    }
    if (p < 0.0) {
        if (clamped) *clamped = true;
        return 0.0;
    }
    return p;
}

}  // namespace

double direct_outage_exact(const ParamBundle& b) {
    return -std::expm1(-b.g1 / b.rho_s);
}

double direct_outage_approx(const ParamBundle& b, bool* clamped) {
    if (clamped) *clamped = false;
    return clamp_unit(b.g1 / b.rho_s, clamped);
}

double relay_snr(double g_sr, double g_rd, const ParamBundle& b) {
    const double x = g_sr * b.rho_s;
    const double y = g_rd * b.rho_r;
    return x * y / (x + y + 1.0);
}

double relay_cdf(double z, const ParamBundle& b) {
    if (!(z >= 0.0)) {
        throw std::domain_error("relay_cdf requires z >= 0");
    }
    if (z == 0.0) return 0.0;
    const double a = (1.0 / b.rho_s + 1.0 / b.rho_r) * z;
    const double b1 = 2.0 * std::sqrt(z * (z + 1.0) / (b.rho_s * b.rho_r));
    const double p = -std::expm1(-a) + std::exp(-a) * one_minus_x_bessel_k1(b1);
    return p < 1.0 ? p : 1.0;
}

double relay_outage_exact(const ParamBundle& b) {
    return relay_cdf(b.g2, b);
}

double relay_outage_approx(const ParamBundle& b, bool* clamped) {
    if (clamped) *clamped = false;
    return clamp_unit((1.0 / b.rho_s + 1.0 / b.rho_r) * b.g2, clamped);
}

double coop_outage_exact(const ParamBundle& b) {
    const double pex = b.energy.p_ex;
    return direct_outage_exact(b) * (pex + (1.0 - pex) * relay_outage_exact(b));
}

double coop_outage_closed_form(const ParamBundle& b, bool* clamped) {
    if (clamped) *clamped = false;
    const double pex = b.energy.p_ex;
    const double relay_term = (1.0 / b.rho_s + 1.0 / b.rho_r) * b.g2;
    return clamp_unit(b.g1 / b.rho_s * (pex + relay_term * (1.0 - pex)), clamped);
}

int diversity_predicted(const EnergyModel& energy) {
    return energy.p_ex == 0.0 ? 2 : 1;
}

double multiplicative_gain(const ParamBundle& b) {
    const double pex = b.energy.p_ex;
    return pex + (1.0 - pex) * (1.0 / b.rho_s + 1.0 / b.rho_r) * b.g2;
}

DiversityFit diversity_fit(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) {
        throw std::invalid_argument("diversity_fit requires at least 2 points");
    }
    const auto n = static_cast<double>(points.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [rho, p_out] : points) {
        if (!(rho > 0.0)) {
            throw std::invalid_argument("diversity_fit requires rho > 0");
        }
        if (!(p_out > 0.0 && p_out < 1.0)) {
            throw std::invalid_argument(
                "diversity_fit requires p_out strictly inside (0, 1)");
        }
        mean_x += std::log10(rho);
        mean_y += std::log10(p_out);
    }
    mean_x /= n;
    mean_y /= n;

    double s_xx = 0.0, s_xy = 0.0;
    for (const auto& [rho, p_out] : points) {
        const double dx = std::log10(rho) - mean_x;
        s_xx += dx * dx;
        s_xy += dx * (std::log10(p_out) - mean_y);
    }
    if (s_xx == 0.0) {
        throw std::invalid_argument("diversity_fit requires distinct rho values");
    }

    const double raw_slope = s_xy / s_xx;
    const double intercept = mean_y - raw_slope * mean_x;
    double ss_res = 0.0;
    for (const auto& [rho, p_out] : points) {
        const double r = std::log10(p_out) - (intercept + raw_slope * std::log10(rho));
        ss_res += r * r;
    }

    DiversityFit fit;
    fit.slope = -raw_slope;
    fit.intercept = intercept;
    fit.points_used = static_cast<int>(points.size());
    fit.residual_rms = std::sqrt(ss_res / n);
    return fit;
}

}  // namespace ehcoop
