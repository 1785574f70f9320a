#pragma once

#include <span>
#include <utility>

#include "ehcoop/params.hpp"

namespace ehcoop {

// Closed-form outage expressions for the relay-aided network over
// Rayleigh fading. All functions are pure; bundles come from validate().
// The *_approx / closed-form variants are high-SNR approximations and
// clamp to [0, 1]; pass `clamped` to learn when the clamp fired.

// P[direct rate < rate_min] = 1 - exp(-g1/rho_s), cancellation-safe.
double direct_outage_exact(const ParamBundle& b);

// High-SNR form g1/rho_s.
double direct_outage_approx(const ParamBundle& b, bool* clamped = nullptr);

// Effective end-to-end SNR of the amplify-and-forward two-hop link:
// f = x y / (x + y + 1) with x = g_sr rho_s, y = g_rd rho_r.
// Bounded above by min(x, y); f(0, y) = 0.
double relay_snr(double g_sr, double g_rd, const ParamBundle& b);

// CDF of relay_snr over the fading ensemble:
//   P[f < z] = 1 - e^{-(1/rho_s + 1/rho_r) z} * b1 * K1(b1),
//   b1 = sqrt(4 z (z+1) / (rho_s rho_r)).
// Evaluated as -expm1(-a) + e^{-a} (1 - b1 K1(b1)) so the high-SNR
// regime (both factors -> 1) keeps full precision.
double relay_cdf(double z, const ParamBundle& b);

// Outage of the two-hop link given the relay has energy: relay_cdf at
// the doubled-rate threshold g2.
double relay_outage_exact(const ParamBundle& b);

// High-SNR form (1/rho_s + 1/rho_r) g2.
double relay_outage_approx(const ParamBundle& b, bool* clamped = nullptr);

// Overall protocol outage: direct fails AND (energy exhausted OR the
// relay link fails too).
double coop_outage_exact(const ParamBundle& b);

// Closed-form high-SNR outage:
//   (g1/rho_s) [ p_ex + (1/rho_s + 1/rho_r) g2 (1 - p_ex) ].
// With rho_s = rho_r = rho this is g1 p_ex / rho + 2 g1 g2 (1-p_ex) / rho^2.
double coop_outage_closed_form(const ParamBundle& b, bool* clamped = nullptr);

// Asymptotic log-log slope of the outage curve: 2 only when the relay
// never runs out of energy, else 1.
int diversity_predicted(const EnergyModel& energy);

// Ratio of cooperative to direct outage in the high-SNR forms:
// p_ex + (1 - p_ex)(1/rho_s + 1/rho_r) g2. Tends to p_ex.
double multiplicative_gain(const ParamBundle& b);

// Least-squares estimate of the diversity order from finite-SNR points.
struct DiversityFit {
    double slope = 0.0;      // negated log10(p)-vs-log10(rho) slope
    double intercept = 0.0;
    int points_used = 0;
    double residual_rms = 0.0;
};

// Fits log10(p_out) against log10(rho) by ordinary least squares over
// (rho, p_out) points. Requires >= 2 points with distinct rho, rho > 0
// and p_out strictly inside (0, 1); throws std::invalid_argument.
DiversityFit diversity_fit(std::span<const std::pair<double, double>> points);

}  // namespace ehcoop
