/** \file pulse_analytic.hpp
 * \brief Closed-form first-order Bragg pulse transfer matrices.
 *
 * Main-class blocks use the layout G = (T R; R̃ T̃): column = input class
 * (0, 1), row = output class (0, 1). R̃ = G(1,0) is the reflection 0 → 1. */
#pragma once

#include "bragg/common.hpp"

namespace bragg {

enum class PulseShape { box, blackman };

/// Blackman leading coefficient a₀.
inline constexpr double blackman_a0 = 0.42;

struct PulseParams {
    double eps = 0.1;     ///< ε = Ω₀/ω_k (peak value for shaped pulses)
    double tau = pi;      ///< pulse area
    double theta = 0.0;   ///< laser phase at pulse start
    PulseShape shape = PulseShape::box;

    /// Duration λ_j: τ/ε (box) or τ/(a₀ε) (Blackman).
    double duration() const;
    /// Dynamical phase φ̃ = (Δω/ω_k) λ_j / 2.
    double dynamic_phase() const { return 0.5 * duration(); }
};

/** Adjacent-class couplings. Only moduli are exposed: the truncated
 * perturbation theory does not describe their phases. */
struct AdjacentCouplings {
    double g20 = 0.0;    ///< |γ₂₀|, class 0 → 2
    double g21 = 0.0;    ///< |γ₂₁|, class 1 → 2
    double gm10 = 0.0;   ///< |γ₋₁₀|, class 0 → −1
    double gm11 = 0.0;   ///< |γ₋₁₁|, class 1 → −1
    double omega_m1 = 0.0;  ///< ω₋₁
    double omega_2 = 0.0;   ///< ω₂
};

struct PulseTransfer {
    Mat2 G;               ///< (T R; R̃ T̃)
    cplx t, r;            ///< unitary part t̃, r̃
    Mat2 gamma;           ///< loss block γ_ij
    AdjacentCouplings adjacent;
    double v = 0.0, f = 1.0, beta = 0.0;
    double phi_dyn = 0.0; ///< φ̃
    bool outside_validated_range = false;  ///< ε > 0.5

    cplx T() const { return G(0, 0); }
    cplx R() const { return G(0, 1); }
    cplx Rt() const { return G(1, 0); }
    cplx Tt() const { return G(1, 1); }
};

struct VsCoefficients {
    cplx t, r;
};

/// sin x / x with a series branch near zero.
double sinc(double x);

/** Velocity-selective two-level coefficients (no adjacent classes).
 * t̃ = e^{iφ̃}[cos(fτ/2) + i(v/f) sin(fτ/2)], r̃ = −i e^{i(φ̃−θ)} (τ/2) sinc(fτ/2). */
VsCoefficients vs_coefficients(double q, const PulseParams& p);

/// Unitary block (t̃ r̃; −r̃* t̃*) of the velocity-selective pulse.
Mat2 vs_matrix(double q, const PulseParams& p);

/** Second-order perturbative transfer with loss to the classes −1 and 2.
 * Box pulses only; fast ε-dependent frequencies are kept unexpanded.
 * Equal to the six-class evolution up to a global phase. */
PulseTransfer pert_transfer(double q, const PulseParams& p);

/// Diagonal loss term γ_d(v, τ).
cplx gamma_d(double v, double eps, double tau);
/// Off-diagonal loss term γ_od(v, τ).
cplx gamma_od(double v, double eps, double tau);

AdjacentCouplings adjacent_couplings(double q, const PulseParams& p);

} // namespace bragg
