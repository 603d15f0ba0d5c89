/** \file mzi_core.hpp
 * \brief Mach–Zehnder transfer matrix, path decomposition, signals and
 * momentum-integrated script quantities.
 *
 * Sequence: M = G₂ U_free G₁ U_free G₀ with U_free = diag(e^{iΔφ/2}, e^{−iΔφ/2}),
 * Δφ = (2q̃ + 1)λ_T. The interferometer phase φ is scanned with the last
 * laser phase, θ₂ = φ − θ₀ + 2θ₁ − (λ₁ − λ₀), so that φ = 0 is the ideal
 * working point (A₀ = cos φ, A₁₀ = e^{iθ₀} sin φ in the ideal limit). */
#pragma once

#include <array>
#include <vector>

#include "bragg/common.hpp"
#include "bragg/pulse_analytic.hpp"
#include "bragg/pulse_numeric.hpp"
#include "bragg/units_grid.hpp"

namespace bragg {

enum class Backend { analytic_vs_only, perturbative, numeric };
enum class Region { full, cropped };

const char* to_string(Backend b);
const char* to_string(Region r);

struct SequenceParams {
    double eps = 0.1;
    std::array<double, 3> tau{pi / 2, pi, pi / 2};  ///< pulse areas
    double theta0 = 0.0;
    double theta1 = 0.0;
    double lambda_T = 0.0;  ///< ω_k T; 0 selects the default 10³/ε
    PulseShape shape = PulseShape::box;
    Backend backend = Backend::perturbative;
    ClassRange classes{};
    RkOptions rk{};

    double interrogation() const { return lambda_T > 0.0 ? lambda_T : 1e3 / eps; }
    double duration(int j) const;
    /// θ₂ realizing the interferometer phase φ.
    double theta2(double phi) const;
    void validate() const;
};

/// Laser-phase-free pulse blocks G_j(θ = 0) for one momentum node.
struct PulseBlocks {
    std::array<Mat2, 3> G;
};

PulseBlocks pulse_blocks(double q, const SequenceParams& seq);

/** Interferometer matrix with path amplitudes for input class 0.
 * Paths are indexed by the classes (c₀, c₁) occupied after pulses 0 and 1:
 * p1 = (0,0), p2 = (0,1), p3 = (1,0), p4 = (1,1). */
struct MziTransfer {
    Mat2 M;
    std::array<std::array<cplx, 4>, 2> paths{};   ///< [exit i][path]
    static constexpr std::array<int, 4> displacement{0, 1, 1, 2};  ///< in units of δz
    bool cropped = false;

    /// Exit population with cross terms between displaced paths dropped.
    double population(int exit, Region region) const;
};

MziTransfer assemble_mzi(const PulseBlocks& blocks, double q, const SequenceParams& seq, double phi, bool crop);
MziTransfer mzi_transfer(double q, const SequenceParams& seq, double phi, bool crop);

/// Momentum-averaged signal ⟨J₃⟩/N = (O − 𝒥 cos φ)/2 with detected fraction η.
struct SignalResult {
    double signal = 0.0;     ///< ⟨J₃⟩/N at φ
    double offset = 0.0;     ///< O
    double amplitude = 0.0;  ///< 𝒥
    double eta = 0.0;        ///< detected fraction
};

/** Closed-form integrands for box pulses (π/2, π, π/2) without adjacent
 * classes: (O_H, 𝒥, O_Σ, η_Σ) as functions of v. */
struct VsClosedForm {
    double offset_full, amplitude, offset_cropped, eta_cropped;
};
VsClosedForm vs_closed_form(double v);

/** Signal built from non-overlapping path populations on any backend. */
SignalResult signal_paths(const MomentumDistribution& dist, const SequenceParams& seq, Region region, double phi);

/** Full-exit signal. The VS-only backend with default pulses uses the closed
 * integrands; every other configuration is built from path populations. */
SignalResult signal_full(const MomentumDistribution& dist, const SequenceParams& seq, double phi = 0.0);
SignalResult signal_cropped(const MomentumDistribution& dist, const SequenceParams& seq, double phi = 0.0);

struct ScriptQuantities {
    double A0 = 1.0;
    cplx A10 = 0.0;
    double A0p = 0.0;   ///< ∂φ A₀
    cplx A10p = 1.0;    ///< ∂φ A₁₀
    double R0 = 1.0;
    cplx R10 = 0.0;
    double VM = 0.0;    ///< R₀ − A₀² − |A₁₀|²
    double A1 = 1.0;    ///< |M₁₁|² − |M₀₁|², diagnostic
    double A1p = 0.0;
    double R1 = 1.0;
    double eta = 1.0;   ///< detected fraction for class-0 input (= R₀)

    double phi10() const { return std::arg(A10); }
    double phi10p() const { return std::arg(A10p); }
    /// Delta-pulse interferometer at φ = 0 = θ₀.
    static ScriptQuantities ideal();
};

struct ScriptOptions {
    double fd_step = 1e-5;
    double richardson_tol = 1e-8;
};

/** Integrate the six script integrands (cropped M, φ = 0) over the
 * distribution. Derivatives by central differences in θ₂, checked against
 * half the step.
 * \throws NumericError if the two derivative estimates disagree */
ScriptQuantities script_quantities(const MomentumDistribution& dist, const SequenceParams& seq,
                                   const ScriptOptions& opt = {});

/** |ψ_i(z̃, φ)|² per unit z̃, z̃ = z/δz with the p1 cluster at 0.
 * \param n_q uniform momentum samples for the Fourier integral (0: automatic)
 * \throws ConfigError if the grid spacing does not resolve the wave packets */
std::vector<double> position_distribution(const MomentumDistribution& dist, const SequenceParams& seq, int exit,
                                          const std::vector<double>& z_grid, double phi, bool crop = false,
                                          int n_q = 0);

} // namespace bragg
