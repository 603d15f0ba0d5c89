/** \file spin_states.hpp
 * \brief Pseudo-angular-momentum moments of coherent and one-axis-twisted
 * input states, plus a Dicke-basis oracle for small N.
 *
 * Convention: mode 1 is spin-up, S₃ = (n₁ − n₀)/2 and a₁†a₀ = S₁ + iS₂,
 * so all atoms in class 0 give ⟨S₃⟩ = −N/2. */
#pragma once

#include <Eigen/Dense>

#include "bragg/common.hpp"

namespace bragg {

struct SpinMoments {
    double N = 0.0;
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();  ///< ⟨S₁⟩, ⟨S₂⟩, ⟨S₃⟩
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();   ///< Cov[S_i, S_j]

    double var(int i) const { return cov(i, i); }
};

/** Product state with ⟨S⟩ = (N/2)(sinΘ cosΦ, −sinΘ sinΦ, cosΘ).
 * Θ = 0 puts every atom in mode 1.
 * \throws DomainError for Θ outside [0, π] or N < 1 */
SpinMoments css_moments(double Theta, double Phi, int N);

/** Twisting strength χ and rotation α about S₁ applied after the twist,
 * |ψ⟩ = e^{−iαS₁} e^{−iχS₃²} |CSS(π/2, 0)⟩. */
struct OatParams {
    double chi = 0.0;
    double alpha = 0.0;

    /// Inclination ϑ = α + α₀(χ) of the squeezed axis relative to the equator.
    double inclination(int N) const;
    /// State with its squeezed axis at inclination ϑ.
    static OatParams from_inclination(double chi, double theta, int N);
    /// Equator-aligned state, α = −α₀(χ).
    static OatParams equator(double chi, int N) { return from_inclination(chi, 0.0, N); }
};

/// A = 1 − cos^{N−2}(2χ).
double oat_A(double chi, int N);
/// B = 4 sinχ cos^{N−2}χ.
double oat_B(double chi, int N);
/// Natural inclination α₀ = ½ atan2(B, A).
double oat_alpha0(double chi, int N);

/** Closed-form OAT moments. ⟨S₂⟩ = ⟨S₃⟩ = 0 and S₁ is uncorrelated with S₂, S₃.
 * \throws DomainError for N < 2 */
SpinMoments oat_moments(const OatParams& p, int N);

/** ξ² = N ΔS₃²/⟨S₁⟩² of the equator-aligned OAT state.
 * \throws NumericError if ⟨S₁⟩ vanishes (over-twisted state) */
double squeezing_parameter(double chi, int N);

/** χ₀ minimizing ξ²; bracketed around 3^{1/6} N^{−2/3}.
 * \throws DomainError for N < 3, NumericError if the minimum hits the bracket */
double optimal_twisting(int N);

/// 3^{1/6} N^{−2/3}.
double twisting_estimate(int N);

/** Brute-force reference in the (N+1)-dimensional symmetric subspace,
 * basis index k = n₁. */
namespace dicke {

Eigen::VectorXcd css_state(double Theta, double Phi, int N);
Eigen::VectorXcd oat_state(const OatParams& p, int N);
/// Collective operators S₁, S₂, S₃ as dense matrices.
void spin_operators(int N, Eigen::MatrixXcd& S1, Eigen::MatrixXcd& S2, Eigen::MatrixXcd& S3);
SpinMoments moments(const Eigen::VectorXcd& psi, int N);

} // namespace dicke

} // namespace bragg
