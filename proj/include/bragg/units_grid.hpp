/** \file units_grid.hpp
 * \brief Dimensionless units and momentum-space quadrature over one class.
 *
 * Momenta are measured in ħk, frequencies in the recoil frequency ω_k and
 * times as λ = ω_k t. The resonant momentum is p₀ = 0, so the laser detuning
 * is Δω/ω_k = 1 and the Doppler detuning is ν_k/ω_k = 2q̃. */
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "bragg/common.hpp"

namespace bragg {

struct UnitConvention {
    static constexpr double q_min = -0.5;   ///< lower edge of the class interval I
    static constexpr double q_max = 0.5;    ///< upper edge of I
    static constexpr double laser_detuning = 1.0;  ///< Δω/ω_k for p₀ = 0

    /// Doppler detuning ν_k/ω_k.
    static constexpr double doppler(double q) { return 2.0 * q; }
    /// Dimensionless detuning v = 2q̃/ε.
    static constexpr double detuning_v(double q, double eps) { return 2.0 * q / eps; }
};

/** Truncated Gaussian |φ₀(q̃)|² sampled on Gauss–Legendre nodes.
 *
 * The nodes cover [−b, b] with b = min(1/2, 12σ_q); the density beyond 12σ
 * is below 1e-31 and is dropped, which keeps narrow distributions resolved
 * at the default node count. The density is renormalized so that
 * Σ w_i ρ_i = 1. */
struct MomentumDistribution {
    double sigma_q = 0.0;
    double half_width = 0.5;        ///< b
    std::vector<double> nodes;      ///< q̃_i
    std::vector<double> weights;    ///< Gauss–Legendre weights w_i
    std::vector<double> density;    ///< |φ₀(q̃_i)|²

    std::size_t size() const { return nodes.size(); }
    /// Quadrature mass w_i |φ₀(q̃_i)|².
    double mass(std::size_t i) const { return weights[i] * density[i]; }
};

/// Plain Gauss–Legendre rule on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

/** \param sigma_q standard deviation in ħk, 0 < σ_q ≤ 0.25
 * \param n_nodes quadrature order, at least 32
 * \throws DomainError for σ_q out of range, ConfigError for n_nodes < 32 */
MomentumDistribution make_gaussian_mode(double sigma_q, int n_nodes = 200);

/** Σ_i w_i |φ₀(q̃_i)|² f(q̃_i).
 * \throws NumericError naming the node index if f is not finite there */
cplx integrate(const std::function<cplx(double)>& f, const MomentumDistribution& dist);

} // namespace bragg
