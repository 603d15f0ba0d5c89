/** \file pulse_numeric.hpp
 * \brief Runge–Kutta evolution of the truncated multi-class Bragg Hamiltonian.
 *
 * Ground truth for the closed forms and the only backend for shaped pulses. */
#pragma once

#include <vector>

#include "bragg/common.hpp"
#include "bragg/pulse_analytic.hpp"

namespace bragg {

/// Inclusive range of momentum classes, default −2..3 (six classes).
struct ClassRange {
    int n_min = -2;
    int n_max = 3;

    int size() const { return n_max - n_min + 1; }
    int index(int n) const { return n - n_min; }
    bool contains(int n) const { return n >= n_min && n <= n_max; }
};

/// Time-dependent coupling envelope ε_td(λ).
struct EnvelopeSpec {
    PulseShape shape = PulseShape::box;
    double eps = 0.1;   ///< peak ε
    double tau = pi;    ///< pulse area

    double duration() const;          ///< λ_j
    double value(double lambda) const;  ///< ε_td(λ)
};

struct RkOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
};

/// Detuning δ_n(q̃) = (2n − 1)q̃ + n(n − 1).
inline double class_detuning(int n, double q) { return (2.0 * n - 1.0) * q + n * (n - 1.0); }

/** Tridiagonal Hermitian H with H_{n+1,n} = (c/2) e^{iθ}, H_{n,n+1} = (c/2) e^{−iθ}. */
Eigen::MatrixXcd class_hamiltonian(double q, double coupling, double theta, const ClassRange& classes = {});

/** Full transfer matrix over the class range; column m is the evolved unit
 * vector of class n_min + m. Frame as in the Hamiltonian (no dynamical phase).
 * \throws DomainError for invalid envelope or classes not containing 0, 1
 * \throws NumericError on integrator failure */
Eigen::MatrixXcd evolve_pulse(double q, const EnvelopeSpec& env, double theta,
                              const ClassRange& classes = {}, const RkOptions& rk = {});

/** Main-class block with the dynamical phase diag(e^{iφ̃}, e^{−iφ̃}) applied,
 * φ̃ = λ_j/2; comparable to the closed forms up to a global phase. */
Mat2 numeric_main_block(const Eigen::MatrixXcd& U, const EnvelopeSpec& env, const ClassRange& classes = {});

/// Convenience: evolve and return the main-class block.
Mat2 numeric_transfer(double q, const EnvelopeSpec& env, double theta,
                      const ClassRange& classes = {}, const RkOptions& rk = {});

struct ReflectivityRow {
    double q = 0.0;
    double v = 0.0;
    double R = 0.0;    ///< |R|² (1 → 0)
    double Rt = 0.0;   ///< |R̃|² (0 → 1)
};

std::vector<ReflectivityRow> reflectivity_profile(const EnvelopeSpec& env, double theta,
                                                  const std::vector<double>& q_grid,
                                                  const ClassRange& classes = {}, const RkOptions& rk = {});

/** Full width at half maximum in v of |R̃|² from a profile sampled on q̃ ≥ 0
 * (symmetric extension), by linear interpolation at the half level. */
double reflectivity_fwhm_v(const std::vector<ReflectivityRow>& profile);

} // namespace bragg
