/** \file common.hpp
 * \brief Shared scalar types, constants and error classes. */
#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bragg {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/** Invalid physical parameter (outside the documented domain). */
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/** Invalid user configuration. Maps to CLI exit code 2. */
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Numerical failure (non-finite values, integrator breakdown, failed
 * convergence checks). Maps to CLI exit code 3. */
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Phase imprint of a laser phase on the main-class block:
 * G(θ) = D G(0) D† with D = diag(1, e^{iθ}). Valid for every backend since
 * the class Hamiltonian transforms the same way. */
inline Mat2 rotate_laser_phase(const Mat2& g, double theta)
{
    Mat2 r = g;
    const cplx e = std::polar(1.0, theta);
    r(1, 0) *= e;
    r(0, 1) *= std::conj(e);
    return r;
}

} // namespace bragg
