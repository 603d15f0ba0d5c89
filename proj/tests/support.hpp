// Shared oracles for the unit tests.
#pragma once

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "bragg/pulse_numeric.hpp"
#include "bragg/units_grid.hpp"

namespace oracle {

/// Box pulse by matrix exponential of the constant class Hamiltonian.
inline Eigen::MatrixXcd box_expm(double q, double eps, double tau, double theta = 0.0,
                                 const bragg::ClassRange& classes = {})
{
    const Eigen::MatrixXcd h = bragg::class_hamiltonian(q, eps, theta, classes);
    const Eigen::MatrixXcd a = (-bragg::I * (tau / eps)) * h;
    return a.exp();
}

/// Main-class block of box_expm with the dynamical phase applied.
inline bragg::Mat2 box_expm_block(double q, double eps, double tau, double theta = 0.0)
{
    return bragg::numeric_main_block(box_expm(q, eps, tau, theta), {bragg::PulseShape::box, eps, tau});
}

/// Elementwise distance of two 2×2 blocks after removing the best-fit global phase.
inline double phase_free_distance(const bragg::Mat2& a, const bragg::Mat2& b)
{
    const bragg::cplx overlap = (a.conjugate().cwiseProduct(b)).sum();
    const bragg::cplx ph = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : bragg::cplx(1.0);
    return (a * ph - b).cwiseAbs().maxCoeff();
}

inline std::mt19937_64& rng()
{
    static std::mt19937_64 g(20240611ULL);
    return g;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

/// Discrete momentum distribution with the given nodes and masses.
inline bragg::MomentumDistribution discrete(const std::vector<double>& q, const std::vector<double>& mass)
{
    bragg::MomentumDistribution d;
    d.sigma_q = 0.01;
    d.nodes = q;
    d.weights.assign(q.size(), 1.0);
    d.density = mass;
    return d;
}

} // namespace oracle
