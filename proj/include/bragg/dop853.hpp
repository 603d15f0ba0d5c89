/** \file dop853.hpp
 * \brief Adaptive eighth-order Dormand–Prince integrator for complex systems.
 *
 * Hairer–Wanner DOP853 with the combined 5th/3rd-order error estimator and
 * the standard step-size controller (no dense output, no stiffness test). */
#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace bragg {

struct Dop853Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_max = 0.0;              ///< 0: the full interval
    std::size_t max_steps = 10'000'000;
};

struct Dop853Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t evaluations = 0;
};

using ComplexRhs = std::function<void(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dydt)>;

/** Integrate y' = f(t, y) from t0 to t1 in place.
 * \throws NumericError on step-size underflow or step budget exhaustion,
 *         reporting the time reached */
Dop853Stats dop853_integrate(const ComplexRhs& f, double t0, double t1, Eigen::VectorXcd& y,
                             const Dop853Options& opt = {});

} // namespace bragg
