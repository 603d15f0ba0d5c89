/** \file experiments.hpp
 * \brief Batch experiments driven by a RunConfig.
 *
 * | tag               | output                                             |
 * |-------------------|----------------------------------------------------|
 * | rabi-map          | class populations vs (τ, q̃), numeric backend       |
 * | fringe            | full/cropped signal vs φ, exit position densities   |
 * | sensitivity-sweep | OAT NΔφ² vs ε per backend                          |
 * | validate-pert     | perturbative vs numeric moduli and phases vs τ, ε  |
 * | pulse-shape       | box vs Blackman reflectivity and NΔφ² vs ε          |
 * | optimize          | inclination and twisting optima vs ε               |
 */
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "bragg/config.hpp"
#include "bragg/emit.hpp"

namespace bragg {

const std::vector<std::string>& experiment_tags();

/** Run one experiment. Warnings go to diag and into the record.
 * \throws ConfigError for an unknown tag or inconsistent settings */
ResultRecord run_experiment(const std::string& tag, const RunConfig& cfg, std::ostream& diag);

/// Sign changes of the discrete derivative of a sampled curve.
int derivative_sign_changes(const std::vector<double>& y);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace bragg
