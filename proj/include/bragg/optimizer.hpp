/** \file optimizer.hpp
 * \brief Bounded 1-D optimization of the OAT input state at a fixed
 * interferometer: squeezing-ellipse inclination or twisting strength. */
#pragma once

#include "bragg/mzi_core.hpp"
#include "bragg/sensitivity.hpp"

namespace bragg {

struct OptResult {
    double param = 0.0;      ///< ϑ* (rad) or χ*
    double n_dphi2 = 0.0;    ///< NΔφ² at the optimum
    double reference = 0.0;  ///< NΔφ² of the equator-aligned state at χ₀
    int iterations = 0;
    double lo = 0.0, hi = 0.0;  ///< search interval
    bool converged = false;
    bool degraded = false;   ///< dense pre-scan used (bracket not unimodal)
};

struct OptOptions {
    int prescan = 201;         ///< dense pre-scan points in degraded mode
    int probe = 21;            ///< unimodality probe points
    int bits = 24;             ///< Brent tolerance 2^{1−bits} (relative), ~1e-7
    int max_iter = 200;
    double value_rtol = 1e-12; ///< plateau tie-breaking tolerance
};

/** Minimize NΔφ² over the inclination ϑ ∈ [−0.2, 0.2] at fixed χ. */
OptResult optimize_inclination(const ScriptQuantities& s, int N, double chi, const OptOptions& opt = {});

/** Minimize NΔφ² over χ ∈ (0, 4χ₀] with α held at −α₀(χ₀). */
OptResult optimize_twisting(const ScriptQuantities& s, int N, double chi0, const OptOptions& opt = {});

/// Convenience overloads computing the script quantities first; χ₀ = optimal_twisting(N).
OptResult optimize_inclination(const MomentumDistribution& dist, const SequenceParams& seq, int N,
                               const OptOptions& opt = {});
OptResult optimize_twisting(const MomentumDistribution& dist, const SequenceParams& seq, int N,
                            const OptOptions& opt = {});

} // namespace bragg
