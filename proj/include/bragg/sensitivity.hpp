/** \file sensitivity.hpp
 * \brief Phase uncertainty by Gaussian error propagation. */
#pragma once

#include "bragg/mzi_core.hpp"
#include "bragg/spin_states.hpp"
#include "bragg/units_grid.hpp"

namespace bragg {

struct UncertaintyResult {
    double dphi2 = 0.0;        ///< Δφ²
    double n_dphi2 = 0.0;      ///< NΔφ², shot-noise units
    double numerator = 0.0;    ///< ΔJ₃²
    double denominator = 0.0;  ///< (∂φ⟨J₃⟩)²
    bool sub_snl = false;      ///< NΔφ² < 1
};

/** Δφ² = (1/N)[η − (O − 𝒥 cos φ)²]/(𝒥² sin²φ) for a Fock/CSS input in
 * class 0, with (O, 𝒥, η) from the full or cropped signal.
 * \throws DomainError if sin φ = 0 or N < 1 */
UncertaintyResult uncertainty_vs_only(const MomentumDistribution& dist, const SequenceParams& seq, Region region,
                                      double N, double phi);

/** General formula at φ = 0 = θ₀ from script quantities and input moments.
 * \throws NumericError if the slope vanishes */
UncertaintyResult uncertainty_general(const ScriptQuantities& s, const SpinMoments& m);

/** Specialization of uncertainty_general to OAT moments
 * (⟨S₂⟩ = ⟨S₃⟩ = 0, S₁ uncorrelated). */
UncertaintyResult uncertainty_oat(const ScriptQuantities& s, const OatParams& p, int N);

} // namespace bragg
