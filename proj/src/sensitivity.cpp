#include "bragg/sensitivity.hpp"

#include <cmath>

namespace bragg {

namespace {

UncertaintyResult finish(double num, double den, double N)
{
    if (!(den > 0.0) || !std::isfinite(den)) throw NumericError("uncertainty: vanishing phase slope at working point");
    if (!std::isfinite(num)) throw NumericError("uncertainty: non-finite variance");
    UncertaintyResult r;
    r.numerator = num;
    r.denominator = den;
    r.dphi2 = num / den;
    r.n_dphi2 = N * r.dphi2;
    r.sub_snl = r.n_dphi2 < 1.0;
    return r;
}

} // namespace

UncertaintyResult uncertainty_vs_only(const MomentumDistribution& dist, const SequenceParams& seq, Region region,
                                      double N, double phi)
{
    if (!(N >= 1.0)) throw DomainError("uncertainty_vs_only: N must be >= 1");
    const double s = std::sin(phi);
    if (std::abs(s) < 1e-12) throw DomainError("uncertainty_vs_only: singular working point (sin phi = 0)");
    const SignalResult sig = region == Region::full ? signal_full(dist, seq, phi) : signal_cropped(dist, seq, phi);
    const double mean = sig.offset - sig.amplitude * std::cos(phi);
    // ΔJ₃² = (N/4)[η − (O − 𝒥 cos φ)²], ∂φ⟨J₃⟩ = (N/2) 𝒥 sin φ.
    const double var = 0.25 * N * (sig.eta - mean * mean);
    const double slope = 0.5 * N * sig.amplitude * s;
    return finish(var, slope * slope, N);
}

UncertaintyResult uncertainty_general(const ScriptQuantities& s, const SpinMoments& m)
{
    const double N = m.N;
    const double re = s.A10.real(), im = s.A10.imag();
    const auto& c = m.cov;
    const double num = re * re * c(0, 0) + im * im * c(1, 1) + s.A0 * s.A0 * c(2, 2) - 2.0 * re * im * c(0, 1) +
                       2.0 * s.A0 * re * c(0, 2) - 2.0 * s.A0 * im * c(1, 2) + 0.25 * s.VM * N +
                       0.5 * s.R10.real() * m.mean(0);
    const double slope = s.A10p.real() * m.mean(0) - s.A10p.imag() * m.mean(1) - 0.5 * s.A0p * N;
    return finish(num, slope * slope, N);
}

UncertaintyResult uncertainty_oat(const ScriptQuantities& s, const OatParams& p, int N)
{
    const SpinMoments m = oat_moments(p, N);
    const double re = s.A10.real(), im = s.A10.imag();
    const double num = re * re * m.var(0) + im * im * m.var(1) + s.A0 * s.A0 * m.var(2) -
                       2.0 * s.A0 * im * m.cov(1, 2) + 0.25 * s.VM * N + 0.5 * s.R10.real() * m.mean(0);
    const double slope = s.A10p.real() * m.mean(0) - 0.5 * s.A0p * N;
    return finish(num, slope * slope, N);
}

} // namespace bragg
