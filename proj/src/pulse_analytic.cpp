#include "bragg/pulse_analytic.hpp"

#include <cmath>
#include <string>

#include "bragg/units_grid.hpp"

namespace bragg {

namespace {

void validate(const PulseParams& p)
{
    if (!(p.eps > 0.0)) throw DomainError("pulse: eps must be > 0, got " + std::to_string(p.eps));
    if (!(p.tau >= 0.0)) throw DomainError("pulse: tau must be >= 0, got " + std::to_string(p.tau));
}

void require_box(const PulseParams& p, const char* who)
{
    if (p.shape != PulseShape::box)
        throw DomainError(std::string(who) + ": closed forms exist for box pulses only");
}

// Rotation coefficients about the detuned axis for frequency multiplier Ω.
cplx t_of(double omega, double v, double f, double tau)
{
    const double a = 0.5 * omega * tau;
    return {std::cos(a), v / f * std::sin(a)};
}

cplx r_of(double omega, double f, double tau, double theta)
{
    const double a = 0.5 * omega * tau;
    return -I * std::polar(1.0, -theta) * (std::sin(a) / f);
}

} // namespace

double PulseParams::duration() const
{
    return shape == PulseShape::box ? tau / eps : tau / (blackman_a0 * eps);
}

double sinc(double x)
{
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

VsCoefficients vs_coefficients(double q, const PulseParams& p)
{
    validate(p);
    require_box(p, "vs_coefficients");
    const double v = UnitConvention::detuning_v(q, p.eps);
    const double f = std::sqrt(1.0 + v * v);
    const double phi = p.dynamic_phase();
    const double a = 0.5 * f * p.tau;
    const cplx t = std::polar(1.0, phi) * cplx(std::cos(a), v / f * std::sin(a));
    const cplx r = -I * std::polar(1.0, phi - p.theta) * (0.5 * p.tau * sinc(a));
    return {t, r};
}

Mat2 vs_matrix(double q, const PulseParams& p)
{
    const auto c = vs_coefficients(q, p);
    Mat2 g;
    g << c.t, c.r, -std::conj(c.r), std::conj(c.t);
    return g;
}

cplx gamma_d(double v, double eps, double tau)
{
    const double f = std::sqrt(1.0 + v * v);
    const cplx fast = std::polar(1.0, -(2.0 / eps + 1.5 * v) * tau);
    return -1.0 / 16.0 - I * (3.0 * v / (32.0 * f * f * f)) * std::sin(f * tau) +
           fast / 16.0 * cplx(std::cos(0.5 * f * tau), v / f * std::sin(0.5 * f * tau));
}

// Off-diagonal term in the form that reproduces the six-class evolution to
// third order in ε (sign of the sin² term and of 3v/2 in the fast phase).
cplx gamma_od(double v, double eps, double tau)
{
    const double f = std::sqrt(1.0 + v * v);
    const double s = std::sin(0.5 * f * tau);
    const cplx fast = std::polar(1.0, -(2.0 / eps - 1.5 * v) * tau);
    return -(3.0 * v / (16.0 * f * f)) * s * s + I * fast / (16.0 * f) * s +
           I * (3.0 * v * v / (32.0 * f * f * f)) * std::sin(f * tau);
}

AdjacentCouplings adjacent_couplings(double q, const PulseParams& p)
{
    validate(p);
    require_box(p, "adjacent_couplings");
    const double e = p.eps, tau = p.tau, th = p.theta;
    const double v = UnitConvention::detuning_v(q, e);
    const double f = std::sqrt(1.0 + v * v);
    const double w = (4.0 * f - e) * tau / 8.0;
    const cplx ph_up = std::polar(1.0, (2.0 / e + 1.5 * v + e / 4.0) * tau);
    const cplx ph_dn = std::polar(1.0, (2.0 / e - 1.5 * v + e / 8.0) * tau);
    const double sh = std::sin(0.5 * f * tau), ch = std::cos(0.5 * f * tau);

    const cplx g20 = e * std::polar(1.0, -2.0 * th) / 16.0 *
                     (e - ph_up * (e * ch - I * ((4.0 - 3.0 * e * v) / f) * sh));
    const cplx gm11 = e * std::polar(1.0, 2.0 * th) / 16.0 *
                      (e - ph_dn * (e * std::cos(w) - I * ((4.0 + 3.0 * v * e) / f) * std::sin(w)));
    const cplx g21 =
        e * std::polar(1.0, -th) / 16.0 *
        (ph_up * (I * (f * e / (f * (f + v))) * sh - (4.0 - 3.0 * v * e) / (f * (f + v)) * ch -
                  std::polar(1.0, -0.5 * f * tau) * v * (e + (4.0 - 3.0 * v * e) / f)) +
         4.0 - 2.0 * v * e);
    const cplx gm10 =
        e * std::polar(1.0, th) / 16.0 *
        (ph_dn * (I * (f * e / (f * (f + v))) * std::sin(w) -
                  (4.0 + 3.0 * v * e) / (f * (f + v)) * std::cos(w) +
                  std::polar(1.0, w) * v * (e - (4.0 + 3.0 * v * e) / f)) +
         4.0 + 2.0 * v * e);

    AdjacentCouplings a;
    a.g20 = std::abs(g20);
    a.g21 = std::abs(g21);
    a.gm10 = std::abs(gm10);
    a.gm11 = std::abs(gm11);
    // ω_m = 2 + (−1)^m 3εv/2 + ε²[2 − (−1)^m εv]/8 + m Δω/ω_k
    auto omega = [&](int m) {
        const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        return 2.0 + sgn * 1.5 * e * v + e * e * (2.0 - sgn * e * v) / 8.0 +
               m * UnitConvention::laser_detuning;
    };
    a.omega_m1 = omega(-1);
    a.omega_2 = omega(2);
    return a;
}

PulseTransfer pert_transfer(double q, const PulseParams& p)
{
    validate(p);
    require_box(p, "pert_transfer");
    PulseTransfer out;
    const double e = p.eps, tau = p.tau;
    out.v = UnitConvention::detuning_v(q, e);
    out.f = std::sqrt(1.0 + out.v * out.v);
    const double v = out.v, f = out.f;
    out.beta = (v / f) * (v / f) - 1.0 / (2.0 * f * f);
    out.phi_dyn = p.dynamic_phase();
    out.outside_validated_range = e > 0.5;

    // Composition of the bare rotation with the second-order frequency shift.
    const double shift = out.beta * f * e * e / 8.0;
    const cplx t1 = t_of(f, v, f, tau), t2 = t_of(shift, v, f, tau);
    const cplx r1 = r_of(f, f, tau, p.theta), r2 = r_of(shift, f, tau, p.theta);
    const cplx dyn = std::polar(1.0, out.phi_dyn);
    out.t = dyn * (t1 * t2 - r1 * std::conj(r2));
    out.r = dyn * (t1 * r2 + r1 * std::conj(t2));

    const double e2 = e * e;
    out.gamma(0, 0) = 1.0 + e2 * gamma_d(-v, e, tau);
    out.gamma(1, 1) = 1.0 + e2 * gamma_d(v, e, tau);
    out.gamma(1, 0) = std::polar(1.0, p.theta) * e2 * gamma_od(v, e, tau);
    out.gamma(0, 1) = std::polar(1.0, -p.theta) * e2 * gamma_od(-v, e, tau);

    Mat2 u;
    u << out.t, out.r, -std::conj(out.r), std::conj(out.t);
    out.G = u * out.gamma;
    out.adjacent = adjacent_couplings(q, p);
    return out;
}

} // namespace bragg
