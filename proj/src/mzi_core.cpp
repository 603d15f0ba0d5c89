#include "bragg/mzi_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bragg/parallel.hpp"

namespace bragg {

const char* to_string(Backend b)
{
    switch (b) {
    case Backend::analytic_vs_only: return "analytic_vs_only";
    case Backend::perturbative: return "perturbative";
    case Backend::numeric: return "numeric";
    }
    return "?";
}

const char* to_string(Region r) { return r == Region::full ? "full" : "cropped"; }

double SequenceParams::duration(int j) const
{
    return shape == PulseShape::box ? tau[j] / eps : tau[j] / (blackman_a0 * eps);
}

double SequenceParams::theta2(double phi) const
{
    return phi - theta0 + 2.0 * theta1 - (duration(1) - duration(0)) * UnitConvention::laser_detuning;
}

void SequenceParams::validate() const
{
    if (!(eps > 0.0)) throw DomainError("sequence: eps must be > 0");
    for (double t : tau)
        if (!(t >= 0.0)) throw DomainError("sequence: pulse areas must be >= 0");
    if (!(interrogation() > 0.0)) throw DomainError("sequence: lambda_T must be > 0");
    if (shape == PulseShape::blackman && backend != Backend::numeric)
        throw DomainError("sequence: Blackman pulses require the numeric backend");
}

PulseBlocks pulse_blocks(double q, const SequenceParams& seq)
{
    PulseBlocks b;
    for (int j = 0; j < 3; ++j) {
        if (j == 2 && seq.tau[2] == seq.tau[0]) {
            b.G[2] = b.G[0];
            break;
        }
        switch (seq.backend) {
        case Backend::analytic_vs_only:
            b.G[j] = vs_matrix(q, {seq.eps, seq.tau[j], 0.0, seq.shape});
            break;
        case Backend::perturbative:
            b.G[j] = pert_transfer(q, {seq.eps, seq.tau[j], 0.0, seq.shape}).G;
            break;
        case Backend::numeric:
            b.G[j] = numeric_transfer(q, {seq.shape, seq.eps, seq.tau[j]}, 0.0, seq.classes, seq.rk);
            break;
        }
    }
    return b;
}

double MziTransfer::population(int exit, Region region) const
{
    const auto& p = paths[exit];
    const double centre = std::norm(p[1] + p[2]);
    if (region == Region::cropped) return centre;
    return std::norm(p[0]) + centre + std::norm(p[3]);
}

MziTransfer assemble_mzi(const PulseBlocks& blocks, double q, const SequenceParams& seq, double phi, bool crop)
{
    const Mat2 g0 = rotate_laser_phase(blocks.G[0], seq.theta0);
    Mat2 g1 = rotate_laser_phase(blocks.G[1], seq.theta1);
    const Mat2 g2 = rotate_laser_phase(blocks.G[2], seq.theta2(phi));
    if (crop) {
        g1(0, 0) = 0.0;
        g1(1, 1) = 0.0;
    }
    const double dphi = (UnitConvention::doppler(q) + UnitConvention::laser_detuning) * seq.interrogation();
    const std::array<cplx, 2> u{std::polar(1.0, 0.5 * dphi), std::polar(1.0, -0.5 * dphi)};

    MziTransfer m;
    m.cropped = crop;
    const Mat2 ud = Eigen::Vector2cd(u[0], u[1]).asDiagonal();
    m.M = g2 * ud * g1 * ud * g0;
    for (int i = 0; i < 2; ++i)
        for (int c0 = 0; c0 < 2; ++c0)
            for (int c1 = 0; c1 < 2; ++c1)
                m.paths[i][2 * c0 + c1] = g2(i, c1) * u[c1] * g1(c1, c0) * u[c0] * g0(c0, 0);
    return m;
}

MziTransfer mzi_transfer(double q, const SequenceParams& seq, double phi, bool crop)
{
    seq.validate();
    return assemble_mzi(pulse_blocks(q, seq), q, seq, phi, crop);
}

VsClosedForm vs_closed_form(double v)
{
    const double f = std::sqrt(1.0 + v * v);
    const double f2 = f * f, f6 = f2 * f2 * f2;
    const double ch = std::cos(0.5 * pi * f), sh = std::sin(0.5 * pi * f);
    const double sq = std::sin(0.25 * pi * f), cq = std::cos(0.25 * pi * f);
    const double lead = (v * v + ch) * (v * v + ch);
    VsClosedForm c;
    c.offset_full = -lead * (v * v + std::cos(pi * f)) / f6;
    // sec²(πf/4) sin⁴(πf/2) rewritten as 16 sin⁴(πf/4) cos²(πf/4) to stay finite at f = 2.
    c.amplitude = (sh * sh * sh * sh + 16.0 * v * v * sq * sq * sq * sq * cq * cq) / f6;
    c.offset_cropped = lead * sh * sh / f6;
    c.eta_cropped = sh * sh / f2;
    return c;
}

namespace {

bool closed_form_applies(const SequenceParams& s)
{
    return s.backend == Backend::analytic_vs_only && s.shape == PulseShape::box && s.tau[0] == pi / 2 &&
           s.tau[1] == pi && s.tau[2] == pi / 2 && s.theta0 == 0.0 && s.theta1 == 0.0;
}

std::vector<PulseBlocks> node_blocks(const MomentumDistribution& dist, const SequenceParams& seq)
{
    std::vector<PulseBlocks> blocks(dist.size());
    parallel_for(dist.size(), [&](std::size_t i) { blocks[i] = pulse_blocks(dist.nodes[i], seq); });
    return blocks;
}

} // namespace

SignalResult signal_paths(const MomentumDistribution& dist, const SequenceParams& seq, Region region, double phi)
{
    seq.validate();
    const auto blocks = node_blocks(dist, seq);
    const bool crop = region == Region::cropped;
    double d_phi = 0.0, d_0 = 0.0, d_pi = 0.0, eta = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double q = dist.nodes[i], w = dist.mass(i);
        auto diff = [&](double ph, double* detected) {
            const MziTransfer m = assemble_mzi(blocks[i], q, seq, ph, crop);
            const double p0 = m.population(0, region), p1 = m.population(1, region);
            if (detected) *detected = p0 + p1;
            return p1 - p0;
        };
        double det = 0.0;
        d_phi += w * diff(phi, &det);
        eta += w * det;
        d_0 += w * diff(0.0, nullptr);
        d_pi += w * diff(pi, nullptr);
    }
    SignalResult r;
    r.signal = 0.5 * d_phi;
    r.offset = 0.5 * (d_0 + d_pi);
    r.amplitude = 0.5 * (d_pi - d_0);
    r.eta = eta;
    return r;
}

namespace {

SignalResult signal_closed(const MomentumDistribution& dist, const SequenceParams& seq, Region region, double phi)
{
    double o = 0.0, j = 0.0, eta = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const auto c = vs_closed_form(UnitConvention::detuning_v(dist.nodes[i], seq.eps));
        const double w = dist.mass(i);
        o += w * (region == Region::full ? c.offset_full : c.offset_cropped);
        j += w * c.amplitude;
        eta += w * (region == Region::full ? 1.0 : c.eta_cropped);
    }
    return {0.5 * (o - j * std::cos(phi)), o, j, eta};
}

} // namespace

SignalResult signal_full(const MomentumDistribution& dist, const SequenceParams& seq, double phi)
{
    seq.validate();
    if (closed_form_applies(seq)) return signal_closed(dist, seq, Region::full, phi);
    return signal_paths(dist, seq, Region::full, phi);
}

SignalResult signal_cropped(const MomentumDistribution& dist, const SequenceParams& seq, double phi)
{
    seq.validate();
    if (closed_form_applies(seq)) return signal_closed(dist, seq, Region::cropped, phi);
    return signal_paths(dist, seq, Region::cropped, phi);
}

ScriptQuantities ScriptQuantities::ideal()
{
    return ScriptQuantities{};
}

namespace {

// A₀, A₁₀, R₀, R₁₀, A₁, R₁ of one matrix.
using Integrands = std::array<cplx, 6>;

Integrands integrands(const Mat2& m)
{
    const double n00 = std::norm(m(0, 0)), n10 = std::norm(m(1, 0));
    const double n01 = std::norm(m(0, 1)), n11 = std::norm(m(1, 1));
    const cplx a = std::conj(m(1, 1)) * m(1, 0);
    const cplx b = std::conj(m(0, 1)) * m(0, 0);
    return {n00 - n10, a - b, n00 + n10, a + b, n11 - n01, n01 + n11};
}

} // namespace

ScriptQuantities script_quantities(const MomentumDistribution& dist, const SequenceParams& seq,
                                   const ScriptOptions& opt)
{
    seq.validate();
    const double h = opt.fd_step;
    struct Node {
        Integrands val, d_h, d_h2;
    };
    std::vector<Node> nodes(dist.size());
    parallel_for(dist.size(), [&](std::size_t i) {
        const double q = dist.nodes[i];
        const PulseBlocks b = pulse_blocks(q, seq);
        auto at = [&](double ph) { return integrands(assemble_mzi(b, q, seq, ph, true).M); };
        const Integrands c = at(0.0), p1 = at(h), m1 = at(-h), p2 = at(0.5 * h), m2 = at(-0.5 * h);
        Node& n = nodes[i];
        n.val = c;
        for (int k = 0; k < 6; ++k) {
            n.d_h[k] = (p1[k] - m1[k]) / (2.0 * h);
            n.d_h2[k] = (p2[k] - m2[k]) / h;
        }
    });

    Integrands val{}, d_h{}, d_h2{};
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double w = dist.mass(i);
        for (int k = 0; k < 6; ++k) {
            val[k] += w * nodes[i].val[k];
            d_h[k] += w * nodes[i].d_h[k];
            d_h2[k] += w * nodes[i].d_h2[k];
        }
    }
    for (int k : {0, 1, 4}) {
        const double mismatch = std::abs(d_h[k] - d_h2[k]);
        if (!(mismatch <= opt.richardson_tol * std::max(1.0, std::abs(d_h2[k]))))
            throw NumericError("script_quantities: finite-difference derivative not converged (mismatch " +
                               std::to_string(mismatch) + ")");
    }

    ScriptQuantities s;
    s.A0 = val[0].real();
    s.A10 = val[1];
    s.R0 = val[2].real();
    s.R10 = val[3];
    s.A1 = val[4].real();
    s.R1 = val[5].real();
    s.A0p = d_h[0].real();
    s.A10p = d_h[1];
    s.A1p = d_h[4].real();
    s.VM = s.R0 - s.A0 * s.A0 - std::norm(s.A10);
    s.eta = s.R0;
    return s;
}

std::vector<double> position_distribution(const MomentumDistribution& dist, const SequenceParams& seq, int exit,
                                          const std::vector<double>& z_grid, double phi, bool crop, int n_q)
{
    seq.validate();
    if (exit != 0 && exit != 1) throw DomainError("position_distribution: exit must be 0 or 1");
    const double lam = seq.interrogation();
    const double sigma = dist.sigma_q, b = dist.half_width;

    // Packet width in z̃ is 1/(4λ_T σ_q); require the grid to resolve it.
    const double width = 1.0 / (4.0 * lam * sigma);
    for (std::size_t k = 1; k < z_grid.size(); ++k)
        if (z_grid[k] - z_grid[k - 1] > width)
            throw ConfigError("position_distribution: z grid spacing " +
                              std::to_string(z_grid[k] - z_grid[k - 1]) + " exceeds packet width " +
                              std::to_string(width));

    // Uniform momentum grid whose alias period (2π/dq) exceeds two cluster spacings.
    if (n_q <= 0) n_q = std::max(1024, static_cast<int>(std::ceil(2.0 * b * lam / pi * 1.25)) + 1);
    const double dq = 2.0 * b / (n_q - 1);
    if (dq > pi / lam) throw ConfigError("position_distribution: n_q too small for lambda_T");
    std::vector<double> qs(n_q), amp(n_q);
    double norm = 0.0;
    for (int k = 0; k < n_q; ++k) {
        qs[k] = -b + k * dq;
        const double w = (k == 0 || k == n_q - 1) ? 0.5 * dq : dq;
        const double rho = std::exp(-0.5 * qs[k] * qs[k] / (sigma * sigma));
        amp[k] = rho;
        norm += w * rho;
    }
    // Cluster amplitudes with the q-dependent Doppler factor removed.
    std::vector<std::array<cplx, 3>> cl(n_q);
    parallel_for(static_cast<std::size_t>(n_q), [&](std::size_t k) {
        const double q = qs[k];
        const MziTransfer m = assemble_mzi(pulse_blocks(q, seq), q, seq, phi, crop);
        const double w = (k == 0 || k + 1 == static_cast<std::size_t>(n_q)) ? 0.5 * dq : dq;
        const double a = w * std::sqrt(amp[k] / norm) / std::sqrt(2.0 * pi);
        const cplx doppler = std::polar(1.0, 2.0 * q * lam);
        cl[k] = {a * m.paths[exit][0] / doppler, a * (m.paths[exit][1] + m.paths[exit][2]),
                 a * m.paths[exit][3] * doppler};
    });

    std::vector<double> out(z_grid.size());
    parallel_for(z_grid.size(), [&](std::size_t iz) {
        const double x = 2.0 * lam * (z_grid[iz] - 1.0);
        cplx psi = 0.0;
        for (int g = 0; g < 3; ++g) {
            const double dx = x - 2.0 * lam * (g - 1);
            if (std::abs(dx) >= lam) continue;
            for (int k = 0; k < n_q; ++k) psi += cl[k][g] * std::polar(1.0, qs[k] * dx);
        }
        out[iz] = std::norm(psi) * 2.0 * lam;
    });
    return out;
}

} // namespace bragg
