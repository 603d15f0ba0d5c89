#include <doctest.h>

#include <cmath>

#include <gsl/gsl_integration.h>

#include "bragg/mzi_core.hpp"
#include "support.hpp"

using namespace bragg;

namespace {

SequenceParams vs_seq(double eps)
{
    SequenceParams s;
    s.eps = eps;
    s.backend = Backend::analytic_vs_only;
    return s;
}

// P₁ − P₀ of the non-overlapping paths at one node.
double population_difference(double q, const SequenceParams& s, double phi, Region r)
{
    const MziTransfer m = mzi_transfer(q, s, phi, false);
    return m.population(1, r) - m.population(0, r);
}

// ∫ ρ g over [−b, b] by adaptive quadrature, normalized on the same interval.
double adaptive_average(double sigma, double b, double (*g)(double, void*), void* params)
{
    struct Ctx {
        double sigma;
        double (*g)(double, void*);
        void* params;
        bool weighted;
    };
    auto fn = [](double q, void* p) {
        const Ctx* c = static_cast<Ctx*>(p);
        const double rho = std::exp(-0.5 * q * q / (c->sigma * c->sigma));
        return c->weighted ? rho * c->g(q, c->params) : rho;
    };
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4000);
    double num = 0, den = 0, err = 0;
    Ctx cn{sigma, g, params, true}, cd{sigma, g, params, false};
    gsl_function fnum{fn, &cn}, fden{fn, &cd};
    gsl_integration_qag(&fnum, -b, b, 1e-14, 1e-12, 4000, GSL_INTEG_GAUSS61, ws, &num, &err);
    gsl_integration_qag(&fden, -b, b, 1e-14, 1e-12, 4000, GSL_INTEG_GAUSS61, ws, &den, &err);
    gsl_integration_workspace_free(ws);
    return num / den;
}

// Offset and amplitude integrands in their original trigonometric form.
double offset_full_integrand(double q, void* eps)
{
    const double v = 2.0 * q / *static_cast<double*>(eps), f = std::sqrt(1.0 + v * v);
    const double a = v * v + std::cos(pi * f / 2.0);
    return -a * a * (v * v + std::cos(pi * f)) / std::pow(f, 6);
}

double amplitude_integrand(double q, void* eps)
{
    const double v = 2.0 * q / *static_cast<double*>(eps), f = std::sqrt(1.0 + v * v);
    const double sec = 1.0 / std::cos(pi * f / 4.0);
    return (1.0 + v * v * sec * sec) * std::pow(std::sin(pi * f / 2.0), 4) / std::pow(f, 6);
}

} // namespace

TEST_SUITE("mzi_core")
{
    TEST_CASE("ideal interferometer at resonance")
    {
        for (int k = 0; k < 20; ++k) {
            SequenceParams s = vs_seq(oracle::uniform(0.02, 1.0));
            s.theta0 = oracle::uniform(-pi, pi);
            s.theta1 = oracle::uniform(-pi, pi);
            const double phi = oracle::uniform(-pi, pi);
            const Mat2 m = mzi_transfer(0.0, s, phi, false).M;
            const double a0 = std::norm(m(0, 0)) - std::norm(m(1, 0));
            const cplx a10 = std::conj(m(1, 1)) * m(1, 0) - std::conj(m(0, 1)) * m(0, 0);
            INFO("eps = " << s.eps << ", theta0 = " << s.theta0 << ", theta1 = " << s.theta1);
            CHECK(a0 == doctest::Approx(std::cos(phi)).epsilon(1e-12));
            CHECK(std::abs(a10 - std::polar(std::sin(phi), s.theta0)) < 1e-12);
            // Lossless and v = 0: M is unitary.
            CHECK((m.adjoint() * m - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }

    TEST_CASE("path decomposition reproduces M")
    {
        SequenceParams s;
        s.eps = 0.17;
        s.theta0 = 0.3;
        s.theta1 = -0.8;
        for (double q : {-0.04, 0.0, 0.013})
            for (bool crop : {false, true}) {
                const MziTransfer m = mzi_transfer(q, s, 0.4, crop);
                for (int i = 0; i < 2; ++i) {
                    cplx sum = 0.0;
                    for (cplx p : m.paths[i]) sum += p;
                    CHECK(std::abs(sum - m.M(i, 0)) < 1e-14);
                }
                if (crop) {
                    CHECK(std::abs(m.paths[0][0]) == 0.0);
                    CHECK(std::abs(m.paths[1][3]) == 0.0);
                }
            }
    }

    TEST_CASE("cropping keeps the mirror reflectivity")
    {
        for (double q : {0.0, 0.03, -0.07}) {
            const SequenceParams s = vs_seq(0.1);
            const Mat2 m = mzi_transfer(q, s, 0.0, true).M;
            const double v = UnitConvention::detuning_v(q, 0.1);
            CHECK(std::norm(m(0, 0)) + std::norm(m(1, 0)) ==
                  doctest::Approx(vs_closed_form(v).eta_cropped).epsilon(1e-12));
        }
    }

    TEST_CASE("crop identity node by node")
    {
        SequenceParams s;
        s.eps = 0.2;
        for (double q : {-0.02, 0.0, 0.011})
            for (double phi : {0.0, 1.1, pi}) {
                const MziTransfer a = mzi_transfer(q, s, phi, false);
                const MziTransfer b = mzi_transfer(q, s, phi, true);
                for (int i = 0; i < 2; ++i)
                    CHECK(a.population(i, Region::cropped) == doctest::Approx(b.population(i, Region::full)).epsilon(1e-13));
            }
    }

    TEST_CASE("closed-form integrands match path populations")
    {
        for (double eps : {0.05, 0.1, 0.13, 0.4})
            for (double q : {-0.09, -0.01, 0.0, 0.004, 0.05}) {
                const SequenceParams s = vs_seq(eps);
                const auto c = vs_closed_form(UnitConvention::detuning_v(q, eps));
                const double d0 = population_difference(q, s, 0.0, Region::full);
                const double dpi = population_difference(q, s, pi, Region::full);
                const double c0 = population_difference(q, s, 0.0, Region::cropped);
                const double cpi = population_difference(q, s, pi, Region::cropped);
                INFO("eps = " << eps << ", q = " << q);
                CHECK(std::abs(0.5 * (d0 + dpi) - c.offset_full) < 1e-12);
                CHECK(std::abs(0.5 * (dpi - d0) - c.amplitude) < 1e-12);
                CHECK(std::abs(0.5 * (c0 + cpi) - c.offset_cropped) < 1e-12);
                CHECK(std::abs(0.5 * (cpi - c0) - c.amplitude) < 1e-12);
                const MziTransfer m = mzi_transfer(q, s, 0.7, false);
                CHECK(m.population(0, Region::cropped) + m.population(1, Region::cropped) ==
                      doctest::Approx(c.eta_cropped).epsilon(1e-12));
            }
    }

    TEST_CASE("closed forms without velocity selectivity")
    {
        const auto c = vs_closed_form(0.0);
        CHECK(std::abs(c.offset_full) < 1e-15);
        CHECK(c.amplitude == doctest::Approx(1.0));
        CHECK(std::abs(c.offset_cropped) < 1e-15);
        CHECK(c.eta_cropped == doctest::Approx(1.0));
        // f = 2: the secant form is 0/0, the product form stays finite.
        const auto s = vs_closed_form(std::sqrt(3.0));
        CHECK(std::isfinite(s.amplitude));
        CHECK(s.amplitude == doctest::Approx(0.0).epsilon(1e-12));
    }

    TEST_CASE("full and cropped signals against independent quadrature")
    {
        double eps = 0.1;
        const auto d = make_gaussian_mode(0.05);
        const SequenceParams s = vs_seq(eps);
        const SignalResult f = signal_full(d, s, 0.0);
        const SignalResult c = signal_cropped(d, s, 0.0);
        CHECK(f.offset == doctest::Approx(adaptive_average(0.05, 0.5, offset_full_integrand, &eps)).epsilon(1e-8));
        CHECK(f.amplitude == doctest::Approx(adaptive_average(0.05, 0.5, amplitude_integrand, &eps)).epsilon(1e-8));
        CHECK(f.offset < 0.0);
        CHECK(c.offset >= 0.0);
        CHECK(std::abs(c.offset) < std::abs(f.offset));
        CHECK(f.eta == doctest::Approx(1.0));
        CHECK(c.eta < 1.0);
        CHECK(f.amplitude == doctest::Approx(c.amplitude));
        // Path-based evaluation on the same nodes agrees with the closed integrands.
        const SignalResult fp = signal_paths(d, s, Region::full, 0.7);
        const SignalResult cp = signal_paths(d, s, Region::cropped, 0.7);
        CHECK(fp.signal == doctest::Approx(signal_full(d, s, 0.7).signal).epsilon(1e-12));
        CHECK(cp.signal == doctest::Approx(signal_cropped(d, s, 0.7).signal).epsilon(1e-12));
        CHECK(cp.eta == doctest::Approx(c.eta).epsilon(1e-12));
    }

    TEST_CASE("signals are 2 pi periodic")
    {
        const auto d = make_gaussian_mode(0.01, 64);
        SequenceParams s;
        s.eps = 0.2;
        for (double phi : {0.3, 2.0}) {
            CHECK(std::abs(signal_full(d, s, phi).signal - signal_full(d, s, phi + 2.0 * pi).signal) < 1e-12);
            CHECK(std::abs(signal_cropped(d, s, phi).signal - signal_cropped(d, s, phi + 2.0 * pi).signal) < 1e-12);
        }
    }

    TEST_CASE("perturbative and numeric interferometers agree")
    {
        SequenceParams p;
        p.eps = 0.1;
        SequenceParams n = p;
        n.backend = Backend::numeric;
        for (double phi : {0.0, 1.0}) {
            const Mat2 a = mzi_transfer(0.05, p, phi, false).M;
            const Mat2 b = mzi_transfer(0.05, n, phi, false).M;
            CHECK(oracle::phase_free_distance(a, b) < 1e-3);
        }
    }

    TEST_CASE("script quantities in the ideal limit")
    {
        // σ_q ≪ ε: every atom sees resonant pulses.
        const auto d = make_gaussian_mode(1e-7, 64);
        const ScriptQuantities s = script_quantities(d, vs_seq(0.1));
        const ScriptQuantities ideal = ScriptQuantities::ideal();
        CHECK(s.A0 == doctest::Approx(ideal.A0).epsilon(1e-9));
        CHECK(std::abs(s.A10) < 1e-6);
        CHECK(std::abs(s.VM) < 1e-9);
        CHECK(std::abs(s.R10) < 1e-9);
        CHECK(std::abs(s.A10p - ideal.A10p) < 1e-8);
        CHECK(std::abs(s.A0p) < 1e-8);
    }

    TEST_CASE("finite differences match the analytic derivative")
    {
        const auto d = make_gaussian_mode(0.005, 96);
        for (Backend b : {Backend::analytic_vs_only, Backend::perturbative}) {
            SequenceParams s;
            s.eps = 0.27;
            s.backend = b;
            double a0p = 0.0;
            cplx a10p = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) {
                const double q = d.nodes[i];
                const PulseBlocks blk = pulse_blocks(q, s);
                const Mat2 m = assemble_mzi(blk, q, s, 0.0, true).M;
                // ∂θ₂ G₂(θ₂) = i [G₂(1,0) e^{iθ₂}, −G₂(0,1) e^{−iθ₂}] off the diagonal.
                PulseBlocks dblk = blk;
                Mat2 g2 = rotate_laser_phase(blk.G[2], s.theta2(0.0));
                Mat2 dg2 = Mat2::Zero();
                dg2(1, 0) = I * g2(1, 0);
                dg2(0, 1) = -I * g2(0, 1);
                const Mat2 rest = g2.inverse() * m;
                const Mat2 dm = dg2 * rest;
                a0p += d.mass(i) * 2.0 *
                       (std::conj(m(0, 0)) * dm(0, 0) - std::conj(m(1, 0)) * dm(1, 0)).real();
                a10p += d.mass(i) * (std::conj(dm(1, 1)) * m(1, 0) + std::conj(m(1, 1)) * dm(1, 0) -
                                     std::conj(dm(0, 1)) * m(0, 0) - std::conj(m(0, 1)) * dm(0, 0));
            }
            const ScriptQuantities sq = script_quantities(d, s);
            INFO("backend " << to_string(b));
            CHECK(std::abs(sq.A0p - a0p) < 1e-8);
            CHECK(std::abs(sq.A10p - a10p) < 1e-8);
        }
    }

    TEST_CASE("script quantity properties")
    {
        const auto d = make_gaussian_mode(0.005);
        SequenceParams s;
        s.eps = 0.1;
        const ScriptQuantities q = script_quantities(d, s);
        CHECK(q.VM > 0.0);
        CHECK(q.R0 <= 1.0);
        CHECK(q.R0 >= 0.0);
        CHECK(std::abs(q.A0) <= q.R0);
        CHECK(q.VM == doctest::Approx(q.R0 - q.A0 * q.A0 - std::norm(q.A10)));
        CHECK(q.eta == q.R0);
        for (double eps : {0.05, 0.2, 0.3})
            for (double sigma : {0.005, 0.05}) {
                SequenceParams t;
                t.eps = eps;
                const ScriptQuantities r = script_quantities(make_gaussian_mode(sigma), t);
                INFO("eps = " << eps << ", sigma = " << sigma << ", |A10| = " << std::abs(r.A10));
                CHECK(std::abs(r.A10) <= 0.1);
            }
    }

    TEST_CASE("velocity-selective degradation as epsilon shrinks")
    {
        const auto d = make_gaussian_mode(0.005);
        double last = 1.0;
        for (double eps : {0.04, 0.02, 0.01, 0.005}) {
            const double a0 = script_quantities(d, vs_seq(eps)).A0;
            CHECK(a0 < last);
            last = a0;
        }
        CHECK(last < 0.7);
    }

    TEST_CASE("quadrature convergence of script quantities")
    {
        for (auto [sigma, eps] : {std::pair{0.005, 0.02}, std::pair{0.05, 0.1}, std::pair{0.005, 0.3}}) {
            SequenceParams s;
            s.eps = eps;
            const auto a = script_quantities(make_gaussian_mode(sigma, 200), s);
            const auto b = script_quantities(make_gaussian_mode(sigma, 400), s);
            INFO("sigma = " << sigma << ", eps = " << eps);
            CHECK(std::abs(a.A0 - b.A0) <= 1e-9 * std::abs(b.A0));
            CHECK(std::abs(a.VM - b.VM) <= 1e-9 * std::max(1e-3, std::abs(b.VM)));
            CHECK(std::abs(a.A10 - b.A10) <= 1e-9);
        }
    }

    TEST_CASE("derivative consistency failure is reported")
    {
        const auto d = make_gaussian_mode(0.005, 64);
        SequenceParams s;
        s.eps = 0.1;
        CHECK_THROWS_AS(script_quantities(d, s, {0.3, 1e-8}), NumericError);
    }

    TEST_CASE("position distribution")
    {
        const auto d = make_gaussian_mode(0.05);
        SequenceParams s = vs_seq(0.1);
        s.lambda_T = 200.0;
        std::vector<double> z;
        const int nz = 6001;
        for (int i = 0; i < nz; ++i) z.push_back(-0.5 + 3.0 * i / (nz - 1));
        const double dz = 3.0 / (nz - 1);

        auto total = [&](double phi) {
            const auto p0 = position_distribution(d, s, 0, z, phi);
            const auto p1 = position_distribution(d, s, 1, z, phi);
            double sum = 0.0;
            for (int i = 0; i < nz; ++i) sum += (p0[i] + p1[i]) * ((i == 0 || i == nz - 1) ? 0.5 * dz : dz);
            return std::pair{sum, p0};
        };
        for (double phi : {0.0, 1.2}) {
            double momentum = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) {
                const MziTransfer m = mzi_transfer(d.nodes[i], s, phi, false);
                momentum += d.mass(i) * (m.population(0, Region::full) + m.population(1, Region::full));
            }
            CHECK(total(phi).first == doctest::Approx(momentum).epsilon(1e-6));
        }

        // Only the central cluster moves with φ.
        const auto a = total(0.0).second, b = total(pi / 2).second;
        double outer = 0.0, centre = 0.0;
        for (int i = 0; i < nz; ++i) {
            const double diff = std::abs(a[i] - b[i]);
            if (z[i] < 0.5 || z[i] > 1.5)
                outer = std::max(outer, diff);
            else
                centre = std::max(centre, diff);
        }
        CHECK(outer < 1e-10);
        CHECK(centre > 1e-2);

        // The transmitted outer cluster has a hole at its centre from the velocity-selective mirror.
        int peaks = 0;
        for (int i = 1; i + 1 < nz; ++i)
            if (z[i] < 0.5 && a[i] > a[i - 1] && a[i] >= a[i + 1] && a[i] > 1e-3) ++peaks;
        CHECK(peaks >= 2);

        // Grid far too coarse for the packet width.
        const std::vector<double> coarse{-0.5, 0.5, 1.5, 2.5};
        CHECK_THROWS_AS(position_distribution(d, s, 0, coarse, 0.0), ConfigError);
    }

    TEST_CASE("sequence validation")
    {
        SequenceParams s;
        s.eps = 0.0;
        CHECK_THROWS_AS(s.validate(), DomainError);
        s.eps = 0.1;
        s.shape = PulseShape::blackman;
        CHECK_THROWS_AS(s.validate(), DomainError);
        s.backend = Backend::numeric;
        CHECK_NOTHROW(s.validate());
        CHECK(s.interrogation() == doctest::Approx(1e4));
    }
}
