#include "bragg/pulse_numeric.hpp"

#include <cmath>
#include <string>

#include "bragg/dop853.hpp"
#include "bragg/parallel.hpp"
#include "bragg/units_grid.hpp"

namespace bragg {

double EnvelopeSpec::duration() const
{
    return shape == PulseShape::box ? tau / eps : tau / (blackman_a0 * eps);
}

double EnvelopeSpec::value(double lambda) const
{
    if (shape == PulseShape::box) return eps;
    const double x = 2.0 * pi * lambda / duration();
    return eps * (blackman_a0 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x));
}

Eigen::MatrixXcd class_hamiltonian(double q, double coupling, double theta, const ClassRange& classes)
{
    const int n = classes.size();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    const cplx up = 0.5 * coupling * std::polar(1.0, theta);
    for (int i = 0; i < n; ++i) {
        h(i, i) = class_detuning(classes.n_min + i, q);
        if (i + 1 < n) {
            h(i + 1, i) = up;
            h(i, i + 1) = std::conj(up);
        }
    }
    return h;
}

namespace {

// Evolve the unit vectors of the classes [first, first + cols) through the pulse.
Eigen::MatrixXcd evolve_columns(double q, const EnvelopeSpec& env, double theta, const ClassRange& classes,
                                const RkOptions& rk, int first, int cols)
{
    if (!(env.eps > 0.0)) throw DomainError("evolve_pulse: eps must be > 0");
    if (!(env.tau >= 0.0)) throw DomainError("evolve_pulse: tau must be >= 0");
    if (!classes.contains(0) || !classes.contains(1))
        throw DomainError("evolve_pulse: class range must contain 0 and 1");
    if (rk.rtol > 1e-8) throw DomainError("evolve_pulse: rtol must be <= 1e-8");

    const int n = classes.size();
    const Eigen::MatrixXcd h0 = class_hamiltonian(q, 0.0, theta, classes);
    // Unit-coupling part; the detunings live in h0.
    const Eigen::MatrixXcd c = class_hamiltonian(0.0, 1.0, theta, classes) - class_hamiltonian(0.0, 0.0, theta, classes);

    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n * cols);
    Eigen::Map<Eigen::MatrixXcd> y0(y.data(), n, cols);
    for (int k = 0; k < cols; ++k) y0(first + k, k) = 1.0;
    if (env.tau == 0.0) return y0;

    Eigen::MatrixXcd h(n, n);
    auto rhs = [&](double lam, const Eigen::VectorXcd& u, Eigen::VectorXcd& du) {
        h = h0 + env.value(lam) * c;
        du.resize(u.size());
        Eigen::Map<Eigen::MatrixXcd>(du.data(), n, cols).noalias() =
            -I * h * Eigen::Map<const Eigen::MatrixXcd>(u.data(), n, cols);
    };
    Dop853Options opt;
    opt.rtol = rk.rtol;
    opt.atol = rk.atol;
    dop853_integrate(rhs, 0.0, env.duration(), y, opt);
    return Eigen::Map<Eigen::MatrixXcd>(y.data(), n, cols);
}

} // namespace

Eigen::MatrixXcd evolve_pulse(double q, const EnvelopeSpec& env, double theta, const ClassRange& classes,
                              const RkOptions& rk)
{
    return evolve_columns(q, env, theta, classes, rk, 0, classes.size());
}

Mat2 numeric_main_block(const Eigen::MatrixXcd& U, const EnvelopeSpec& env, const ClassRange& classes)
{
    const int i0 = classes.index(0);
    const double phi = 0.5 * env.duration() * UnitConvention::laser_detuning;
    Mat2 g = U.block<2, 2>(i0, i0);
    g.row(0) *= std::polar(1.0, phi);
    g.row(1) *= std::polar(1.0, -phi);
    return g;
}

Mat2 numeric_transfer(double q, const EnvelopeSpec& env, double theta, const ClassRange& classes,
                      const RkOptions& rk)
{
    // Only the main-class input columns are needed.
    const int i0 = classes.index(0);
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(classes.size(), classes.size());
    if (!classes.contains(0) || !classes.contains(1))
        throw DomainError("evolve_pulse: class range must contain 0 and 1");
    U.middleCols(i0, 2) = evolve_columns(q, env, theta, classes, rk, i0, 2);
    return numeric_main_block(U, env, classes);
}

std::vector<ReflectivityRow> reflectivity_profile(const EnvelopeSpec& env, double theta,
                                                  const std::vector<double>& q_grid, const ClassRange& classes,
                                                  const RkOptions& rk)
{
    for (double q : q_grid)
        if (q < UnitConvention::q_min || q > UnitConvention::q_max)
            throw DomainError("reflectivity_profile: grid point outside the class interval");
    std::vector<ReflectivityRow> rows(q_grid.size());
    parallel_for(q_grid.size(), [&](std::size_t i) {
        const Mat2 g = numeric_transfer(q_grid[i], env, theta, classes, rk);
        rows[i] = {q_grid[i], UnitConvention::detuning_v(q_grid[i], env.eps), std::norm(g(0, 1)),
                   std::norm(g(1, 0))};
    });
    return rows;
}

double reflectivity_fwhm_v(const std::vector<ReflectivityRow>& p)
{
    if (p.size() < 2) throw DomainError("reflectivity_fwhm_v: profile too short");
    const double half = 0.5 * p.front().Rt;
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (p[i].Rt < half) {
            const double s = (half - p[i - 1].Rt) / (p[i].Rt - p[i - 1].Rt);
            return 2.0 * (p[i - 1].v + s * (p[i].v - p[i - 1].v));
        }
    }
    throw NumericError("reflectivity_fwhm_v: half maximum not reached on the grid");
}

} // namespace bragg
