#include "bragg/units_grid.hpp"

#include <cmath>
#include <memory>
#include <string>

#include <gsl/gsl_integration.h>

namespace bragg {

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w)
{
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)>
        table(gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n)),
              &gsl_integration_glfixed_table_free);
    if (!table) throw NumericError("gauss_legendre: table allocation failed");
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i)
        gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &x[i], &w[i], table.get());
}

MomentumDistribution make_gaussian_mode(double sigma_q, int n_nodes)
{
    if (!(sigma_q > 0.0) || sigma_q > 0.25)
        throw DomainError("make_gaussian_mode: sigma_q must lie in (0, 0.25], got " +
                          std::to_string(sigma_q));
    if (n_nodes < 32)
        throw ConfigError("make_gaussian_mode: n_nodes must be >= 32, got " +
                          std::to_string(n_nodes));

    MomentumDistribution d;
    d.sigma_q = sigma_q;
    d.half_width = std::min(UnitConvention::q_max, 12.0 * sigma_q);
    gauss_legendre(n_nodes, -d.half_width, d.half_width, d.nodes, d.weights);

    d.density.resize(d.nodes.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        const double z = d.nodes[i] / sigma_q;
        d.density[i] = std::exp(-0.5 * z * z);
        norm += d.weights[i] * d.density[i];
    }
    for (double& r : d.density) r /= norm;
    return d;
}

cplx integrate(const std::function<cplx(double)>& f, const MomentumDistribution& dist)
{
    cplx acc = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const cplx v = f(dist.nodes[i]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericError("integrate: non-finite integrand at node " + std::to_string(i) +
                               " (q = " + std::to_string(dist.nodes[i]) + ")");
        acc += dist.mass(i) * v;
    }
    return acc;
}

} // namespace bragg
