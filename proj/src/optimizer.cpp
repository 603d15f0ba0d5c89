#include "bragg/optimizer.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/tools/minima.hpp>

namespace bragg {

namespace {

/** Brent on [lo, hi]; a coarse probe decides whether the interval looks
 * unimodal, otherwise the dense pre-scan picks the sub-bracket. */
OptResult minimize(const std::function<double(double)>& f, double lo, double hi, double ref_x, const OptOptions& opt)
{
    OptResult r;
    r.lo = lo;
    r.hi = hi;

    auto local_minima = [&](int n, std::vector<double>& xs, std::vector<double>& ys) {
        xs.resize(n);
        ys.resize(n);
        for (int k = 0; k < n; ++k) {
            xs[k] = lo + (hi - lo) * k / (n - 1);
            ys[k] = f(xs[k]);
        }
        int count = 0;
        for (int k = 0; k < n; ++k) {
            const bool left = k == 0 || ys[k] < ys[k - 1];
            const bool right = k == n - 1 || ys[k] <= ys[k + 1];
            if (left && right) ++count;
        }
        return count;
    };

    std::vector<double> xs, ys;
    if (local_minima(opt.probe, xs, ys) > 1) {
        r.degraded = true;
        local_minima(opt.prescan, xs, ys);
    }
    // Refine inside the two sample cells around the best sample.
    std::size_t best = 0;
    for (std::size_t k = 1; k < ys.size(); ++k)
        if (ys[k] < ys[best]) best = k;
    const double a = xs[best == 0 ? 0 : best - 1];
    const double b = xs[best + 1 == xs.size() ? best : best + 1];

    std::uintmax_t it = opt.max_iter;
    const auto m = boost::math::tools::brent_find_minima(f, a, b, opt.bits, it);
    r.iterations = static_cast<int>(it);
    r.converged = it < static_cast<std::uintmax_t>(opt.max_iter);
    r.param = m.first;
    r.n_dphi2 = m.second;
    for (std::size_t k = 0; k < xs.size(); ++k)
        if (ys[k] < r.n_dphi2) {
            r.param = xs[k];
            r.n_dphi2 = ys[k];
        }

    // Plateau tie-break and monotone improvement over the reference design.
    const double fref = f(ref_x);
    if (fref <= r.n_dphi2 * (1.0 + opt.value_rtol)) {
        r.param = ref_x;
        r.n_dphi2 = std::min(fref, r.n_dphi2);
    }
    return r;
}

} // namespace

OptResult optimize_inclination(const ScriptQuantities& s, int N, double chi, const OptOptions& opt)
{
    auto f = [&](double th) { return uncertainty_oat(s, OatParams::from_inclination(chi, th, N), N).n_dphi2; };
    OptResult r = minimize(f, -0.2, 0.2, 0.0, opt);
    r.reference = f(0.0);
    return r;
}

OptResult optimize_twisting(const ScriptQuantities& s, int N, double chi0, const OptOptions& opt)
{
    if (!(chi0 > 0.0)) throw DomainError("optimize_twisting: chi0 must be > 0");
    const double alpha = -oat_alpha0(chi0, N);
    auto f = [&](double chi) { return uncertainty_oat(s, {chi, alpha}, N).n_dphi2; };
    OptResult r = minimize(f, 1e-3 * chi0, 4.0 * chi0, chi0, opt);
    r.reference = f(chi0);
    return r;
}

OptResult optimize_inclination(const MomentumDistribution& dist, const SequenceParams& seq, int N,
                               const OptOptions& opt)
{
    return optimize_inclination(script_quantities(dist, seq), N, optimal_twisting(N), opt);
}

OptResult optimize_twisting(const MomentumDistribution& dist, const SequenceParams& seq, int N,
                            const OptOptions& opt)
{
    return optimize_twisting(script_quantities(dist, seq), N, optimal_twisting(N), opt);
}

} // namespace bragg
