#include "bragg/experiments.hpp"

#include <cmath>
#include <sstream>

#include "bragg/optimizer.hpp"
#include "bragg/parallel.hpp"
#include "bragg/pulse_numeric.hpp"
#include "bragg/sensitivity.hpp"

namespace bragg {

const std::vector<std::string>& experiment_tags()
{
    static const std::vector<std::string> tags = {"rabi-map",    "fringe",      "sensitivity-sweep",
                                                  "validate-pert", "pulse-shape", "optimize"};
    return tags;
}

int derivative_sign_changes(const std::vector<double>& y)
{
    int changes = 0, last = 0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        const double d = y[i] - y[i - 1];
        const int s = (d > 0.0) - (d < 0.0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw DomainError("loglog_slope: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) throw NumericError("loglog_slope: non-positive sample");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

struct Context {
    const RunConfig& cfg;
    std::ostream& diag;
    ResultRecord& rec;

    void warn(const std::string& w)
    {
        for (const auto& existing : rec.warnings)
            if (existing == w) return;
        diag << "warning: " << w << "\n";
        rec.warnings.push_back(w);
    }

    MomentumDistribution dist() const
    {
        return make_gaussian_mode(cfg.real("physics.sigma_q"), cfg.integer("numerics.nodes"));
    }

    SequenceParams seq(double eps, Backend backend, PulseShape shape)
    {
        SequenceParams s;
        s.eps = eps;
        s.lambda_T = cfg.real("physics.lambda_T");
        s.shape = shape;
        s.backend = backend;
        s.classes = cfg.classes();
        s.rk = cfg.rk();
        if (shape == PulseShape::blackman && backend != Backend::numeric)
            throw ConfigError("key 'physics.shape': blackman pulses need the numeric backend");
        if (backend == Backend::perturbative && eps > 0.5)
            warn("perturbative backend used outside its validated range eps <= 0.5");
        // Packets of width 1/(4 λ_T σ_q) in units of the path separation.
        if (s.interrogation() * cfg.real("physics.sigma_q") < 3.0)
            warn("exit wave packets overlap (lambda_T * sigma_q < 3); non-overlap signals are approximate");
        return s;
    }

    int N() const { return cfg.integer("physics.N"); }

    double chi() const
    {
        const std::string& c = cfg.text("physics.chi");
        return c == "auto" ? optimal_twisting(N()) : std::stod(c);
    }

    OatParams oat() const
    {
        const double x = chi();
        const std::string& a = cfg.text("physics.alpha");
        return a == "equator" ? OatParams::equator(x, N()) : OatParams{x, std::stod(a)};
    }

    ScriptOptions script_options() const { return {cfg.real("numerics.fd_step"), 1e-8}; }
};

const char* short_name(Backend b)
{
    switch (b) {
    case Backend::analytic_vs_only: return "vs";
    case Backend::perturbative: return "pert";
    case Backend::numeric: return "num";
    }
    return "?";
}

std::vector<double> linspace(double a, double b, int n)
{
    return LinearGrid{a, b, n}.values();
}

// Class populations versus pulse area and momentum (input class 0).
void rabi_map(Context& c)
{
    const RunConfig& cfg = c.cfg;
    const double eps = cfg.real("physics.eps");
    const ClassRange classes = cfg.classes();
    const RkOptions rk = cfg.rk();
    const auto taus = linspace(0.0, cfg.real("grid.tau_max"), cfg.integer("grid.tau_count"));
    const auto qs = linspace(UnitConvention::q_min, UnitConvention::q_max, cfg.integer("grid.q_count"));
    const MomentumDistribution dist = c.dist();
    const int nc = classes.size();
    const int i0 = classes.index(0);

    auto populations = [&](double q, double tau) {
        const Eigen::MatrixXcd U = evolve_pulse(q, {PulseShape::box, eps, tau}, 0.0, classes, rk);
        return Eigen::VectorXd(U.col(i0).cwiseAbs2());
    };

    Table map{"map", {"tau", "q", "v"}, {}};
    Table avg{"averaged", {"tau"}, {}};
    for (int n = classes.n_min; n <= classes.n_max; ++n) {
        map.columns.push_back("P" + std::to_string(n));
        avg.columns.push_back("P" + std::to_string(n));
    }
    map.columns.push_back("norm_deviation");
    avg.columns.push_back("norm_deviation");

    std::vector<Eigen::VectorXd> grid(taus.size() * qs.size());
    parallel_for(grid.size(), [&](std::size_t k) { grid[k] = populations(qs[k % qs.size()], taus[k / qs.size()]); });
    std::vector<Eigen::VectorXd> nodes(taus.size() * dist.size());
    parallel_for(nodes.size(), [&](std::size_t k) {
        nodes[k] = populations(dist.nodes[k % dist.size()], taus[k / dist.size()]);
    });

    double worst = 0.0;
    for (std::size_t it = 0; it < taus.size(); ++it) {
        for (std::size_t iq = 0; iq < qs.size(); ++iq) {
            const Eigen::VectorXd& p = grid[it * qs.size() + iq];
            std::vector<Cell> row{taus[it], qs[iq], UnitConvention::detuning_v(qs[iq], eps)};
            for (int n = 0; n < nc; ++n) row.emplace_back(p[n]);
            const double dev = std::abs(p.sum() - 1.0);
            worst = std::max(worst, dev);
            row.emplace_back(dev);
            map.add(std::move(row));
        }
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(nc);
        for (std::size_t i = 0; i < dist.size(); ++i) mean += dist.mass(i) * nodes[it * dist.size() + i];
        std::vector<Cell> row{taus[it]};
        for (int n = 0; n < nc; ++n) row.emplace_back(mean[n]);
        row.emplace_back(std::abs(mean.sum() - 1.0));
        avg.add(std::move(row));
    }
    c.rec.tables = {std::move(map), std::move(avg)};
    c.rec.scalars = {{"max_norm_deviation", worst}};
}

// Full and cropped fringes with the VS-only style uncertainty, and exit densities.
void fringe(Context& c)
{
    const RunConfig& cfg = c.cfg;
    const double eps = cfg.real("physics.eps");
    const MomentumDistribution dist = c.dist();
    const SequenceParams seq = c.seq(eps, cfg.backend(), cfg.shape());
    const double N = c.N();

    Table t{"fringe",
            {"phi", "signal_full", "signal_cropped", "n_dphi2_full", "n_dphi2_cropped", "eta_full", "eta_cropped"},
            {}};
    for (double phi : linspace(0.0, 2.0 * pi, cfg.integer("grid.phi_count"))) {
        const SignalResult f = signal_full(dist, seq, phi);
        const SignalResult s = signal_cropped(dist, seq, phi);
        std::vector<Cell> row{phi, f.signal, s.signal};
        if (std::abs(std::sin(phi)) < 1e-9) {
            row.emplace_back(std::string());
            row.emplace_back(std::string());
        } else {
            row.emplace_back(uncertainty_vs_only(dist, seq, Region::full, N, phi).n_dphi2);
            row.emplace_back(uncertainty_vs_only(dist, seq, Region::cropped, N, phi).n_dphi2);
        }
        row.emplace_back(f.eta);
        row.emplace_back(s.eta);
        t.add(std::move(row));
    }

    const double phi_w = cfg.real("physics.phi");
    const SignalResult f0 = signal_full(dist, seq, phi_w);
    const SignalResult s0 = signal_cropped(dist, seq, phi_w);
    c.rec.scalars = {{"offset_full", f0.offset},         {"offset_cropped", s0.offset},
                     {"amplitude_full", f0.amplitude},   {"amplitude_cropped", s0.amplitude},
                     {"eta_full", f0.eta},               {"eta_cropped", s0.eta}};
    if (std::abs(std::sin(phi_w)) > 1e-9) {
        c.rec.scalars.emplace_back("n_dphi2_full", uncertainty_vs_only(dist, seq, Region::full, N, phi_w).n_dphi2);
        c.rec.scalars.emplace_back("n_dphi2_cropped",
                                   uncertainty_vs_only(dist, seq, Region::cropped, N, phi_w).n_dphi2);
    }

    const auto z = linspace(-0.5, 2.5, cfg.integer("grid.z_count"));
    const int nq = cfg.integer("numerics.n_q");
    Table pos{"position", {"z", "exit0_phi0", "exit1_phi0", "exit0_phi_half_pi", "exit1_phi_half_pi"}, {}};
    std::vector<std::vector<double>> cols;
    for (double phi : {0.0, pi / 2})
        for (int exit : {0, 1}) cols.push_back(position_distribution(dist, seq, exit, z, phi, false, nq));
    for (std::size_t i = 0; i < z.size(); ++i) pos.add({z[i], cols[0][i], cols[1][i], cols[2][i], cols[3][i]});
    c.rec.tables = {std::move(t), std::move(pos)};
}

// OAT uncertainty versus ε for each requested backend.
void sensitivity_sweep(Context& c)
{
    const RunConfig& cfg = c.cfg;
    const MomentumDistribution dist = c.dist();
    const auto backends = cfg.backends();
    const OatParams oat = c.oat();
    const int N = c.N();

    Table t{"sweep", {"epsilon"}, {}};
    for (Backend b : backends) t.columns.push_back(std::string("n_dphi2_") + short_name(b));
    t.columns.push_back("regime_flag");
    for (double eps : cfg.grid("physics.eps_grid").values()) {
        std::vector<Cell> row{eps};
        double best = INFINITY;
        for (Backend b : backends) {
            const SequenceParams seq = c.seq(eps, b, cfg.shape());
            const double v = uncertainty_oat(script_quantities(dist, seq, c.script_options()), oat, N).n_dphi2;
            best = std::min(best, v);
            row.emplace_back(v);
        }
        row.emplace_back(std::string(best < 1.0 ? "sub_snl" : "above_snl"));
        t.add(std::move(row));
    }
    c.rec.tables = {std::move(t)};
    c.rec.scalars = {{"chi", oat.chi}, {"alpha", oat.alpha}};
}

// Perturbative against numeric transfer at one q̃, plus the ε scaling of the residuals.
void validate_pert(Context& c)
{
    const RunConfig& cfg = c.cfg;
    const double q = cfg.real("grid.q");
    const ClassRange classes = cfg.classes();
    const RkOptions rk = cfg.rk();
    if (!classes.contains(-1) || !classes.contains(2))
        throw ConfigError("key 'physics.n_min'/'physics.n_max': validate-pert needs classes -1..2");
    const auto taus = linspace(0.0, cfg.real("grid.tau_max"), cfg.integer("grid.tau_count"));

    struct Point {
        Mat2 pert, num;
        AdjacentCouplings adj;
        Eigen::MatrixXcd U;
    };
    auto compare = [&](double eps) {
        std::vector<Point> pts(taus.size());
        parallel_for(taus.size(), [&](std::size_t k) {
            const PulseTransfer p = pert_transfer(q, {eps, taus[k], 0.0, PulseShape::box});
            const EnvelopeSpec env{PulseShape::box, eps, taus[k]};
            pts[k].U = evolve_pulse(q, env, 0.0, classes, rk);
            pts[k].num = numeric_main_block(pts[k].U, env, classes);
            pts[k].pert = p.G;
            pts[k].adj = p.adjacent;
        });
        return pts;
    };

    const double eps = cfg.real("physics.eps");
    if (eps > 0.5) c.warn("perturbative backend used outside its validated range eps <= 0.5");
    const auto pts = compare(eps);
    Table t{"tau", {"tau"}, {}};
    const char* names[4] = {"T", "R", "Rt", "Tt"};
    const int ij[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (const char* n : names)
        for (const char* suffix : {"_mod_pert", "_mod_num", "_phase_residual"}) t.columns.push_back(std::string(n) + suffix);
    for (const char* n : {"g20", "g21", "gm10", "gm11"})
        for (const char* suffix : {"_mod_pert", "_mod_num"}) t.columns.push_back(std::string(n) + suffix);
    const int i2 = classes.index(2), im1 = classes.index(-1), i0 = classes.index(0), i1 = classes.index(1);
    for (std::size_t k = 0; k < taus.size(); ++k) {
        const Point& p = pts[k];
        std::vector<Cell> row{taus[k]};
        // Phases relative to T remove the global phase.
        const cplx ref = p.pert(0, 0) * std::conj(p.num(0, 0));
        for (const auto& e : ij) {
            const cplx a = p.pert(e[0], e[1]), b = p.num(e[0], e[1]);
            row.emplace_back(std::abs(a));
            row.emplace_back(std::abs(b));
            row.emplace_back(std::arg(a * std::conj(b) * std::conj(ref)));
        }
        const double adj_pert[4] = {p.adj.g20, p.adj.g21, p.adj.gm10, p.adj.gm11};
        const double adj_num[4] = {std::abs(p.U(i2, i0)), std::abs(p.U(i2, i1)), std::abs(p.U(im1, i0)),
                                   std::abs(p.U(im1, i1))};
        for (int m = 0; m < 4; ++m) {
            row.emplace_back(adj_pert[m]);
            row.emplace_back(adj_num[m]);
        }
        t.add(std::move(row));
    }

    // Scaling: worst main-class residual over the τ grid and OAT NΔφ² per backend.
    const MomentumDistribution dist = c.dist();
    const OatParams oat = c.oat();
    const int N = c.N();
    Table s{"scaling",
            {"epsilon", "max_modulus_residual", "max_complex_residual", "n_dphi2_pert", "n_dphi2_num",
             "dphi2_residual"},
            {}};
    std::vector<double> xs, mod_res, dphi_res;
    for (double e : cfg.grid("physics.eps_grid").values()) {
        if (e > 0.5) c.warn("perturbative backend used outside its validated range eps <= 0.5");
        double worst_mod = 0.0, worst_cplx = 0.0;
        for (const Point& p : compare(e)) {
            const cplx ph = std::polar(1.0, std::arg(p.num(0, 0)) - std::arg(p.pert(0, 0)));
            worst_mod = std::max(worst_mod, (p.pert.cwiseAbs() - p.num.cwiseAbs()).cwiseAbs().maxCoeff());
            worst_cplx = std::max(worst_cplx, (p.pert * ph - p.num).cwiseAbs().maxCoeff());
        }
        SequenceParams sp = c.seq(e, Backend::perturbative, PulseShape::box);
        SequenceParams sn = sp;
        sn.backend = Backend::numeric;
        const double np = uncertainty_oat(script_quantities(dist, sp, c.script_options()), oat, N).n_dphi2;
        const double nn = uncertainty_oat(script_quantities(dist, sn, c.script_options()), oat, N).n_dphi2;
        const double dr = std::abs(np - nn) / N;
        s.add({e, worst_mod, worst_cplx, np, nn, dr});
        xs.push_back(e);
        mod_res.push_back(worst_mod);
        dphi_res.push_back(dr);
    }
    c.rec.tables = {std::move(t), std::move(s)};
    c.rec.scalars = {{"q", q}, {"eps", eps}};
    if (xs.size() >= 2) {
        c.rec.scalars.emplace_back("slope_modulus_residual", loglog_slope(xs, mod_res));
        c.rec.scalars.emplace_back("slope_dphi2_residual", loglog_slope(xs, dphi_res));
    }
}

// Box against Blackman: mirror reflectivity profile and numeric NΔφ² versus ε.
void pulse_shape(Context& c)
{
    const RunConfig& cfg = c.cfg;
    const double eps = cfg.real("physics.eps");
    const ClassRange classes = cfg.classes();
    const RkOptions rk = cfg.rk();
    const auto vs = linspace(0.0, cfg.real("grid.v_max"), cfg.integer("grid.v_count"));
    std::vector<double> qs;
    for (double v : vs) qs.push_back(0.5 * v * eps);
    if (qs.back() > UnitConvention::q_max) throw ConfigError("key 'grid.v_max': v_max * eps / 2 exceeds 0.5");

    const auto box = reflectivity_profile({PulseShape::box, eps, pi}, 0.0, qs, classes, rk);
    const auto bm = reflectivity_profile({PulseShape::blackman, eps, pi}, 0.0, qs, classes, rk);
    Table prof{"reflectivity", {"v", "q", "Rt_box", "Rt_blackman"}, {}};
    for (std::size_t i = 0; i < vs.size(); ++i) prof.add({vs[i], qs[i], box[i].Rt, bm[i].Rt});

    const MomentumDistribution dist = c.dist();
    const OatParams oat = c.oat();
    const int N = c.N();
    Table sweep{"sweep", {"epsilon", "n_dphi2_box", "n_dphi2_blackman"}, {}};
    std::vector<double> yb, yk;
    for (double e : cfg.grid("physics.eps_grid").values()) {
        const double b = uncertainty_oat(
            script_quantities(dist, c.seq(e, Backend::numeric, PulseShape::box), c.script_options()), oat, N).n_dphi2;
        const double k = uncertainty_oat(
            script_quantities(dist, c.seq(e, Backend::numeric, PulseShape::blackman), c.script_options()), oat, N)
                             .n_dphi2;
        sweep.add({e, b, k});
        yb.push_back(b);
        yk.push_back(k);
    }
    c.rec.tables = {std::move(sweep), std::move(prof)};
    c.rec.scalars = {{"fwhm_v_box", reflectivity_fwhm_v(box)},
                     {"fwhm_v_blackman", reflectivity_fwhm_v(bm)},
                     {"sign_changes_box", static_cast<double>(derivative_sign_changes(yb))},
                     {"sign_changes_blackman", static_cast<double>(derivative_sign_changes(yk))}};
}

// Inclination and twisting optimization versus ε.
void optimize(Context& c)
{
    const RunConfig& cfg = c.cfg;
    const MomentumDistribution dist = c.dist();
    const int N = c.N();
    const double chi0 = c.chi();
    Table t{"optimize",
            {"epsilon", "n_dphi2_equator", "theta_opt", "n_dphi2_inclination", "chi_opt", "n_dphi2_twisting",
             "inclination_mode", "twisting_mode"},
            {}};
    auto mode = [](const OptResult& r) { return std::string(!r.converged ? "unconverged" : r.degraded ? "prescan" : "brent"); };
    for (double e : cfg.grid("physics.eps_grid").values()) {
        const ScriptQuantities s = script_quantities(dist, c.seq(e, cfg.backend(), cfg.shape()), c.script_options());
        const OptResult inc = optimize_inclination(s, N, chi0);
        const OptResult tw = optimize_twisting(s, N, chi0);
        t.add({e, inc.reference, inc.param, inc.n_dphi2, tw.param, tw.n_dphi2, mode(inc), mode(tw)});
    }
    c.rec.tables = {std::move(t)};
    c.rec.scalars = {{"chi0", chi0}};
}

} // namespace

ResultRecord run_experiment(const std::string& tag, const RunConfig& cfg, std::ostream& diag)
{
    ResultRecord rec;
    rec.tag = tag;
    rec.version = BRAGG_VERSION;
    rec.config = cfg.entries();
    Context c{cfg, diag, rec};
    if (tag == "rabi-map")
        rabi_map(c);
    else if (tag == "fringe")
        fringe(c);
    else if (tag == "sensitivity-sweep")
        sensitivity_sweep(c);
    else if (tag == "validate-pert")
        validate_pert(c);
    else if (tag == "pulse-shape")
        pulse_shape(c);
    else if (tag == "optimize")
        optimize(c);
    else
        throw ConfigError("unknown experiment tag '" + tag + "'");
    return rec;
}

} // namespace bragg
