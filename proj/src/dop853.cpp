#include "bragg/dop853.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bragg/common.hpp"

namespace bragg {

namespace {

using Vec = Eigen::VectorXcd;

// Dormand–Prince 8(5,3) tableau.
constexpr double c2 = 0.526001519587677318785587544488E-01, c3 = 0.789002279381515978178381316732E-01,
                 c4 = 0.118350341907227396726757197510E+00, c5 = 0.281649658092772603273242802490E+00,
                 c6 = 0.333333333333333333333333333333E+00, c7 = 0.25E+00,
                 c8 = 0.307692307692307692307692307692E+00, c9 = 0.651282051282051282051282051282E+00,
                 c10 = 0.6E+00, c11 = 0.857142857142857142857142857142E+00;

constexpr double b1 = 5.42937341165687622380535766363E-2, b6 = 4.45031289275240888144113950566E0,
                 b7 = 1.89151789931450038304281599044E0, b8 = -5.8012039600105847814672114227E0,
                 b9 = 3.1116436695781989440891606237E-1, b10 = -1.52160949662516078556178806805E-1,
                 b11 = 2.01365400804030348374776537501E-1, b12 = 4.47106157277725905176885569043E-2;

constexpr double bhh1 = 0.244094488188976377952755905512E+00, bhh2 = 0.733846688281611857341361741547E+00,
                 bhh3 = 0.220588235294117647058823529412E-01;

constexpr double er1 = 0.1312004499419488073250102996E-01, er6 = -0.1225156446376204440720569753E+01,
                 er7 = -0.4957589496572501915214079952E+00, er8 = 0.1664377182454986536961530415E+01,
                 er9 = -0.3503288487499736816886487290E+00, er10 = 0.3341791187130174790297318841E+00,
                 er11 = 0.8192320648511571246570742613E-01, er12 = -0.2235530786388629525884427845E-01;

constexpr double a21 = 5.26001519587677318785587544488E-2, a31 = 1.97250569845378994544595329183E-2,
                 a32 = 5.91751709536136983633785987549E-2, a41 = 2.95875854768068491816892993775E-2,
                 a43 = 8.87627564304205475450678981324E-2, a51 = 2.41365134159266685502369798665E-1,
                 a53 = -8.84549479328286085344864962717E-1, a54 = 9.24834003261792003115737966543E-1,
                 a61 = 3.7037037037037037037037037037E-2, a64 = 1.70828608729473871279604482173E-1,
                 a65 = 1.25467687566822425016691814123E-1, a71 = 3.7109375E-2,
                 a74 = 1.70252211019544039314978060272E-1, a75 = 6.02165389804559606850219397283E-2,
                 a76 = -1.7578125E-2;

constexpr double a81 = 3.70920001185047927108779319836E-2, a84 = 1.70383925712239993810214054705E-1,
                 a85 = 1.07262030446373284651809199168E-1, a86 = -1.53194377486244017527936158236E-2,
                 a87 = 8.27378916381402288758473766002E-3, a91 = 6.24110958716075717114429577812E-1,
                 a94 = -3.36089262944694129406857109825E0, a95 = -8.68219346841726006818189891453E-1,
                 a96 = 2.75920996994467083049415600797E1, a97 = 2.01540675504778934086186788979E1,
                 a98 = -4.34898841810699588477366255144E1, a101 = 4.77662536438264365890433908527E-1,
                 a104 = -2.48811461997166764192642586468E0, a105 = -5.90290826836842996371446475743E-1,
                 a106 = 2.12300514481811942347288949897E1, a107 = 1.52792336328824235832596922938E1,
                 a108 = -3.32882109689848629194453265587E1, a109 = -2.03312017085086261358222928593E-2;

constexpr double a111 = -9.3714243008598732571704021658E-1, a114 = 5.18637242884406370830023853209E0,
                 a115 = 1.09143734899672957818500254654E0, a116 = -8.14978701074692612513997267357E0,
                 a117 = -1.85200656599969598641566180701E1, a118 = 2.27394870993505042818970056734E1,
                 a119 = 2.49360555267965238987089396762E0, a1110 = -3.0467644718982195003823669022E0,
                 a121 = 2.27331014751653820792359768449E0, a124 = -1.05344954667372501984066689879E1,
                 a125 = -2.00087205822486249909675718444E0, a126 = -1.79589318631187989172765950534E1,
                 a127 = 2.79488845294199600508499808837E1, a128 = -2.85899827713502369474065508674E0,
                 a129 = -8.87285693353062954433549289258E0, a1210 = 1.23605671757943030647266201528E1,
                 a1211 = 6.43392746015763530355970484046E-1;

constexpr double uround = 2.3e-16;
constexpr double safe = 0.9, fac1 = 1.0 / 3.0, fac2 = 6.0;

double weighted_norm(const Vec& v, const Eigen::VectorXd& scale)
{
    return std::sqrt((v.cwiseAbs2().array() / scale.array().square()).sum() / static_cast<double>(v.size()));
}

} // namespace

Dop853Stats dop853_integrate(const ComplexRhs& f, double t0, double t1, Vec& y, const Dop853Options& opt)
{
    Dop853Stats st;
    if (t1 == t0) return st;
    const std::size_t n = static_cast<std::size_t>(y.size());
    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double h_max = opt.h_max > 0.0 ? opt.h_max : std::abs(t1 - t0);

    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), k8(n), k9(n), k10(n), yt(n), ynew(n);
    Eigen::VectorXd scale(n);
    auto make_scale = [&](const Vec& a, const Vec& b) {
        for (std::size_t i = 0; i < n; ++i)
            scale[i] = opt.atol + opt.rtol * std::max(std::abs(a[i]), std::abs(b[i]));
    };

    double t = t0;
    f(t, y, k1);
    ++st.evaluations;

    // Initial step guess (Hairer–Wanner hinit).
    double h;
    {
        make_scale(y, y);
        const double dnf = weighted_norm(k1, scale), dny = weighted_norm(y, scale);
        h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
        h = std::min(h, h_max);
        yt = y + dir * h * k1;
        f(t + dir * h, yt, k2);
        ++st.evaluations;
        const double der2 = weighted_norm(k2 - k1, scale) / h;
        const double der12 = std::max(std::abs(der2), std::sqrt(dnf * dnf));
        const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3)
                                         : std::pow(0.01 / der12, 1.0 / 8.0);
        h = std::min({100.0 * std::abs(h), h1, h_max});
    }
    h *= dir;

    bool last = false, reject = false;
    std::size_t steps = 0;
    for (;;) {
        if (++steps > opt.max_steps)
            throw NumericError("dop853: step budget exhausted at t = " + std::to_string(t));
        if (0.1 * std::abs(h) <= std::abs(t) * uround)
            throw NumericError("dop853: step size underflow at t = " + std::to_string(t));
        if ((t + 1.01 * h - t1) * dir > 0.0) {
            h = t1 - t;
            last = true;
        }

        yt = y + h * a21 * k1;
        f(t + c2 * h, yt, k2);
        yt = y + h * (a31 * k1 + a32 * k2);
        f(t + c3 * h, yt, k3);
        yt = y + h * (a41 * k1 + a43 * k3);
        f(t + c4 * h, yt, k4);
        yt = y + h * (a51 * k1 + a53 * k3 + a54 * k4);
        f(t + c5 * h, yt, k5);
        yt = y + h * (a61 * k1 + a64 * k4 + a65 * k5);
        f(t + c6 * h, yt, k6);
        yt = y + h * (a71 * k1 + a74 * k4 + a75 * k5 + a76 * k6);
        f(t + c7 * h, yt, k7);
        yt = y + h * (a81 * k1 + a84 * k4 + a85 * k5 + a86 * k6 + a87 * k7);
        f(t + c8 * h, yt, k8);
        yt = y + h * (a91 * k1 + a94 * k4 + a95 * k5 + a96 * k6 + a97 * k7 + a98 * k8);
        f(t + c9 * h, yt, k9);
        yt = y + h * (a101 * k1 + a104 * k4 + a105 * k5 + a106 * k6 + a107 * k7 + a108 * k8 + a109 * k9);
        f(t + c10 * h, yt, k10);
        yt = y + h * (a111 * k1 + a114 * k4 + a115 * k5 + a116 * k6 + a117 * k7 + a118 * k8 +
                      a119 * k9 + a1110 * k10);
        f(t + c11 * h, yt, k2);
        const double tph = t + h;
        yt = y + h * (a121 * k1 + a124 * k4 + a125 * k5 + a126 * k6 + a127 * k7 + a128 * k8 +
                      a129 * k9 + a1210 * k10 + a1211 * k2);
        f(tph, yt, k3);
        st.evaluations += 11;

        k4 = b1 * k1 + b6 * k6 + b7 * k7 + b8 * k8 + b9 * k9 + b10 * k10 + b11 * k2 + b12 * k3;
        ynew = y + h * k4;

        // Combined error estimate.
        make_scale(y, ynew);
        const Vec e3 = k4 - bhh1 * k1 - bhh2 * k9 - bhh3 * k3;
        const Vec e5 = er1 * k1 + er6 * k6 + er7 * k7 + er8 * k8 + er9 * k9 + er10 * k10 + er11 * k2 + er12 * k3;
        double err2 = 0.0, err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = scale[i];
            err2 += std::norm(e3[i]) / (s * s);
            err += std::norm(e5[i]) / (s * s);
        }
        double deno = err + 0.01 * err2;
        if (deno <= 0.0) deno = 1.0;
        err = std::abs(h) * err * std::sqrt(1.0 / (deno * static_cast<double>(n)));

        const double fac11 = std::pow(err, 1.0 / 8.0);
        double fac = std::clamp(fac11 / safe, 1.0 / fac2, 1.0 / fac1);
        double hnew = h / fac;

        if (err <= 1.0) {
            ++st.accepted;
            f(tph, ynew, k4);
            ++st.evaluations;
            k1 = k4;
            y = ynew;
            t = tph;
            if (last) return st;
            if (std::abs(hnew) > h_max) hnew = dir * h_max;
            if (reject) hnew = dir * std::min(std::abs(hnew), std::abs(h));
            reject = false;
        } else {
            hnew = h / std::min(1.0 / fac1, fac11 / safe);
            reject = true;
            if (st.accepted >= 1) ++st.rejected;
            last = false;
        }
        h = hnew;
    }
}

} // namespace bragg
