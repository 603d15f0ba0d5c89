#include "bragg/spin_states.hpp"

#include <cmath>
#include <string>

#include <boost/math/tools/minima.hpp>

namespace bragg {

namespace {

/// x^n for integer n ≥ 0 through logarithms, stable for large n.
double ipow(double x, double n)
{
    if (n == 0.0) return 1.0;
    if (x == 0.0) return 0.0;
    const double mag = std::exp(n * std::log(std::abs(x)));
    const bool odd = std::fmod(n, 2.0) != 0.0;
    return (x < 0.0 && odd) ? -mag : mag;
}

} // namespace

SpinMoments css_moments(double Theta, double Phi, int N)
{
    if (!(Theta >= 0.0 && Theta <= pi)) throw DomainError("css_moments: Theta must lie in [0, pi]");
    if (N < 1) throw DomainError("css_moments: N must be >= 1");
    const Eigen::Vector3d n(std::sin(Theta) * std::cos(Phi), -std::sin(Theta) * std::sin(Phi), std::cos(Theta));
    SpinMoments m;
    m.N = N;
    m.mean = 0.5 * N * n;
    // Single-atom covariance (1 − n nᵀ)/4, summed over independent atoms.
    m.cov = 0.25 * N * (Eigen::Matrix3d::Identity() - n * n.transpose());
    return m;
}

double oat_A(double chi, int N) { return 1.0 - ipow(std::cos(2.0 * chi), N - 2.0); }

double oat_B(double chi, int N) { return 4.0 * std::sin(chi) * ipow(std::cos(chi), N - 2.0); }

double oat_alpha0(double chi, int N) { return 0.5 * std::atan2(oat_B(chi, N), oat_A(chi, N)); }

double OatParams::inclination(int N) const { return alpha + oat_alpha0(chi, N); }

OatParams OatParams::from_inclination(double chi, double theta, int N)
{
    return {chi, theta - oat_alpha0(chi, N)};
}

SpinMoments oat_moments(const OatParams& p, int N)
{
    if (N < 2) throw DomainError("oat_moments: N must be >= 2");
    const double n = N;
    const double A = oat_A(p.chi, N), B = oat_B(p.chi, N);
    const double root = std::hypot(A, B);
    const double th = p.inclination(N);
    const double c1 = ipow(std::cos(p.chi), n - 1.0);

    SpinMoments m;
    m.N = n;
    m.mean(0) = 0.5 * n * c1;
    m.cov(0, 0) = 0.25 * n * (n * (1.0 - c1 * c1) - 0.5 * (n - 1.0) * A);
    m.cov(1, 1) = 0.25 * n * (1.0 + 0.25 * (n - 1.0) * (A + root * std::cos(2.0 * th)));
    m.cov(2, 2) = 0.25 * n * (1.0 + 0.25 * (n - 1.0) * (A - root * std::cos(2.0 * th)));
    m.cov(1, 2) = m.cov(2, 1) = n * (n - 1.0) / 16.0 * root * std::sin(2.0 * th);
    return m;
}

double squeezing_parameter(double chi, int N)
{
    const SpinMoments m = oat_moments(OatParams::equator(chi, N), N);
    const double s1 = m.mean(0);
    if (!(std::abs(s1) > 1e-300 * N)) throw NumericError("squeezing_parameter: <S1> vanishes (over-twisted state)");
    return N * m.var(2) / (s1 * s1);
}

double twisting_estimate(int N) { return std::pow(3.0, 1.0 / 6.0) * std::pow(static_cast<double>(N), -2.0 / 3.0); }

double optimal_twisting(int N)
{
    if (N < 3) throw DomainError("optimal_twisting: N must be >= 3");
    const double est = twisting_estimate(N);
    // Minimize in log χ; the bracket spans two decades around the estimate.
    const double lo = std::log(est / 10.0), hi = std::log(std::min(pi / 4.0, 10.0 * est));
    std::uintmax_t iters = 500;
    const auto r = boost::math::tools::brent_find_minima(
        [N](double lc) { return squeezing_parameter(std::exp(lc), N); }, lo, hi, 48, iters);
    const double span = hi - lo;
    if (r.first - lo < 1e-6 * span || hi - r.first < 1e-6 * span)
        throw NumericError("optimal_twisting: minimum at bracket edge (chi = " + std::to_string(std::exp(r.first)) +
                           ", N = " + std::to_string(N) + ")");
    return std::exp(r.first);
}

namespace dicke {

Eigen::VectorXcd css_state(double Theta, double Phi, int N)
{
    // Single atom: sin(Θ/2)|0⟩ + cos(Θ/2)e^{iΦ}|1⟩.
    const double s = std::sin(0.5 * Theta), c = std::cos(0.5 * Theta);
    Eigen::VectorXcd psi(N + 1);
    for (int k = 0; k <= N; ++k) {
        const double logbin = std::lgamma(N + 1.0) - std::lgamma(k + 1.0) - std::lgamma(N - k + 1.0);
        const double mag = std::sqrt(std::exp(logbin)) * std::pow(s, N - k) * std::pow(c, k);
        psi[k] = std::polar(mag, k * Phi);
    }
    return psi;
}

void spin_operators(int N, Eigen::MatrixXcd& S1, Eigen::MatrixXcd& S2, Eigen::MatrixXcd& S3)
{
    const int d = N + 1;
    Eigen::MatrixXcd up = Eigen::MatrixXcd::Zero(d, d);  // a₁†a₀
    S3 = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        S3(k, k) = k - 0.5 * N;
        if (k + 1 < d) up(k + 1, k) = std::sqrt((k + 1.0) * (N - k));
    }
    S1 = 0.5 * (up + up.adjoint());
    S2 = (up - up.adjoint()) / (2.0 * I);
}

Eigen::VectorXcd oat_state(const OatParams& p, int N)
{
    Eigen::MatrixXcd S1, S2, S3;
    spin_operators(N, S1, S2, S3);
    Eigen::VectorXcd psi = css_state(pi / 2, 0.0, N);
    for (int k = 0; k <= N; ++k) {
        const double m = k - 0.5 * N;
        psi[k] *= std::polar(1.0, -p.chi * m * m);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S1);
    const Eigen::VectorXcd phases =
        (-I * p.alpha * es.eigenvalues().cast<cplx>()).array().exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * psi;
}

SpinMoments moments(const Eigen::VectorXcd& psi, int N)
{
    Eigen::MatrixXcd S[3];
    spin_operators(N, S[0], S[1], S[2]);
    SpinMoments m;
    m.N = N;
    Eigen::VectorXcd Spsi[3];
    for (int i = 0; i < 3; ++i) {
        Spsi[i] = S[i] * psi;
        m.mean(i) = psi.dot(Spsi[i]).real();
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            // Symmetrized second moment ⟨{S_i, S_j}⟩/2 = Re⟨S_i ψ, S_j ψ⟩.
            m.cov(i, j) = Spsi[i].dot(Spsi[j]).real() - m.mean(i) * m.mean(j);
    return m;
}

} // namespace dicke

} // namespace bragg
