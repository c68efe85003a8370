#include "mlc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mlc/circle.hpp"

namespace mlc {

namespace {
constexpr long double kExpCut = 46.0L;

inline std::complex<long double> cis(long double theta) {
    return {std::cos(theta), std::sin(theta)};
}
}  // namespace

long node_count_periodic(const QuadPolicy& policy, double hbar) {
    const double osc = policy.points_per_wavelength * policy.phase_scale_bound /
                       (kTwoPi * hbar);
    const long n = std::max<long>(policy.n_min, static_cast<long>(std::ceil(osc)));
    if (n < 64 || n > QuadPolicy::n_cap)
        throw NodeCapError("node count " + std::to_string(n) +
                           ": hbar too small for requested policy");
    return n;
}

long node_count_window(const QuadPolicy& policy, double hbar, double halfwidth) {
    const double width = 2.0 * halfwidth;
    const double osc =
        policy.points_per_wavelength * policy.phase_scale_bound * width / (kTwoPi * hbar);
    // The window integrand is not periodic, so the rule is O(h^2) through the
    // boundary terms; resolving the Gaussian at ~4000 points per sqrt(hbar)
    // keeps that error near 1e-10 relative.
    const double gauss = width * 4000.0 / std::sqrt(hbar);
    const long n = std::max<long>(
        policy.n_min,
        static_cast<long>(std::ceil(std::max(osc, gauss))));
    if (n > QuadPolicy::n_cap)
        throw NodeCapError("node count " + std::to_string(n) +
                           ": hbar too small for requested policy");
    return n;
}

InnerProductResult inner_product_detailed(const QuantumState& psi, const QuantumState& phi,
                                          const QuadPolicy& policy) {
    if (psi.hbar() != phi.hbar())
        throw std::invalid_argument("inner_product: hbar mismatch between states");
    const long n = node_count_periodic(policy, psi.hbar());
    const long double h = 1.0L / static_cast<long double>(n);
    std::complex<long double> acc(0.0L, 0.0L);
    long double npsi = 0.0L, nphi = 0.0L, env = 0.0L;
    for (long j = 0; j < n; ++j) {
        const double z = static_cast<double>(j) / static_cast<double>(n);
        const std::complex<double> a = psi(z);
        const std::complex<double> b = phi(z);
        const std::complex<long double> al(a.real(), a.imag());
        const std::complex<long double> bl(b.real(), b.imag());
        acc += std::conj(al) * bl;
        const long double ma = std::abs(al), mb = std::abs(bl);
        npsi += ma * ma;
        nphi += mb * mb;
        env += ma * mb;
    }
    InnerProductResult r;
    r.value = {static_cast<double>(acc.real() * h), static_cast<double>(acc.imag() * h)};
    r.psi_norm = static_cast<double>(std::sqrt(npsi * h));
    r.phi_norm = static_cast<double>(std::sqrt(nphi * h));
    r.envelope_l1 = static_cast<double>(env * h);
    r.nodes = n;
    return r;
}

std::complex<double> inner_product(const QuantumState& psi, const QuantumState& phi,
                                   const QuadPolicy& policy) {
    return inner_product_detailed(psi, phi, policy).value;
}

std::complex<double> oscillatory_integral(double y, double a,
                                          const std::function<long double(long double)>& phase,
                                          double hbar, const QuadPolicy& policy) {
    if (!(a > 0.0 && a < 0.5))
        throw std::invalid_argument("oscillatory_integral: need a in (0, 1/2)");
    const long n = node_count_window(policy, hbar, a);
    const long double hl = 2.0L * static_cast<long double>(a) / n;
    const long double inv_h = 1.0L / static_cast<long double>(hbar);
    const long double quarter = 0.25L * inv_h;
    const long double yl = y;
    std::complex<long double> acc(0.0L, 0.0L);
    for (long j = 0; j <= n; ++j) {
        const long double z = yl - a + hl * j;
        const long double d = z - yl;
        const long double g = d * d * quarter;
        if (g > kExpCut) continue;
        std::complex<long double> term = std::exp(-g) * cis(phase(z) * inv_h);
        if (j == 0 || j == n) term *= 0.5L;
        acc += term;
    }
    acc *= hl;
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

namespace {

// Polynomial factor Q_n with d^n/ds^n e^{-s^2/4h} = Q_n(s) e^{-s^2/4h}:
// Q_0 = 1, Q_{n+1} = Q_n' - (s / 2h) Q_n. Coefficients in the monomial basis.
std::vector<long double> q_poly(int n, long double hbar) {
    std::vector<long double> q{1.0L};
    for (int step = 0; step < n; ++step) {
        std::vector<long double> next(q.size() + 1, 0.0L);
        for (std::size_t k = 1; k < q.size(); ++k)
            next[k - 1] += static_cast<long double>(k) * q[k];  // derivative
        for (std::size_t k = 0; k < q.size(); ++k)
            next[k + 1] -= q[k] / (2.0L * hbar);                // -(s/2h) Q
        q = std::move(next);
    }
    return q;
}

long double poly_eval(const std::vector<long double>& q, long double s) {
    long double acc = 0.0L;
    for (std::size_t k = q.size(); k-- > 0;) acc = acc * s + q[k];
    return acc;
}

}  // namespace

double gaussian_derivative_l1(int n, double a, double hbar) {
    if (n < 1 || n > 8)
        throw std::invalid_argument("gaussian_derivative_l1: Hermite table exhausted (n in [1,8])");
    if (!(a > 0.0 && a < 0.5))
        throw std::invalid_argument("gaussian_derivative_l1: need a in (0, 1/2)");
    const long double hl = hbar;
    const std::vector<long double> qn = q_poly(n, hl);
    const std::vector<long double> qm = q_poly(n - 1, hl);
    // Antiderivative of |f^(n)| telescopes f^(n-1) across the sign changes of
    // Q_n. All real roots of Q_n lie within |s| <= ~4 sqrt(n hbar); scan in
    // the scaled variable and bisect each bracket.
    const long double sscan = 4.0L * std::sqrt(static_cast<long double>(n) * hl);
    const long double lim = std::min<long double>(a, sscan);
    std::vector<long double> cuts{-static_cast<long double>(a)};
    const int grid = 2048;
    long double prev_s = -lim, prev_v = poly_eval(qn, prev_s);
    for (int j = 1; j <= grid; ++j) {
        const long double s = -lim + 2.0L * lim * j / grid;
        const long double v = poly_eval(qn, s);
        if ((prev_v < 0.0L) != (v < 0.0L)) {
            long double lo = prev_s, hi = s, vlo = prev_v;
            for (int it = 0; it < 120; ++it) {
                const long double mid = 0.5L * (lo + hi);
                const long double vm = poly_eval(qn, mid);
                if ((vlo < 0.0L) == (vm < 0.0L)) {
                    lo = mid;
                    vlo = vm;
                } else {
                    hi = mid;
                }
            }
            cuts.push_back(0.5L * (lo + hi));
        }
        prev_s = s;
        prev_v = v;
    }
    cuts.push_back(a);
    auto fm = [&](long double s) {
        const long double g = s * s / (4.0L * hl);
        return g > 500.0L ? 0.0L : poly_eval(qm, s) * std::exp(-g);
    };
    long double total = 0.0L;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += std::fabs(fm(cuts[i + 1]) - fm(cuts[i]));
    return static_cast<double>(total);
}

}  // namespace mlc
