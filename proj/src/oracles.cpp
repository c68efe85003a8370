#include "mlc/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mlc/circle.hpp"
#include "mlc/piecewise.hpp"

namespace mlc::oracle {

double gaussian_overlap_modulus(double x1, double xi1, double x2, double xi2, double hbar) {
    const double d = wrap_distance(x1, x2);
    const double dxi = xi1 - xi2;
    return std::sqrt(2.0 * M_PI * hbar) *
           std::exp(-(d * d / 8.0 + dxi * dxi / 2.0) / hbar);
}

double gaussian_overlap_normalized(double x1, double xi1, double x2, double xi2,
                                   double hbar) {
    const double d = wrap_distance(x1, x2);
    const double dxi = xi1 - xi2;
    return std::exp(-(d * d / 8.0 + dxi * dxi / 2.0) / hbar);
}

double gaussian_window_integral(double a, double hbar) {
    return 2.0 * std::sqrt(M_PI * hbar) * std::erf(a / (2.0 * std::sqrt(hbar)));
}

double gaussian_ft_modulus(double c, double hbar) {
    return 2.0 * std::sqrt(M_PI * hbar) * std::exp(-c * c / hbar);
}

std::complex<double> windowed_linear_phase_integral(double c, double a, double hbar,
                                                    long n) {
    if (n < 8) throw std::invalid_argument("windowed_linear_phase_integral: n too small");
    if (n % 2 == 1) ++n;  // Simpson needs an even interval count
    const long double h = 2.0L * static_cast<long double>(a) / n;
    const long double invh = 1.0L / static_cast<long double>(hbar);
    auto f = [&](long double s) -> std::complex<long double> {
        const long double g = s * s * 0.25L * invh;
        if (g > 500.0L) return {0.0L, 0.0L};
        const long double th = static_cast<long double>(c) * s * invh;
        const long double amp = std::exp(-g);
        return {amp * std::cos(th), amp * std::sin(th)};
    };
    std::complex<long double> acc = f(-static_cast<long double>(a)) +
                                    f(static_cast<long double>(a));
    for (long j = 1; j < n; ++j) {
        const long double s = -static_cast<long double>(a) + h * j;
        acc += f(s) * static_cast<long double>(j % 2 == 1 ? 4.0 : 2.0);
    }
    acc *= h / 3.0L;
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

double derivative_l1_bruteforce(int n, double a, double hbar, long N) {
    // d^k/ds^k e^{-s^2/4h} = Q_k(s) e^{-s^2/4h}; evaluate |.| on a fine grid
    // (plain midpoint rule; the reference is deliberately naive).
    std::vector<long double> q{1.0L};
    for (int step = 0; step < n; ++step) {
        std::vector<long double> next(q.size() + 1, 0.0L);
        for (std::size_t k = 1; k < q.size(); ++k)
            next[k - 1] += static_cast<long double>(k) * q[k];
        for (std::size_t k = 0; k < q.size(); ++k)
            next[k + 1] -= q[k] / (2.0L * static_cast<long double>(hbar));
        q = std::move(next);
    }
    const long double h = 2.0L * static_cast<long double>(a) / N;
    long double acc = 0.0L;
    for (long j = 0; j < N; ++j) {
        const long double s = -static_cast<long double>(a) + h * (j + 0.5L);
        long double poly = 0.0L;
        for (std::size_t k = q.size(); k-- > 0;) poly = poly * s + q[k];
        const long double g = s * s * 0.25L / static_cast<long double>(hbar);
        if (g < 500.0L) acc += std::fabs(poly) * std::exp(-g);
    }
    return static_cast<double>(acc * h);
}

double geometric_series(double c, int K, double lambda) {
    return c * (1.0 - std::pow(lambda, K)) / (1.0 - lambda);
}

double finite_difference_lift_derivative(const MapSpec& m, double z, double h) {
    return (map_lift(m, z + h) - map_lift(m, z - h)) / (2.0 * h);
}

double birkhoff_rotation_number(const MapSpec& m, long n) {
    long double y = 0.0L;
    for (long i = 0; i < n; ++i) y = map_lift_l(m, y);
    return static_cast<double>(y / n);
}

std::complex<double> wavepacket_direct_sum(const WavepacketParams& p, double z, int kmax) {
    return eval_wavepacket_window(p, z, kmax);
}

std::complex<double> lagrangian_quadratic_direct_sum(double q, double rho, double x,
                                                     double hbar, double z, int kmax) {
    const long double invh = 1.0L / static_cast<long double>(hbar);
    std::complex<long double> acc(0.0L, 0.0L);
    for (int k = -kmax; k <= kmax; ++k) {
        const long double t = static_cast<long double>(z) - k;
        const long double d = t - static_cast<long double>(x);
        const long double g = d * d * 0.25L * invh;
        if (g > 500.0L) continue;
        const long double S = 0.5L * static_cast<long double>(q) * t * t +
                              static_cast<long double>(rho) * t;
        const long double th = S * invh;
        acc += std::exp(-g) * std::complex<long double>(std::cos(th), std::sin(th));
    }
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

std::pair<double, double> abs_kink_onesided_derivatives(int M) {
    const PiecewiseGrid g = PiecewiseGrid::sample(
        [](double z) { return std::fabs(z - 0.5); }, M, {0.0, 0.5});
    return {g.derivative(0.5, PiecewiseGrid::Side::left),
            g.derivative(0.5, PiecewiseGrid::Side::right)};
}

}  // namespace mlc::oracle
