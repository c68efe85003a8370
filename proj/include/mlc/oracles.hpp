#pragma once

#include <complex>

#include "mlc/maps.hpp"
#include "mlc/states.hpp"

namespace mlc::oracle {

/// Closed-form references used as independent checks of the production
/// paths. These deliberately avoid the library quadrature: they are the
/// other side of every dual-route test.

/// Modulus of <phi_{x1,xi1}, phi_{x2,xi2}> by the single-image Gaussian
/// closed form with the min-image (wraparound) position distance:
/// sqrt(2 pi hbar) exp(-(d^2/8 + dxi^2/2)/hbar).
double gaussian_overlap_modulus(double x1, double xi1, double x2, double xi2, double hbar);
double gaussian_overlap_normalized(double x1, double xi1, double x2, double xi2, double hbar);

/// integral over [-a, a] of e^{-s^2/4hbar} ds = 2 sqrt(pi hbar) erf(a / (2 sqrt(hbar))).
double gaussian_window_integral(double a, double hbar);

/// Whole-line Gaussian Fourier transform modulus:
/// |integral e^{-s^2/4hbar} e^{ics/hbar} ds| = 2 sqrt(pi hbar) e^{-c^2/hbar}.
double gaussian_ft_modulus(double c, double hbar);

/// The windowed linear-phase integral by composite Simpson in extended
/// precision at caller-chosen resolution; reference for the trapezoid path.
std::complex<double> windowed_linear_phase_integral(double c, double a, double hbar, long n);

/// Brute-force quadrature of |d^n/dz^n e^{-s^2/4hbar}| on [-a, a] using the
/// Hermite-form derivative; reference for the exact telescoping path.
double derivative_l1_bruteforce(int n, double a, double hbar, long N);

/// sum_{k=0}^{K-1} lambda^k c  (constant-potential series).
double geometric_series(double c, int K, double lambda);

/// Central finite difference of the map lift, step h.
double finite_difference_lift_derivative(const MapSpec& m, double z, double h);

/// Long-orbit Birkhoff estimate of the rotation number.
double birkhoff_rotation_number(const MapSpec& m, long n);

/// Direct |k| <= kmax summation of the periodic wavepacket.
std::complex<double> wavepacket_direct_sum(const WavepacketParams& p, double z, int kmax);

/// Direct |k| <= kmax summation of a Lagrangian state with quadratic-plus-
/// linear lift S(t) = q t^2 / 2 + rho t (evaluated in extended precision).
std::complex<double> lagrangian_quadratic_direct_sum(double q, double rho, double x,
                                                     double hbar, double z, int kmax);

/// One-sided derivatives at z = 1/2 of the degree-4 interpolant of
/// z -> |z - 1/2| sampled on an M-grid with breakpoints {0, 1/2}.
std::pair<double, double> abs_kink_onesided_derivatives(int M);

}  // namespace mlc::oracle
