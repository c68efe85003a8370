#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

#include "mlc/states.hpp"

namespace mlc {

struct NodeCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Node-count policy for the hbar-scaled trapezoid rules. The periodic rule
/// uses N = max(n_min, ppw * phase_scale_bound / (2 pi hbar)); the windowed
/// rule adds a Gaussian-resolution floor (the window integrand is not
/// periodic, so the trapezoid is only O(h^2) there and needs the extra
/// nodes). Counts above n_cap = 2^22 throw NodeCapError ("hbar too small for
/// requested policy").
struct QuadPolicy {
    int n_min = 64;
    int points_per_wavelength = 8;
    double phase_scale_bound = 1.0;
    static constexpr long n_cap = 1L << 22;
};

long node_count_periodic(const QuadPolicy& policy, double hbar);
long node_count_window(const QuadPolicy& policy, double hbar, double halfwidth);

/// <psi, phi> = integral over [0,1) of conj(psi(z)) phi(z) dz by the periodic
/// composite trapezoid rule (spectrally accurate for smooth periodic
/// integrands). Throws on hbar mismatch.
std::complex<double> inner_product(const QuantumState& psi, const QuantumState& phi,
                                   const QuadPolicy& policy);

struct InnerProductResult {
    std::complex<double> value;
    double psi_norm = 0.0;      // L2 norms from the same node set
    double phi_norm = 0.0;
    double envelope_l1 = 0.0;   // integral of |psi| |phi|; scales the roundoff floor
    long nodes = 0;
};
InnerProductResult inner_product_detailed(const QuantumState& psi, const QuantumState& phi,
                                          const QuadPolicy& policy);

/// integral over [y-a, y+a] of e^{-(z-y)^2/4hbar} e^{i phase(z)/hbar} dz.
/// The phase is a lift evaluated in extended precision: its value is divided
/// by hbar, so double-precision evaluation would alias the oscillation.
std::complex<double> oscillatory_integral(double y, double a,
                                          const std::function<long double(long double)>& phase,
                                          double hbar, const QuadPolicy& policy);

/// integral over [y-a, y+a] of |d^n/dz^n e^{-(z-y)^2/4hbar}| dz, computed
/// exactly from the Hermite-form closed expression for the derivative:
/// locate the sign changes of the degree-n polynomial factor and telescope
/// the (n-1)-st derivative across them. Independent of y. n in [1,8].
double gaussian_derivative_l1(int n, double a, double hbar);

}  // namespace mlc
