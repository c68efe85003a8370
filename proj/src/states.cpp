#include "mlc/states.hpp"

#include <cmath>
#include <stdexcept>

#include "mlc/circle.hpp"

namespace mlc {

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559L;
// exp(-46) ~ 1e-20: terms below this never matter at double output precision.
constexpr long double kExpCut = 46.0L;

// All phase arguments are formed in long double before the division by hbar:
// the arguments reach ~1e4 rad at the small end of the ladder, where a
// double-precision product would already carry ~1e-12 rad of rounding and
// poison the cancellation floor of downstream quadratures.
inline std::complex<long double> cis(long double theta) {
    return {std::cos(theta), std::sin(theta)};
}

std::complex<double> down(std::complex<long double> v) {
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

}  // namespace

void validate_hbar(double hbar) {
    if (!(hbar > 0.0) || hbar > 0.1)
        throw std::invalid_argument("hbar must lie in (0, 0.1]");
}

double truncation_radius(double hbar) {
    // R with exp(-R^2 / 4 hbar) = 1e-18; dropped mass <= 1e-16.
    return std::sqrt(4.0 * hbar * std::log(1e18));
}

long double PhaseFunction::lift_l(long double t) const {
    if (custom_lift) return custom_lift(t);
    const long double frac = t - std::floor(static_cast<double>(t));
    return static_cast<long double>(rho) * t + fn_eval_l(periodic, frac);
}

double PhaseFunction::slope(double t) const {
    if (custom_slope) return custom_slope(t);
    const double frac = circle_reduce(t);
    return rho + fn_derivative(periodic, frac, PiecewiseGrid::Side::right);
}

double PhaseFunction::sup_slope() const {
    if (custom_slope) {
        double b = 0.0;
        for (int j = 0; j < 1024; ++j) b = std::max(b, std::fabs(custom_slope(j / 1024.0)));
        return b * 1.05;
    }
    if (const auto* t = std::get_if<TrigPoly>(&periodic))
        return std::fabs(rho) + t->derivative().sup_bound();
    const auto& g = std::get<PiecewiseGrid>(periodic);
    double b = 0.0;
    const int n = 2 * g.size();
    for (int j = 0; j < n; ++j) {
        const double z = (j + 0.25) / n;  // off-node, off-breakpoint almost surely
        b = std::max(b, std::fabs(g.derivative(z, PiecewiseGrid::Side::right)));
    }
    return std::fabs(rho) + 1.05 * b;
}

namespace {

std::complex<long double> wavepacket_sum(double x, double xi, double hbar, double z,
                                         int kmin, int kmax) {
    const long double inv_h = 1.0L / static_cast<long double>(hbar);
    const long double quarter = 0.25L * inv_h;
    std::complex<long double> acc(0.0L, 0.0L);
    for (int k = kmin; k <= kmax; ++k) {
        const long double t = static_cast<long double>(z) - k;
        const long double d = t - static_cast<long double>(x);
        const long double g = d * d * quarter;
        if (g > kExpCut) continue;
        const long double theta = static_cast<long double>(xi) * t * inv_h;
        acc += std::exp(-g) * cis(theta);
    }
    return acc;
}

std::complex<long double> lagrangian_sum(const PhaseFunction& S, double x, double hbar,
                                         double z, int kmin, int kmax) {
    const long double inv_h = 1.0L / static_cast<long double>(hbar);
    const long double quarter = 0.25L * inv_h;
    std::complex<long double> acc(0.0L, 0.0L);
    for (int k = kmin; k <= kmax; ++k) {
        const long double t = static_cast<long double>(z) - k;
        const long double d = t - static_cast<long double>(x);
        const long double g = d * d * quarter;
        if (g > kExpCut) continue;
        const long double theta = S.lift_l(t) * inv_h;
        acc += std::exp(-g) * cis(theta);
    }
    return acc;
}

void k_window(double x, double hbar, double z, int& kmin, int& kmax) {
    const double R = truncation_radius(hbar);
    kmin = static_cast<int>(std::ceil(z - x - R));
    kmax = static_cast<int>(std::floor(z - x + R));
    const int knear = static_cast<int>(std::lround(z - x));
    kmin = std::min(kmin, knear);
    kmax = std::max(kmax, knear);
}

}  // namespace

std::complex<double> eval_wavepacket(const WavepacketParams& p, double z) {
    int kmin, kmax;
    k_window(p.x, p.hbar, z, kmin, kmax);
    return down(wavepacket_sum(p.x, p.xi, p.hbar, z, kmin, kmax));
}

std::complex<double> eval_wavepacket_window(const WavepacketParams& p, double z, int kmax) {
    return down(wavepacket_sum(p.x, p.xi, p.hbar, z, -kmax, kmax));
}

std::complex<double> eval_lagrangian(const LagrangianParams& p, double z) {
    int kmin, kmax;
    k_window(p.x, p.hbar, z, kmin, kmax);
    return down(lagrangian_sum(p.S, p.x, p.hbar, z, kmin, kmax));
}

std::complex<double> eval_lagrangian_window(const LagrangianParams& p, double z, int kmax) {
    return down(lagrangian_sum(p.S, p.x, p.hbar, z, -kmax, kmax));
}

QuantumState QuantumState::wavepacket(const WavepacketParams& p) {
    validate_hbar(p.hbar);
    QuantumState s;
    s.hbar_ = p.hbar;
    const WavepacketParams params{circle_reduce(p.x), p.xi, p.hbar};
    s.eval_ = [params](double z) { return eval_wavepacket(params, z); };
    s.provenance_ = "wavepacket";
    return s;
}

QuantumState QuantumState::lagrangian(const LagrangianParams& p) {
    validate_hbar(p.hbar);
    QuantumState s;
    s.hbar_ = p.hbar;
    const LagrangianParams params{p.S, circle_reduce(p.x), p.hbar};
    s.eval_ = [params](double z) { return eval_lagrangian(params, z); };
    s.provenance_ = "lagrangian";
    return s;
}

QuantumState QuantumState::zero(double hbar) {
    validate_hbar(hbar);
    QuantumState s;
    s.hbar_ = hbar;
    s.eval_ = [](double) { return std::complex<double>(0.0, 0.0); };
    s.provenance_ = "zero";
    return s;
}

QuantumState QuantumState::custom(double hbar, std::function<std::complex<double>(double)> f,
                                  std::string provenance) {
    validate_hbar(hbar);
    QuantumState s;
    s.hbar_ = hbar;
    s.eval_ = std::move(f);
    s.provenance_ = std::move(provenance);
    return s;
}

QuantumState evolve(const QuantumState& state, const EvolutionSpec& spec) {
    QuantumState out;
    out.hbar_ = state.hbar_;
    const double nu = spec.nu_at(state.hbar_);
    const auto parent = state.eval_;
    const MapSpec f = spec.f;
    const TrigPoly tau = spec.tau;
    out.eval_ = [parent, f, tau, nu](double z) {
        const std::complex<double> v = parent(eval_map(f, z));
        const long double theta = static_cast<long double>(nu) * tau.eval_l(z);
        const std::complex<long double> ph(std::cos(theta), std::sin(theta));
        return std::complex<double>(
            static_cast<double>(v.real() * ph.real() - v.imag() * ph.imag()),
            static_cast<double>(v.real() * ph.imag() + v.imag() * ph.real()));
    };
    out.provenance_ = "evolved(" + state.provenance_ + ")";
    return out;
}

}  // namespace mlc
