#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>

#include "mlc/maps.hpp"
#include "mlc/periodic.hpp"

namespace mlc {

/// Periodic Gaussian wavepacket parameters: mean position x, momentum xi,
/// semiclassical parameter hbar (position variance sqrt(hbar)).
struct WavepacketParams {
    double x = 0.5;
    double xi = 0.0;
    double hbar = 0.01;
};

/// Phase function S: R -> R stored as a linear drift plus a periodic part,
/// S(t) = rho * t + P(t mod 1). This is the minimal extension of data given
/// on [0,1) to the whole line, and it makes the k-shifted copies cheap:
/// S(z - k) = S(z) - rho * k for z in [0,1).
/// A raw lift can be supplied instead (tests and one-off experiments); such
/// phase functions do not serialize.
struct PhaseFunction {
    double rho = 0.0;
    PeriodicFunction periodic = TrigPoly{};
    std::function<long double(long double)> custom_lift;   // optional
    std::function<double(double)> custom_slope;            // optional

    long double lift_l(long double t) const;
    double lift(double t) const { return static_cast<double>(lift_l(t)); }
    /// S'(t) = rho + P'(t mod 1); right limit at grid breakpoints.
    double slope(double t) const;
    double sup_slope() const;
    bool is_custom() const { return static_cast<bool>(custom_lift); }
};

struct LagrangianParams {
    PhaseFunction S;
    double x = 0.5;
    double hbar = 0.01;
};

/// Coupling of the potential phase: fixed nu, or the semiclassical rule
/// nu = 1/hbar resolved at evaluation time.
struct Coupling {
    enum class Mode { fixed, semiclassical };
    Mode mode = Mode::semiclassical;
    double nu = 1.0;  // used in fixed mode
    static Coupling fixed(double nu) { return {Mode::fixed, nu}; }
    static Coupling semiclassical() { return {Mode::semiclassical, 0.0}; }
};

/// One step of the quantum evolution: phi(z) -> phi(f(z)) e^{i nu tau(z)}.
struct EvolutionSpec {
    MapSpec f;
    TrigPoly tau;
    Coupling coupling = Coupling::semiclassical();
    double nu_at(double hbar) const {
        return coupling.mode == Coupling::Mode::fixed ? coupling.nu : 1.0 / hbar;
    }
};

/// An evaluable complex function on [0,1) carrying its hbar and a provenance
/// tag. Evaluation is pure and reentrant; states may be shared across
/// workers without synchronization.
class QuantumState {
public:
    QuantumState() = default;

    double hbar() const { return hbar_; }
    const std::string& provenance() const { return provenance_; }
    std::complex<double> operator()(double z) const { return eval_(z); }

    static QuantumState wavepacket(const WavepacketParams& p);
    static QuantumState lagrangian(const LagrangianParams& p);
    static QuantumState zero(double hbar);
    static QuantumState custom(double hbar, std::function<std::complex<double>(double)> f,
                               std::string provenance = "custom");

    friend QuantumState evolve(const QuantumState& state, const EvolutionSpec& spec);

private:
    double hbar_ = 0.01;
    std::function<std::complex<double>(double)> eval_;
    std::string provenance_ = "zero";
};

QuantumState evolve(const QuantumState& state, const EvolutionSpec& spec);

/// Direct evaluations. The k-sum is truncated at radius
/// R(hbar) = sqrt(4 hbar ln(1/eps_trunc)), eps_trunc = 1e-18, so the dropped
/// mass is below 1e-16 for all admissible hbar. The window variants pin the
/// k-range explicitly and exist for truncation experiments.
std::complex<double> eval_wavepacket(const WavepacketParams& p, double z);
std::complex<double> eval_wavepacket_window(const WavepacketParams& p, double z, int kmax);
std::complex<double> eval_lagrangian(const LagrangianParams& p, double z);
std::complex<double> eval_lagrangian_window(const LagrangianParams& p, double z, int kmax);

/// Truncation radius used by the production evaluators.
double truncation_radius(double hbar);

/// Validates hbar in (0, 0.1]; throws std::invalid_argument otherwise.
void validate_hbar(double hbar);

}  // namespace mlc
