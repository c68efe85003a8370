#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace mlc {

/// Real-valued trigonometric polynomial z -> sum_{|n|<=N} c_n e^{2(pi)inz}.
/// Only the coefficients for n >= 0 are stored; c_{-n} = conj(c_n) is implied,
/// which enforces real-valuedness by construction.
class TrigPoly {
public:
    TrigPoly() : c_(1, std::complex<double>(0.0, 0.0)) {}

    /// Build from (n, c_n) pairs with arbitrary signs of n. Pairs with n < 0
    /// must be conjugate-consistent with their positive partners (checked to
    /// 1e-12); missing partners are filled in by symmetry.
    static TrigPoly from_modes(const std::vector<std::pair<int, std::complex<double>>>& modes);

    static TrigPoly constant(double c);
    /// amp * cos(2 pi n z)
    static TrigPoly cosine(int n, double amp);
    /// amp * sin(2 pi n z)
    static TrigPoly sine(int n, double amp);

    int max_mode() const { return static_cast<int>(c_.size()) - 1; }
    std::complex<double> coeff(int n) const;
    void set_coeff(int n, std::complex<double> v);

    double operator()(double z) const;
    /// Extended-precision evaluation; used wherever the value enters a phase
    /// that is later divided by hbar.
    long double eval_l(long double z) const;

    TrigPoly derivative() const;
    /// Lift primitive F with F(0) = 0; includes the non-periodic c_0 * z drift.
    double antiderivative_at(double z) const;
    double mean() const { return c_[0].real(); }
    /// Rigorous sup bound |c_0| + 2 sum_{n>=1} |c_n|.
    double sup_bound() const;

    /// z -> value(z + alpha); exact coefficient twist by e^{2 pi i n alpha}.
    TrigPoly shifted(double alpha) const;

    TrigPoly operator+(const TrigPoly& o) const;
    TrigPoly operator-(const TrigPoly& o) const;
    TrigPoly scaled(double s) const;

    bool operator==(const TrigPoly& o) const;

private:
    std::vector<std::complex<double>> c_;  // c_[n] for n >= 0
    void trim();
};

}  // namespace mlc
