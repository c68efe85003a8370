#include "mlc/trigpoly.hpp"

#include <cmath>
#include <stdexcept>

#include "mlc/circle.hpp"

namespace mlc {

namespace {
constexpr long double kTwoPiL = 6.283185307179586476925286766559L;
}

TrigPoly TrigPoly::from_modes(const std::vector<std::pair<int, std::complex<double>>>& modes) {
    int nmax = 0;
    for (const auto& [n, c] : modes) nmax = std::max(nmax, std::abs(n));
    std::vector<std::complex<double>> pos(nmax + 1, 0.0);
    std::vector<bool> seen_pos(nmax + 1, false), seen_neg(nmax + 1, false);
    std::vector<std::complex<double>> neg(nmax + 1, 0.0);
    for (const auto& [n, c] : modes) {
        if (n >= 0) {
            pos[n] += c;
            seen_pos[n] = true;
        } else {
            neg[-n] += c;
            seen_neg[-n] = true;
        }
    }
    for (int n = 1; n <= nmax; ++n) {
        if (seen_pos[n] && seen_neg[n]) {
            if (std::abs(neg[n] - std::conj(pos[n])) > 1e-12)
                throw std::invalid_argument("TrigPoly: c_{-n} != conj(c_n) for n=" +
                                            std::to_string(n));
        } else if (seen_neg[n]) {
            pos[n] = std::conj(neg[n]);
        }
    }
    if (std::abs(pos[0].imag()) > 1e-12)
        throw std::invalid_argument("TrigPoly: c_0 must be real");
    pos[0] = std::complex<double>(pos[0].real(), 0.0);
    TrigPoly t;
    t.c_ = std::move(pos);
    t.trim();
    return t;
}

TrigPoly TrigPoly::constant(double c) {
    TrigPoly t;
    t.c_[0] = c;
    return t;
}

TrigPoly TrigPoly::cosine(int n, double amp) {
    if (n <= 0) throw std::invalid_argument("TrigPoly::cosine: n must be positive");
    TrigPoly t;
    t.c_.assign(n + 1, 0.0);
    t.c_[n] = std::complex<double>(amp / 2.0, 0.0);
    return t;
}

TrigPoly TrigPoly::sine(int n, double amp) {
    if (n <= 0) throw std::invalid_argument("TrigPoly::sine: n must be positive");
    TrigPoly t;
    t.c_.assign(n + 1, 0.0);
    t.c_[n] = std::complex<double>(0.0, -amp / 2.0);  // sin = (e^{i.} - e^{-i.}) / 2i
    return t;
}

std::complex<double> TrigPoly::coeff(int n) const {
    int a = std::abs(n);
    if (a >= static_cast<int>(c_.size())) return 0.0;
    return n >= 0 ? c_[a] : std::conj(c_[a]);
}

void TrigPoly::set_coeff(int n, std::complex<double> v) {
    int a = std::abs(n);
    if (a >= static_cast<int>(c_.size())) c_.resize(a + 1, 0.0);
    if (n == 0) {
        if (std::abs(v.imag()) > 1e-12)
            throw std::invalid_argument("TrigPoly: c_0 must be real");
        c_[0] = std::complex<double>(v.real(), 0.0);
    } else {
        c_[a] = n >= 0 ? v : std::conj(v);
    }
}

double TrigPoly::operator()(double z) const {
    return static_cast<double>(eval_l(static_cast<long double>(z)));
}

long double TrigPoly::eval_l(long double z) const {
    // value = c_0 + 2 sum_{n>=1} Re(c_n e^{2 pi i n z})
    long double acc = c_[0].real();
    const long double base = kTwoPiL * (z - std::floor(static_cast<double>(z)));
    for (int n = 1; n < static_cast<int>(c_.size()); ++n) {
        const long double th = base * n;
        acc += 2.0L * (static_cast<long double>(c_[n].real()) * std::cos(th) -
                       static_cast<long double>(c_[n].imag()) * std::sin(th));
    }
    return acc;
}

TrigPoly TrigPoly::derivative() const {
    TrigPoly d;
    d.c_.assign(c_.size(), 0.0);
    for (int n = 1; n < static_cast<int>(c_.size()); ++n)
        d.c_[n] = std::complex<double>(0.0, kTwoPi * n) * c_[n];
    d.trim();
    return d;
}

double TrigPoly::antiderivative_at(double z) const {
    // F(z) = c_0 z + sum_{n>=1} 2 Re(c_n (e^{2 pi i n z} - 1) / (2 pi i n))
    long double acc = static_cast<long double>(c_[0].real()) * z;
    for (int n = 1; n < static_cast<int>(c_.size()); ++n) {
        const long double th = kTwoPiL * n * z;
        const std::complex<long double> cn(c_[n].real(), c_[n].imag());
        const std::complex<long double> e(std::cos(th) - 1.0L, std::sin(th));
        const std::complex<long double> div(0.0L, kTwoPiL * n);
        acc += 2.0L * (cn * e / div).real();
    }
    return static_cast<double>(acc);
}

double TrigPoly::sup_bound() const {
    double b = std::abs(c_[0]);
    for (std::size_t n = 1; n < c_.size(); ++n) b += 2.0 * std::abs(c_[n]);
    return b;
}

TrigPoly TrigPoly::shifted(double alpha) const {
    TrigPoly t;
    t.c_.assign(c_.size(), 0.0);
    t.c_[0] = c_[0];
    for (int n = 1; n < static_cast<int>(c_.size()); ++n) {
        const double th = kTwoPi * n * alpha;
        t.c_[n] = c_[n] * std::complex<double>(std::cos(th), std::sin(th));
    }
    return t;
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const {
    TrigPoly t;
    t.c_.assign(std::max(c_.size(), o.c_.size()), 0.0);
    for (std::size_t n = 0; n < t.c_.size(); ++n) {
        if (n < c_.size()) t.c_[n] += c_[n];
        if (n < o.c_.size()) t.c_[n] += o.c_[n];
    }
    t.trim();
    return t;
}

TrigPoly TrigPoly::operator-(const TrigPoly& o) const { return *this + o.scaled(-1.0); }

TrigPoly TrigPoly::scaled(double s) const {
    TrigPoly t = *this;
    for (auto& c : t.c_) c *= s;
    return t;
}

bool TrigPoly::operator==(const TrigPoly& o) const {
    const std::size_t n = std::max(c_.size(), o.c_.size());
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> a = k < c_.size() ? c_[k] : 0.0;
        std::complex<double> b = k < o.c_.size() ? o.c_[k] : 0.0;
        if (a != b) return false;
    }
    return true;
}

void TrigPoly::trim() {
    while (c_.size() > 1 && c_.back() == std::complex<double>(0.0, 0.0)) c_.pop_back();
}

}  // namespace mlc
