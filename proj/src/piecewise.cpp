#include "mlc/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mlc/circle.hpp"

namespace mlc {

namespace {
constexpr double kSnap = 1e-12;

// 5-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGLx[5] = {-0.9061798459386639928, -0.5384693101056830910, 0.0,
                            0.5384693101056830910, 0.9061798459386639928};
constexpr double kGLw[5] = {0.2369268850561890875, 0.4786286704993664680,
                            0.5688888888888888889, 0.4786286704993664680,
                            0.2369268850561890875};
}  // namespace

PiecewiseGrid::PiecewiseGrid(std::vector<double> samples, std::vector<double> breakpoints)
    : s_(std::move(samples)) {
    if (static_cast<int>(s_.size()) < 16)
        throw std::invalid_argument("PiecewiseGrid: need M >= 16 samples");
    for (double b : breakpoints) bp_.push_back(circle_reduce(b));
    std::sort(bp_.begin(), bp_.end());
    bp_.erase(std::unique(bp_.begin(), bp_.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-9; }),
              bp_.end());
    // A breakpoint at ~1 is the breakpoint at 0.
    if (bp_.size() > 1 && (1.0 - bp_.back()) < 1e-9 && bp_.front() < 1e-9) bp_.pop_back();
    build_cumulative();
}

PiecewiseGrid PiecewiseGrid::sample(const std::function<double(double)>& f, int M,
                                    std::vector<double> breakpoints) {
    std::vector<double> s(M);
    for (int j = 0; j < M; ++j) s[j] = f(static_cast<double>(j) / M);
    return PiecewiseGrid(std::move(s), std::move(breakpoints));
}

void PiecewiseGrid::stencil(double z, Side side, int& lo, int& hi, double& base) const {
    const int M = size();
    const double zf = circle_reduce(z);
    // Arc [left, right) containing zf, in lift coordinates around zf.
    double left = zf - 1.0, right = zf + 1.0;
    if (!bp_.empty()) {
        bool at_bp = false;
        double bpv = 0.0;
        for (double b : bp_) {
            if (wrap_distance(zf, b) <= kSnap) {
                at_bp = true;
                bpv = b;
                break;
            }
        }
        if (at_bp && side == Side::left) {
            // The piece ending at zf: (prev_bp, zf).
            right = zf;
            auto it = std::lower_bound(bp_.begin(), bp_.end(), bpv - kSnap);
            left = (it == bp_.begin()) ? bp_.back() - 1.0 : *(it - 1);
            if (left >= right) left -= 1.0;
        } else {
            auto it = std::upper_bound(bp_.begin(), bp_.end(), zf + kSnap);
            if (it == bp_.begin()) {
                left = bp_.back() - 1.0;
                right = bp_.front();
            } else {
                left = *(it - 1);
                right = (it == bp_.end()) ? bp_.front() + 1.0 : *it;
            }
            if (at_bp) left = bpv;  // right-limit convention
        }
    }
    // Sample lift-indices j with j/M in [left, right).
    const int jl = static_cast<int>(std::ceil(left * M - 1e-9));
    const int jr = static_cast<int>(std::ceil(right * M - 1e-9)) - 1;
    if (jr < jl) throw std::runtime_error("PiecewiseGrid: piece contains no samples");
    const int c = static_cast<int>(std::lround(zf * M));
    lo = std::clamp(c - 2, jl, std::max(jl, jr - 4));
    hi = std::min(jr, lo + 4);
    base = 0.0;
    (void)base;
}

double PiecewiseGrid::eval_stencil(double z, int lo, int hi, double /*base*/,
                                   bool deriv) const {
    const int M = size();
    const double zf = circle_reduce(z);
    const int n = hi - lo + 1;
    long double t[5], v[5];
    for (int i = 0; i < n; ++i) {
        const int j = lo + i;
        t[i] = static_cast<long double>(j) / M;  // lift position near zf
        int jm = ((j % M) + M) % M;
        v[i] = s_[jm];
    }
    const long double x = zf;
    if (!deriv) {
        long double acc = 0.0L;
        for (int i = 0; i < n; ++i) {
            long double li = 1.0L;
            for (int k = 0; k < n; ++k)
                if (k != i) li *= (x - t[k]) / (t[i] - t[k]);
            acc += v[i] * li;
        }
        return static_cast<double>(acc);
    }
    long double acc = 0.0L;
    for (int i = 0; i < n; ++i) {
        long double denom = 1.0L;
        for (int k = 0; k < n; ++k)
            if (k != i) denom *= (t[i] - t[k]);
        long double sum = 0.0L;
        for (int m = 0; m < n; ++m) {
            if (m == i) continue;
            long double prod = 1.0L;
            for (int k = 0; k < n; ++k)
                if (k != i && k != m) prod *= (x - t[k]);
            sum += prod;
        }
        acc += v[i] * sum / denom;
    }
    return static_cast<double>(acc);
}

double PiecewiseGrid::operator()(double z) const {
    int lo, hi;
    double base;
    stencil(z, Side::right, lo, hi, base);
    return eval_stencil(z, lo, hi, base, false);
}

long double PiecewiseGrid::eval_l(long double z) const {
    // Stencil arithmetic already runs in long double; the entry point only
    // fixes the chart.
    return operator()(static_cast<double>(z - std::floor(static_cast<double>(z))));
}

double PiecewiseGrid::derivative(double z) const {
    const double zf = circle_reduce(z);
    for (double b : bp_)
        if (wrap_distance(zf, b) <= kSnap)
            throw std::invalid_argument(
                "PiecewiseGrid::derivative: z is a breakpoint; pass a side");
    return derivative(z, Side::right);
}

double PiecewiseGrid::derivative(double z, Side side) const {
    int lo, hi;
    double base;
    stencil(z, side, lo, hi, base);
    return eval_stencil(z, lo, hi, base, true);
}

double PiecewiseGrid::mean() const {
    long double acc = 0.0L;
    for (double v : s_) acc += v;
    return static_cast<double>(acc / s_.size());
}

double PiecewiseGrid::sup_bound() const {
    const int M = size();
    double b = 0.0;
    for (int j = 0; j < 4 * M; ++j)
        b = std::max(b, std::fabs(operator()(static_cast<double>(j) / (4 * M))));
    return b;
}

void PiecewiseGrid::build_cumulative() {
    const int M = size();
    cum_.assign(M + 1, 0.0);
    long double acc = 0.0L;
    for (int j = 0; j < M; ++j) {
        const double a = static_cast<double>(j) / M;
        const double b = static_cast<double>(j + 1) / M;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        long double seg = 0.0L;
        for (int g = 0; g < 5; ++g) seg += kGLw[g] * operator()(mid + half * kGLx[g]);
        acc += seg * half;
        cum_[j + 1] = static_cast<double>(acc);
    }
}

double PiecewiseGrid::antiderivative_at(double z) const {
    const int M = size();
    const double period = cum_[M];
    const double k = std::floor(z);
    const double zf = z - k;
    const int j = std::min(static_cast<int>(zf * M), M - 1);
    const double a = static_cast<double>(j) / M;
    const double mid = 0.5 * (a + zf), half = 0.5 * (zf - a);
    long double seg = 0.0L;
    if (half > 0.0)
        for (int g = 0; g < 5; ++g) seg += kGLw[g] * operator()(mid + half * kGLx[g]);
    return k * period + cum_[j] + static_cast<double>(seg * half);
}

}  // namespace mlc
