#include "mlc/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mlc/circle.hpp"

namespace mlc {

double inverse_branch(int i, double x) {
    const double xf = circle_reduce(x);
    if (i == 1) return xf / 2.0;
    if (i == 2) return xf / 2.0 + 0.5;
    throw std::invalid_argument("inverse_branch: branch index must be 1 or 2");
}

int branch_index(double x) { return circle_reduce(x) < 0.5 ? 1 : 2; }

SymbolSequence SymbolSequence::constant(int digit, int length) {
    if (digit != 1 && digit != 2)
        throw std::invalid_argument("SymbolSequence: digits must be 1 or 2");
    SymbolSequence s;
    s.digits.assign(length, static_cast<std::uint8_t>(digit));
    return s;
}

bool SymbolSequence::operator<(const SymbolSequence& o) const {
    if (digits.size() != o.digits.size())
        throw std::invalid_argument("SymbolSequence: lexicographic order needs equal lengths");
    return digits < o.digits;
}

std::pair<double, double> skew_forward(const SkewSpec& spec, double z, double s) {
    return {eval_map(spec.f, z), spec.lambda * s + fn_eval(spec.A, circle_reduce(z))};
}

std::array<std::pair<double, double>, 2> skew_inverse_branches(const SkewSpec& spec,
                                                               double y, double r) {
    if (spec.f.kind != MapSpec::Kind::doubling)
        throw std::invalid_argument("skew_inverse_branches: base map must be doubling");
    std::array<std::pair<double, double>, 2> out;
    for (int i = 1; i <= 2; ++i) {
        const double yi = inverse_branch(i, y);
        out[i - 1] = {yi, (r - fn_eval(spec.A, yi)) / spec.lambda};
    }
    return out;
}

TsujiiResult tsujii_series(const SkewSpec& spec, double x, const SymbolSequence& a) {
    if (spec.f.kind != MapSpec::Kind::doubling)
        throw std::invalid_argument("tsujii_series: base map must be doubling");
    if (a.digits.empty()) throw std::invalid_argument("tsujii_series: depth K >= 1 required");
    long double acc = 0.0L;
    long double pw = 1.0L;
    double w = circle_reduce(x);
    for (std::uint8_t d : a.digits) {
        w = inverse_branch(d, w);
        acc += pw * fn_eval(spec.A, w);
        pw *= spec.lambda;
    }
    TsujiiResult r;
    r.value = static_cast<double>(acc);
    r.tail_bound = std::pow(spec.lambda, static_cast<double>(a.digits.size())) *
                   fn_sup_bound(spec.A) / (1.0 - spec.lambda);
    return r;
}

namespace {

double sup_tree_rec(const SkewSpec& spec, double x, int K) {
    if (K == 0) return 0.0;
    const double y1 = x / 2.0, y2 = x / 2.0 + 0.5;
    const double v1 = fn_eval(spec.A, y1) + spec.lambda * sup_tree_rec(spec, y1, K - 1);
    const double v2 = fn_eval(spec.A, y2) + spec.lambda * sup_tree_rec(spec, y2, K - 1);
    return std::max(v1, v2);
}

// Plain periodic degree-4 Lagrange on M uniform samples (no breakpoints).
double interp_periodic(const std::vector<double>& s, double y) {
    const int M = static_cast<int>(s.size());
    const double yf = circle_reduce(y);
    const int c = static_cast<int>(std::lround(yf * M));
    long double acc = 0.0L;
    long double t[5];
    long double v[5];
    for (int i = 0; i < 5; ++i) {
        const int j = c - 2 + i;
        t[i] = static_cast<long double>(j) / M;
        v[i] = s[((j % M) + M) % M];
    }
    for (int i = 0; i < 5; ++i) {
        long double li = 1.0L;
        for (int k = 0; k < 5; ++k)
            if (k != i) li *= (static_cast<long double>(yf) - t[k]) / (t[i] - t[k]);
        acc += v[i] * li;
    }
    return static_cast<double>(acc);
}

// Degree-4 Lagrange with stencils clamped to the arc between breakpoints.
double interp_bp(const std::vector<double>& s, const std::vector<double>& bp, double y) {
    const int M = static_cast<int>(s.size());
    const double yf = circle_reduce(y);
    if (bp.empty()) return interp_periodic(s, yf);
    double left, right;
    auto it = std::upper_bound(bp.begin(), bp.end(), yf);
    if (it == bp.begin()) {
        left = bp.back() - 1.0;
        right = bp.front();
    } else {
        left = *(it - 1);
        right = (it == bp.end()) ? bp.front() + 1.0 : *it;
    }
    const int jl = static_cast<int>(std::ceil(left * M - 1e-9));
    const int jr = static_cast<int>(std::ceil(right * M - 1e-9)) - 1;
    if (jr < jl) return interp_periodic(s, yf);
    const int c = static_cast<int>(std::lround(yf * M));
    const int lo = std::clamp(c - 2, jl, std::max(jl, jr - 4));
    const int hi = std::min(jr, lo + 4);
    const int n = hi - lo + 1;
    long double acc = 0.0L;
    long double t[5], v[5];
    for (int i = 0; i < n; ++i) {
        const int j = lo + i;
        t[i] = static_cast<long double>(j) / M;
        v[i] = s[((j % M) + M) % M];
    }
    for (int i = 0; i < n; ++i) {
        long double li = 1.0L;
        for (int k = 0; k < n; ++k)
            if (k != i) li *= (static_cast<long double>(yf) - t[k]) / (t[i] - t[k]);
        acc += v[i] * li;
    }
    return static_cast<double>(acc);
}

}  // namespace

double sup_over_sequences_tree(const SkewSpec& spec, double x, int K) {
    if (spec.f.kind != MapSpec::Kind::doubling)
        throw std::invalid_argument("sup_over_sequences: base map must be doubling");
    if (K < 1 || K > 26)
        throw std::invalid_argument("sup_over_sequences_tree: K must lie in [1, 26]");
    return sup_tree_rec(spec, circle_reduce(x), K);
}

double sup_over_sequences_grid(const SkewSpec& spec, double x, int K, int M) {
    if (spec.f.kind != MapSpec::Kind::doubling)
        throw std::invalid_argument("sup_over_sequences: base map must be doubling");
    if (M < 64) throw std::invalid_argument("sup_over_sequences_grid: need M >= 64");
    std::vector<double> w(M, 0.0), next(M);
    for (int depth = 0; depth < K; ++depth) {
        for (int i = 0; i < M; ++i) {
            const double z = static_cast<double>(i) / M;
            const double y1 = z / 2.0, y2 = z / 2.0 + 0.5;
            const double v1 = fn_eval(spec.A, y1) + spec.lambda * interp_periodic(w, y1);
            const double v2 = fn_eval(spec.A, y2) + spec.lambda * interp_periodic(w, y2);
            next[i] = std::max(v1, v2);
        }
        w.swap(next);
    }
    return interp_periodic(w, circle_reduce(x));
}

double involution_kernel(const SkewSpec& spec, double x, const SymbolSequence& a,
                         double xbar) {
    return tsujii_series(spec, x, a).value - tsujii_series(spec, xbar, a).value;
}

SubactionSolution solve_subaction(const SkewSpec& spec, int M, double tol, int max_iter) {
    if (spec.f.kind != MapSpec::Kind::doubling)
        throw std::invalid_argument("solve_subaction: base map must be doubling");
    if (!(spec.lambda > 0.0 && spec.lambda < 1.0))
        throw std::invalid_argument("solve_subaction: need lambda in (0,1)");
    if (M < 64) throw std::invalid_argument("solve_subaction: need M >= 64");

    const double lam = spec.lambda;
    std::vector<double> b(M, 0.0), next(M);
    std::vector<std::uint8_t> branch(M, 1);
    std::vector<double> bps;  // refined breakpoints, sorted
    std::vector<double> update_norms;
    int iterations = 0;
    bool converged = false;

    auto value_at = [&](double y) {
        return bps.empty() ? interp_periodic(b, y) : interp_bp(b, bps, y);
    };
    auto sweep = [&]() {
        double delta = 0.0;
        for (int i = 0; i < M; ++i) {
            const double z = static_cast<double>(i) / M;
            const double y1 = z / 2.0, y2 = z / 2.0 + 0.5;
            const double v1 = lam * value_at(y1) + fn_eval(spec.A, y1);
            const double v2 = lam * value_at(y2) + fn_eval(spec.A, y2);
            if (v1 >= v2) {  // ties toward branch 1
                next[i] = v1;
                branch[i] = 1;
            } else {
                next[i] = v2;
                branch[i] = 2;
            }
            delta = std::max(delta, std::fabs(next[i] - b[i]));
        }
        b.swap(next);
        return delta;
    };
    auto iterate_to_tol = [&]() {
        while (iterations < max_iter) {
            const double d = sweep();
            ++iterations;
            update_norms.push_back(d);
            if (d <= tol) return true;
        }
        return false;
    };

    converged = iterate_to_tol();

    // Refine branch-switch points to sub-grid accuracy and collect the kinks
    // they induce along their forward orbits (jump decays by lambda/f' per
    // image). Then re-converge with stencils that respect the kinks.
    auto detect_refine = [&]() {
        std::vector<double> out;
        for (int i = 0; i < M; ++i) {
            const int j = (i + 1) % M;
            if (branch[i] == branch[j]) continue;
            double lo = static_cast<double>(i) / M;
            double hi = static_cast<double>(i + 1) / M;
            auto diff = [&](double z) {
                const double y1 = z / 2.0, y2 = z / 2.0 + 0.5;
                return (lam * value_at(y1) + fn_eval(spec.A, y1)) -
                       (lam * value_at(y2) + fn_eval(spec.A, y2));
            };
            double dlo = diff(lo);
            if ((dlo < 0.0) == (diff(hi) < 0.0)) {
                out.push_back(lo);
                continue;
            }
            for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((diff(mid) < 0.0) == (dlo < 0.0)) {
                    lo = mid;
                    dlo = diff(lo);
                } else {
                    hi = mid;
                }
            }
            out.push_back(circle_reduce(0.5 * (lo + hi)));
        }
        // Forward images carry the kink with geometrically shrinking jumps.
        const std::size_t primary = out.size();
        for (std::size_t k = 0; k < primary; ++k) {
            double w = out[k];
            for (int m = 0; m < 20; ++m) {
                w = eval_map(spec.f, w);
                out.push_back(w);
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end(),
                              [&](double a, double c) { return std::fabs(a - c) < 1.5 / M; }),
                  out.end());
        if (out.size() > 1 && (1.0 - out.back()) < 1.5 / M && out.front() < 1.5 / M)
            out.pop_back();
        return out;
    };

    if (converged) {
        bps = detect_refine();
        if (!bps.empty()) {
            converged = iterate_to_tol();
            bps = detect_refine();
            if (!bps.empty()) converged = iterate_to_tol() && converged;
        }
    }

    // Final self-consistency residual under the final interpolant.
    double residual = 0.0;
    for (int i = 0; i < M; ++i) {
        const double z = static_cast<double>(i) / M;
        const double y1 = z / 2.0, y2 = z / 2.0 + 0.5;
        const double v = std::max(lam * value_at(y1) + fn_eval(spec.A, y1),
                                  lam * value_at(y2) + fn_eval(spec.A, y2));
        residual = std::max(residual, std::fabs(v - b[i]));
    }

    double ratio = 0.0;
    {
        std::vector<double> rs;
        for (std::size_t k = 5; k + 1 < update_norms.size() && k < 20; ++k)
            if (update_norms[k] > 0.0) rs.push_back(update_norms[k + 1] / update_norms[k]);
        if (!rs.empty()) {
            std::sort(rs.begin(), rs.end());
            ratio = rs[rs.size() / 2];
        }
    }

    SubactionSolution sol{PiecewiseGrid(b, bps), residual, iterations, branch, ratio,
                          converged};
    return sol;
}

TwistReport twist_check(const SkewSpec& spec, const std::vector<double>& x_grid,
                        const std::vector<std::pair<SymbolSequence, SymbolSequence>>& pairs,
                        int K, double h_fd) {
    if (pairs.empty()) throw std::invalid_argument("twist_check: no pairs given");
    for (const auto& [a, bseq] : pairs) {
        if (a.digits.size() != bseq.digits.size())
            throw std::invalid_argument("twist_check: prefixes must have equal length");
        if (!(a < bseq))
            throw std::invalid_argument("twist_check: pairs must satisfy a < b lexicographically");
    }
    for (double x : x_grid) {
        if (wrap_distance(x, 0.0) <= 2.0 * h_fd || wrap_distance(x, 0.5) <= 2.0 * h_fd)
            throw std::invalid_argument("twist_check: x_grid must avoid branch boundaries 0, 1/2");
    }
    const std::vector<double>* a_bps = nullptr;
    if (const auto* g = std::get_if<PiecewiseGrid>(&spec.A)) a_bps = &g->breakpoints();

    auto straddles = [&](double x, const SymbolSequence& seq) {
        if (!a_bps || a_bps->empty()) return false;
        double wm = circle_reduce(x - h_fd), wp = circle_reduce(x + h_fd);
        for (std::uint8_t d : seq.digits) {
            wm = inverse_branch(d, wm);
            wp = inverse_branch(d, wp);
            for (double bp : *a_bps)
                if ((wm - bp) * (wp - bp) < 0.0) return true;
        }
        return false;
    };

    SymbolSequence trunc;
    TwistReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (double x : x_grid) {
        for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
            auto prefix = [&](const SymbolSequence& s) {
                SymbolSequence t = s;
                if (static_cast<int>(t.digits.size()) > K) t.digits.resize(K);
                return t;
            };
            const SymbolSequence a = prefix(pairs[pi].first);
            const SymbolSequence bseq = prefix(pairs[pi].second);
            if (straddles(x, a) || straddles(x, bseq)) {
                ++rep.skipped_cells;
                continue;
            }
            auto dsdx = [&](const SymbolSequence& s) {
                return (tsujii_series(spec, x + h_fd, s).value -
                        tsujii_series(spec, x - h_fd, s).value) /
                       (2.0 * h_fd);
            };
            const double margin = dsdx(a) - dsdx(bseq);
            if (margin < rep.min_margin) {
                rep.min_margin = margin;
                rep.witness_x = x;
                rep.witness_pair = pi;
            }
        }
    }
    if (!std::isfinite(rep.min_margin)) rep.min_margin = 0.0;
    rep.holds = rep.min_margin > 0.0;
    return rep;
}

CoboundaryReport coboundary_residual(const PeriodicFunction& u, const TrigPoly& tau,
                                     const MapSpec& f, double lambda, int M) {
    const TrigPoly dtau = tau.derivative();
    CoboundaryReport rep;
    if (f.kind == MapSpec::Kind::doubling) {
        long double gap_sum = 0.0L;
        for (int i = 0; i < M; ++i) {
            const double z = static_cast<double>(i) / M;
            const double res =
                std::fabs(fn_eval(u, eval_map(f, z)) - lambda * fn_eval(u, z) +
                          0.5 * dtau(z));
            rep.max_residual_se = std::max(rep.max_residual_se, res);
            double gmin = std::numeric_limits<double>::infinity(), gmax = 0.0;
            for (double y : preimages(f, z)) {
                const double g =
                    std::fabs(fn_eval(u, z) -
                              (lambda * fn_eval(u, y) + (-0.5) * dtau(y)));
                gmin = std::min(gmin, g);
                gmax = std::max(gmax, g);
            }
            rep.max_gap = std::max(rep.max_gap, gmin);
            rep.max_offbranch_gap = std::max(rep.max_offbranch_gap, gmax);
            gap_sum += gmin;
        }
        rep.mean_gap = static_cast<double>(gap_sum / M);
    } else {
        for (int i = 0; i < M; ++i) {
            const double z = static_cast<double>(i) / M;
            const double res = std::fabs(fn_eval(u, z) -
                                         fn_eval(u, eval_map(f, z)) * map_derivative(f, z) -
                                         dtau(z));
            rep.max_residual_se = std::max(rep.max_residual_se, res);
        }
    }
    return rep;
}

}  // namespace mlc
