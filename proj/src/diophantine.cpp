#include "mlc/diophantine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mlc {

namespace {

// Continued-fraction expansion of alpha with convergent denominators capped
// at q_max. Terminates early when the remainder is rational to machine
// precision.
struct CfExpansion {
    std::vector<std::int64_t> a;          // partial quotients a_1, a_2, ...
    std::vector<std::int64_t> p, q;       // convergents p_k / q_k
    bool terminated = false;              // alpha rational within the cap
};

CfExpansion expand(double alpha, std::int64_t q_max) {
    CfExpansion cf;
    // p_{-1}/q_{-1} = 1/0, p_0/q_0 = a0/1 with a0 = floor(alpha) = 0 here.
    std::int64_t pm1 = 1, qm1 = 0;
    std::int64_t p0 = static_cast<std::int64_t>(std::floor(alpha)), q0 = 1;
    cf.p.push_back(p0);
    cf.q.push_back(q0);
    double x = alpha - std::floor(alpha);
    for (int k = 0; k < 64; ++k) {
        if (x < 1e-15) {
            cf.terminated = true;
            break;
        }
        const double inv = 1.0 / x;
        const double fa = std::floor(inv);
        if (fa > 9.0e18) {
            cf.terminated = true;  // effectively rational
            break;
        }
        const std::int64_t ak = static_cast<std::int64_t>(fa);
        x = inv - fa;
        const std::int64_t pk = ak * p0 + pm1;
        const std::int64_t qk = ak * q0 + qm1;
        cf.a.push_back(ak);
        pm1 = p0;
        qm1 = q0;
        p0 = pk;
        q0 = qk;
        cf.p.push_back(pk);
        cf.q.push_back(qk);
        if (qk > q_max) break;
    }
    return cf;
}

}  // namespace

std::vector<std::pair<std::int64_t, std::int64_t>> diophantine_candidates(
    double alpha, std::int64_t q_max) {
    const CfExpansion cf = expand(alpha, q_max);
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    // Convergents and the mediants between consecutive ones
    // (p_{k-1} + t p_k) / (q_{k-1} + t q_k), t = 1..a_{k+1}: best
    // approximations of the second kind live here.
    for (std::size_t k = 0; k < cf.p.size(); ++k)
        if (cf.q[k] <= q_max && cf.q[k] >= 1) out.emplace_back(cf.p[k], cf.q[k]);
    for (std::size_t k = 0; k + 1 < cf.p.size(); ++k) {
        const std::int64_t ak1 = k < cf.a.size() ? cf.a[k] : 0;
        for (std::int64_t t = 1; t < ak1; ++t) {
            const std::int64_t pm = (k == 0 ? 1 : cf.p[k - 1]) + t * cf.p[k];
            const std::int64_t qm = (k == 0 ? 0 : cf.q[k - 1]) + t * cf.q[k];
            if (qm >= 1 && qm <= q_max) out.emplace_back(pm, qm);
        }
    }
    // Also p/1 on both sides (q = 1 floor/ceil), cheap completeness.
    out.emplace_back(static_cast<std::int64_t>(std::floor(alpha)), 1);
    out.emplace_back(static_cast<std::int64_t>(std::ceil(alpha)), 1);
    return out;
}

DiophantineReport diophantine_check(double alpha, const DiophantineParams& params) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("diophantine_check: need 0 < alpha < 1");
    if (!(params.K > 0.0) || params.q_max <= 0)
        throw std::invalid_argument("diophantine_check: need K > 0 and q_max > 0");

    DiophantineReport rep;
    const CfExpansion cf = expand(alpha, params.q_max);
    if (cf.terminated) {
        rep.satisfied = false;
        rep.rational = true;
        rep.margin = -params.K;
        rep.worst_q = cf.q.empty() ? 1 : cf.q.back();
        return rep;
    }
    double best = std::numeric_limits<double>::infinity();
    std::int64_t best_q = 1;
    for (const auto& [p, q] : diophantine_candidates(alpha, params.q_max)) {
        const double slack =
            std::fabs(alpha - static_cast<double>(p) / static_cast<double>(q)) *
                std::pow(static_cast<double>(q), 2.0 + params.beta) -
            params.K;
        if (slack < best) {
            best = slack;
            best_q = q;
        }
    }
    rep.margin = best;
    rep.worst_q = best_q;
    rep.satisfied = best > 0.0;
    return rep;
}

}  // namespace mlc
