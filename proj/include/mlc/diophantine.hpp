#pragma once

#include <cstdint>
#include <vector>

namespace mlc {

struct DiophantineParams {
    double K = 0.1;
    double beta = 0.0;
    std::int64_t q_max = 10000;
};

struct DiophantineReport {
    bool satisfied = false;
    std::int64_t worst_q = 0;   // q attaining the minimal slack
    double margin = 0.0;        // min over candidates of |alpha - p/q| q^(2+beta) - K
    bool rational = false;      // continued fraction terminated within q_max
};

/// Rational candidates p/q with q <= q_max that can realize the infimum of
/// |alpha - p/q| q^(2+beta): continued-fraction convergents and their
/// mediants (semiconvergents).
std::vector<std::pair<std::int64_t, std::int64_t>> diophantine_candidates(
    double alpha, std::int64_t q_max);

/// Checks |alpha - p/q| > K / q^(2+beta) over all reduced p/q with q <= q_max.
/// A terminating continued fraction (alpha rational to machine precision)
/// reports satisfied = false with margin = -K.
DiophantineReport diophantine_check(double alpha, const DiophantineParams& params);

}  // namespace mlc
