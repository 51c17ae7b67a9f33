#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qrt/grover.hpp"
#include "qrt/rng.hpp"

namespace qrt {

// Adaptive exponential search parameters. The iteration schedule follows the
// published convention: M_l = round(c^l) for l = 0, 1, ... for as long as
// c^l <= ceil(sqrt(N)), each value clamped to that cap.
struct QSearchConfig {
    double c = 1.8;

    std::vector<int> schedule(std::uint64_t n_states) const;
};

struct SearchOutcome {
    std::int64_t index = -1;
    bool found = false;
    long long eval_count = 0;      // oracle (quantum) applications
    long long classical_checks = 0; // classical f(i) verifications
};

// The oracle marking over [0, 2^n_qubits).
struct OracleSpec {
    int n_qubits = 0;
    OraclePredicate marks;
};

// Adaptive exponential search for an unknown solution count. Every
// measurement is classically verified against f, so found=true is never a
// false positive. found=false may be a false negative.
SearchOutcome qsearch(const OracleSpec& oracle, const OraclePredicate& f,
                      const QSearchConfig& cfg, MeasureRng& rng);

struct MinimumResult {
    bool found = false;
    std::int64_t index = -1;
    std::int64_t value = 0;
    long long eval_count = 0;
    long long classical_checks = 0;
};

// Iterative minimum finding: repeatedly qsearch for a solution whose
// objective is strictly below the current best.
MinimumResult find_minimum(const OracleSpec& oracle, const OraclePredicate& f,
                           const std::function<std::int64_t(std::uint32_t)>& g,
                           int max_iters, const QSearchConfig& cfg,
                           MeasureRng& rng);

int default_minimum_iters(std::uint64_t n_states); // ceil(log2 N) + 5

// The published estimate of the qsearch false-negative probability under a
// uniform prior on the solution count (expected rotation count folded inside
// the closed form).
double fn_prob_qs(std::uint64_t n_states, const QSearchConfig& cfg = {});

// Exact false-negative probability of qsearch as implemented: the initial
// uniform sample plus every schedule iteration, with r_l averaged over its
// uniform range, weighted by the prior over t in [1, N]. This is the oracle
// the empirical tests are calibrated against.
double fn_prob_exact(std::uint64_t n_states, const QSearchConfig& cfg,
                     const std::vector<double>& t_prior);

double fn_prob_exact_fixed_t(std::uint64_t n_states, const QSearchConfig& cfg,
                             std::uint64_t t);

// False-negative probability of the randomized classical baseline that tests
// a uniformly sampled floor(sqrt(N)) subset, averaged over t (exact product).
double fn_prob_rc(std::uint64_t n_states);

double fn_prob_rc_fixed_t(std::uint64_t n_states, std::uint64_t t);

} // namespace qrt
