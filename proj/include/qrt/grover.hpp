#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qrt/rng.hpp"

namespace qrt {

constexpr int kMaxQubits = 20; // simulator cap

using OraclePredicate = std::function<bool(std::uint32_t)>;

// Exact amplitude-level state of a Grover search. Amplitudes stay real:
// starting from the uniform state, sign-flip marking and reflection about
// the mean never introduce complex phases.
struct GroverState {
    int n_qubits = 0;
    std::vector<double> amplitudes;
    std::vector<bool> good_mask;
    long long oracle_evals = 0;

    std::size_t size() const { return amplitudes.size(); }
    std::size_t good_count() const;
};

// Uniform superposition with the oracle's marking attached.
// Counts as one oracle application. Throws std::invalid_argument when
// n_qubits is outside [1, kMaxQubits].
GroverState prepare_uniform(int n_qubits, const OraclePredicate& oracle);

// r Grover iterations (sign flip of marked amplitudes, then reflection of
// all amplitudes about their mean). One oracle application per iteration.
void apply_grover(GroverState& state, int r);

// sin^2((2r+1) * arcsin(sqrt(t/N)))
double success_probability(std::uint64_t n_states, std::uint64_t t, int r);

// floor(pi / (4 * arcsin(sqrt(t/N)))). Throws std::domain_error for t = 0.
int optimal_r(std::uint64_t n_states, std::uint64_t t);

// Samples a basis index with probability amplitude^2. Read-only.
std::uint32_t measure(const GroverState& state, MeasureRng& rng);

} // namespace qrt
