#include "qrt/grover.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qrt {

std::size_t GroverState::good_count() const {
    std::size_t t = 0;
    for (bool g : good_mask)
        if (g) ++t;
    return t;
}

GroverState prepare_uniform(int n_qubits, const OraclePredicate& oracle) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw std::invalid_argument("prepare_uniform: n_qubits must be in [1, " +
                                    std::to_string(kMaxQubits) + "]");
    GroverState s;
    s.n_qubits = n_qubits;
    const std::size_t n = std::size_t(1) << n_qubits;
    s.amplitudes.assign(n, 1.0 / std::sqrt(double(n)));
    s.good_mask.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        s.good_mask[i] = oracle(std::uint32_t(i));
    s.oracle_evals = 1;
    return s;
}

void apply_grover(GroverState& state, int r) {
    const std::size_t n = state.size();
    for (int it = 0; it < r; ++it) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (state.good_mask[i])
                state.amplitudes[i] = -state.amplitudes[i];
            sum += state.amplitudes[i];
        }
        const double two_mean = 2.0 * sum / double(n);
        for (std::size_t i = 0; i < n; ++i)
            state.amplitudes[i] = two_mean - state.amplitudes[i];
    }
    state.oracle_evals += r;
}

double success_probability(std::uint64_t n_states, std::uint64_t t, int r) {
    if (t == 0)
        return 0.0;
    if (t >= n_states)
        return 1.0;
    const double theta = std::asin(std::sqrt(double(t) / double(n_states)));
    const double s = std::sin(double(2 * r + 1) * theta);
    return s * s;
}

int optimal_r(std::uint64_t n_states, std::uint64_t t) {
    if (t == 0)
        throw std::domain_error("optimal_r: no optimum for t = 0");
    const double theta = std::asin(std::sqrt(double(t) / double(n_states)));
    return int(std::floor(std::numbers::pi / (4.0 * theta)));
}

std::uint32_t measure(const GroverState& state, MeasureRng& rng) {
    const double u = rng.next_double();
    double acc = 0.0;
    const std::size_t n = state.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double a = state.amplitudes[i];
        acc += a * a;
        if (u < acc)
            return std::uint32_t(i);
    }
    return std::uint32_t(n - 1); // u landed in the rounding tail
}

} // namespace qrt
