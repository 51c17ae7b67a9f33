#include "qrt/search.hpp"

#include <cmath>
#include <stdexcept>

namespace qrt {

std::vector<int> QSearchConfig::schedule(std::uint64_t n_states) const {
    const int cap = int(std::ceil(std::sqrt(double(n_states))));
    std::vector<int> m;
    double cl = 1.0;
    while (cl <= double(cap)) {
        m.push_back(std::min(int(std::llround(cl)), cap));
        cl *= c;
    }
    return m;
}

SearchOutcome qsearch(const OracleSpec& oracle, const OraclePredicate& f,
                      const QSearchConfig& cfg, MeasureRng& rng) {
    SearchOutcome out;
    const std::uint64_t n_states = std::uint64_t(1) << oracle.n_qubits;

    // Sample the uniform superposition first; this alone handles large t.
    GroverState state = prepare_uniform(oracle.n_qubits, oracle.marks);
    std::uint32_t i = measure(state, rng);
    out.eval_count += state.oracle_evals;
    out.classical_checks += 1;
    out.index = i;
    if (f(i)) {
        out.found = true;
        return out;
    }

    for (int m : cfg.schedule(n_states)) {
        const int r = rng.next_int(1, m);
        GroverState s = prepare_uniform(oracle.n_qubits, oracle.marks);
        apply_grover(s, r);
        i = measure(s, rng);
        out.eval_count += s.oracle_evals;
        out.classical_checks += 1;
        out.index = i;
        if (f(i)) {
            out.found = true;
            return out;
        }
    }
    out.found = false;
    return out;
}

int default_minimum_iters(std::uint64_t n_states) {
    int bits = 0;
    while ((std::uint64_t(1) << bits) < n_states)
        ++bits;
    return bits + 5;
}

MinimumResult find_minimum(const OracleSpec& oracle, const OraclePredicate& f,
                           const std::function<std::int64_t(std::uint32_t)>& g,
                           int max_iters, const QSearchConfig& cfg,
                           MeasureRng& rng) {
    MinimumResult res;
    for (int it = 0; it < max_iters; ++it) {
        OracleSpec active = oracle;
        OraclePredicate check = f;
        if (res.found) {
            const std::int64_t cur = res.value;
            auto f_min = [&f, g, cur](std::uint32_t x) {
                return f(x) && g(x) < cur;
            };
            active.marks = f_min;
            check = f_min;
        }
        SearchOutcome out = qsearch(active, check, cfg, rng);
        res.eval_count += out.eval_count;
        res.classical_checks += out.classical_checks;
        if (out.found) {
            res.found = true;
            res.index = out.index;
            res.value = g(std::uint32_t(out.index));
        }
    }
    return res;
}

double fn_prob_qs(std::uint64_t n_states, const QSearchConfig& cfg) {
    // Reproduces the published table: sin(theta) = t/N and the expected
    // rotation count M_l/2 substituted into the closed form.
    double p = 1.0;
    for (int m : cfg.schedule(n_states)) {
        double sum = 0.0;
        for (std::uint64_t t = 1; t <= n_states; ++t) {
            const double theta = std::asin(double(t) / double(n_states));
            const double c = std::cos(double(m + 1) * theta);
            sum += c * c;
        }
        p *= sum / double(n_states);
    }
    return p;
}

namespace {

// Probability that one full qsearch run reports no solution when exactly t
// of N states are solutions.
double fail_prob_for_t(std::uint64_t n_states, const std::vector<int>& sched,
                       std::uint64_t t) {
    if (t == 0)
        return 1.0;
    if (t >= n_states)
        return 0.0;
    const double theta = std::asin(std::sqrt(double(t) / double(n_states)));
    double p = double(n_states - t) / double(n_states); // initial sample misses
    for (int m : sched) {
        double avg = 0.0;
        for (int r = 1; r <= m; ++r) {
            const double c = std::cos(double(2 * r + 1) * theta);
            avg += c * c;
        }
        p *= avg / double(m);
    }
    return p;
}

} // namespace

double fn_prob_exact(std::uint64_t n_states, const QSearchConfig& cfg,
                     const std::vector<double>& t_prior) {
    if (t_prior.size() != n_states)
        throw std::invalid_argument("fn_prob_exact: prior must cover t = 1..N");
    const auto sched = cfg.schedule(n_states);
    double p = 0.0;
    for (std::uint64_t t = 1; t <= n_states; ++t)
        p += t_prior[t - 1] * fail_prob_for_t(n_states, sched, t);
    return p;
}

double fn_prob_exact_fixed_t(std::uint64_t n_states, const QSearchConfig& cfg,
                             std::uint64_t t) {
    return fail_prob_for_t(n_states, cfg.schedule(n_states), t);
}

double fn_prob_rc_fixed_t(std::uint64_t n_states, std::uint64_t t) {
    const std::uint64_t n_sqrt =
        std::uint64_t(std::floor(std::sqrt(double(n_states))));
    double p = 1.0;
    for (std::uint64_t n = 0; n < n_sqrt; ++n) {
        if (n_states - t <= n)
            return 0.0;
        p *= double(n_states - t - n) / double(n_states - n);
    }
    return p;
}

double fn_prob_rc(std::uint64_t n_states) {
    const std::uint64_t n_sqrt =
        std::uint64_t(std::floor(std::sqrt(double(n_states))));
    double sum = 0.0;
    for (std::uint64_t t = 1; t <= n_states - n_sqrt; ++t)
        sum += fn_prob_rc_fixed_t(n_states, t);
    return sum / double(n_states - n_sqrt);
}

} // namespace qrt
