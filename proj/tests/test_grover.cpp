#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qrt/grover.hpp"
#include "qrt/rng.hpp"

using namespace qrt;

namespace {

OraclePredicate first_t(std::uint64_t t) {
    return [t](std::uint32_t i) { return i < t; };
}

} // namespace

TEST_CASE("prepare_uniform builds the uniform superposition") {
    auto s = prepare_uniform(2, [](std::uint32_t i) { return i == 3; });
    REQUIRE(s.size() == 4);
    for (double a : s.amplitudes)
        CHECK(a == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.good_mask == std::vector<bool>{false, false, false, true});
    CHECK(s.oracle_evals == 1);

    auto empty = prepare_uniform(3, [](std::uint32_t) { return false; });
    CHECK(empty.good_count() == 0);
    for (double a : empty.amplitudes)
        CHECK(a == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-12));

    CHECK_THROWS_AS(prepare_uniform(0, first_t(0)), std::invalid_argument);
    CHECK_THROWS_AS(prepare_uniform(kMaxQubits + 1, first_t(0)),
                    std::invalid_argument);
}

TEST_CASE("apply_grover matches the sin/cos closed form") {
    // Spot checks; the exhaustive N in {4..1024} scan is in the acceptance
    // suite.
    for (int n_qubits : {2, 3, 6, 8}) {
        const std::uint64_t n = 1ULL << n_qubits;
        for (std::uint64_t t : {std::uint64_t(0), std::uint64_t(1), n / 2, n}) {
            auto s = prepare_uniform(n_qubits, first_t(t));
            const double theta =
                std::asin(std::sqrt(double(t) / double(n)));
            for (int r = 1; r <= 12; ++r) {
                apply_grover(s, 1);
                const double good =
                    t > 0 ? std::sin((2 * r + 1) * theta) / std::sqrt(double(t))
                          : 0.0;
                const double bad =
                    t < n ? std::cos((2 * r + 1) * theta) /
                                std::sqrt(double(n - t))
                          : 0.0;
                double norm = 0.0;
                for (std::uint64_t i = 0; i < n; ++i) {
                    const double expect = s.good_mask[i] ? good : bad;
                    REQUIRE(std::fabs(s.amplitudes[i] - expect) < 1e-10);
                    norm += s.amplitudes[i] * s.amplitudes[i];
                }
                REQUIRE(norm == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("N=4 single solution is exact after one iteration") {
    auto s = prepare_uniform(2, first_t(1));
    apply_grover(s, 1);
    CHECK(s.amplitudes[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 1; i < 4; ++i)
        CHECK(s.amplitudes[std::size_t(i)] ==
              doctest::Approx(0.0).scale(1).epsilon(1e-12));
}

TEST_CASE("success_probability") {
    CHECK(success_probability(4, 1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(success_probability(64, 1, 0) ==
          doctest::Approx(1.0 / 64).epsilon(1e-12));
    CHECK(success_probability(64, 1, 6) ==
          doctest::Approx(0.9966).epsilon(1e-3));
    CHECK(success_probability(64, 0, 5) == 0.0);
    CHECK(success_probability(64, 64, 5) == 1.0);
}

TEST_CASE("monotone amplification below r_opt") {
    for (std::uint64_t n : {16ULL, 64ULL, 256ULL}) {
        for (std::uint64_t t = 1; t <= 4; ++t) {
            const int ropt = optimal_r(n, t);
            for (int r = 0; r + 1 < ropt; ++r)
                CHECK(success_probability(n, t, r + 1) >
                      success_probability(n, t, r));
        }
    }
}

TEST_CASE("large-t degradation") {
    for (std::uint64_t n = 4; n <= 256; n *= 2)
        for (std::uint64_t t = n / 2; t <= n; ++t)
            CHECK(success_probability(n, t, 1) <=
                  success_probability(n, t, 0) + 1e-12);
}

TEST_CASE("optimal_r") {
    CHECK(optimal_r(64, 1) == 6);
    CHECK(optimal_r(4, 1) == 1);
    CHECK(optimal_r(4, 4) == 0);
    CHECK_THROWS_AS(optimal_r(64, 0), std::domain_error);
}

TEST_CASE("query accounting: 1 + r oracle evaluations") {
    auto s = prepare_uniform(5, first_t(3));
    apply_grover(s, 7);
    CHECK(s.oracle_evals == 8);
}

TEST_CASE("measure samples amplitude-squared") {
    MeasureRng rng(42);

    auto uniform = prepare_uniform(2, first_t(0));
    int counts[4] = {0, 0, 0, 0};
    for (int i = 0; i < 40000; ++i)
        ++counts[measure(uniform, rng)];
    for (int c : counts)
        CHECK(std::fabs(c / 40000.0 - 0.25) < 0.01);

    auto peaked = prepare_uniform(2, first_t(1));
    apply_grover(peaked, 1); // amplitude 1 on index 0
    for (int i = 0; i < 100; ++i)
        CHECK(measure(peaked, rng) == 0);

    auto amplified = prepare_uniform(6, first_t(1));
    apply_grover(amplified, 6);
    int good = 0;
    for (int i = 0; i < 10000; ++i)
        good += measure(amplified, rng) == 0;
    CHECK(std::fabs(good / 10000.0 - 0.9966) < 0.005 + 3 * 0.0006);
}
