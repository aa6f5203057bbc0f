#include <doctest.h>

#include <cmath>

#include "mgs/quantum.hpp"
#include "mgs/witness.hpp"
#include "oracles.hpp"

using namespace mgs;
using namespace mgs::quantum;

namespace {

const double s3 = std::sqrt(3.0) / 2;
const double r2 = 1 / std::sqrt(2.0);

oracle::Settings ineq10_settings(int n) {
    return oracle::Settings(n, {{-s3, 0.5, 0.0}, {-s3, -0.5, 0.0}});
}

oracle::Settings svetlichny_settings() {
    return {{{1, 0, 0}, {0, 1, 0}}, {{r2, -r2, 0}, {r2, r2, 0}}, {{0, -1, 0}, {1, 0, 0}}};
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
    return d;
}

// |GHZ_3> on three of four qubits with |-> on `pos`.
oracle::State ghz3_with_minus(int pos) {
    oracle::State s(16, 0.0);
    const double amp = r2 * r2;  // (1/sqrt2) * (1/sqrt2)
    for (int g = 0; g < 2; ++g)
        for (int m = 0; m < 2; ++m) {
            int idx = 0;
            for (int q = 0; q < 4; ++q) {
                const int bit = q == pos ? m : g;
                idx |= bit << (3 - q);
            }
            s[idx] += (m ? -amp : amp);
        }
    return s;
}

}  // namespace

TEST_CASE("density matrix validation") {
    ComplexMatrix bad(2);
    bad(0, 0) = 0.5;
    bad(1, 1) = 0.6;
    CHECK_THROWS_AS(DensityMatrix{bad}, std::invalid_argument);
    ComplexMatrix neg(2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
    ComplexMatrix nonherm(2);
    nonherm(0, 0) = nonherm(1, 1) = 0.5;
    nonherm(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix{nonherm}, std::invalid_argument);
    CHECK_THROWS_AS(ghz3_flagged_noise(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ghz3_flagged_noise(1.5), std::invalid_argument);
    CHECK_THROWS_AS(Observable::from_bloch(1, 1, 0), std::invalid_argument);
}

TEST_CASE("GHZ states and partial traces") {
    const auto g = ghz_state(3);
    CHECK(g.qubits() == 3);
    CHECK(std::abs(g.matrix()(0, 7) - Complex(0.5)) < 1e-15);
    const int keep[] = {0, 2};
    const auto red = reduced_state(g, keep);
    CHECK(red.qubits() == 2);
    CHECK(std::abs(red.matrix()(0, 0) - Complex(0.5)) < 1e-15);
    CHECK(std::abs(red.matrix()(3, 3) - Complex(0.5)) < 1e-15);
    CHECK(std::abs(red.matrix()(0, 3)) < 1e-15);
    const int order[] = {2, 0, 1};
    CHECK(permute_qubits(g, order).matrix().distance(g.matrix()) < 1e-15);
}

TEST_CASE("Born rule matches the pure-state oracle") {
    SUBCASE("GHZ_3 with the Svetlichny settings") {
        const auto p = born_correlation(ghz_state(3), svetlichny_measurements());
        const auto ref = oracle::born_table({{1.0, oracle::ghz(3)}}, svetlichny_settings());
        CHECK(max_diff(p.to_doubles(), ref) < 1e-12);
        // Frozen derived value: 4 sqrt 2.
        CHECK(oracle::svetlichny_value(ref) == doctest::Approx(4 * std::sqrt(2.0)).epsilon(1e-12));
        CHECK(evaluate(builtin::svetlichny3(), p) == doctest::Approx(4 * std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("GHZ_4 with sigma_x / sigma_y") {
        const auto p = born_correlation(ghz_state(4), sigma_xy_measurements(4));
        const auto ref = oracle::born_table({{1.0, oracle::ghz(4)}}, oracle::Settings(4, {{1, 0, 0}, {0, 1, 0}}));
        CHECK(max_diff(p.to_doubles(), ref) < 1e-12);
    }
    SUBCASE("equal mixture of GHZ_3 and |->") {
        const auto p = born_correlation(ghz3_minus_mixture(), ineq10_measurements(4));
        std::vector<std::pair<double, oracle::State>> mixture;
        for (int pos = 0; pos < 4; ++pos) mixture.emplace_back(0.25, ghz3_with_minus(pos));
        const auto ref = oracle::born_table(mixture, ineq10_settings(4));
        CHECK(max_diff(p.to_doubles(), ref) < 1e-12);
        CHECK(is_no_signaling(p, 1e-12).pass);
    }
    SUBCASE("flagged noise") {
        const double v = 0.3;
        const auto rho = ghz3_flagged_noise(v);
        std::vector<std::pair<double, oracle::State>> mixture;
        oracle::State g4(16, 0.0);
        g4[0] = g4[14] = r2;  // |GHZ_3>|0>
        mixture.emplace_back(v, g4);
        for (int b = 0; b < 8; ++b) {
            oracle::State e(16, 0.0);
            e[2 * b + 1] = 1.0;  // |b>|1>
            mixture.emplace_back((1 - v) / 8, e);
        }
        auto settings = svetlichny_settings();
        settings.push_back({{0, 0, 1}});
        const MeasurementSet meas = svetlichny_measurements().extended(MeasurementSet({{Observable::from_bloch(0, 0, 1)}}));
        CHECK(max_diff(born_correlation(rho, meas).to_doubles(), oracle::born_table(mixture, settings)) < 1e-12);
    }
}

TEST_CASE("measurement sets") {
    const auto m = ineq10_measurements(4);
    CHECK(m.parties() == 4);
    CHECK(m.scenario() == Scenario::uniform(4, 2, 2));
    CHECK(m.at(2, 1).bloch()[1] == doctest::Approx(-0.5));
    const auto o = Observable::from_bloch(0, 0, 1);
    CHECK(std::abs(o.projector(0)(0, 0) - Complex(1)) < 1e-15);
    CHECK(std::abs(o.projector(1)(1, 1) - Complex(1)) < 1e-15);
    CHECK_THROWS_AS(born_correlation(ghz_state(3), sigma_xy_measurements(4)), std::invalid_argument);
    const int order[] = {1, 0, 2};
    const auto perm = svetlichny_measurements().permuted(order);
    CHECK(perm.at(0, 0).bloch()[0] == doctest::Approx(r2));
}

TEST_CASE("builtin state dispatch") {
    CHECK(builtin_state("ghz", {{"n", 2}}).qubits() == 2);
    CHECK(builtin_state("sec3a").qubits() == 4);
    CHECK(builtin_state("sec3c", {{"v", 0.5}}).qubits() == 4);
    CHECK_THROWS_AS(builtin_state("nope"), std::invalid_argument);
}
