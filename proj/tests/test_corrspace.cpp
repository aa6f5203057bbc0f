#include <doctest.h>

#include <cmath>
#include <random>

#include "mgs/correlation.hpp"
#include "mgs/errors.hpp"
#include "oracles.hpp"

using namespace mgs;

namespace {

// Random convex mixture of local deterministic strategies: always no-signaling.
Correlation random_local(const Scenario& s, std::mt19937_64& rng, int parts = 3) {
    std::vector<WeightedCorrelation> mix_parts;
    for (int j = 0; j < parts; ++j) {
        std::vector<std::size_t> outs(s.joint_inputs());
        std::vector<std::vector<int>> f(s.parties());
        for (int p = 0; p < s.parties(); ++p)
            for (int x = 0; x < s.inputs(p); ++x) f[p].push_back(std::uniform_int_distribution<int>(0, s.outputs(p) - 1)(rng));
        for (std::size_t x = 0; x < s.joint_inputs(); ++x) {
            const auto xs = s.decode_inputs(x);
            std::vector<int> as(s.parties());
            for (int p = 0; p < s.parties(); ++p) as[p] = f[p][xs[p]];
            outs[x] = s.encode_outputs(as);
        }
        mix_parts.push_back({Rational(1, parts), deterministic(s, outs)});
    }
    return mix(mix_parts);
}

// Random rows: almost surely signaling.
Correlation random_rows(const Scenario& s, std::mt19937_64& rng) {
    std::vector<Rational> t(s.table_size());
    for (std::size_t x = 0; x < s.joint_inputs(); ++x) {
        Rational total = 0;
        std::vector<int> w(s.joint_outputs());
        for (auto& v : w) v = std::uniform_int_distribution<int>(1, 9)(rng), total += v;
        for (std::size_t a = 0; a < s.joint_outputs(); ++a) t[s.cell(x, a)] = Rational(w[a]) / total;
    }
    return Correlation::from_rational(s, t);
}

Correlation pr_box() {
    std::vector<Rational> t(16);
    for (int x = 0; x < 4; ++x)
        for (int a = 0; a < 4; ++a)
            t[x * 4 + a] = (((a >> 1) ^ (a & 1)) == ((x >> 1) & x & 1)) ? Rational(1, 2) : Rational(0);
    return Correlation::from_rational(Scenario::uniform(2, 2, 2), t);
}

}  // namespace

TEST_CASE("rational parse and format round-trip") {
    CHECK(format_rational(parse_rational("6/4")) == "3/2");
    CHECK(format_rational(parse_rational("-7")) == "-7/1");
    CHECK(format_rational(Rational(0)) == "0/1");
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK(rationalize(0.3333333333, 100) == Rational(1, 3));
    CHECK(rationalize(M_PI, 1000) == Rational(355, 113));
    CHECK(round_to_grid(0.26, 4) == Rational(1, 4));
    CHECK_THROWS_AS(rationalize(NAN, 10), std::invalid_argument);
}

TEST_CASE("scenario indexing is mixed radix with party 0 most significant") {
    const Scenario s({2, 3, 2}, {2, 2, 3});
    CHECK(s.joint_inputs() == 12);
    CHECK(s.joint_outputs() == 12);
    for (std::size_t x = 0; x < s.joint_inputs(); ++x) CHECK(s.encode_inputs(s.decode_inputs(x)) == x);
    const int xs[] = {1, 2, 0};
    CHECK(s.encode_inputs(xs) == 1 * 6 + 2 * 2 + 0);
    CHECK(s.cell(3, 5) == 3 * 12 + 5);
    const int sub[] = {2, 0};
    const auto r = s.restrict(sub);
    CHECK(r.inputs() == std::vector<int>{2, 2});
    CHECK(r.outputs() == std::vector<int>{3, 2});
    CHECK(s.uniform_outputs() == 0);
    CHECK(Scenario::uniform(3, 2, 4).uniform_outputs() == 4);
    CHECK_THROWS_AS(Scenario({2, 0}, {2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(Scenario({2}, {2, 2}), std::invalid_argument);
}

TEST_CASE("correlation validation") {
    const auto s = Scenario::uniform(1, 1, 2);
    CHECK_NOTHROW(Correlation::from_rational(s, {Rational(1, 3), Rational(2, 3)}));
    CHECK_THROWS_AS(Correlation::from_rational(s, {Rational(1, 3), Rational(1, 3)}), std::invalid_argument);
    CHECK_THROWS_AS(Correlation::from_rational(s, {Rational(-1, 3), Rational(4, 3)}), std::invalid_argument);
    CHECK_THROWS_AS(Correlation::from_rational(s, {Rational(1)}), std::invalid_argument);
    CHECK_NOTHROW(Correlation::from_real(s, {0.5 + 1e-12, 0.5}));
    CHECK_THROWS_AS(Correlation::from_real(s, {0.6, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Correlation::from_real(s, {NAN, 0.5}), std::invalid_argument);
    const auto p = Correlation::from_rational(s, {Rational(1, 4), Rational(3, 4)});
    CHECK_THROWS_AS(p.real_table(), std::logic_error);
    CHECK(p.to_real().at(0, 1) == doctest::Approx(0.75));
}

TEST_CASE("no-signaling check agrees with the all-subset oracle") {
    std::mt19937_64 rng(11);
    const std::vector<Scenario> scenarios = {Scenario::uniform(2, 2, 2), Scenario({2, 3}, {3, 2}),
                                             Scenario::uniform(3, 2, 2), Scenario({1, 2, 3}, {2, 2, 2}),
                                             Scenario::uniform(4, 2, 2)};
    for (const auto& s : scenarios) {
        for (int trial = 0; trial < 6; ++trial) {
            const auto local = random_local(s, rng);
            CHECK(oracle::no_signaling_brute(local));
            CHECK(is_no_signaling(local).pass);
            const auto noisy = random_rows(s, rng);
            const bool truth = oracle::no_signaling_brute(noisy);
            const auto report = is_no_signaling(noisy);
            CHECK(report.pass == truth);
            if (!report.pass) {
                CHECK(report.signaling_party >= 0);
                CHECK(report.worst_violation > 0);
            }
        }
    }
    CHECK(is_no_signaling(pr_box()).pass);
    CHECK(oracle::no_signaling_brute(pr_box()));
}

TEST_CASE("signaling box is reported with its signaling party") {
    // Bob outputs Alice's input.
    const auto s = Scenario::uniform(2, 2, 2);
    std::vector<std::size_t> outs(4);
    for (std::size_t x = 0; x < 4; ++x) outs[x] = x >> 1;  // a = 0, b = x_A
    const auto p = deterministic(s, outs);
    const auto r = is_no_signaling(p);
    CHECK_FALSE(r.pass);
    CHECK(r.signaling_party == 0);
    CHECK(r.subset == std::vector<int>{1});
    const int bob[] = {1};
    CHECK_THROWS_AS(marginal(p, bob), SignalingError);
    const int alice[] = {0};
    CHECK_NOTHROW(marginal(p, alice));
}

TEST_CASE("marginal and condition of the PR box") {
    const auto p = pr_box();
    const int alice[] = {0};
    const auto m = marginal(p, alice);
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a) CHECK(m.exact_at(x, a) == Rational(1, 2));
    const int held[] = {0}, set[] = {1}, out[] = {1};
    const auto c = condition(p, held, set, out);
    // b = a xor (x y) with x = 1, a = 1
    CHECK(c.exact_at(0, 1) == 1);
    CHECK(c.exact_at(1, 0) == 1);

    const auto s = Scenario::uniform(2, 1, 2);
    const std::size_t zeros[] = {0};
    const auto d = deterministic(s, zeros);
    const int zero[] = {0}, one[] = {1};
    CHECK_THROWS_AS(condition(d, held, zero, one), VanishingProbabilityError);
    CHECK_THROWS_AS(condition(d, held, one, zero), std::out_of_range);
}

TEST_CASE("rationalize keeps rows normalized and no-signaling") {
    std::mt19937_64 rng(5);
    const auto s = Scenario::uniform(3, 2, 2);
    for (int trial = 0; trial < 5; ++trial) {
        const auto exact = random_local(s, rng, 7);
        auto real = exact.to_doubles();
        for (auto& v : real) v = v * (1 - 1e-7) + 1e-7 / 8;  // still no-signaling, not on the grid
        const auto p = Correlation::from_real(s, real);
        const auto r = rationalize(p, 1000);
        CHECK(r.preserves_no_signaling);
        CHECK(r.max_error <= 1.0 / 1000);
        CHECK(is_no_signaling(r.correlation).pass);
        CHECK(oracle::no_signaling_brute(r.correlation));
        // from_rational already enforces exact normalization; check the error bound cell by cell.
        for (std::size_t x = 0; x < s.joint_inputs(); ++x)
            for (std::size_t a = 0; a < s.joint_outputs(); ++a)
                CHECK(std::fabs(r.correlation.at(x, a) - p.at(x, a)) <= r.max_error + 1e-15);
    }
    // Non-binary scenario goes through the per-row path.
    const auto s3 = Scenario::uniform(2, 2, 3);
    const auto p3 = Correlation::from_real(s3, random_local(s3, rng).to_doubles());
    const auto r3 = rationalize(p3);
    CHECK(r3.max_error <= 1e-6);
}

TEST_CASE("full correlators of the PR box") {
    const auto fc = full_correlators(pr_box());
    CHECK(fc.residues() == 2);
    for (std::size_t x = 0; x < 4; ++x) {
        const int xy = static_cast<int>((x >> 1) & x & 1);
        CHECK(fc.exact_at(x, xy) == 1);
        CHECK(fc.exact_at(x, 1 - xy) == 0);
    }
    CHECK_THROWS_AS(full_correlators(Correlation::from_rational(Scenario({1, 1}, {2, 3}),
                                                               std::vector<Rational>(6, Rational(1, 6)))),
                    std::invalid_argument);
}

TEST_CASE("simulated full-correlation boxes are no-signaling and reproduce f") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = std::uniform_int_distribution<int>(1, 3)(rng);
        const int m = std::uniform_int_distribution<int>(1, 3)(rng);
        const int l = std::uniform_int_distribution<int>(2, 4)(rng);
        const auto s = Scenario::uniform(n, m, l);
        std::vector<int> f(s.joint_inputs());
        for (auto& v : f) v = std::uniform_int_distribution<int>(0, l - 1)(rng);
        const auto p = simulate_full_correlators(DeterministicResidueFunction(s, f));
        CHECK(p.is_exact());
        CHECK(oracle::no_signaling_brute(p));
        // Oracle: P(a|x) = l^{-(n-1)} [sum a = f(x) mod l].
        Rational w(1);
        for (int i = 1; i < n; ++i) w /= l;
        for (std::size_t x = 0; x < s.joint_inputs(); ++x)
            for (std::size_t a = 0; a < s.joint_outputs(); ++a) {
                int sum = 0;
                for (int v : s.decode_outputs(a)) sum += v;
                CHECK(p.exact_at(x, a) == (sum % l == f[x] ? w : Rational(0)));
            }
    }
    const auto s = Scenario::uniform(2, 2, 3);
    CHECK_THROWS_AS(DeterministicResidueFunction(s, {0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(DeterministicResidueFunction(s, {0, 1, 2, 3}), std::out_of_range);
}

TEST_CASE("mix and product") {
    const auto s = Scenario::uniform(1, 2, 2);
    const std::size_t zero[] = {0, 0}, one[] = {1, 1};
    const auto d0 = deterministic(s, zero), d1 = deterministic(s, one);
    const WeightedCorrelation parts[] = {{Rational(1, 4), d0}, {Rational(3, 4), d1}};
    const auto m = mix(parts);
    CHECK(m.exact_at(1, 1) == Rational(3, 4));
    const WeightedCorrelation bad[] = {{Rational(1, 4), d0}, {Rational(1, 4), d1}};
    CHECK_THROWS_AS(mix(bad), std::invalid_argument);

    // Product on groups {1} and {0}: party 0 gets d1, party 1 gets m.
    const GroupCorrelation factors[] = {{m, {0}}, {d1, {1}}};
    const auto p = product(factors);
    CHECK(p.scenario() == Scenario::uniform(2, 2, 2));
    const int xs[] = {1, 0}, as[] = {1, 1};
    CHECK(p.exact_at(p.scenario().encode_inputs(xs), p.scenario().encode_outputs(as)) == Rational(3, 4));
    const GroupCorrelation overlap[] = {{m, {0}}, {d1, {0}}};
    CHECK_THROWS_AS(product(overlap), std::invalid_argument);
}
