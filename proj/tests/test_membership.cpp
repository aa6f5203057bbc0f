#include <doctest.h>

#include <cmath>
#include <random>

#include "mgs/errors.hpp"
#include "mgs/membership.hpp"
#include "mgs/quantum.hpp"
#include "oracles.hpp"

using namespace mgs;

namespace {

Correlation pr_box() {
    std::vector<Rational> t(16);
    for (int x = 0; x < 4; ++x)
        for (int a = 0; a < 4; ++a)
            t[x * 4 + a] = (((a >> 1) ^ (a & 1)) == ((x >> 1) & x & 1)) ? Rational(1, 2) : Rational(0);
    return Correlation::from_rational(Scenario::uniform(2, 2, 2), t);
}

// Convex combination of random vertices with random rational weights.
Correlation random_inside(const VertexSet& v, std::mt19937_64& rng, int parts) {
    std::vector<WeightedCorrelation> mix_parts;
    std::vector<int> w(parts);
    int total = 0;
    for (auto& x : w) x = std::uniform_int_distribution<int>(1, 9)(rng), total += x;
    for (int j = 0; j < parts; ++j) {
        const auto i = std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng);
        Rational weight(w[j], total);
        weight.canonicalize();
        mix_parts.push_back({weight, v.to_correlation(i)});
    }
    return mix(mix_parts);
}

Correlation noisy(const Correlation& p, const Rational& vis) {
    const auto& s = p.scenario();
    std::vector<Rational> white(s.table_size(), Rational(1, static_cast<long>(s.joint_outputs())));
    const WeightedCorrelation parts[] = {{vis, p}, {1 - vis, Correlation::from_rational(s, white)}};
    return mix(parts);
}

}  // namespace

TEST_CASE("PR box against the local polytope yields a CHSH-type witness") {
    const auto p = pr_box();
    const auto l2 = producible_vertices(p.scenario(), Resource::L, 1);
    const auto r = decompose(p, l2);
    REQUIRE(r.status == MembershipStatus::Infeasible);
    REQUIRE(r.witness.has_value());
    const auto check = verify_certificate(r, p, l2);
    CHECK(check.ok);
    CHECK(check.max_over_vertices <= 0);
    CHECK(evaluate_exact(*r.witness, p) > 0);

    // y(x,a) = alpha chsh(x,a) + kappa_x with alpha > 0: a CHSH-class functional.
    const auto chsh = builtin::chsh();
    const auto& y = *r.witness;
    const Rational alpha = (y.coefficient(0, 0) - y.coefficient(0, 1)) / (chsh.coefficient(0, 0) - chsh.coefficient(0, 1));
    CHECK(alpha > 0);
    for (std::size_t x = 0; x < 4; ++x) {
        const Rational kappa = y.coefficient(x, 0) - alpha * chsh.coefficient(x, 0);
        for (std::size_t a = 0; a < 4; ++a) CHECK(y.coefficient(x, a) == alpha * chsh.coefficient(x, a) + kappa);
    }
}

TEST_CASE("epsilon mode agrees with exact mode") {
    const auto p = pr_box();
    const auto l2 = producible_vertices(p.scenario(), Resource::L, 1);
    MembershipOptions eps;
    eps.mode = LpMode::Epsilon;
    const auto r = decompose(p, l2, eps);
    CHECK(r.status == MembershipStatus::Infeasible);
    REQUIRE(r.witness.has_value());
    CHECK(verify_certificate(r, p, l2).ok);

    const auto ns = producible_vertices(p.scenario(), Resource::NS, 2);
    const auto f = decompose(p, ns, eps);
    CHECK(f.status == MembershipStatus::Feasible);
    CHECK(f.residual <= 1e-8);
    CHECK(verify_certificate(f, p, ns).ok);
}

TEST_CASE("random points inside the hull are feasible with exact weights") {
    std::mt19937_64 rng(7);
    for (const auto& [s, r, k] : {std::tuple{Scenario::uniform(2, 2, 2), Resource::L, 1},
                                  std::tuple{Scenario::uniform(3, 2, 2), Resource::NS, 2},
                                  std::tuple{Scenario::uniform(3, 2, 2), Resource::S, 2},
                                  std::tuple{Scenario({2, 3}, {3, 2}), Resource::L, 1}}) {
        const auto v = producible_vertices(s, r, k);
        for (int t = 0; t < 4; ++t) {
            const auto p = random_inside(v, rng, 5);
            const auto res = decompose(p, v);
            REQUIRE(res.status == MembershipStatus::Feasible);
            CHECK(res.residual == 0);
            // Independent recomputation of sum w v.
            std::vector<Rational> sum(s.table_size(), Rational(0));
            Rational total = 0;
            for (const auto& [i, w] : res.weights) {
                CHECK(w > 0);
                total += w;
                const auto d = v.dense(i);
                for (std::size_t c = 0; c < d.size(); ++c) sum[c] += w * d[c];
            }
            CHECK(total == 1);
            CHECK(sum == p.exact_table());
        }
    }
}

TEST_CASE("points outside the hull get a separating witness") {
    std::mt19937_64 rng(8);
    const auto s = Scenario::uniform(3, 2, 2);
    const auto ns = producible_vertices(s, Resource::S, 2);
    const auto l3 = producible_vertices(s, Resource::L, 1);
    for (int t = 0; t < 4; ++t) {
        // Mostly a nonlocal S vertex: outside L_3 with high probability.
        const auto p = noisy(ns.to_correlation(std::uniform_int_distribution<std::size_t>(0, ns.size() - 1)(rng)), Rational(9, 10));
        const auto res = decompose(p, l3);
        if (res.status == MembershipStatus::Feasible) {
            CHECK(verify_certificate(res, p, l3).ok);
            continue;
        }
        REQUIRE(res.status == MembershipStatus::Infeasible);
        const auto check = verify_certificate(res, p, l3);
        CHECK(check.ok);
        CHECK(check.max_over_vertices <= 0);
        CHECK(evaluate_exact(*res.witness, p) > 0);
    }
}

TEST_CASE("visibility threshold of the PR box") {
    // PR mixed with white noise is local iff visibility <= 1/2.
    const auto l2 = producible_vertices(Scenario::uniform(2, 2, 2), Resource::L, 1);
    CHECK(decompose(noisy(pr_box(), Rational(1, 2)), l2).status == MembershipStatus::Feasible);
    CHECK(decompose(noisy(pr_box(), Rational(501, 1000)), l2).status == MembershipStatus::Infeasible);
}

TEST_CASE("serial and parallel pricing kernels agree") {
    std::mt19937_64 rng(9);
    const auto v = producible_vertices(Scenario::uniform(3, 2, 2), Resource::S, 2);
    const auto a = lp::ColumnMatrix::from_vertices(v);
    CHECK(a.cols == v.size());
    std::vector<double> y(a.rows), d1(a.cols), d2(a.cols);
    for (auto& x : y) x = std::uniform_real_distribution<double>(-1, 1)(rng);
    lp::kernels::reduced_costs_serial(a, y, d1);
    lp::kernels::reduced_costs_parallel(a, y, d2);
    CHECK(d1 == d2);
    for (int t = 0; t < 10; ++t) {
        std::vector<mpz_class> yz(a.rows);
        for (auto& x : yz) x = std::uniform_int_distribution<int>(-5, 2)(rng);
        CHECK(lp::kernels::first_improving_serial(a, yz) == lp::kernels::first_improving_parallel(a, yz));
    }
    std::vector<mpz_class> none(a.rows, mpz_class(-1));
    CHECK(lp::kernels::first_improving_serial(a, none) == a.cols);
}

TEST_CASE("column generation reaches the same verdict as a full master") {
    std::mt19937_64 rng(10);
    const auto v = producible_vertices(Scenario::uniform(3, 2, 2), Resource::S, 2);
    const auto p = random_inside(v, rng, 3);
    MembershipOptions small;
    small.solver.initial_columns = 16;
    small.solver.columns_per_round = 8;
    const auto r = decompose(p, v, small);
    CHECK(r.status == MembershipStatus::Feasible);
    CHECK(verify_certificate(r, p, v).ok);
}

TEST_CASE("mgs sweeps group sizes") {
    const auto g = rationalize(quantum::born_correlation(quantum::ghz_state(4), quantum::sigma_xy_measurements(4)));
    REQUIRE(g.max_error == 0);
    const auto rep = mgs::mgs(g.correlation, Resource::NS, 4);
    REQUIRE(rep.mgs.has_value());
    CHECK(*rep.mgs == 2);
    CHECK(rep.lower_bound == 2);
    REQUIRE(rep.levels.size() == 2);
    CHECK(rep.levels[0].status == MembershipStatus::Infeasible);

    // Local input: MGS 1 for every resource.
    const auto pl = Correlation::from_rational(Scenario::uniform(2, 2, 2), std::vector<Rational>(16, Rational(1, 4)));
    for (auto r : {Resource::L, Resource::NS, Resource::S}) CHECK(mgs::mgs(pl, r, 2).mgs == 1);

    // PR box: infeasible for L at any k, feasible for NS at k = 2.
    const auto lr = mgs::mgs(pr_box(), Resource::L, 2);
    CHECK_FALSE(lr.mgs.has_value());
    CHECK(lr.lower_bound == 3);
    CHECK(mgs::mgs(pr_box(), Resource::NS, 2).mgs == 2);
}

TEST_CASE("membership is monotone in k and in the resource") {
    std::mt19937_64 rng(12);
    const auto s = Scenario::uniform(3, 2, 2);
    const auto s32 = producible_vertices(s, Resource::S, 2);
    for (int t = 0; t < 3; ++t) {
        const auto p = noisy(random_inside(s32, rng, 2), Rational(2, 3));
        const auto l = decompose(p, producible_vertices(s, Resource::L, 1)).status;
        const auto n2 = decompose(p, producible_vertices(s, Resource::NS, 2)).status;
        const auto s2 = decompose(p, s32).status;
        if (l == MembershipStatus::Feasible) CHECK(n2 == MembershipStatus::Feasible);
        if (n2 == MembershipStatus::Feasible) CHECK(s2 == MembershipStatus::Feasible);
        CHECK(s2 == MembershipStatus::Feasible);
    }
}

TEST_CASE("unresolved levels are reported, not guessed") {
    // NS_{4,3} needs tripartite NS vertices that are not generated in-repo.
    const auto p = quantum::born_correlation(quantum::ghz3_minus_mixture(), quantum::ineq10_measurements(4));
    MgsOptions o;
    o.membership.mode = LpMode::Epsilon;
    const auto part = Partition::parse("0,1,2|3", 4);
    CHECK_THROWS_AS(fixed_partition_membership(p, Resource::NS, part, o), MissingVertexDataError);

    // Signaling input at k = n for NS: infeasible with a signaling witness.
    const auto s = Scenario::uniform(2, 2, 2);
    std::vector<std::size_t> outs(4);
    for (std::size_t x = 0; x < 4; ++x) outs[x] = x >> 1;
    const auto sig = deterministic(s, outs);
    const auto rep = mgs::mgs(sig, Resource::NS, 2);
    CHECK_FALSE(rep.mgs.has_value());
    REQUIRE(rep.levels.back().result.has_value());
    REQUIRE(rep.levels.back().result->witness.has_value());
    CHECK(evaluate_exact(*rep.levels.back().result->witness, sig) > 0);
    CHECK(mgs::mgs(sig, Resource::S, 2).mgs == 2);
}

TEST_CASE("rationalized real input keeps the residual against the real table") {
    // Non-signaling interior real point: NS_{3,2} mixture blended with white noise at an irrational weight.
    std::mt19937_64 rng(13);
    const auto s = Scenario::uniform(3, 2, 2);
    const auto s32 = producible_vertices(s, Resource::S, 2);
    const auto ns32 = producible_vertices(s, Resource::NS, 2);
    const double w = 1.0 / std::sqrt(2.0);
    const auto blend = [&](const VertexSet& v) {
        const auto inner = random_inside(v, rng, 4).to_doubles();
        std::vector<double> real(inner.size());
        for (std::size_t c = 0; c < real.size(); ++c) real[c] = w * inner[c] + (1 - w) / 8;
        return Correlation::from_real(s, real);
    };
    const auto p = blend(ns32);
    const auto r = decompose(p, ns32);
    CHECK(r.status == MembershipStatus::Feasible);
    CHECK(r.rationalization_error > 0);
    CHECK(r.rationalization_error <= 1e-6);
    CHECK(r.residual <= r.rationalization_error + 1e-15);

    // Signaling real point: S_{3,2} is not full-dimensional, so it is checked in epsilon mode.
    MembershipOptions eps;
    eps.mode = LpMode::Epsilon;
    const auto q = blend(s32);
    const auto rq = decompose(q, s32, eps);
    CHECK(rq.status == MembershipStatus::Feasible);
    CHECK(rq.residual <= 1e-8);

    // GHZ_3 reaches 4 sqrt 2 on Svetlichny, above the bound 4 of both S_{3,2} and NS_{3,2}.
    const auto g = quantum::born_correlation(quantum::ghz_state(3), quantum::svetlichny_measurements());
    for (const auto* set_ptr : {&s32, &ns32}) {
        const auto& set = *set_ptr;
        const auto res = decompose(g, set);
        REQUIRE(res.status == MembershipStatus::Infeasible);
        CHECK(verify_certificate(res, g, set).ok);
        CHECK(res.margin > 0);
    }
}
