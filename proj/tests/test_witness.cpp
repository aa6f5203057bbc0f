#include <doctest.h>

#include <algorithm>
#include <random>

#include "mgs/witness.hpp"
#include "oracles.hpp"

using namespace mgs;

namespace {

Correlation random_correlation(const Scenario& s, std::mt19937_64& rng) {
    std::vector<Rational> t(s.table_size());
    for (std::size_t x = 0; x < s.joint_inputs(); ++x) {
        Rational total = 0;
        std::vector<int> w(s.joint_outputs());
        for (auto& v : w) v = std::uniform_int_distribution<int>(0, 5)(rng), total += v;
        if (total == 0) w[0] = 1, total = 1;
        for (std::size_t a = 0; a < s.joint_outputs(); ++a) t[s.cell(x, a)] = Rational(w[a]) / total;
    }
    return Correlation::from_rational(s, t);
}

BellExpression random_expression(const Scenario& s, std::mt19937_64& rng, int lo = -3, int hi = 3) {
    std::vector<Rational> c(s.table_size());
    for (auto& v : c) v = std::uniform_int_distribution<int>(lo, hi)(rng);
    return BellExpression(s, c, Rational(0), Resource::L, 1);
}

Correlation product2(const Correlation& a, const Correlation& b) {
    const GroupCorrelation f[] = {{a, {0}}, {b, {1}}};
    return product(f);
}

}  // namespace

TEST_CASE("CHSH and Svetlichny coefficients agree with direct formulas") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 20; ++t) {
        const auto p2 = random_correlation(Scenario::uniform(2, 2, 2), rng);
        CHECK(evaluate_exact(builtin::chsh(), p2) == oracle::chsh_value(p2.exact_table()));
        const auto p3 = random_correlation(Scenario::uniform(3, 2, 2), rng);
        CHECK(evaluate_exact(builtin::svetlichny3(), p3) == oracle::svetlichny_value(p3.exact_table()));
    }
    CHECK(builtin::chsh().bound() == 2);
    CHECK(builtin::svetlichny3().bound() == 4);
    CHECK(builtin::ns3().resource() == Resource::NS);
    CHECK(builtin::ineq10().bound() == 105);
}

TEST_CASE("CHSH local bound by direct enumeration of strategies") {
    Rational best = -100;
    for (int fa = 0; fa < 4; ++fa)
        for (int fb = 0; fb < 4; ++fb) {
            std::vector<Rational> t(16, Rational(0));
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) t[(2 * x + y) * 4 + 2 * ((fa >> x) & 1) + ((fb >> y) & 1)] = 1;
            best = std::max(best, oracle::chsh_value(t));
        }
    CHECK(best == 2);
    const auto l2 = producible_vertices(Scenario::uniform(2, 2, 2), Resource::L, 1);
    CHECK(l2.size() == 16);
    CHECK(max_over_vertices(builtin::chsh(), l2).value == best);
}

TEST_CASE("correlator expansion anchors missing parties at setting 0") {
    const auto s = Scenario::uniform(2, 2, 2);
    CorrelatorMonomial m{{{0, 1}}, Rational(1)};
    const auto e = expand_correlators(s, std::span(&m, 1), false, Rational(0), Resource::L, 1);
    for (std::size_t x = 0; x < 4; ++x)
        for (std::size_t a = 0; a < 4; ++a) {
            const Rational expected = x == 2 ? Rational((a >> 1) ? -1 : 1) : Rational(0);
            CHECK(e.coefficient(x, a) == expected);
        }
    CorrelatorMonomial ab{{{1, 1}, {0, 0}}, Rational(2)};
    const auto e2 = expand_correlators(s, std::span(&ab, 1), false, Rational(0), Resource::L, 1);
    CHECK(e2.monomials().front().factors.front().first == 0);  // normalized order
    CHECK(e2.coefficient(1, 3) == 2);
    CHECK(e2.coefficient(1, 1) == -2);
}

TEST_CASE("orbit symmetrization adds each distinct image once") {
    const auto s = Scenario::uniform(3, 2, 2);
    CorrelatorMonomial m{{{0, 0}, {1, 0}, {2, 1}}, Rational(1)};
    const auto e = expand_correlators(s, std::span(&m, 1), true, Rational(0), Resource::L, 1);
    // Images: <A0 B0 C1>, <A0 B1 C0>, <A1 B0 C0>; each evaluates to 1 on the all-zero strategy.
    std::vector<Rational> t(s.table_size(), Rational(0));
    for (std::size_t x = 0; x < 8; ++x) t[s.cell(x, 0)] = 1;
    CHECK(evaluate_exact(e, Correlation::from_rational(s, t)) == 3);
    CorrelatorMonomial full{{{0, 1}, {1, 1}, {2, 1}}, Rational(1)};
    const auto e3 = expand_correlators(s, std::span(&full, 1), true, Rational(0), Resource::L, 1);
    CHECK(evaluate_exact(e3, Correlation::from_rational(s, t)) == 1);
}

TEST_CASE("the symmetrized four-party expression is permutation invariant") {
    const auto e = builtin::ineq10();
    const auto& s = e.scenario();
    std::vector<int> perm = {0, 1, 2, 3};
    while (std::next_permutation(perm.begin(), perm.end())) {
        bool same = true;
        for (std::size_t x = 0; x < s.joint_inputs() && same; ++x)
            for (std::size_t a = 0; a < s.joint_outputs() && same; ++a) {
                const auto xs = s.decode_inputs(x), as = s.decode_outputs(a);
                std::vector<int> px(4), pa(4);
                for (int i = 0; i < 4; ++i) px[perm[i]] = xs[i], pa[perm[i]] = as[i];
                same = e.coefficient(x, a) == e.coefficient(s.encode_inputs(px), s.encode_outputs(pa));
            }
        CHECK(same);
    }
}

TEST_CASE("zero-bound form shifts every value by the bound") {
    std::mt19937_64 rng(2);
    for (const auto& e : {builtin::chsh(), builtin::svetlichny3(), builtin::ineq10()}) {
        const auto z = zero_bound_form(e);
        CHECK(z.zero_bound());
        CHECK(z.resource() == e.resource());
        for (int t = 0; t < 5; ++t) {
            const auto p = random_correlation(e.scenario(), rng);
            CHECK(evaluate_exact(z, p) == evaluate_exact(e, p) - e.bound());
        }
    }
}

TEST_CASE("full-correlator expressions evaluate through the full-correlation table") {
    std::mt19937_64 rng(3);
    for (const auto& s : {Scenario::uniform(2, 2, 3), Scenario::uniform(3, 2, 2), Scenario::uniform(2, 3, 4)}) {
        const int l = s.uniform_outputs();
        std::vector<Rational> beta(s.joint_inputs() * l);
        for (auto& b : beta) b = std::uniform_int_distribution<int>(-4, 4)(rng);
        const auto e = compile_fullcorr(s, beta, Rational(1), Resource::NS, 1);
        CHECK(e.source_form() == SourceForm::FullCorrelator);
        for (int t = 0; t < 5; ++t) {
            const auto p = random_correlation(s, rng);
            const auto fc = full_correlators(p);
            Rational expected = 0;
            for (std::size_t x = 0; x < s.joint_inputs(); ++x)
                for (int r = 0; r < l; ++r) expected += beta[x * l + r] * fc.exact_at(x, r);
            CHECK(evaluate_exact(e, p) == expected);
        }
    }
}

TEST_CASE("lifting is sound on local vertices") {
    std::mt19937_64 rng(4);
    const auto base = zero_bound_form(builtin::chsh());
    for (int h = 1; h <= 2; ++h)
        for (int t = 0; t < 3; ++t) {
            std::vector<int> settings(h), outcomes(h);
            for (auto& v : settings) v = std::uniform_int_distribution<int>(0, 1)(rng);
            for (auto& v : outcomes) v = std::uniform_int_distribution<int>(0, 1)(rng);
            const auto lifted = lift(base, h, settings, outcomes);
            CHECK(lifted.scenario().parties() == 2 + h);
            CHECK(lifted.lifts().size() == 1);
            const auto v = producible_vertices(lifted.scenario(), Resource::L, 1);
            CHECK(max_over_vertices(lifted, v).value == 0);
        }
}

TEST_CASE("lifted value on a product with a deterministic added party equals the base value") {
    std::mt19937_64 rng(5);
    const auto base = zero_bound_form(builtin::chsh());
    const int set[] = {1}, out[] = {0};
    const auto lifted = lift(base, Scenario({2}, {2}), set, out);
    const auto one = Scenario::uniform(1, 2, 2);
    const std::size_t always_zero[] = {0, 0};
    const auto q = deterministic(one, always_zero);
    for (int t = 0; t < 5; ++t) {
        const auto a = random_correlation(one, rng), b = random_correlation(one, rng);
        const auto p2 = product2(a, b);
        const GroupCorrelation f[] = {{p2, {0, 1}}, {q, {2}}};
        CHECK(evaluate_exact(lifted, product(f)) == evaluate_exact(base, p2));
    }
}

TEST_CASE("lift preconditions") {
    const int zero[] = {0}, two[] = {2};
    CHECK_THROWS_AS(lift(builtin::chsh(), 1, zero, zero), std::invalid_argument);
    CHECK_THROWS_AS(lift(zero_bound_form(builtin::svetlichny3()), 1, zero, zero), std::invalid_argument);
    auto t = zero_bound_form(builtin::ns3());
    t.set_resource(Resource::T, 2);
    CHECK_THROWS_AS(lift(t, 1, zero, zero), std::invalid_argument);
    CHECK_THROWS(lift(zero_bound_form(builtin::chsh()), 1, two, zero));
    CHECK_NOTHROW(lift_unchecked(builtin::svetlichny3(), Scenario({1}, {2}), zero, zero));
}

TEST_CASE("naive lifting of the Svetlichny inequality fails on an S_{4,2} product vertex") {
    const auto ce = svetlichny_counterexample();
    CHECK(ce.product_vertex);
    CHECK(ce.value == 4);
    CHECK(ce.second_term == 0);
    const auto s42 = producible_vertices(Scenario::uniform(4, 2, 2), Resource::S, 2, Partition::parse("0,1|2,3", 4));
    bool found = false;
    for (const auto& v : s42.vertices()) found = found || v.same_point(ce.strategy);
    CHECK(found);
    CHECK(evaluate(ce.expression, ce.strategy) == ce.value);
}

TEST_CASE("facet ranks") {
    const auto chsh0 = zero_bound_form(builtin::chsh());
    const auto l2 = producible_vertices(Scenario::uniform(2, 2, 2), Resource::L, 1);
    const auto fr2 = facet_rank(chsh0, l2);
    CHECK(fr2.dimension == 8);
    CHECK(fr2.saturating == 8);
    CHECK(fr2.rank == 7);
    CHECK(fr2.facet());

    const int zero[] = {0};
    const auto lifted = lift(chsh0, 1, zero, zero);
    const auto l3 = producible_vertices(lifted.scenario(), Resource::L, 1);
    const auto fr3 = facet_rank(lifted, l3);
    CHECK(fr3.dimension == 26);
    CHECK(fr3.rank == 25);
    CHECK(fr3.facet());

    std::vector<Rational> c(16, Rational(0));
    c[0] = -1;
    const auto positivity = BellExpression(Scenario::uniform(2, 2, 2), c, Rational(0), Resource::L, 1);
    CHECK(facet_rank(positivity, l2).facet());
    // The sum of two positivity facets is valid but only a lower face.
    c[4] = -1;
    const auto two = BellExpression(Scenario::uniform(2, 2, 2), c, Rational(0), Resource::L, 1);
    CHECK_FALSE(facet_rank(two, l2).facet());
    CHECK_THROWS_AS(facet_rank(builtin::chsh(), l2), std::invalid_argument);
}

TEST_CASE("serial and parallel argmax agree, ties go to the lowest index") {
    std::mt19937_64 rng(6);
    const auto v = producible_vertices(Scenario::uniform(3, 2, 2), Resource::S, 2);
    for (int t = 0; t < 10; ++t) {
        const auto e = random_expression(v.scenario(), rng, -1, 1);
        const auto form = kernels::integer_form(e);
        REQUIRE(form.exact);
        const auto a = kernels::argmax_serial(form, v);
        CHECK(a == kernels::argmax_parallel(form, v));
        const auto best = evaluate(e, v[a]);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto val = evaluate(e, v[i]);
            CHECK(val <= best);
            if (i < a) CHECK(val < best);
        }
    }
}

TEST_CASE("huge coefficients fall back to exact rational maximization") {
    const auto s = Scenario::uniform(2, 2, 2);
    std::vector<Rational> c(16, Rational(0));
    c[5] = Rational(mpz_class("1000000000000000000000"), mpz_class(3));
    c[6] = Rational(-7, 11);
    const BellExpression e(s, c, Rational(0), Resource::L, 1);
    CHECK_FALSE(kernels::integer_form(e).exact);
    const auto v = producible_vertices(s, Resource::L, 1);
    Rational best = evaluate(e, v[0]);
    for (std::size_t i = 1; i < v.size(); ++i) best = std::max(best, evaluate(e, v[i]));
    CHECK(max_over_vertices(e, v).value == best);
}

TEST_CASE("builtin names") {
    CHECK(builtin::by_name("chsh").scenario().parties() == 2);
    const auto l = builtin::by_name("lifted(chsh,2,0,1)");
    CHECK(l.scenario().parties() == 4);
    CHECK(l.lifts().front().outcomes == std::vector<int>{1, 1});
    CHECK(builtin::by_name("lifted(ns3,1,1,0)").scenario().parties() == 4);
    CHECK_THROWS_AS(builtin::by_name("nope"), std::invalid_argument);
    CHECK_THROWS(builtin::by_name("lifted(chsh,1)"));
}
