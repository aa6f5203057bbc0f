// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "mgs/io.hpp"
#include "oracles.hpp"

using namespace mgs;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) ok = false;
        if (!detail.empty()) detail += "; ";
        detail += (cond ? "" : "FAILED ") + what;
    }
};

std::string str(double x, int digits = 12) {
    std::ostringstream os;
    os << std::setprecision(digits) << x;
    return os.str();
}

class Fixtures {
public:
    Fixtures() : j_(io::read_json_file(MGS_TEST_FIXTURES).at("values")) {}
    double number(const std::string& k) const {
        const auto& v = j_.at(k).at("value");
        return v.is_string() ? to_double(parse_rational(v.get<std::string>())) : v.get<double>();
    }
    Rational exact(const std::string& k) const {
        const auto& v = j_.at(k).at("value");
        return v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long>());
    }

private:
    io::Json j_;
};

const double kGhzSvetlichny = 4 * std::sqrt(2.0);

Outcome c1(const Fixtures& fx) {
    Outcome o;
    const auto p = quantum::born_correlation(quantum::ghz3_minus_mixture(), quantum::ineq10_measurements(4));
    const double v = evaluate(builtin::ineq10(), p);
    o.require(std::fabs(v - fx.number("ineq10_quantum_value")) <= 5e-4, "value " + str(v) + " vs 117.8827 +- 5e-4");
    return o;
}

Outcome c2(const Fixtures& fx) {
    Outcome o;
    const auto v = producible_vertices(Scenario::uniform(4, 2, 2), Resource::NS, 2);
    const auto m = max_over_vertices(builtin::ineq10(), v);
    o.require(m.value == fx.exact("ineq10_ns42_bound"), "max " + format_rational(m.value) + " over " + std::to_string(v.size()) + " vertices");
    return o;
}

Outcome c3(const Fixtures& fx) {
    Outcome o;
    const auto s = Scenario::uniform(2, 2, 2);
    const auto l = local_deterministic_vertices(s);
    const auto ns = ns_vertices(s);
    const auto ml = max_over_vertices(builtin::chsh(), l).value;
    const auto mn = max_over_vertices(builtin::chsh(), ns).value;
    o.require(l.size() == 16 && ml == fx.exact("chsh_local_max"), "local max " + format_rational(ml) + " over " + std::to_string(l.size()));
    o.require(ns.size() == 24 && mn == fx.exact("chsh_ns_max"), "NS max " + format_rational(mn) + " over " + std::to_string(ns.size()));
    return o;
}

Outcome c4(const Fixtures& fx) {
    Outcome o;
    const auto v = ns_vertices(Scenario::uniform(2, 2, 2));
    const auto forms = oracle::ns22_cell_forms();
    int det = 0, half = 0, extreme = 0;
    std::set<std::vector<Rational>> got;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto t = v.dense(i);
        got.insert(t);
        oracle::RMatrix tight;
        bool has_half = false;
        for (std::size_t c = 0; c < 16; ++c) {
            if (t[c] == 0) tight.emplace_back(forms[c].begin(), forms[c].begin() + 8);
            has_half = has_half || t[c] == Rational(1, 2);
        }
        if (oracle::rank(tight) == 8) ++extreme;
        if (v[i].denominator == 1) ++det;
        else if (has_half) ++half;
    }
    o.require(static_cast<long>(v.size()) == fx.number("ns22_vertex_count"), std::to_string(v.size()) + " vertices");
    o.require(det == fx.number("ns22_deterministic_count") && half == 8,
              std::to_string(det) + " deterministic, " + std::to_string(half) + " half-integer");
    o.require(extreme == static_cast<int>(v.size()), std::to_string(extreme) + " pass the rank test");
    o.require(got == oracle::ns22_vertices_brute(), "matches brute-force enumeration");
    return o;
}

Outcome c5(const Fixtures& fx) {
    Outcome o;
    const auto s3 = Scenario::uniform(3, 2, 2);
    const auto sv = producible_vertices(s3, Resource::S, 2);
    const auto ms = max_over_vertices(builtin::svetlichny3(), sv).value;
    o.require(ms == fx.exact("svetlichny_s32_max"), "S_{3,2} max " + format_rational(ms));
    const auto p = quantum::born_correlation(quantum::ghz_state(3), quantum::svetlichny_measurements());
    const double q = evaluate(builtin::svetlichny3(), p);
    const double r2 = 1 / std::sqrt(2.0);
    const auto ref = oracle::born_table({{1.0, oracle::ghz(3)}},
                                        {{{1, 0, 0}, {0, 1, 0}}, {{r2, -r2, 0}, {r2, r2, 0}}, {{0, -1, 0}, {1, 0, 0}}});
    const double q_oracle = oracle::svetlichny_value(ref);
    o.require(std::fabs(q - kGhzSvetlichny) <= 1e-9 && std::fabs(q_oracle - fx.number("svetlichny_ghz3_value")) <= 1e-9,
              "GHZ_3 value " + str(q) + " (oracle " + str(q_oracle) + ")");
    const auto nv = producible_vertices(s3, Resource::NS, 2);
    const auto mn = max_over_vertices(builtin::ns3(), nv);
    o.require(mn.value == fx.exact("svetlichny_ns32_max"), "NS_{3,2} attains " + format_rational(mn.value) + " at " + nv.provenance(mn.index));
    return o;
}

Outcome c6(const Fixtures& fx) {
    Outcome o;
    const long samples = static_cast<long>(fx.number("thm1_samples"));
    std::mt19937_64 rng(20240601);
    long ns_ok = 0, delta_ok = 0;
    for (long i = 0; i < samples; ++i) {
        const int n = std::uniform_int_distribution<int>(1, 4)(rng);
        const int m = std::uniform_int_distribution<int>(1, 3)(rng);
        const int l = std::uniform_int_distribution<int>(2, 4)(rng);
        const auto s = Scenario::uniform(n, m, l);
        std::vector<int> f(s.joint_inputs());
        for (auto& r : f) r = std::uniform_int_distribution<int>(0, l - 1)(rng);
        const auto p = simulate_full_correlators(DeterministicResidueFunction(s, f));
        if (is_no_signaling(p).pass) ++ns_ok;
        // Full correlators straight from the table.
        bool match = true;
        for (std::size_t x = 0; x < s.joint_inputs() && match; ++x) {
            std::vector<Rational> fc(l, Rational(0));
            for (std::size_t a = 0; a < s.joint_outputs(); ++a) {
                int sum = 0;
                for (int v : s.decode_outputs(a)) sum += v;
                fc[sum % l] += p.exact_at(x, a);
            }
            for (int r = 0; r < l; ++r) match = match && fc[r] == (r == f[x] ? 1 : 0);
        }
        if (match) ++delta_ok;
    }
    o.require(ns_ok == samples, std::to_string(ns_ok) + "/" + std::to_string(samples) + " no-signaling");
    o.require(delta_ok == samples, std::to_string(delta_ok) + "/" + std::to_string(samples) + " reproduce delta_{r,f(x)}");
    return o;
}

Outcome c7(const Fixtures& fx) {
    Outcome o;
    const auto base = zero_bound_form(builtin::chsh());
    for (int h = 1; h <= 2; ++h) {
        const std::vector<int> zeros(h, 0);
        const auto e = lift(base, h, zeros, zeros);
        const auto v = producible_vertices(e.scenario(), Resource::L, 1);
        bool all = true;
        for (const auto& vert : v.vertices()) all = all && evaluate(e, vert) <= 0;
        o.require(all, "lifted CHSH h=" + std::to_string(h) + " <= 0 on " + std::to_string(v.size()) + " local vertices");
    }
    const int zero[] = {0};
    const auto e = lift(zero_bound_form(builtin::ns3()), Scenario({1}, {2}), zero, zero);
    const auto v = producible_vertices(e.scenario(), Resource::NS, 2);
    const auto m = max_over_vertices(e, v);
    o.require(m.value == fx.exact("lifted_max"), "lifted NS_{3,2} inequality max " + format_rational(m.value) + " over NS_{4,2}");
    return o;
}

Outcome c8(const Fixtures& fx) {
    Outcome o;
    const auto ce = svetlichny_counterexample();
    o.require(ce.product_vertex, "strategy is an S_{4,2} product vertex");
    o.require(ce.value == fx.exact("svet_counterexample_value") && ce.value > 0, "value " + format_rational(ce.value));
    return o;
}

Outcome c9(const Fixtures& fx) {
    Outcome o;
    const int zero[] = {0};
    const auto e = lift(zero_bound_form(builtin::ns3()), Scenario({1}, {2}), zero, zero);
    const auto meas = io::measurements_from_json(io::Json{{"preset", "svetlichny_z"}});
    const double slope = fx.number("sec3c_slope");
    for (double v : {0.05, 0.2, 1.0}) {
        const double got = evaluate(e, quantum::born_correlation(quantum::ghz3_flagged_noise(v), meas));
        const double want = v * (kGhzSvetlichny - 4);
        o.require(std::fabs(got - want) <= 1e-9 && std::fabs(slope - (kGhzSvetlichny - 4)) <= 1e-12,
                  "v=" + str(v, 3) + ": " + str(got));
    }
    return o;
}

Outcome c10(const Fixtures&) {
    Outcome o;
    const auto p = quantum::born_correlation(quantum::ghz3_minus_mixture(), quantum::ineq10_measurements(4));
    const auto rat = rationalize(p, 1'000'000);
    const auto v = producible_vertices(p.scenario(), Resource::S, 2);
    const auto exact = decompose(rat.correlation, v);
    const auto check = verify_certificate(exact, rat.correlation, v);
    o.require(exact.status == MembershipStatus::Feasible && check.ok && check.residual == 0,
              "exact: " + to_string(exact.status) + ", residual " + str(check.residual, 3) + " after rationalization error " +
                  str(rat.max_error, 3));
    MembershipOptions eps;
    eps.mode = LpMode::Epsilon;
    eps.epsilon = 1e-8;
    const auto real = decompose(p, v, eps);
    o.require(real.status == MembershipStatus::Feasible && real.residual <= 1e-8,
              "epsilon: " + to_string(real.status) + ", residual " + str(real.residual, 3));
    return o;
}

Outcome c11(const Fixtures&) {
    Outcome o;
    const auto p = quantum::born_correlation(quantum::ghz3_minus_mixture(), quantum::ineq10_measurements(4));
    for (int drop = 0; drop < 4; ++drop) {
        std::vector<int> keep;
        for (int i = 0; i < 4; ++i)
            if (i != drop) keep.push_back(i);
        const auto m = marginal(p, keep);
        const auto l3 = producible_vertices(m.scenario(), Resource::L, 1);
        const auto r = decompose(m, l3);
        o.require(l3.size() == 64 && r.status == MembershipStatus::Feasible && verify_certificate(r, m, l3).ok,
                  "without party " + std::to_string(drop) + ": " + to_string(r.status));
    }
    return o;
}

Outcome c12(const Fixtures& fx) {
    Outcome o;
    const auto rat = rationalize(quantum::born_correlation(quantum::ghz_state(4), quantum::sigma_xy_measurements(4)));
    const auto& p = rat.correlation;
    o.require(rat.max_error == 0, "rationalization exact");
    const auto l4 = producible_vertices(p.scenario(), Resource::L, 1);
    const auto r1 = decompose(p, l4);
    o.require(r1.status == MembershipStatus::Infeasible && r1.witness && verify_certificate(r1, p, l4).ok,
              "L_{4,1}: " + to_string(r1.status) + " with witness margin " + str(r1.margin, 6));
    const auto ns = producible_vertices(p.scenario(), Resource::NS, 2);
    const auto r2 = decompose(p, ns);
    o.require(r2.status == MembershipStatus::Feasible && verify_certificate(r2, p, ns).ok, "NS_{4,2}: " + to_string(r2.status));
    const auto rep = mgs::mgs(p, Resource::NS, 4);
    o.require(rep.mgs && *rep.mgs == fx.number("ghz4_mgs_ns"), "MGS(NS) = " + (rep.mgs ? std::to_string(*rep.mgs) : "none"));
    return o;
}

Outcome c13(const Fixtures&) {
    Outcome o;
    const int zero[] = {0};
    const auto e = lift(zero_bound_form(builtin::chsh()), 1, zero, zero);
    const auto v = producible_vertices(e.scenario(), Resource::L, 1);
    const auto fr = facet_rank(e, v);
    o.require(fr.rank == fr.dimension - 1, "rank " + std::to_string(fr.rank) + ", dim " + std::to_string(fr.dimension));
    return o;
}

struct Criterion {
    int id;
    const char* title;
    double limit_seconds;
    std::function<Outcome(const Fixtures&)> run;
};

}  // namespace

int main() {
    const Fixtures fx;
    const std::vector<Criterion> criteria = {
        {1, "ineq10 quantum value", 1, c1},
        {2, "ineq10 NS_{4,2} bound", 120, c2},
        {3, "CHSH local and NS maxima", 1, c3},
        {4, "NS_(2,2;2,2) vertex enumeration", 5, c4},
        {5, "Svetlichny bounds and GHZ_3 value", 30, c5},
        {6, "full-correlation simulator", 10, c6},
        {7, "lifting soundness", 120, c7},
        {8, "Svetlichny lifting counterexample", 1, c8},
        {9, "lifted detection of flagged GHZ_3 noise", 1, c9},
        {10, "S_{4,2} membership", 600, c10},
        {11, "tripartite marginals local", 10, c11},
        {12, "GHZ_4 minimal group size", 300, c12},
        {13, "lifted CHSH facet rank", 60, c13},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run(fx);
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = t <= c.limit_seconds;
        const bool ok = o.ok && in_time;
        if (!ok) ++failed;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << std::setw(2) << c.id << " " << c.title << ": " << o.detail
                  << " [" << std::fixed << std::setprecision(2) << t << " s, limit " << std::setprecision(0)
                  << c.limit_seconds << " s" << (in_time ? "" : ", TOO SLOW") << "]" << std::endl;
        std::cout.unsetf(std::ios::floatfield);
    }
    std::cout << (failed ? "FAILED: " : "all criteria passed") << (failed ? std::to_string(failed) + " criteria" : "") << std::endl;
    return failed ? 1 : 0;
}
