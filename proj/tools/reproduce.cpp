#include "reproduce.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mgs/errors.hpp"

namespace mgs::cli {

Fixtures Fixtures::load(const std::string& path) {
    auto j = io::read_json_file(path);
    if (!j.contains("version") || !j.contains("values")) throw std::runtime_error("malformed fixtures file " + path);
    if (j.at("version").get<int>() != 1) throw std::runtime_error("unsupported fixtures version in " + path);
    return Fixtures(j.at("values"));
}

const io::Json& Fixtures::entry(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("fixture '" + key + "' missing");
    return *it;
}

double Fixtures::number(const std::string& key) const {
    const auto& v = entry(key).at("value");
    if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
    return v.get<double>();
}

Rational Fixtures::rational(const std::string& key) const {
    const auto& v = entry(key).at("value");
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    throw std::runtime_error("fixture '" + key + "' is not exact");
}

double Fixtures::tolerance(const std::string& key) const { return entry(key).value("tolerance", 0.0); }

std::string Fixtures::source(const std::string& key) const { return entry(key).value("source", ""); }

bool CaseReport::ok() const {
    for (const auto& c : checks)
        if (c.status == "fail") return false;
    return true;
}

io::Json CaseReport::to_json() const {
    io::Json checks_json = io::Json::array();
    for (const auto& c : checks)
        checks_json.push_back({{"name", c.name}, {"status", c.status}, {"observed", c.observed}, {"expected", c.expected}});
    return {{"case", name}, {"ok", ok()}, {"checks", checks_json}};
}

namespace {

std::string fmt(double x, int digits = 12) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

class Recorder {
public:
    Recorder(CaseReport& report, const Fixtures& fixtures) : report_(report), fx_(fixtures) {}

    void exact(const std::string& name, const Rational& observed, const std::string& key) {
        const Rational expected = fx_.rational(key);
        add(name, observed == expected, format_rational(observed), format_rational(expected) + " [" + fx_.source(key) + "]");
    }
    void count(const std::string& name, long observed, const std::string& key) {
        const long expected = fx_.entry(key).at("value").get<long>();
        add(name, observed == expected, std::to_string(observed), std::to_string(expected) + " [" + fx_.source(key) + "]");
    }
    void approx(const std::string& name, double observed, double expected, double tol, const std::string& source) {
        add(name, std::fabs(observed - expected) <= tol, fmt(observed),
            fmt(expected) + " +- " + fmt(tol, 3) + " [" + source + "]");
    }
    void approx(const std::string& name, double observed, const std::string& key) {
        approx(name, observed, fx_.number(key), fx_.tolerance(key), fx_.source(key));
    }
    void truth(const std::string& name, bool ok, const std::string& observed, const std::string& expected) {
        add(name, ok, observed, expected);
    }
    void skip(const std::string& name, const std::string& why) { report_.checks.push_back({name, "skip", why, ""}); }
    /// Runs `body`; an exception becomes a failed check instead of aborting the case.
    void guarded(const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            add(name, false, std::string("error: ") + e.what(), "no error");
        }
    }

private:
    void add(const std::string& name, bool ok, std::string observed, std::string expected) {
        report_.checks.push_back({name, ok ? "pass" : "fail", std::move(observed), std::move(expected)});
    }

    CaseReport& report_;
    const Fixtures& fx_;
};

// A Farkas certificate from an exact solve is re-derived and checked
// against the real table as well.
void record_infeasible(Recorder& rec, const std::string& name, const MembershipResult& r, const Correlation& p,
                       const VertexSet& v) {
    if (r.status != MembershipStatus::Infeasible) {
        rec.truth(name, false, to_string(r.status), "infeasible");
        return;
    }
    const auto check = verify_certificate(r, p, v);
    const double margin = evaluate(*r.witness, p);
    rec.truth(name, check.ok && margin > 0,
              "infeasible, witness max " + format_rational(check.max_over_vertices) + ", margin " + fmt(margin, 6),
              "infeasible with verified witness");
}

void record_feasible(Recorder& rec, const std::string& name, const MembershipResult& r, const Correlation& p,
                     const VertexSet& v) {
    if (r.status != MembershipStatus::Feasible) {
        rec.truth(name, false, to_string(r.status), "feasible");
        return;
    }
    const auto check = verify_certificate(r, p, v);
    std::string observed = "feasible, residual " + fmt(check.residual, 3);
    if (r.rationalization_error > 0) observed += " (rationalization " + fmt(r.rationalization_error, 3) + ")";
    rec.truth(name, check.ok, observed, "feasible with verified weights");
}

BellExpression lifted_ns3() {
    const int zero[] = {0};
    return lift(zero_bound_form(builtin::ns3()), Scenario({1}, {2}), zero, zero);
}

void case_sec3a(Recorder& rec, const ReproduceOptions& opts) {
    const auto p = quantum::born_correlation(quantum::ghz3_minus_mixture(), quantum::ineq10_measurements(4));
    const double value = evaluate(builtin::ineq10(), p);
    rec.approx("ineq10 quantum value", value, "ineq10_quantum_value");
    rec.approx("ineq10 quantum value (digits)", value, "ineq10_quantum_value_digits");

    MgsOptions mo;
    mo.membership = opts.membership;
    mo.library = opts.library;
    rec.guarded("NS k<=2 infeasible", [&] {
        const auto report = mgs(p, Resource::NS, 2, mo);
        for (const auto& level : report.levels) {
            if (!level.result) {
                rec.truth("NS_{4," + std::to_string(level.k) + "} infeasible", false, to_string(level.status) + ": " + level.note,
                          "infeasible");
                continue;
            }
            const auto v = producible_vertices(p.scenario(), Resource::NS, level.k);
            record_infeasible(rec, "NS_{4," + std::to_string(level.k) + "} infeasible", *level.result, p, v);
        }
        rec.count("NS MGS lower bound", report.lower_bound, "sec3a_mgs_ns_lower_bound");
    });

    rec.guarded("S_{4,2} feasible", [&] {
        const auto s42 = producible_vertices(p.scenario(), Resource::S, 2);
        rec.count("S_{4,2} vertex count", static_cast<long>(s42.size()), "s42_vertex_count");
        record_feasible(rec, "S_{4,2} feasible", decompose(p, s42, opts.membership), p, s42);
    });

    rec.guarded("tripartite marginals local", [&] {
        for (int drop = 0; drop < 4; ++drop) {
            std::vector<int> keep;
            for (int i = 0; i < 4; ++i)
                if (i != drop) keep.push_back(i);
            const auto m = marginal(p, keep);
            const auto l3 = producible_vertices(m.scenario(), Resource::L, 1);
            record_feasible(rec, "marginal without party " + std::to_string(drop) + " local", decompose(m, l3, opts.membership),
                            m, l3);
        }
    });

    const Scenario tri = Scenario::uniform(3, 2, 2);
    if (!opts.library || !opts.library->find(Resource::NS, tri)) {
        rec.skip("NS_{4,3} fixed partitions", "no tripartite NS vertices supplied (--vertices)");
        return;
    }
    rec.guarded("NS_{4,3} fixed partitions", [&] {
        for (const auto& part : partitions(4, 3)) {
            if (part.max_block() != 3) continue;
            const auto r = fixed_partition_membership(p, Resource::NS, part, mo);
            const auto v = producible_vertices(p.scenario(), Resource::NS, 3, part, *opts.library);
            record_infeasible(rec, "NS[" + part.to_string() + "] infeasible", r, p, v);
        }
    });
}

void case_sec3b(Recorder& rec, const ReproduceOptions& opts) {
    const auto real = quantum::born_correlation(quantum::ghz_state(4), quantum::sigma_xy_measurements(4));
    const auto rat = rationalize(real);
    rec.truth("rationalization exact", rat.max_error == 0.0 && rat.preserves_no_signaling,
              "error " + fmt(rat.max_error, 3), "0 and no-signaling");
    const auto& p = rat.correlation;

    const auto l4 = producible_vertices(p.scenario(), Resource::L, 1);
    record_infeasible(rec, "L_{4,1} infeasible", decompose(p, l4, opts.membership), p, l4);
    const auto ns42 = producible_vertices(p.scenario(), Resource::NS, 2);
    record_feasible(rec, "NS_{4,2} feasible", decompose(p, ns42, opts.membership), p, ns42);

    MgsOptions mo;
    mo.membership = opts.membership;
    mo.library = opts.library;
    const auto report = mgs(p, Resource::NS, 4, mo);
    rec.count("MGS(NS)", report.mgs.value_or(-1), "ghz4_mgs_ns");
}

void case_sec3c(Recorder& rec, const Fixtures& fx) {
    const auto expr = lifted_ns3();
    const auto meas = quantum::svetlichny_measurements().extended(
        quantum::MeasurementSet({{quantum::Observable::from_bloch(0, 0, 1)}}));
    const double slope = fx.number("sec3c_slope");
    const double tol = fx.tolerance("sec3c_slope");
    for (double v : {0.05, 0.2, 1.0}) {
        const auto p = quantum::born_correlation(quantum::ghz3_flagged_noise(v), meas);
        rec.approx("lifted value at v=" + fmt(v, 3), evaluate(expr, p), v * slope, tol, fx.source("sec3c_slope"));
    }
}

void case_thm1(Recorder& rec, const Fixtures& fx) {
    const long samples = fx.entry("thm1_samples").at("value").get<long>();
    std::mt19937_64 rng(0x7e1);
    std::uniform_int_distribution<int> parties(1, 4), inputs(1, 3), outputs(2, 4);
    long ns_ok = 0, corr_ok = 0;
    std::string first_failure;
    for (long i = 0; i < samples; ++i) {
        const Scenario s = Scenario::uniform(parties(rng), inputs(rng), outputs(rng));
        const int l = s.uniform_outputs();
        std::uniform_int_distribution<int> residue(0, l - 1);
        std::vector<int> f(s.joint_inputs());
        for (auto& r : f) r = residue(rng);
        const auto p = simulate_full_correlators(DeterministicResidueFunction(s, f));
        if (is_no_signaling(p).pass) ++ns_ok;
        else if (first_failure.empty()) first_failure = "signaling at sample " + std::to_string(i);
        const auto fc = full_correlators(p);
        bool match = true;
        for (std::size_t x = 0; x < s.joint_inputs(); ++x)
            for (int r = 0; r < l; ++r)
                if (fc.exact_at(x, r) != Rational(r == f[x] ? 1 : 0)) match = false;
        if (match) ++corr_ok;
        else if (first_failure.empty()) first_failure = "full correlators differ at sample " + std::to_string(i);
    }
    rec.truth("simulated boxes no-signaling", ns_ok == samples, std::to_string(ns_ok) + "/" + std::to_string(samples),
              std::to_string(samples) + "/" + std::to_string(samples) + (first_failure.empty() ? "" : " (" + first_failure + ")"));
    rec.truth("full correlators reproduce f", corr_ok == samples, std::to_string(corr_ok) + "/" + std::to_string(samples),
              std::to_string(samples) + "/" + std::to_string(samples));
}

void case_lifted_chsh(Recorder& rec) {
    const auto base = zero_bound_form(builtin::chsh());
    for (int h = 1; h <= 2; ++h) {
        const std::vector<int> zeros(h, 0);
        const auto expr = lift(base, h, zeros, zeros);
        const auto v = producible_vertices(expr.scenario(), Resource::L, 1);
        const auto m = max_over_vertices(expr, v);
        rec.exact("lifted CHSH h=" + std::to_string(h) + " max over L", m.value, "lifted_max");
        if (h == 1) {
            const auto fr = facet_rank(expr, v);
            rec.count("L_3 dimension", fr.dimension, "l3_dimension");
            rec.count("lifted CHSH h=1 rank", fr.rank, "lifted_chsh_facet_rank");
            rec.truth("lifted CHSH h=1 facet", fr.facet(), fr.facet() ? "facet" : "not a facet", "facet");
        }
    }
    const auto expr = lifted_ns3();
    const auto ns42 = producible_vertices(expr.scenario(), Resource::NS, 2);
    rec.exact("lifted NS_{3,2} inequality max over NS_{4,2}", max_over_vertices(expr, ns42).value, "lifted_max");
}

void case_svet_counterexample(Recorder& rec) {
    const auto ce = svetlichny_counterexample();
    rec.truth("strategy is an S_{4,2} product vertex", ce.product_vertex, ce.product_vertex ? "yes" : "no", "yes");
    rec.exact("naive lifting value", ce.value, "svet_counterexample_value");
    rec.exact("second term", ce.second_term, "svet_counterexample_second_term");

    const auto s32 = producible_vertices(Scenario::uniform(3, 2, 2), Resource::S, 2);
    rec.exact("Svetlichny max over S_{3,2}", max_over_vertices(builtin::svetlichny3(), s32).value, "svetlichny_s32_max");
    const auto ns32 = producible_vertices(Scenario::uniform(3, 2, 2), Resource::NS, 2);
    rec.exact("Svetlichny max over NS_{3,2}", max_over_vertices(builtin::ns3(), ns32).value, "svetlichny_ns32_max");
    const auto ghz = quantum::born_correlation(quantum::ghz_state(3), quantum::svetlichny_measurements());
    rec.approx("Svetlichny value of GHZ_3", evaluate(builtin::svetlichny3(), ghz), "svetlichny_ghz3_value");

    bool rejected = false;
    try {
        const int zero[] = {0};
        (void)lift(zero_bound_form(builtin::svetlichny3()), 1, zero, zero);
    } catch (const std::invalid_argument&) {
        rejected = true;
    }
    rec.truth("lift refuses the signaling resource", rejected, rejected ? "rejected" : "accepted", "rejected");
}

void case_ineq10_bound(Recorder& rec) {
    const auto v = producible_vertices(Scenario::uniform(4, 2, 2), Resource::NS, 2);
    rec.count("NS_{4,2} vertex count", static_cast<long>(v.size()), "ns42_vertex_count");
    rec.exact("ineq10 max over NS_{4,2}", max_over_vertices(builtin::ineq10(), v).value, "ineq10_ns42_bound");
}

void case_chsh_bounds(Recorder& rec) {
    const auto s = Scenario::uniform(2, 2, 2);
    const auto l2 = producible_vertices(s, Resource::L, 1);
    rec.exact("CHSH max over L", max_over_vertices(builtin::chsh(), l2).value, "chsh_local_max");
    const auto ns = ns_vertices(s);
    long deterministic = 0;
    for (const auto& v : ns.vertices())
        if (v.denominator == 1) ++deterministic;
    rec.count("NS vertex count", static_cast<long>(ns.size()), "ns22_vertex_count");
    rec.count("deterministic NS vertices", deterministic, "ns22_deterministic_count");
    rec.exact("CHSH max over NS", max_over_vertices(builtin::chsh(), ns).value, "chsh_ns_max");
}

}  // namespace

const std::vector<std::string>& case_names() {
    static const std::vector<std::string> names = {"sec3a",       "sec3b-ghz4",          "sec3c",        "thm1",
                                                   "lifted-chsh", "svet-counterexample", "ineq10-bound", "chsh-bounds"};
    return names;
}

CaseReport run_case(const std::string& name, const Fixtures& fixtures, const ReproduceOptions& opts) {
    CaseReport report;
    report.name = name;
    Recorder rec(report, fixtures);
    const auto start = std::chrono::steady_clock::now();
    if (name == "sec3a") case_sec3a(rec, opts);
    else if (name == "sec3b-ghz4") case_sec3b(rec, opts);
    else if (name == "sec3c") case_sec3c(rec, fixtures);
    else if (name == "thm1") case_thm1(rec, fixtures);
    else if (name == "lifted-chsh") case_lifted_chsh(rec);
    else if (name == "svet-counterexample") case_svet_counterexample(rec);
    else if (name == "ineq10-bound") case_ineq10_bound(rec);
    else if (name == "chsh-bounds") case_chsh_bounds(rec);
    else throw std::invalid_argument("unknown reproduce case '" + name + "'");
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace mgs::cli
