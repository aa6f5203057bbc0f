#include "cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "mgs/errors.hpp"
#include "mgs/io.hpp"
#include "reproduce.hpp"

#ifndef MGS_FIXTURES_PATH
#define MGS_FIXTURES_PATH "tests/fixtures/expected_values.json"
#endif

namespace mgs::cli {

namespace {

using io::Json;

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw std::invalid_argument("expected a comma-separated integer list: '" + text + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty integer list");
    return out;
}

struct ScenarioFlags {
    std::string text;  // "m1,m2,...;l1,l2,..."
    int parties = 0, inputs = 2, outputs = 2;

    void attach(CLI::App* app) {
        app->add_option("--scenario", text, "inputs;outputs per party, e.g. \"2,2;2,2\"");
        app->add_option("--parties", parties, "uniform scenario: number of parties");
        app->add_option("--inputs", inputs, "uniform scenario: settings per party")->capture_default_str();
        app->add_option("--outputs", outputs, "uniform scenario: outcomes per party")->capture_default_str();
    }

    Scenario get() const {
        if (!text.empty()) {
            const auto semi = text.find(';');
            if (semi == std::string::npos) throw std::invalid_argument("--scenario needs 'inputs;outputs'");
            return Scenario(parse_int_list(text.substr(0, semi)), parse_int_list(text.substr(semi + 1)));
        }
        if (parties <= 0) throw std::invalid_argument("give --scenario or --parties");
        return Scenario::uniform(parties, inputs, outputs);
    }
};

struct PolytopeFlags {
    std::string resource = "NS";
    int k = 0;
    std::string partition;
    std::vector<std::string> library_files;
    std::string polytope_file;

    void attach(CLI::App* app, bool with_k = true) {
        app->add_option("--resource", resource, "L, NS or S")->capture_default_str();
        if (with_k) app->add_option("--k", k, "maximal group size");
        app->add_option("--partition", partition, "fixed partition, e.g. \"0,1|2,3\"");
        app->add_option("--vertices", library_files, "group vertex files (JSON or JSONL)");
        app->add_option("--polytope", polytope_file, "explicit vertex set to use instead of generating one");
    }

    GroupVertexLibrary library() const {
        GroupVertexLibrary lib;
        for (const auto& f : library_files) lib.add(io::load_vertex_file(f));
        return lib;
    }

    VertexSet build(const Scenario& s, const GroupVertexLibrary& lib) const {
        if (!polytope_file.empty()) {
            auto v = io::load_vertex_file(polytope_file);
            if (!(v.scenario() == s)) throw std::invalid_argument("--polytope scenario does not match the input");
            return v;
        }
        const Resource r = parse_resource(resource);
        std::optional<Partition> part;
        int kk = k;
        if (!partition.empty()) {
            part = Partition::parse(partition, s.parties());
            if (kk == 0) kk = part->max_block();
        }
        if (kk <= 0) throw std::invalid_argument("give --k or --partition");
        return producible_vertices(s, r, kk, part, lib);
    }
};

struct Globals {
    bool json = false;
    int threads = 0;
    bool exact = false;
    double tol = 0.0;
    std::string output;

    MembershipOptions membership() const {
        MembershipOptions o;
        if (tol > 0) {
            o.mode = LpMode::Epsilon;
            o.epsilon = tol;
        }
        return o;
    }
};

Correlation read_correlation(const std::string& path) { return io::correlation_from_json(io::read_json_file(path)); }

BellExpression read_expression(const std::string& arg) {
    if (std::filesystem::exists(arg)) return io::expression_from_json(io::read_json_file(arg));
    return builtin::by_name(arg);
}

std::string fmt(double x, int digits = 12) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

int status_code(MembershipStatus s) {
    switch (s) {
        case MembershipStatus::Feasible: return exit_code::ok;
        case MembershipStatus::Infeasible: return exit_code::infeasible;
        case MembershipStatus::Unresolved: return exit_code::unresolved;
    }
    return exit_code::error;
}

class Commands {
public:
    Commands(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    void attach(CLI::App& app) {
        app.add_flag("--json", g_.json, "machine-readable output on stdout");
        app.add_option("--threads", g_.threads, "OpenMP threads (results do not depend on it)");
        auto* exact = app.add_flag("--exact", g_.exact, "exact rational LP (default)");
        auto* tol = app.add_option("--tol", g_.tol, "epsilon-feasibility LP with this tolerance");
        exact->excludes(tol);
        app.add_option("-o,--output", g_.output, "write the result file here");

        gen_quantum(app);
        check_ns(app);
        correlators(app);
        simulate_fullcorr(app);
        vertices(app);
        membership(app);
        mgs_cmd(app);
        lift_cmd(app);
        eval(app);
        facet_rank_cmd(app);
        reproduce(app);
    }

    int execute() {
        if (g_.threads > 0) omp_set_num_threads(g_.threads);
        return action_();
    }

private:
    void emit(const Json& j) {
        if (!g_.output.empty()) io::write_json_file(g_.output, j);
        if (g_.json) out_ << j.dump(2) << "\n";
    }

    void gen_quantum(CLI::App& app) {
        auto* c = app.add_subcommand("gen-quantum", "Born-rule correlation of a state and measurements");
        auto state = std::make_shared<std::string>();
        auto params = std::make_shared<std::vector<std::string>>();
        auto meas = std::make_shared<std::string>();
        auto parties = std::make_shared<int>(4);
        c->add_option("--state", *state, "ghz, sec3a, sec3c or a state JSON file")->required();
        c->add_option("--param", *params, "state parameter key=value (n, v)");
        c->add_option("--measurements", *meas, "ineq10, svetlichny, svetlichny_z, sigma_xy or a JSON file")->required();
        c->add_option("--measurement-parties", *parties, "parties for the ineq10 and sigma_xy presets")->capture_default_str();
        c->callback([=, this] {
            action_ = [=, this] {
                Json sj, mj;
                if (std::filesystem::exists(*state)) sj = io::read_json_file(*state);
                else {
                    sj["builtin"] = *state;
                    for (const auto& kv : *params) {
                        const auto eq = kv.find('=');
                        if (eq == std::string::npos) throw std::invalid_argument("--param needs key=value");
                        sj[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
                    }
                }
                if (std::filesystem::exists(*meas)) mj = io::read_json_file(*meas);
                else mj = Json{{"preset", *meas}, {"parties", *parties}};
                const auto rho = io::state_from_json(sj);
                const auto m = io::measurements_from_json(mj);
                if (rho.qubits() != m.parties())
                    throw std::invalid_argument("state has " + std::to_string(rho.qubits()) + " qubits but measurements cover " +
                                                std::to_string(m.parties()) + " parties");
                const auto p = quantum::born_correlation(rho, m);
                if (!g_.json) {
                    const auto ns = is_no_signaling(p);
                    out_ << "correlation " << p.scenario().describe() << ", " << p.scenario().table_size() << " cells, "
                         << (ns.pass ? "no-signaling" : "signaling") << "\n";
                    if (!g_.output.empty()) out_ << "written to " << g_.output << "\n";
                }
                emit(io::to_json(p));
                return exit_code::ok;
            };
        });
    }

    void check_ns(CLI::App& app) {
        auto* c = app.add_subcommand("check-ns", "Check the no-signaling conditions");
        auto file = std::make_shared<std::string>();
        c->add_option("correlation", *file, "correlation JSON")->required();
        c->callback([=, this] {
            action_ = [=, this] {
                const auto p = read_correlation(*file);
                const auto r = is_no_signaling(p, g_.tol > 0 ? g_.tol : kDefaultTolerance);
                if (g_.json || !g_.output.empty()) {
                    emit(Json{{"pass", r.pass},
                              {"worst_violation", r.worst_violation},
                              {"subset", r.subset},
                              {"signaling_party", r.signaling_party}});
                }
                if (!g_.json) {
                    if (r.pass) out_ << "no-signaling: pass (worst deviation " << fmt(r.worst_violation, 3) << ")\n";
                    else {
                        out_ << "no-signaling: FAIL, party " << r.signaling_party << " signals to {";
                        for (std::size_t i = 0; i < r.subset.size(); ++i) out_ << (i ? "," : "") << r.subset[i];
                        out_ << "} by " << fmt(r.worst_violation, 6) << "\n";
                    }
                }
                return r.pass ? exit_code::ok : exit_code::infeasible;
            };
        });
    }

    void correlators(CLI::App& app) {
        auto* c = app.add_subcommand("correlators", "Full-correlation function P([sum a]_l = r | x)");
        auto file = std::make_shared<std::string>();
        c->add_option("correlation", *file, "correlation JSON")->required();
        c->callback([=, this] {
            action_ = [=, this] {
                const auto p = read_correlation(*file);
                const auto fc = full_correlators(p);
                const auto& s = fc.scenario();
                Json rows = Json::array();
                for (std::size_t x = 0; x < s.joint_inputs(); ++x) {
                    Json row = Json::array();
                    for (int r = 0; r < fc.residues(); ++r) {
                        if (fc.mode() == NumericMode::Rational) row.push_back(format_rational(fc.exact_at(x, r)));
                        else row.push_back(fc.at(x, r));
                    }
                    rows.push_back(row);
                }
                if (!g_.json) {
                    for (std::size_t x = 0; x < s.joint_inputs(); ++x) {
                        const auto xs = s.decode_inputs(x);
                        out_ << "x=";
                        for (int v : xs) out_ << v;
                        out_ << " ";
                        for (const auto& v : rows[x]) out_ << " " << (v.is_string() ? v.get<std::string>() : fmt(v.get<double>(), 10));
                        out_ << "\n";
                    }
                }
                emit(Json{{"scenario", io::to_json(s)}, {"residues", fc.residues()}, {"table", rows}});
                return exit_code::ok;
            };
        });
    }

    void simulate_fullcorr(CLI::App& app) {
        auto* c = app.add_subcommand("simulate-fullcorr", "No-signaling box with deterministic full correlators");
        auto sf = std::make_shared<ScenarioFlags>();
        sf->attach(c);
        auto f = std::make_shared<std::string>();
        auto seed = std::make_shared<std::uint64_t>(0);
        auto* fo = c->add_option("--f", *f, "residue f(x) per joint input, comma separated");
        auto* so = c->add_option("--seed", *seed, "draw f at random with this seed");
        fo->excludes(so);
        c->callback([=, this] {
            action_ = [=, this] {
                const Scenario s = sf->get();
                const int l = s.uniform_outputs();
                if (l == 0) throw std::invalid_argument("full correlators need equal output counts");
                std::vector<int> values;
                if (!f->empty()) values = parse_int_list(*f);
                else {
                    std::mt19937_64 rng(*seed);
                    std::uniform_int_distribution<int> d(0, l - 1);
                    values.resize(s.joint_inputs());
                    for (auto& v : values) v = d(rng);
                }
                const auto p = simulate_full_correlators(DeterministicResidueFunction(s, values));
                if (!g_.json) {
                    out_ << "simulated " << s.describe() << ": no-signaling " << (is_no_signaling(p).pass ? "pass" : "FAIL")
                         << "\n";
                    if (!g_.output.empty()) out_ << "written to " << g_.output << "\n";
                }
                emit(io::to_json(p));
                return exit_code::ok;
            };
        });
    }

    void vertices(CLI::App& app) {
        auto* c = app.add_subcommand("vertices", "Extremal k-producible vertices");
        auto sf = std::make_shared<ScenarioFlags>();
        auto pf = std::make_shared<PolytopeFlags>();
        sf->attach(c);
        pf->attach(c);
        c->callback([=, this] {
            action_ = [=, this] {
                const auto lib = pf->library();
                const auto v = pf->build(sf->get(), lib);
                if (!g_.output.empty()) {
                    if (g_.output.size() > 6 && g_.output.ends_with(".jsonl")) {
                        std::ofstream o(g_.output);
                        if (!o) throw std::runtime_error("cannot write " + g_.output);
                        io::write_vertices_jsonl(o, v);
                    } else io::write_json_file(g_.output, io::to_json(v));
                }
                if (g_.json) out_ << io::to_json(v).dump(2) << "\n";
                else {
                    out_ << to_string(v.resource()) << "_{" << v.scenario().parties() << "," << v.k() << "} "
                         << v.scenario().describe() << ": " << v.size() << " vertices over " << v.partitions().size()
                         << " partitions\n";
                }
                return exit_code::ok;
            };
        });
    }

    void print_membership(const MembershipResult& r, const Correlation& p, const VertexSet& v) {
        out_ << to_string(r.status) << " against " << v.size() << " vertices (" << to_string(v.resource()) << ", k="
             << v.k();
        if (v.restriction()) out_ << ", partition " << v.restriction()->to_string();
        out_ << ")\n";
        if (r.rationalization_error > 0) out_ << "  rationalization error " << fmt(r.rationalization_error, 3) << "\n";
        if (r.status == MembershipStatus::Feasible) {
            out_ << "  support " << (r.weights.size() + r.real_weights.size()) << " vertices, residual "
                 << fmt(r.residual, 3) << "\n";
        }
        if (r.witness) {
            const auto check = verify_certificate(r, p, v);
            out_ << "  witness: " << r.witness->terms().size() << " terms, max over vertices "
                 << format_rational(check.max_over_vertices) << ", value on input " << fmt(r.margin, 8)
                 << (check.ok ? " (verified)" : " (NOT verified: " + check.detail + ")") << "\n";
        }
        if (!r.note.empty()) out_ << "  " << r.note << "\n";
    }

    void membership(CLI::App& app) {
        auto* c = app.add_subcommand("membership", "Decide membership in a k-producible polytope");
        auto file = std::make_shared<std::string>();
        auto pf = std::make_shared<PolytopeFlags>();
        c->add_option("correlation", *file, "correlation JSON")->required();
        pf->attach(c);
        c->callback([=, this] {
            action_ = [=, this] {
                const auto p = read_correlation(*file);
                const auto lib = pf->library();
                VertexSet v;
                try {
                    v = pf->build(p.scenario(), lib);
                } catch (const MissingVertexDataError& e) {
                    if (!g_.json) out_ << "unresolved: " << e.what() << "\n";
                    emit(Json{{"status", "unresolved"}, {"note", e.what()}});
                    return exit_code::unresolved;
                } catch (const CapExceededError& e) {
                    if (!g_.json) out_ << "unresolved: " << e.what() << "\n";
                    emit(Json{{"status", "unresolved"}, {"note", e.what()}});
                    return exit_code::unresolved;
                }
                const auto r = decompose(p, v, g_.membership());
                if (!g_.json) print_membership(r, p, v);
                emit(io::to_json(r, v));
                return status_code(r.status);
            };
        });
    }

    void mgs_cmd(CLI::App& app) {
        auto* c = app.add_subcommand("mgs", "Minimal group size for a resource");
        auto file = std::make_shared<std::string>();
        auto resource = std::make_shared<std::string>("NS");
        auto kmax = std::make_shared<int>(0);
        auto libs = std::make_shared<std::vector<std::string>>();
        c->add_option("correlation", *file, "correlation JSON")->required();
        c->add_option("--resource", *resource, "L, NS or S")->capture_default_str();
        c->add_option("--k", *kmax, "largest group size to try (default: all parties)");
        c->add_option("--vertices", *libs, "group vertex files (JSON or JSONL)");
        c->callback([=, this] {
            action_ = [=, this] {
                const auto p = read_correlation(*file);
                GroupVertexLibrary lib;
                for (const auto& f : *libs) lib.add(io::load_vertex_file(f));
                MgsOptions o;
                o.membership = g_.membership();
                o.library = &lib;
                const int k = *kmax > 0 ? *kmax : p.scenario().parties();
                const auto report = mgs(p, parse_resource(*resource), k, o);
                if (!g_.json) {
                    for (const auto& l : report.levels) {
                        out_ << "k=" << l.k << ": " << to_string(l.status) << " (" << l.vertices << " vertices)";
                        if (!l.note.empty()) out_ << " " << l.note;
                        out_ << "\n";
                    }
                    if (report.mgs) out_ << "MGS(" << to_string(report.resource) << ") = " << *report.mgs << "\n";
                    else out_ << "MGS(" << to_string(report.resource) << ") >= " << report.lower_bound << "\n";
                }
                emit(io::to_json(report));
                if (report.mgs) return exit_code::ok;
                for (const auto& l : report.levels)
                    if (l.status == MembershipStatus::Unresolved) return exit_code::unresolved;
                return exit_code::infeasible;
            };
        });
    }

    void lift_cmd(CLI::App& app) {
        auto* c = app.add_subcommand("lift", "Lift a zero-bound expression to more parties");
        auto expr = std::make_shared<std::string>();
        auto h = std::make_shared<int>(1);
        auto settings = std::make_shared<std::string>();
        auto outcomes = std::make_shared<std::string>();
        auto zero = std::make_shared<bool>(false);
        c->add_option("expression", *expr, "builtin name or expression JSON")->required();
        c->add_option("--added", *h, "number of parties to add")->capture_default_str();
        c->add_option("--settings", *settings, "fixed setting per added party (default all 0)");
        c->add_option("--outcomes", *outcomes, "fixed outcome per added party (default all 0)");
        c->add_flag("--zero-bound", *zero, "convert to zero-bound form first");
        c->callback([=, this] {
            action_ = [=, this] {
                auto e = read_expression(*expr);
                if (*zero) e = zero_bound_form(e);
                const auto s = settings->empty() ? std::vector<int>(*h, 0) : parse_int_list(*settings);
                const auto o = outcomes->empty() ? std::vector<int>(*h, 0) : parse_int_list(*outcomes);
                const auto lifted = lift(e, *h, s, o);
                if (!g_.json) {
                    out_ << "lifted " << e.scenario().describe() << " -> " << lifted.scenario().describe() << ", "
                         << lifted.terms().size() << " terms, bound " << format_rational(lifted.bound()) << "\n";
                    if (!g_.output.empty()) out_ << "written to " << g_.output << "\n";
                }
                emit(io::to_json(lifted));
                return exit_code::ok;
            };
        });
    }

    void eval(CLI::App& app) {
        auto* c = app.add_subcommand("eval", "Evaluate an expression on a correlation or maximize it over vertices");
        auto expr = std::make_shared<std::string>();
        auto file = std::make_shared<std::string>();
        auto pf = std::make_shared<PolytopeFlags>();
        c->add_option("expression", *expr, "builtin name or expression JSON")->required();
        c->add_option("correlation", *file, "correlation JSON (omit to maximize over a polytope)");
        pf->attach(c);
        c->callback([=, this] {
            action_ = [=, this] {
                const auto e = read_expression(*expr);
                if (!file->empty()) {
                    const auto p = read_correlation(*file);
                    if (!(p.scenario() == e.scenario())) throw std::invalid_argument("expression and correlation scenarios differ");
                    Json j{{"bound", format_rational(e.bound())}};
                    if (p.is_exact()) j["value"] = format_rational(evaluate_exact(e, p));
                    else j["value"] = evaluate(e, p);
                    const double v = evaluate(e, p);
                    j["violation"] = v > to_double(e.bound());
                    if (!g_.json) {
                        out_ << "value " << (p.is_exact() ? j["value"].get<std::string>() : fmt(v)) << ", bound "
                             << format_rational(e.bound()) << (v > to_double(e.bound()) ? " (violated)" : "") << "\n";
                    }
                    emit(j);
                    return exit_code::ok;
                }
                const auto lib = pf->library();
                const auto vs = pf->build(e.scenario(), lib);
                const auto m = max_over_vertices(e, vs);
                Json j{{"max", format_rational(m.value)},
                       {"argmax", vs.provenance(m.index)},
                       {"bound", format_rational(e.bound())},
                       {"vertices", vs.size()}};
                if (!g_.json) {
                    out_ << "max " << format_rational(m.value) << " over " << vs.size() << " vertices at "
                         << vs.provenance(m.index) << ", claimed bound " << format_rational(e.bound()) << "\n";
                }
                emit(j);
                return m.value <= e.bound() ? exit_code::ok : exit_code::infeasible;
            };
        });
    }

    void facet_rank_cmd(CLI::App& app) {
        auto* c = app.add_subcommand("facet-rank", "Affine rank of the saturating vertices");
        auto expr = std::make_shared<std::string>();
        auto pf = std::make_shared<PolytopeFlags>();
        c->add_option("expression", *expr, "builtin name or expression JSON")->required();
        pf->attach(c);
        c->callback([=, this] {
            action_ = [=, this] {
                auto e = read_expression(*expr);
                if (!e.zero_bound()) e = zero_bound_form(e);
                const auto lib = pf->library();
                const auto vs = pf->build(e.scenario(), lib);
                const auto fr = facet_rank(e, vs);
                if (!g_.json) {
                    out_ << fr.saturating << " saturating vertices, affine rank " << fr.rank << ", polytope dimension "
                         << fr.dimension << (fr.facet() ? ": facet" : ": not a facet") << "\n";
                }
                emit(Json{{"saturating", fr.saturating}, {"rank", fr.rank}, {"dimension", fr.dimension}, {"facet", fr.facet()}});
                return fr.facet() ? exit_code::ok : exit_code::infeasible;
            };
        });
    }

    void reproduce(CLI::App& app) {
        auto* c = app.add_subcommand("reproduce", "Regenerate the published numbers and compare with the fixtures");
        auto cases = std::make_shared<std::vector<std::string>>();
        auto fixtures = std::make_shared<std::string>(MGS_FIXTURES_PATH);
        auto libs = std::make_shared<std::vector<std::string>>();
        std::string names;
        for (const auto& n : case_names()) names += (names.empty() ? "" : ", ") + n;
        c->add_option("case", *cases, "one or more of: " + names + ", or all")->required();
        c->add_option("--fixtures", *fixtures, "expected values file")->capture_default_str();
        c->add_option("--vertices", *libs, "tripartite NS vertex file for the NS_{4,3} check");
        c->callback([=, this] {
            action_ = [=, this] {
                std::vector<std::string> run;
                for (const auto& n : *cases) {
                    if (n == "all") run.insert(run.end(), case_names().begin(), case_names().end());
                    else if (std::find(case_names().begin(), case_names().end(), n) == case_names().end())
                        throw std::invalid_argument("unknown reproduce case '" + n + "' (known: " + names + ")");
                    else run.push_back(n);
                }
                const auto fx = Fixtures::load(*fixtures);
                GroupVertexLibrary lib;
                for (const auto& f : *libs) lib.add(io::load_vertex_file(f));
                ReproduceOptions opts;
                opts.library = &lib;
                opts.membership = g_.membership();
                bool ok = true;
                Json all = Json::array();
                for (const auto& n : run) {
                    const auto report = run_case(n, fx, opts);
                    ok = ok && report.ok();
                    all.push_back(report.to_json());
                    if (g_.json) continue;
                    out_ << "== " << n << "\n";
                    for (const auto& chk : report.checks) {
                        out_ << "[" << chk.status << "] " << chk.name << ": " << chk.observed;
                        if (chk.status == "fail") out_ << "\n       expected " << chk.expected;
                        out_ << "\n";
                    }
                    out_ << (report.ok() ? "PASS " : "FAIL ") << n << " (" << std::fixed << std::setprecision(2)
                         << report.seconds << " s)\n";
                    out_.unsetf(std::ios::floatfield);
                }
                emit(Json{{"ok", ok}, {"cases", all}});
                return ok ? exit_code::ok : exit_code::error;
            };
        });
    }

    std::ostream& out_;
    std::ostream& err_;
    Globals g_;
    std::function<int()> action_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Producibility of multipartite correlations: vertices, membership LPs, witnesses"};
    app.require_subcommand(1);
    app.fallthrough();
    Commands commands(out, err);
    commands.attach(app);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::error;
    }
    try {
        return commands.execute();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::error;
    }
}

}  // namespace mgs::cli
