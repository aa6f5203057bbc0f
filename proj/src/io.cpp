#include "mgs/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mgs::io {

namespace {

Rational rational_from(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw std::invalid_argument("expected a rational \"p/q\", got " + j.dump());
}

std::string form_name(SourceForm f) {
    switch (f) {
        case SourceForm::Probability: return "probability";
        case SourceForm::Correlator: return "correlator";
        case SourceForm::FullCorrelator: return "fullcorr";
    }
    return "probability";
}

Json vertex_entries(const Scenario& s, const Vertex& v) {
    Json out = Json::array();
    for (const auto& e : v.entries) {
        Rational q(static_cast<long>(e.numerator), static_cast<unsigned long>(v.denominator));
        q.canonicalize();
        out.push_back(Json::array({e.cell / s.joint_outputs(), e.cell % s.joint_outputs(), format_rational(q)}));
    }
    return out;
}

Vertex vertex_from_entries(const Scenario& s, const Json& entries) {
    std::vector<Rational> table(s.table_size(), Rational(0));
    for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 3) throw std::invalid_argument("vertex entry must be [X, A, \"p/q\"]");
        const auto x = e[0].get<std::size_t>(), a = e[1].get<std::size_t>();
        if (x >= s.joint_inputs() || a >= s.joint_outputs()) throw std::invalid_argument("vertex entry out of range");
        table[s.cell(x, a)] += rational_from(e[2]);
    }
    // Validates non-negativity and normalization.
    (void)Correlation::from_rational(s, table);
    return vertex_from_table(s, table);
}

VertexSet vertex_set_header(const Json& j) {
    const Scenario s = scenario_from_json(j.at("scenario"));
    const Resource r = parse_resource(j.at("resource").get<std::string>());
    const int k = j.value("k", s.parties());
    return VertexSet(s, r, k);
}

void finish_vertex_set(VertexSet& set) {
    std::vector<std::vector<int>> all(1);
    for (int p = 0; p < set.scenario().parties(); ++p) all[0].push_back(p);
    set.add_partition(Partition(all));
    set.finalize();
}

}  // namespace

Json to_json(const Scenario& s) {
    return Json{{"parties", s.parties()}, {"inputs", s.inputs()}, {"outputs", s.outputs()}};
}

Scenario scenario_from_json(const Json& j) {
    if (!j.at("inputs").is_array()) {
        if (!j.contains("parties")) throw std::invalid_argument("uniform scenario needs \"parties\"");
        return Scenario::uniform(j.at("parties").get<int>(), j.at("inputs").get<int>(), j.at("outputs").get<int>());
    }
    Scenario s(j.at("inputs").get<std::vector<int>>(), j.at("outputs").get<std::vector<int>>());
    if (j.contains("parties") && j.at("parties").get<int>() != s.parties())
        throw std::invalid_argument("scenario \"parties\" disagrees with the inputs list");
    return s;
}

Json to_json(const Correlation& p) {
    const auto& s = p.scenario();
    Json table = Json::array();
    for (std::size_t x = 0; x < s.joint_inputs(); ++x) {
        Json row = Json::array();
        for (std::size_t a = 0; a < s.joint_outputs(); ++a) {
            if (p.is_exact())
                row.push_back(format_rational(p.exact_table()[s.cell(x, a)]));
            else
                row.push_back(p.real_table()[s.cell(x, a)]);
        }
        table.push_back(std::move(row));
    }
    Json j = to_json(s);
    j["mode"] = p.is_exact() ? "rational" : "real";
    j["table"] = std::move(table);
    return j;
}

Correlation correlation_from_json(const Json& j) {
    // Scenario fields at top level; a nested "scenario" object is also accepted.
    const Scenario s = scenario_from_json(j.contains("scenario") ? j.at("scenario") : j);
    // Rows per joint input, or one flat list.
    Json flat = Json::array();
    for (const auto& v : j.at("table")) {
        if (v.is_array()) {
            if (v.size() != s.joint_outputs()) throw std::invalid_argument("correlation row has the wrong length");
            for (const auto& e : v) flat.push_back(e);
        } else {
            flat.push_back(v);
        }
    }
    const std::string mode = j.value("mode", flat.size() && flat[0].is_string() ? "rational" : "real");
    if (mode == "rational") {
        std::vector<Rational> t;
        for (const auto& v : flat) t.push_back(rational_from(v));
        return Correlation::from_rational(s, std::move(t));
    }
    if (mode != "real") throw std::invalid_argument("unknown correlation mode: " + mode);
    return Correlation::from_real(s, flat.get<std::vector<double>>(), j.value("tolerance", kDefaultTolerance));
}

Json to_json(const VertexSet& v) {
    Json verts = Json::array();
    for (const auto& vert : v.vertices()) verts.push_back(vertex_entries(v.scenario(), vert));
    return Json{{"scenario", to_json(v.scenario())},
                {"resource", to_string(v.resource())},
                {"k", v.k()},
                {"vertices", verts}};
}

VertexSet vertex_set_from_json(const Json& j) {
    VertexSet set = vertex_set_header(j);
    for (const auto& entries : j.at("vertices")) set.push(vertex_from_entries(set.scenario(), entries));
    finish_vertex_set(set);
    return set;
}

void write_vertices_jsonl(std::ostream& out, const VertexSet& v) {
    out << Json{{"scenario", to_json(v.scenario())}, {"resource", to_string(v.resource())}, {"k", v.k()}}.dump()
        << '\n';
    for (const auto& vert : v.vertices()) out << vertex_entries(v.scenario(), vert).dump() << '\n';
}

VertexSet read_vertices_jsonl(std::istream& in) {
    std::string line;
    while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
    }
    if (line.empty()) throw std::invalid_argument("empty vertex stream");
    VertexSet set = vertex_set_header(Json::parse(line));
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        set.push(vertex_from_entries(set.scenario(), Json::parse(line)));
    }
    finish_vertex_set(set);
    return set;
}

VertexSet load_vertex_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open vertex file " + path);
    if (path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl") return read_vertices_jsonl(in);
    return vertex_set_from_json(Json::parse(in));
}

Json to_json(const BellExpression& e) {
    Json j{{"scenario", to_json(e.scenario())},
           {"form", form_name(e.source_form())},
           {"bound", format_rational(e.bound())},
           {"resource", to_string(e.resource())},
           {"k", e.k()}};
    if (!e.name().empty()) j["name"] = e.name();
    Json terms = Json::array();
    const Scenario& s = e.scenario();
    switch (e.source_form()) {
        case SourceForm::Probability:
            for (const auto& [cell, q] : e.terms())
                terms.push_back(Json::array({cell / s.joint_outputs(), cell % s.joint_outputs(), format_rational(q)}));
            break;
        case SourceForm::Correlator:
            for (const auto& m : e.monomials()) {
                Json factors = Json::array();
                for (const auto& [party, setting] : m.factors) factors.push_back(Json::array({party, setting}));
                terms.push_back(Json{{"factors", factors}, {"coefficient", format_rational(m.coefficient)}});
            }
            j["symmetrize"] = e.symmetrized();
            break;
        case SourceForm::FullCorrelator: {
            const std::size_t l = static_cast<std::size_t>(s.uniform_outputs());
            for (std::size_t i = 0; i < e.fullcorr().size(); ++i)
                if (e.fullcorr()[i] != 0) terms.push_back(Json::array({i / l, i % l, format_rational(e.fullcorr()[i])}));
            break;
        }
    }
    j["terms"] = terms;
    if (!e.lifts().empty()) {
        Json lifts = Json::array();
        for (const auto& l : e.lifts())
            lifts.push_back(Json{{"added", l.added}, {"settings", l.settings}, {"outcomes", l.outcomes}});
        j["lifts"] = lifts;
    }
    return j;
}

BellExpression expression_from_json(const Json& j) {
    if (j.contains("builtin")) return builtin::by_name(j.at("builtin").get<std::string>());
    const Scenario s = scenario_from_json(j.at("scenario"));
    const std::string form = j.value("form", "probability");
    const Rational bound = j.contains("bound") ? rational_from(j.at("bound")) : Rational(0);
    const Resource r = parse_resource(j.value("resource", "NS"));
    const int k = j.value("k", 1);
    BellExpression e;
    if (form == "probability") {
        std::vector<Rational> coef(s.table_size(), Rational(0));
        for (const auto& t : j.at("terms")) {
            const auto x = t.at(0).get<std::size_t>(), a = t.at(1).get<std::size_t>();
            if (x >= s.joint_inputs() || a >= s.joint_outputs()) throw std::invalid_argument("term out of range");
            coef[s.cell(x, a)] += rational_from(t.at(2));
        }
        e = BellExpression(s, std::move(coef), bound, r, k);
    } else if (form == "correlator") {
        std::vector<CorrelatorMonomial> monomials;
        for (const auto& t : j.at("terms")) {
            CorrelatorMonomial m;
            for (const auto& f : t.at("factors")) m.factors.emplace_back(f.at(0).get<int>(), f.at(1).get<int>());
            m.coefficient = rational_from(t.at("coefficient"));
            monomials.push_back(std::move(m));
        }
        e = expand_correlators(s, monomials, j.value("symmetrize", false), bound, r, k);
    } else if (form == "fullcorr") {
        const int l = s.uniform_outputs();
        if (l == 0) throw std::invalid_argument("fullcorr form needs uniform outputs");
        std::vector<Rational> beta(s.joint_inputs() * l, Rational(0));
        for (const auto& t : j.at("terms")) {
            const auto x = t.at(0).get<std::size_t>(), res = t.at(1).get<std::size_t>();
            if (x >= s.joint_inputs() || res >= static_cast<std::size_t>(l)) throw std::invalid_argument("term out of range");
            beta[x * l + res] += rational_from(t.at(2));
        }
        e = compile_fullcorr(s, beta, bound, r, k);
    } else {
        throw std::invalid_argument("unknown expression form: " + form);
    }
    if (j.contains("name")) e.set_name(j.at("name").get<std::string>());
    if (j.contains("lifts")) {
        std::vector<LiftInfo> lifts;
        for (const auto& l : j.at("lifts"))
            lifts.push_back({l.at("added").get<int>(), l.at("settings").get<std::vector<int>>(),
                             l.at("outcomes").get<std::vector<int>>()});
        e.set_lifts(std::move(lifts));
    }
    return e;
}

quantum::DensityMatrix state_from_json(const Json& j) {
    if (j.contains("builtin")) {
        std::map<std::string, double> params;
        for (const auto& [key, value] : j.items())
            if (key != "builtin") params[key] = value.get<double>();
        return quantum::builtin_state(j.at("builtin").get<std::string>(), params);
    }
    const auto& m = j.at("matrix");
    const auto re = m.at("re").get<std::vector<std::vector<double>>>();
    const auto im = m.contains("im") ? m.at("im").get<std::vector<std::vector<double>>>()
                                     : std::vector<std::vector<double>>(re.size(), std::vector<double>(re.size(), 0.0));
    quantum::ComplexMatrix rho(re.size());
    for (std::size_t r = 0; r < re.size(); ++r) {
        if (re[r].size() != re.size() || im.size() != re.size() || im[r].size() != re.size())
            throw std::invalid_argument("density matrix must be square");
        for (std::size_t c = 0; c < re.size(); ++c) rho(r, c) = {re[r][c], im[r][c]};
    }
    return quantum::DensityMatrix(std::move(rho));
}

quantum::MeasurementSet measurements_from_json(const Json& j) {
    if (j.contains("preset")) {
        const std::string preset = j.at("preset").get<std::string>();
        if (preset == "ineq10") return quantum::ineq10_measurements(j.value("parties", 4));
        if (preset == "svetlichny") return quantum::svetlichny_measurements();
        if (preset == "sigma_xy") return quantum::sigma_xy_measurements(j.value("parties", 4));
        if (preset == "svetlichny_z") {
            const quantum::MeasurementSet z({{quantum::Observable::from_bloch(0, 0, 1)}});
            return quantum::svetlichny_measurements().extended(z);
        }
        throw std::invalid_argument("unknown measurement preset: " + preset);
    }
    std::vector<std::vector<quantum::Observable>> settings;
    for (const auto& party : j.at("bloch")) {
        std::vector<quantum::Observable> obs;
        for (const auto& n : party) obs.push_back(quantum::Observable::from_bloch(n.at(0), n.at(1), n.at(2)));
        settings.push_back(std::move(obs));
    }
    return quantum::MeasurementSet(std::move(settings));
}

Json to_json(const MembershipResult& r, const VertexSet& vertices) {
    Json j{{"status", to_string(r.status)},
           {"mode", r.mode == LpMode::Exact ? "exact" : "epsilon"},
           {"resource", to_string(vertices.resource())},
           {"k", vertices.k()},
           {"columns", vertices.size()},
           {"residual", r.residual},
           {"iterations", r.iterations}};
    if (vertices.restriction()) j["partition"] = vertices.restriction()->to_string();
    if (r.rationalization_error > 0) j["rationalization_error"] = r.rationalization_error;
    if (!r.note.empty()) j["note"] = r.note;
    if (r.status == MembershipStatus::Feasible) {
        Json w = Json::array();
        for (const auto& [idx, q] : r.weights)
            w.push_back(Json{{"vertex", vertices.provenance(idx)}, {"index", idx}, {"weight", format_rational(q)}});
        for (const auto& [idx, q] : r.real_weights)
            w.push_back(Json{{"vertex", vertices.provenance(idx)}, {"index", idx}, {"weight", q}});
        j["weights"] = w;
    }
    if (r.witness) {
        j["witness"] = to_json(*r.witness);
        j["margin"] = r.margin;
    }
    return j;
}

Json to_json(const CertificateCheck& c) {
    return Json{{"ok", c.ok},
                {"residual", c.residual},
                {"max_over_vertices", format_rational(c.max_over_vertices)},
                {"margin", c.margin},
                {"detail", c.detail}};
}

Json to_json(const MgsReport& r) {
    Json levels = Json::array();
    for (const auto& l : r.levels) {
        Json lj{{"k", l.k}, {"status", to_string(l.status)}, {"columns", l.vertices}};
        if (!l.note.empty()) lj["note"] = l.note;
        if (l.result && l.result->witness) {
            lj["witness"] = to_json(*l.result->witness);
            lj["margin"] = l.result->margin;
        }
        levels.push_back(lj);
    }
    Json j{{"resource", to_string(r.resource)}, {"k_max", r.k_max}, {"lower_bound", r.lower_bound}, {"levels", levels}};
    j["mgs"] = r.mgs ? Json(*r.mgs) : Json(nullptr);
    return j;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace mgs::io
