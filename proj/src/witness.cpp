#include "mgs/witness.hpp"

#include "mgs/linalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mgs {

void CorrelatorMonomial::normalize() {
    std::sort(factors.begin(), factors.end());
    for (std::size_t i = 1; i < factors.size(); ++i)
        if (factors[i].first == factors[i - 1].first)
            throw std::invalid_argument("correlator monomial lists party " + std::to_string(factors[i].first) +
                                        " twice");
}

BellExpression::BellExpression(Scenario scenario, std::vector<Rational> coefficients, Rational bound,
                               Resource resource, int k)
    : scenario_(std::move(scenario)),
      coefficients_(std::move(coefficients)),
      bound_(std::move(bound)),
      resource_(resource),
      k_(k) {
    if (coefficients_.size() != scenario_.table_size())
        throw std::invalid_argument("expression has " + std::to_string(coefficients_.size()) +
                                    " coefficients, scenario table has " + std::to_string(scenario_.table_size()));
    if (k_ < 1 || k_ > scenario_.parties()) throw std::invalid_argument("expression k out of range");
}

std::vector<std::pair<std::size_t, Rational>> BellExpression::terms() const {
    std::vector<std::pair<std::size_t, Rational>> out;
    for (std::size_t c = 0; c < coefficients_.size(); ++c)
        if (coefficients_[c] != 0) out.emplace_back(c, coefficients_[c]);
    return out;
}

namespace {

void require_binary(const Scenario& s) {
    for (int p = 0; p < s.parties(); ++p)
        if (s.outputs(p) != 2) throw std::invalid_argument("correlator expansion needs binary outputs");
}

void add_monomial(const Scenario& s, const std::vector<std::pair<int, int>>& factors, const Rational& c,
                  std::vector<Rational>& coef) {
    std::vector<int> xs(s.parties(), 0);
    for (const auto& [party, setting] : factors) {
        if (party < 0 || party >= s.parties()) throw std::invalid_argument("monomial party out of range");
        if (setting < 0 || setting >= s.inputs(party)) throw std::invalid_argument("monomial setting out of range");
        xs[party] = setting;
    }
    const std::size_t x = s.encode_inputs(xs);
    std::vector<int> as(s.parties());
    for (std::size_t a = 0; a < s.joint_outputs(); ++a) {
        mixed_radix_decode(a, s.outputs(), as);
        int parity = 0;
        for (const auto& f : factors) parity ^= as[f.first];
        if (parity) coef[s.cell(x, a)] -= c;
        else coef[s.cell(x, a)] += c;
    }
}

}  // namespace

BellExpression expand_correlators(const Scenario& scenario, std::span<const CorrelatorMonomial> monomials,
                                  bool symmetrize, Rational bound, Resource resource, int k) {
    require_binary(scenario);
    std::vector<Rational> coef(scenario.table_size(), Rational(0));
    std::vector<CorrelatorMonomial> stored;
    for (CorrelatorMonomial m : monomials) {
        m.normalize();
        stored.push_back(m);
        if (!symmetrize) {
            add_monomial(scenario, m.factors, m.coefficient, coef);
            continue;
        }
        std::vector<int> perm(scenario.parties());
        std::iota(perm.begin(), perm.end(), 0);
        std::set<std::vector<std::pair<int, int>>> orbit;
        do {
            std::vector<std::pair<int, int>> image;
            for (const auto& [party, setting] : m.factors) image.emplace_back(perm[party], setting);
            std::sort(image.begin(), image.end());
            orbit.insert(std::move(image));
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (const auto& image : orbit) add_monomial(scenario, image, m.coefficient, coef);
    }
    BellExpression e(scenario, std::move(coef), std::move(bound), resource, k);
    e.source_form_ = SourceForm::Correlator;
    e.monomials_ = std::move(stored);
    e.symmetrized_ = symmetrize;
    return e;
}

BellExpression compile_fullcorr(const Scenario& scenario, std::span<const Rational> beta, Rational bound,
                                Resource resource, int k) {
    const int l = scenario.uniform_outputs();
    if (l == 0) throw std::invalid_argument("full-correlator expressions need a uniform output count");
    if (beta.size() != scenario.joint_inputs() * static_cast<std::size_t>(l))
        throw std::invalid_argument("full-correlator table has " + std::to_string(beta.size()) + " entries, expected " +
                                    std::to_string(scenario.joint_inputs() * l));
    std::vector<Rational> coef(scenario.table_size());
    std::vector<int> as(scenario.parties());
    for (std::size_t a = 0; a < scenario.joint_outputs(); ++a) {
        mixed_radix_decode(a, scenario.outputs(), as);
        const int r = std::accumulate(as.begin(), as.end(), 0) % l;
        for (std::size_t x = 0; x < scenario.joint_inputs(); ++x) coef[scenario.cell(x, a)] = beta[x * l + r];
    }
    BellExpression e(scenario, std::move(coef), std::move(bound), resource, k);
    e.source_form_ = SourceForm::FullCorrelator;
    e.fullcorr_.assign(beta.begin(), beta.end());
    return e;
}

double evaluate(const BellExpression& expr, const Correlation& p) {
    if (!(expr.scenario() == p.scenario())) throw std::invalid_argument("expression and correlation scenarios differ");
    const auto table = p.to_doubles();
    double sum = 0.0;
    for (std::size_t c = 0; c < table.size(); ++c)
        if (expr.coefficients()[c] != 0) sum += expr.coefficients()[c].get_d() * table[c];
    return sum;
}

Rational evaluate_exact(const BellExpression& expr, const Correlation& p) {
    if (!(expr.scenario() == p.scenario())) throw std::invalid_argument("expression and correlation scenarios differ");
    const auto& table = p.exact_table();
    Rational sum(0);
    for (std::size_t c = 0; c < table.size(); ++c)
        if (expr.coefficients()[c] != 0 && table[c] != 0) sum += expr.coefficients()[c] * table[c];
    return sum;
}

Rational evaluate(const BellExpression& expr, const Vertex& v) {
    Rational sum(0);
    for (const auto& e : v.entries) {
        if (e.cell >= expr.coefficients().size()) throw std::invalid_argument("vertex cell outside expression table");
        sum += expr.coefficients()[e.cell] * Rational(static_cast<long>(e.numerator));
    }
    sum /= Rational(static_cast<long>(v.denominator));
    return sum;
}

BellExpression zero_bound_form(const BellExpression& expr) {
    if (expr.zero_bound()) return expr;
    BellExpression e = expr;
    for (std::size_t a = 0; a < e.scenario_.joint_outputs(); ++a) e.coefficients_[e.scenario_.cell(0, a)] -= e.bound_;
    e.bound_ = 0;
    e.source_form_ = SourceForm::Probability;
    e.monomials_.clear();
    e.symmetrized_ = false;
    e.fullcorr_.clear();
    return e;
}

BellExpression lift_unchecked(const BellExpression& expr, const Scenario& added, std::span<const int> settings,
                              std::span<const int> outcomes) {
    const int h = added.parties();
    if (h == 0) return expr;
    if (static_cast<int>(settings.size()) != h || static_cast<int>(outcomes.size()) != h)
        throw std::invalid_argument("lift needs one setting and one outcome per added party");
    for (int i = 0; i < h; ++i)
        if (settings[i] < 0 || settings[i] >= added.inputs(i) || outcomes[i] < 0 || outcomes[i] >= added.outputs(i))
            throw std::invalid_argument("lift setting or outcome out of range for added party " + std::to_string(i));
    const Scenario& base = expr.scenario();
    const Scenario ext = base.extend(added);
    const std::size_t s = added.encode_inputs(settings);
    const std::size_t o = added.encode_outputs(outcomes);
    std::vector<Rational> coef(ext.table_size(), Rational(0));
    for (std::size_t x = 0; x < base.joint_inputs(); ++x)
        for (std::size_t a = 0; a < base.joint_outputs(); ++a)
            coef[ext.cell(x * added.joint_inputs() + s, a * added.joint_outputs() + o)] = expr.coefficient(x, a);
    BellExpression e(ext, std::move(coef), expr.bound(), expr.resource(), expr.k());
    e.name_ = expr.name_;
    e.lifts_ = expr.lifts_;
    e.lifts_.push_back({h, {settings.begin(), settings.end()}, {outcomes.begin(), outcomes.end()}});
    return e;
}

BellExpression lift(const BellExpression& expr, const Scenario& added, std::span<const int> settings,
                    std::span<const int> outcomes) {
    if (expr.resource() == Resource::S || expr.resource() == Resource::T)
        throw std::invalid_argument("lifting is not sound for the signaling resource " + to_string(expr.resource()) +
                                    ": a deterministic S_{4,2} strategy violates the naively lifted tripartite "
                                    "Svetlichny inequality with value 4 (see svetlichny_counterexample)");
    if (!expr.zero_bound()) throw std::invalid_argument("lift needs an expression in zero-bound form");
    return lift_unchecked(expr, added, settings, outcomes);
}

BellExpression lift(const BellExpression& expr, int h, std::span<const int> settings, std::span<const int> outcomes) {
    if (h < 0) throw std::invalid_argument("lift: negative party count");
    const int m = expr.scenario().inputs(0), l = expr.scenario().outputs(0);
    return lift(expr, Scenario(std::vector<int>(h, m), std::vector<int>(h, l)), settings, outcomes);
}

namespace kernels {

IntegerExpression integer_form(const BellExpression& expr) {
    IntegerExpression form;
    mpz_class l = 1;
    for (const auto& q : expr.coefficients()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    form.denominator = Rational(l);
    form.numerators.resize(expr.coefficients().size());
    for (std::size_t c = 0; c < expr.coefficients().size(); ++c) {
        const mpz_class n = expr.coefficients()[c].get_num() * (l / expr.coefficients()[c].get_den());
        if (!n.fits_sint_p()) {
            form.exact = false;
            form.numerators[c] = 0;
        } else {
            form.numerators[c] = n.get_si();
        }
    }
    return form;
}

namespace {

// Vertex value times the expression denominator, as an exact fraction s / den.
struct Scaled {
    __int128 num;
    __int128 den;
};

Scaled scaled_value(const IntegerExpression& form, const Vertex& v) {
    __int128 s = 0;
    for (const auto& e : v.entries) s += static_cast<__int128>(form.numerators[e.cell]) * e.numerator;
    return {s, v.denominator};
}

bool greater(const Scaled& a, const Scaled& b) { return a.num * b.den > b.num * a.den; }

std::size_t argmax_rational(const BellExpression* expr, const VertexSet& vertices) {
    std::size_t best = 0;
    Rational best_value = evaluate(*expr, vertices[0]);
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        Rational v = evaluate(*expr, vertices[i]);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    return best;
}

}  // namespace

std::size_t argmax_serial(const IntegerExpression& form, const VertexSet& vertices) {
    if (vertices.empty()) throw std::invalid_argument("argmax over an empty vertex set");
    std::size_t best = 0;
    Scaled best_value = scaled_value(form, vertices[0]);
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        const Scaled v = scaled_value(form, vertices[i]);
        if (greater(v, best_value)) {
            best_value = v;
            best = i;
        }
    }
    return best;
}

std::size_t argmax_parallel(const IntegerExpression& form, const VertexSet& vertices) {
    if (vertices.empty()) throw std::invalid_argument("argmax over an empty vertex set");
    const long long n = static_cast<long long>(vertices.size());
    const Scaled first = scaled_value(form, vertices[0]);
    std::size_t best = 0;
    Scaled best_value = first;
#pragma omp parallel
    {
        std::size_t local = 0;
        Scaled local_value = first;
#pragma omp for schedule(static) nowait
        for (long long i = 0; i < n; ++i) {
            const Scaled v = scaled_value(form, vertices[i]);
            if (greater(v, local_value)) {
                local_value = v;
                local = static_cast<std::size_t>(i);
            }
        }
#pragma omp critical(mgs_argmax)
        {
            if (greater(local_value, best_value) || (!greater(best_value, local_value) && local < best)) {
                best_value = local_value;
                best = local;
            }
        }
    }
    return best;
}

}  // namespace kernels

VertexMaximum max_over_vertices(const BellExpression& expr, const VertexSet& vertices, bool parallel) {
    if (vertices.empty()) throw std::invalid_argument("max over an empty vertex set");
    if (!(expr.scenario() == vertices.scenario()))
        throw std::invalid_argument("expression and vertex set scenarios differ");
    const auto form = kernels::integer_form(expr);
    VertexMaximum out;
    if (!form.exact) out.index = kernels::argmax_rational(&expr, vertices);
    else out.index = parallel ? kernels::argmax_parallel(form, vertices) : kernels::argmax_serial(form, vertices);
    out.value = evaluate(expr, vertices[out.index]);
    return out;
}

long polytope_dimension(const VertexSet& vertices) {
    linalg::RationalMatrix points;
    points.reserve(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) points.push_back(vertices.dense(i));
    return linalg::affine_rank(points);
}

FacetRank facet_rank(const BellExpression& expr, const VertexSet& vertices, long dimension) {
    if (!expr.zero_bound()) throw std::invalid_argument("facet_rank needs an expression in zero-bound form");
    const auto best = max_over_vertices(expr, vertices);
    if (best.value > 0)
        throw std::invalid_argument("expression is not valid on the vertex set: vertex " +
                                    vertices.provenance(best.index) + " gives " + format_rational(best.value));
    FacetRank out;
    out.dimension = dimension;
    linalg::RationalMatrix tight;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (evaluate(expr, vertices[i]) == 0) tight.push_back(vertices.dense(i));
    out.saturating = tight.size();
    out.rank = linalg::affine_rank(tight);
    return out;
}

FacetRank facet_rank(const BellExpression& expr, const VertexSet& vertices) {
    return facet_rank(expr, vertices, polytope_dimension(vertices));
}

SvetlichnyCounterexample svetlichny_counterexample() {
    const Scenario s4 = Scenario::uniform(4, 2, 2);
    const Scenario pair = Scenario::uniform(2, 2, 2);
    auto strategy = [](const std::vector<int>& x) {
        const int a1 = 1 - (x[0] == 1 && x[1] == 1);
        const int a2 = 1;
        const int a34 = 1 - (x[2] == 1 && x[3] == 0);
        return std::vector<int>{a1, a2, a34, a34};
    };
    SvetlichnyCounterexample out;
    std::vector<std::size_t> outputs(s4.joint_inputs());
    for (std::size_t x = 0; x < s4.joint_inputs(); ++x) outputs[x] = s4.encode_outputs(strategy(s4.decode_inputs(x)));
    out.strategy = vertex_from_table(s4, deterministic(s4, outputs).exact_table());

    // Factor the strategy over 0,1|2,3 and rebuild it as a product vertex.
    const Partition part = Partition::parse("0,1|2,3", 4);
    const VertexSet det = group_deterministic_vertices(pair);
    std::vector<VertexSet> factors;
    bool factorizes = true;
    for (const auto& block : part.blocks()) {
        std::vector<std::size_t> group_out(pair.joint_inputs(), pair.joint_outputs());
        for (std::size_t x = 0; x < s4.joint_inputs(); ++x) {
            const auto xs = s4.decode_inputs(x);
            const auto as = strategy(xs);
            const std::vector<int> gx{xs[block[0]], xs[block[1]]}, ga{as[block[0]], as[block[1]]};
            const std::size_t gi = pair.encode_inputs(gx), go = pair.encode_outputs(ga);
            if (group_out[gi] != pair.joint_outputs() && group_out[gi] != go) factorizes = false;
            group_out[gi] = go;
        }
        const Vertex gv = vertex_from_table(pair, deterministic(pair, group_out).exact_table());
        VertexSet single(pair, Resource::S, 2);
        for (std::size_t i = 0; i < det.size(); ++i)
            if (det[i].same_point(gv)) {
                out.group_ids.push_back(static_cast<std::uint32_t>(i));
                single.push(det[i]);
            }
        factors.push_back(std::move(single));
    }
    if (factorizes && factors[0].size() == 1 && factors[1].size() == 1) {
        const auto rebuilt = kernels::partition_products_serial(s4, part, {&factors[0], &factors[1]}, 0);
        out.product_vertex = rebuilt.size() == 1 && rebuilt[0].same_point(out.strategy);
    }

    const std::vector<int> s{0}, o{0};
    out.expression = lift_unchecked(zero_bound_form(builtin::svetlichny3()), Scenario::uniform(1, 2, 2), s, o);
    out.expression.set_name("naive S lifting of svetlichny3");
    out.value = evaluate(out.expression, out.strategy);
    Rational anchored(0);
    for (std::size_t a = 0; a < s4.joint_outputs(); ++a)
        if (a % 2 == 0) anchored += out.strategy.value(s4.cell(0, a));
    out.second_term = -4 * anchored;
    return out;
}

namespace builtin {

BellExpression chsh() {
    const Scenario s = Scenario::uniform(2, 2, 2);
    std::vector<Rational> coef(s.table_size());
    for (int x1 = 0; x1 < 2; ++x1)
        for (int x2 = 0; x2 < 2; ++x2)
            for (int a1 = 0; a1 < 2; ++a1)
                for (int a2 = 0; a2 < 2; ++a2)
                    coef[s.cell(x1 * 2 + x2, a1 * 2 + a2)] = ((a1 + a2 + x1 * x2) % 2) ? -1 : 1;
    BellExpression e(s, std::move(coef), Rational(2), Resource::L, 1);
    e.set_name("chsh");
    return e;
}

namespace {

BellExpression svetlichny_tagged(Resource r, const std::string& name) {
    const Scenario s = Scenario::uniform(3, 2, 2);
    std::vector<Rational> beta(s.joint_inputs() * 2);
    for (std::size_t x = 0; x < s.joint_inputs(); ++x) {
        const auto xs = s.decode_inputs(x);
        const int sum = xs[0] + xs[1] + xs[2];
        // floor((sum - 1) / 2) for sum in 0..3
        const int fl = sum == 0 ? -1 : (sum - 1) / 2;
        for (int r = 0; r < 2; ++r) beta[x * 2 + r] = ((r + fl) % 2 == 0) ? 1 : -1;
    }
    BellExpression e = compile_fullcorr(s, beta, Rational(4), r, 2);
    e.set_name(name);
    return e;
}

}  // namespace

BellExpression svetlichny3() { return svetlichny_tagged(Resource::S, "svetlichny3"); }
BellExpression ns3() { return svetlichny_tagged(Resource::NS, "ns3"); }

std::vector<CorrelatorMonomial> ineq10_monomials() {
    struct Row {
        int coef;
        std::vector<int> settings;  // parties A, B, C, D in order
    };
    const std::vector<Row> rows = {
        {-12, {0}},        {-3, {1}},         {-2, {0, 0}},       {6, {0, 1}},         {-3, {1, 1}},
        {13, {0, 0, 0}},   {-3, {1, 0, 0}},   {-11, {1, 1, 0}},   {14, {1, 1, 1}},     {22, {0, 0, 0, 0}},
        {-15, {0, 0, 0, 1}}, {-10, {1, 1, 0, 0}}, {-7, {1, 1, 1, 0}}, {21, {1, 1, 1, 1}},
    };
    std::vector<CorrelatorMonomial> out;
    for (const auto& r : rows) {
        CorrelatorMonomial m;
        for (std::size_t p = 0; p < r.settings.size(); ++p) m.factors.emplace_back(static_cast<int>(p), r.settings[p]);
        m.coefficient = r.coef;
        out.push_back(std::move(m));
    }
    return out;
}

BellExpression ineq10() {
    const auto monomials = ineq10_monomials();
    BellExpression e = expand_correlators(Scenario::uniform(4, 2, 2), monomials, true, Rational(105), Resource::NS, 2);
    e.set_name("ineq10");
    return e;
}

namespace {

std::vector<int> parse_int_list(std::string_view text, int count) {
    std::vector<int> out;
    std::string item;
    std::istringstream is{std::string(text)};
    while (std::getline(is, item, ':')) out.push_back(std::stoi(item));
    if (out.size() == 1 && count > 1) out.assign(count, out[0]);
    if (static_cast<int>(out.size()) != count)
        throw std::invalid_argument("expected " + std::to_string(count) + " values in '" + std::string(text) + "'");
    return out;
}

}  // namespace

BellExpression by_name(std::string_view name) {
    if (name == "chsh") return chsh();
    if (name == "svetlichny3") return svetlichny3();
    if (name == "ns3") return ns3();
    if (name == "ineq10") return ineq10();
    constexpr std::string_view prefix = "lifted(";
    if (name.substr(0, prefix.size()) == prefix && name.back() == ')') {
        const std::string_view args = name.substr(prefix.size(), name.size() - prefix.size() - 1);
        // Split on the last three commas so nested names stay intact.
        std::vector<std::size_t> commas;
        int depth = 0;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == '(') ++depth;
            else if (args[i] == ')') --depth;
            else if (args[i] == ',' && depth == 0) commas.push_back(i);
        }
        if (commas.size() != 3) throw std::invalid_argument("expected lifted(<name>,h,s,o), got " + std::string(name));
        const BellExpression inner = by_name(args.substr(0, commas[0]));
        const int h = std::stoi(std::string(args.substr(commas[0] + 1, commas[1] - commas[0] - 1)));
        const auto s = parse_int_list(args.substr(commas[1] + 1, commas[2] - commas[1] - 1), h);
        const auto o = parse_int_list(args.substr(commas[2] + 1), h);
        BellExpression e = lift(zero_bound_form(inner), h, s, o);
        e.set_name(std::string(name));
        return e;
    }
    throw std::invalid_argument("unknown built-in expression: " + std::string(name));
}

}  // namespace builtin

}  // namespace mgs
