#include "mgs/membership.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mgs/errors.hpp"

namespace mgs {

std::string to_string(MembershipStatus s) {
    switch (s) {
        case MembershipStatus::Feasible: return "feasible";
        case MembershipStatus::Infeasible: return "infeasible";
        case MembershipStatus::Unresolved: return "unresolved";
    }
    return "?";
}

namespace {

// Integer coefficients with no common factor; positive scaling keeps the sign of y.v.
std::vector<Rational> primitive(const std::vector<Rational>& y) {
    mpz_class l = 1, g = 0;
    for (const auto& q : y) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    std::vector<Rational> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = y[i] * l;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_num_mpz_t());
    }
    if (g > 1)
        for (auto& q : out) q /= g;
    return out;
}

BellExpression farkas_expression(const VertexSet& v, std::vector<Rational> y) {
    BellExpression e(v.scenario(), primitive(y), Rational(0), v.resource(), std::max(1, v.k()));
    e.set_name("farkas");
    return e;
}

double real_residual(const VertexSet& v, const Correlation& p,
                     const std::vector<std::pair<std::size_t, double>>& weights) {
    std::vector<long double> sum(v.scenario().table_size(), 0.0L);
    for (const auto& [idx, w] : weights) {
        const Vertex& vert = v[idx];
        for (const auto& e : vert.entries)
            sum[e.cell] += static_cast<long double>(w) * e.numerator / static_cast<long double>(vert.denominator);
    }
    const auto table = p.to_doubles();
    long double worst = 0.0L;
    for (std::size_t c = 0; c < table.size(); ++c) worst = std::max(worst, std::fabs(sum[c] - table[c]));
    return static_cast<double>(worst);
}

MembershipResult decompose_exact(const Correlation& p, const VertexSet& vertices, const lp::ColumnMatrix& a,
                                 const MembershipOptions& opts) {
    MembershipResult res;
    res.mode = LpMode::Exact;
    std::vector<Rational> b;
    if (p.is_exact()) {
        b = p.exact_table();
    } else {
        auto r = rationalize(p, opts.denominator_bound);
        b = r.correlation.exact_table();
        res.rationalization_error = r.max_error;
        res.note = "input rationalized on the grid 1/" + std::to_string(opts.denominator_bound);
    }
    std::vector<double> bd(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) bd[i] = b[i].get_d();
    const auto guess = lp::solve_double(a, bd, 1e-11, opts.solver);
    const auto exact = lp::solve_exact(a, b, guess.outcome == lp::Outcome::Failed ? std::vector<std::size_t>{}
                                                                                : guess.basis,
                                       opts.solver);
    res.iterations = guess.iterations + exact.iterations;
    if (exact.outcome == lp::Outcome::Failed) {
        res.status = MembershipStatus::Unresolved;
        res.note = "exact simplex hit the iteration limit";
        return res;
    }
    if (exact.outcome == lp::Outcome::Feasible) {
        res.status = MembershipStatus::Feasible;
        for (std::size_t i = 0; i < exact.basis.size(); ++i)
            if (exact.basis[i] < a.cols && sgn(exact.values[i]) > 0) res.weights.emplace_back(exact.basis[i], exact.values[i]);
        std::sort(res.weights.begin(), res.weights.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        if (!p.is_exact()) {
            std::vector<std::pair<std::size_t, double>> approx;
            for (const auto& [i, w] : res.weights) approx.emplace_back(i, w.get_d());
            res.residual = real_residual(vertices, p, approx);
        }
        return res;
    }
    res.status = MembershipStatus::Infeasible;
    res.witness = farkas_expression(vertices, exact.duals);
    res.margin = evaluate(*res.witness, p);
    return res;
}

MembershipResult decompose_epsilon(const Correlation& p, const VertexSet& vertices, const lp::ColumnMatrix& a,
                                   const MembershipOptions& opts) {
    MembershipResult res;
    res.mode = LpMode::Epsilon;
    const auto b = p.to_doubles();
    const auto sol = lp::solve_double(a, b, opts.epsilon * 0.5, opts.solver);
    res.iterations = sol.iterations;
    if (sol.outcome == lp::Outcome::Failed) {
        res.note = "numerical failure in the floating-point simplex";
        return res;
    }
    if (sol.outcome == lp::Outcome::Feasible) {
        for (std::size_t i = 0; i < sol.basis.size(); ++i)
            if (sol.basis[i] < a.cols && sol.values[i] > 0) res.real_weights.emplace_back(sol.basis[i], sol.values[i]);
        std::sort(res.real_weights.begin(), res.real_weights.end());
        res.residual = real_residual(vertices, p, res.real_weights);
        if (res.residual <= opts.epsilon) {
            res.status = MembershipStatus::Feasible;
        } else {
            res.note = "floating-point solution misses epsilon: residual " + std::to_string(res.residual);
        }
        return res;
    }
    // Rationalize the floating-point Farkas functional and shift it so its
    // exact maximum over the vertices is 0.
    double scale = 0.0;
    for (double v : sol.duals) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) {
        res.note = "degenerate dual in the floating-point simplex";
        return res;
    }
    std::vector<Rational> y(sol.duals.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = mgs::rationalize(sol.duals[i] / scale, 1'000'000);
    BellExpression raw(vertices.scenario(), y, Rational(0), vertices.resource(), std::max(1, vertices.k()));
    const auto top = max_over_vertices(raw, vertices, opts.solver.parallel);
    for (std::size_t out = 0; out < vertices.scenario().joint_outputs(); ++out)
        y[vertices.scenario().cell(0, out)] -= top.value;
    auto witness = farkas_expression(vertices, y);
    const double margin = evaluate(witness, p);
    // Compare against the coefficient scale so the separation is not a rounding artefact.
    double coef_scale = 0.0;
    for (const auto& q : witness.coefficients()) coef_scale = std::max(coef_scale, std::fabs(q.get_d()));
    if (margin > opts.epsilon * coef_scale) {
        res.status = MembershipStatus::Infeasible;
        res.margin = margin;
        res.witness = std::move(witness);
    } else {
        res.note = "floating-point infeasibility could not be certified (margin " + std::to_string(margin) + ")";
    }
    return res;
}

// Functional that vanishes on every non-signaling correlation and is positive on p.
std::optional<BellExpression> signaling_witness(const Correlation& p, double tolerance) {
    const Scenario& s = p.scenario();
    const int n = s.parties();
    std::vector<int> xs(n), as(n);
    double worst = 0.0;
    std::vector<Rational> best;
    for (int i = 0; i < n; ++i) {
        for (std::size_t x = 0; x < s.joint_inputs(); ++x) {
            mixed_radix_decode(x, s.inputs(), xs);
            if (xs[i] == 0) continue;
            auto x0 = xs;
            x0[i] = 0;
            const std::size_t xz = s.encode_inputs(x0);
            for (std::size_t a = 0; a < s.joint_outputs(); ++a) {
                mixed_radix_decode(a, s.outputs(), as);
                if (as[i] != 0) continue;
                std::vector<Rational> y(s.table_size(), Rational(0));
                for (int ai = 0; ai < s.outputs(i); ++ai) {
                    as[i] = ai;
                    const std::size_t aa = s.encode_outputs(as);
                    y[s.cell(x, aa)] += 1;
                    y[s.cell(xz, aa)] -= 1;
                }
                as[i] = 0;
                BellExpression e(s, y, Rational(0), Resource::NS, n);
                const double v = evaluate(e, p);
                if (p.is_exact() ? sgn(evaluate_exact(e, p)) != 0 && std::fabs(v) >= worst
                                 : std::fabs(v) > std::max(worst, tolerance)) {
                    worst = std::fabs(v);
                    if (v < 0 || (p.is_exact() && sgn(evaluate_exact(e, p)) < 0))
                        for (auto& q : y) q = -q;
                    best = std::move(y);
                }
            }
        }
    }
    if (best.empty()) return std::nullopt;
    BellExpression e(s, std::move(best), Rational(0), Resource::NS, n);
    e.set_name("signaling");
    return e;
}

}  // namespace

MembershipResult decompose(const Correlation& p, const VertexSet& vertices, const MembershipOptions& opts) {
    if (!(p.scenario() == vertices.scenario()))
        throw std::invalid_argument("correlation scenario " + p.scenario().describe() + " does not match vertex set " +
                                    vertices.scenario().describe());
    if (vertices.empty()) throw std::invalid_argument("decompose: empty vertex set");
    const auto a = lp::ColumnMatrix::from_vertices(vertices);
    return opts.mode == LpMode::Exact ? decompose_exact(p, vertices, a, opts) : decompose_epsilon(p, vertices, a, opts);
}

CertificateCheck verify_certificate(const MembershipResult& result, const Correlation& p, const VertexSet& vertices) {
    CertificateCheck c;
    if (!(p.scenario() == vertices.scenario())) throw std::invalid_argument("verify_certificate: scenario mismatch");
    if (result.status == MembershipStatus::Unresolved) {
        c.detail = "nothing to verify for an unresolved result";
        return c;
    }
    if (result.status == MembershipStatus::Feasible) {
        if (!result.weights.empty()) {
            std::vector<Rational> sum(p.scenario().table_size(), Rational(0));
            Rational total(0);
            bool nonneg = true;
            for (const auto& [idx, w] : result.weights) {
                if (idx >= vertices.size()) throw std::invalid_argument("certificate references a missing vertex");
                if (sgn(w) < 0) nonneg = false;
                total += w;
                const Vertex& v = vertices[idx];
                for (const auto& e : v.entries) sum[e.cell] += w * v.value(e.cell);
            }
            double worst = 0.0;
            bool exact_match = p.is_exact();
            for (std::size_t cell = 0; cell < sum.size(); ++cell) {
                if (p.is_exact()) {
                    if (sum[cell] != p.exact_table()[cell]) exact_match = false;
                    worst = std::max(worst, std::fabs(Rational(sum[cell] - p.exact_table()[cell]).get_d()));
                } else {
                    worst = std::max(worst, std::fabs(sum[cell].get_d() - p.real_table()[cell]));
                }
            }
            c.residual = worst;
            if (!nonneg || total != 1) {
                c.detail = "weights are not a convex combination";
            } else if (p.is_exact()) {
                c.ok = exact_match;
                c.detail = exact_match ? "exact reconstruction" : "reconstruction differs from P";
            } else {
                c.ok = worst <= result.rationalization_error + 1e-12;
                c.detail = "reconstruction of the rationalized table; residual is the rationalization error";
            }
            return c;
        }
        if (!result.real_weights.empty()) {
            c.residual = real_residual(vertices, p, result.real_weights);
            double total = 0.0;
            bool nonneg = true;
            for (const auto& [idx, w] : result.real_weights) {
                total += w;
                nonneg = nonneg && w >= 0;
            }
            c.ok = nonneg && c.residual <= std::max(result.residual, 0.0) * (1 + 1e-9) + 1e-15 &&
                   std::fabs(total - 1.0) <= 1e-6;
            c.detail = "floating-point reconstruction";
            return c;
        }
        c.detail = "feasible without weights (no decomposition recorded)";
        c.ok = !result.note.empty();
        return c;
    }
    if (!result.witness) {
        c.detail = "infeasible result without a witness";
        return c;
    }
    const auto top = max_over_vertices(*result.witness, vertices);
    c.max_over_vertices = top.value;
    c.margin = evaluate(*result.witness, p);
    const bool positive = p.is_exact() ? sgn(evaluate_exact(*result.witness, p)) > 0 : c.margin > 0;
    c.ok = sgn(top.value) <= 0 && positive;
    c.detail = c.ok ? "separating functional" : "functional does not separate P from the vertices";
    return c;
}

MgsReport mgs(const Correlation& p, Resource resource, int k_max, const MgsOptions& opts) {
    if (resource == Resource::Q || resource == Resource::T)
        throw std::invalid_argument("membership is implemented for L, NS and S only");
    const Scenario& s = p.scenario();
    const int n = s.parties();
    if (k_max < 1 || k_max > n) throw std::invalid_argument("k_max must be in 1..n");
    static const GroupVertexLibrary empty_library;
    const GroupVertexLibrary& library = opts.library ? *opts.library : empty_library;

    MgsReport report;
    report.resource = resource;
    report.k_max = k_max;
    bool contiguous = true;
    bool any_resolved = false;
    std::optional<MembershipResult> local_result;
    std::size_t local_vertices = 0;
    for (int k = 1; k <= k_max; ++k) {
        MgsLevel level;
        level.k = k;
        try {
            if (resource == Resource::L && local_result) {
                level.result = local_result;
                level.vertices = local_vertices;
                level.note = "the local polytope does not depend on k";
            } else if (resource == Resource::S && k == n) {
                MembershipResult r;
                r.status = MembershipStatus::Feasible;
                r.note = "every normalized correlation is n-producible with the Svetlichny resource";
                level.result = r;
            } else if (resource == Resource::NS && k == n && !group_vertices_available(s, resource, library, opts.polytope)) {
                MembershipResult r;
                const double tol = opts.membership.mode == LpMode::Exact ? kDefaultTolerance : opts.membership.epsilon;
                const auto ns = is_no_signaling(p, tol);
                if (ns.pass) {
                    r.status = MembershipStatus::Feasible;
                    r.note = "no-signaling check (k = n)";
                } else {
                    r.status = MembershipStatus::Infeasible;
                    r.witness = signaling_witness(p, tol);
                    if (r.witness) r.margin = evaluate(*r.witness, p);
                    r.note = "P is signaling";
                }
                level.result = r;
            } else {
                const VertexSet v = producible_vertices(s, resource, k, std::nullopt, library, opts.polytope);
                level.vertices = v.size();
                level.result = decompose(p, v, opts.membership);
                if (resource == Resource::L) {
                    local_result = level.result;
                    local_vertices = v.size();
                }
            }
            level.status = level.result->status;
            if (level.note.empty()) level.note = level.result->note;
        } catch (const MissingVertexDataError& e) {
            level.status = MembershipStatus::Unresolved;
            level.note = e.what();
        } catch (const CapExceededError& e) {
            level.status = MembershipStatus::Unresolved;
            level.note = e.what();
        }
        if (level.status != MembershipStatus::Unresolved) any_resolved = true;
        if (level.status == MembershipStatus::Infeasible && contiguous) report.lower_bound = k + 1;
        if (level.status != MembershipStatus::Infeasible) contiguous = false;
        const bool feasible = level.status == MembershipStatus::Feasible;
        report.levels.push_back(std::move(level));
        if (feasible) {
            report.mgs = k;
            break;
        }
    }
    if (!any_resolved) throw std::runtime_error("mgs: no level could be resolved");
    return report;
}

MembershipResult fixed_partition_membership(const Correlation& p, Resource resource, const Partition& partition,
                                            const MgsOptions& opts) {
    static const GroupVertexLibrary empty_library;
    const GroupVertexLibrary& library = opts.library ? *opts.library : empty_library;
    const VertexSet v =
        producible_vertices(p.scenario(), resource, partition.max_block(), partition, library, opts.polytope);
    return decompose(p, v, opts.membership);
}

}  // namespace mgs
