#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgs/correlation.hpp"
#include "mgs/polytope.hpp"

namespace mgs {

/// Product of +-1 observables, one setting per listed party. Parties not
/// listed are marginalized (their inputs anchored at 0).
struct CorrelatorMonomial {
    std::vector<std::pair<int, int>> factors;  // (party, setting), sorted by party
    Rational coefficient;

    void normalize();
    bool operator==(const CorrelatorMonomial& o) const { return factors == o.factors && coefficient == o.coefficient; }
};

enum class SourceForm { Probability, Correlator, FullCorrelator };

struct LiftInfo {
    int added = 0;
    std::vector<int> settings;
    std::vector<int> outcomes;
};

/// Linear functional I(P) = sum_{x,a} beta(x,a) P(a|x) with a claimed bound
/// I(P) <= bound over the resource's k-producible set.
class BellExpression {
public:
    BellExpression() = default;
    BellExpression(Scenario scenario, std::vector<Rational> coefficients, Rational bound, Resource resource, int k);

    const Scenario& scenario() const { return scenario_; }
    const std::vector<Rational>& coefficients() const { return coefficients_; }
    const Rational& coefficient(std::size_t x, std::size_t a) const { return coefficients_[scenario_.cell(x, a)]; }
    const Rational& bound() const { return bound_; }
    Resource resource() const { return resource_; }
    int k() const { return k_; }
    bool zero_bound() const { return bound_ == 0; }

    /// Nonzero (cell, coefficient) pairs in cell order.
    std::vector<std::pair<std::size_t, Rational>> terms() const;

    const std::string& name() const { return name_; }
    SourceForm source_form() const { return source_form_; }
    const std::vector<CorrelatorMonomial>& monomials() const { return monomials_; }
    bool symmetrized() const { return symmetrized_; }
    /// beta^r_x, indexed x * residues + r (full-correlator source only).
    const std::vector<Rational>& fullcorr() const { return fullcorr_; }
    const std::vector<LiftInfo>& lifts() const { return lifts_; }

    BellExpression& set_name(std::string name) {
        name_ = std::move(name);
        return *this;
    }
    BellExpression& set_lifts(std::vector<LiftInfo> lifts) {
        lifts_ = std::move(lifts);
        return *this;
    }
    BellExpression& set_resource(Resource r, int k) {
        resource_ = r;
        k_ = k;
        return *this;
    }

private:
    friend BellExpression expand_correlators(const Scenario&, std::span<const CorrelatorMonomial>, bool, Rational,
                                             Resource, int);
    friend BellExpression compile_fullcorr(const Scenario&, std::span<const Rational>, Rational, Resource, int);
    friend BellExpression zero_bound_form(const BellExpression&);
    friend BellExpression lift_unchecked(const BellExpression&, const Scenario&, std::span<const int>,
                                         std::span<const int>);

    Scenario scenario_;
    std::vector<Rational> coefficients_;
    Rational bound_;
    Resource resource_ = Resource::L;
    int k_ = 1;
    std::string name_;
    SourceForm source_form_ = SourceForm::Probability;
    std::vector<CorrelatorMonomial> monomials_;
    bool symmetrized_ = false;
    std::vector<Rational> fullcorr_;
    std::vector<LiftInfo> lifts_;
};

/// Binary outputs only. Each monomial expands to sum_a (-1)^{sum of the
/// involved a_i} P(a|x). With `symmetrize`, every distinct image of a
/// monomial under party permutations is added once (orbit sum).
BellExpression expand_correlators(const Scenario& scenario, std::span<const CorrelatorMonomial> monomials,
                                  bool symmetrize, Rational bound, Resource resource, int k);

/// Coefficient of P(a|x) is beta^{[sum a]_l}_x; `beta` is indexed x * l + r.
BellExpression compile_fullcorr(const Scenario& scenario, std::span<const Rational> beta, Rational bound,
                                Resource resource, int k);

/// sum beta(x,a) P(a|x); bound is not subtracted.
double evaluate(const BellExpression& expr, const Correlation& p);
Rational evaluate_exact(const BellExpression& expr, const Correlation& p);
Rational evaluate(const BellExpression& expr, const Vertex& v);

/// Subtracts bound * sum_a P(a|0...0); the result has bound 0.
BellExpression zero_bound_form(const BellExpression& expr);

/// Appends the parties of `added` with fixed settings and outcomes.
/// Requires zero-bound form and resource Q or NS (or L); S and T are
/// rejected since lifting is unsound for signaling resources.
BellExpression lift(const BellExpression& expr, const Scenario& added, std::span<const int> settings,
                    std::span<const int> outcomes);
/// Added parties copy party 0's input and output counts.
BellExpression lift(const BellExpression& expr, int h, std::span<const int> settings, std::span<const int> outcomes);
/// Same coefficients without the scope checks; used to exhibit the
/// signaling counterexample.
BellExpression lift_unchecked(const BellExpression& expr, const Scenario& added, std::span<const int> settings,
                              std::span<const int> outcomes);

struct VertexMaximum {
    Rational value;
    std::size_t index = 0;  // lowest index among maximizers
};

/// Exact maximum of the expression over a vertex set. Throws on an empty set.
VertexMaximum max_over_vertices(const BellExpression& expr, const VertexSet& vertices, bool parallel = true);

struct FacetRank {
    std::size_t saturating = 0;
    long rank = -1;       // affine rank of the saturating vertices
    long dimension = -1;  // affine dimension of the polytope
    bool facet() const { return dimension >= 0 && rank == dimension - 1; }
};

/// Affine dimension of the convex hull of the vertices.
long polytope_dimension(const VertexSet& vertices);

/// Expression must be in zero-bound form and valid (max <= 0) on `vertices`.
FacetRank facet_rank(const BellExpression& expr, const VertexSet& vertices);
/// Same, with the polytope dimension computed once by the caller.
FacetRank facet_rank(const BellExpression& expr, const VertexSet& vertices, long dimension);

struct SvetlichnyCounterexample {
    Vertex strategy;               // in the S_{4,2} product set, partition 0,1|2,3
    std::vector<std::uint32_t> group_ids;  // ids within the 2-party deterministic sets
    bool product_vertex = false;
    Rational value;        // naive lifting evaluated on the strategy
    Rational second_term;  // -4 sum_a P(a, o4=0 | 000, s4=0)
    BellExpression expression;
};

SvetlichnyCounterexample svetlichny_counterexample();

namespace builtin {

/// CHSH: sum (-1)^{a1+a2+x1x2} P(a1a2|x1x2) <= 2 over local correlations.
BellExpression chsh();
/// Tripartite Svetlichny, beta = (-1)^{sum a + floor((sum x - 1)/2)}, bound 4, S_{3,2}.
BellExpression svetlichny3();
/// Same coefficients tagged NS_{3,2}.
BellExpression ns3();
/// Four-party correlator inequality, orbit-symmetrized, bound 105 over NS_{4,2}.
BellExpression ineq10();
std::vector<CorrelatorMonomial> ineq10_monomials();

/// Resolves "chsh", "svetlichny3", "ns3", "ineq10" and "lifted(<name>,h,s,o)".
BellExpression by_name(std::string_view name);

}  // namespace builtin

namespace kernels {

/// Exact integer form of an expression: beta = numerators / denominator.
struct IntegerExpression {
    std::vector<std::int64_t> numerators;
    Rational denominator;
    bool exact = true;  // false when some numerator does not fit 32 bits
};
IntegerExpression integer_form(const BellExpression& expr);

/// Maximum over vertices, lowest index on ties. Serial reference and OpenMP.
std::size_t argmax_serial(const IntegerExpression& form, const VertexSet& vertices);
std::size_t argmax_parallel(const IntegerExpression& form, const VertexSet& vertices);

}  // namespace kernels

}  // namespace mgs
