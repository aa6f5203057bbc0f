#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mgs/rational.hpp"
#include "mgs/scenario.hpp"

namespace mgs {

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr std::int64_t kDefaultDenominatorBound = 1'000'000;

enum class NumericMode { Rational, Real };

/// Conditional probability table P(a|x), validated on construction and
/// immutable afterwards. Exact-rational tables are used for polytope and LP
/// work; real tables hold quantum (Born rule) data.
class Correlation {
public:
    static Correlation from_rational(Scenario scenario, std::vector<Rational> table);
    /// Entries may dip below zero or miss normalization by at most `tolerance`.
    static Correlation from_real(Scenario scenario, std::vector<double> table,
                                 double tolerance = kDefaultTolerance);

    const Scenario& scenario() const { return scenario_; }
    NumericMode mode() const { return mode_; }
    bool is_exact() const { return mode_ == NumericMode::Rational; }

    double at(std::size_t x, std::size_t a) const;
    const Rational& exact_at(std::size_t x, std::size_t a) const;

    /// Throws std::logic_error in real mode.
    const std::vector<Rational>& exact_table() const;
    /// Throws std::logic_error in exact mode; use to_doubles() for a view of either.
    const std::vector<double>& real_table() const;
    std::vector<double> to_doubles() const;

    Correlation to_real() const;

    bool operator==(const Correlation& other) const;

private:
    Correlation() = default;

    Scenario scenario_;
    NumericMode mode_ = NumericMode::Rational;
    std::vector<Rational> exact_;
    std::vector<double> real_;
};

struct RationalizedCorrelation {
    Correlation correlation;
    double max_error = 0.0;  // max |P_exact - P_real| over cells
    bool preserves_no_signaling = false;
};

/// Exact rational approximation of a real correlation. Non-signaling
/// binary-output tables are rounded in correlator space (grid 1/bound per correlator),
/// which keeps the result exactly normalized and non-signaling whenever the
/// input is. The grid is refined tenfold while any entry rounds below zero.
/// Everything else is rounded per row on the grid 1/bound with a
/// largest-remainder fix so rows stay exactly normalized.
RationalizedCorrelation rationalize(const Correlation& p,
                                    std::int64_t denominator_bound = kDefaultDenominatorBound);

struct NoSignalingReport {
    bool pass = true;
    double worst_violation = 0.0;
    /// Parties whose marginal moved, and the party whose input moved it.
    std::vector<int> subset;
    int signaling_party = -1;
};

/// Checks every single-party-removal marginal; consistency of all other
/// subset marginals follows by induction. Exact tables are compared with
/// zero tolerance regardless of `tolerance`.
NoSignalingReport is_no_signaling(const Correlation& p, double tolerance = kDefaultTolerance);

/// P(a | x) of the remaining parties given that `held` parties used
/// `settings` and obtained `outcomes`. Throws VanishingProbabilityError when
/// the conditioning event has probability zero for some remaining input.
Correlation condition(const Correlation& p, std::span<const int> held, std::span<const int> settings,
                      std::span<const int> outcomes);

/// Marginal on `subset` (parties kept in the given order). Throws
/// SignalingError when it depends on complementary inputs beyond `tolerance`.
Correlation marginal(const Correlation& p, std::span<const int> subset,
                     double tolerance = kDefaultTolerance);

/// P([sum a]_l = r | x) for every joint input and residue.
class FullCorrelatorTable {
public:
    const Scenario& scenario() const { return scenario_; }
    int residues() const { return residues_; }
    NumericMode mode() const { return mode_; }
    double at(std::size_t x, int r) const;
    const Rational& exact_at(std::size_t x, int r) const;

private:
    friend FullCorrelatorTable full_correlators(const Correlation& p);
    Scenario scenario_;
    int residues_ = 0;
    NumericMode mode_ = NumericMode::Rational;
    std::vector<Rational> exact_;
    std::vector<double> real_;
};

FullCorrelatorTable full_correlators(const Correlation& p);

/// f(x) in 0..l-1 for every joint input of a uniform-output scenario.
class DeterministicResidueFunction {
public:
    DeterministicResidueFunction(Scenario scenario, std::vector<int> residues);
    const Scenario& scenario() const { return scenario_; }
    int residues() const { return scenario_.uniform_outputs(); }
    int operator()(std::size_t x) const { return values_[x]; }

private:
    Scenario scenario_;
    std::vector<int> values_;
};

/// The non-signaling box P(a|x) = l^{-(n-1)} [sum a = f(x) mod l].
Correlation simulate_full_correlators(const DeterministicResidueFunction& f);

struct WeightedCorrelation {
    Rational weight;
    Correlation correlation;
};

/// Convex combination; exact when every component is exact.
Correlation mix(std::span<const WeightedCorrelation> parts);

struct GroupCorrelation {
    Correlation correlation;
    std::vector<int> group;  // global party indices, in the factor's party order
};

/// Product of factors on disjoint groups covering 0..n-1.
Correlation product(std::span<const GroupCorrelation> factors);

/// Deterministic correlation: outputs[x] is the joint outcome for joint input x.
Correlation deterministic(const Scenario& scenario, std::span<const std::size_t> outputs);

}  // namespace mgs
