#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mgs/lp.hpp"
#include "mgs/polytope.hpp"
#include "mgs/witness.hpp"

namespace mgs {

enum class MembershipStatus { Feasible, Infeasible, Unresolved };
std::string to_string(MembershipStatus s);

enum class LpMode {
    Exact,    // rational simplex; real inputs are rationalized first
    Epsilon,  // floating-point feasibility up to epsilon
};

struct MembershipOptions {
    LpMode mode = LpMode::Exact;
    double epsilon = 1e-8;
    std::int64_t denominator_bound = kDefaultDenominatorBound;
    lp::SolverOptions solver;
};

struct MembershipResult {
    MembershipStatus status = MembershipStatus::Unresolved;
    LpMode mode = LpMode::Exact;
    /// Feasible: convex weights by vertex index (exact mode).
    std::vector<std::pair<std::size_t, Rational>> weights;
    /// Feasible: convex weights by vertex index (epsilon mode).
    std::vector<std::pair<std::size_t, double>> real_weights;
    /// Infeasible: y with y.v <= 0 on every vertex and y.P > 0, bound 0.
    std::optional<BellExpression> witness;
    double residual = 0.0;       // max |sum w v - P| against the input table
    double margin = 0.0;         // y.P on the input table
    double rationalization_error = 0.0;  // when a real P was rationalized
    std::string note;
    std::size_t iterations = 0;
};

/// Feasibility of P = sum_v w_v v, w >= 0 (normalization is implied by
/// the rows), by phase one of the simplex method. Exact mode first runs a
/// floating-point solve and then repairs and certifies its basis exactly.
MembershipResult decompose(const Correlation& p, const VertexSet& vertices, const MembershipOptions& opts = {});

struct CertificateCheck {
    bool ok = false;
    double residual = 0.0;  // feasible: max |sum w v - P|
    Rational max_over_vertices;  // infeasible: exact max of y over V
    double margin = 0.0;         // infeasible: y.P
    std::string detail;
};

/// Independent recomputation of a certificate.
CertificateCheck verify_certificate(const MembershipResult& result, const Correlation& p, const VertexSet& vertices);

struct MgsLevel {
    int k = 0;
    MembershipStatus status = MembershipStatus::Unresolved;
    std::optional<MembershipResult> result;
    std::size_t vertices = 0;
    std::string note;
};

struct MgsReport {
    Resource resource = Resource::NS;
    int k_max = 0;
    std::optional<int> mgs;  // smallest feasible k
    int lower_bound = 1;     // every k below this is certified infeasible
    std::vector<MgsLevel> levels;
};

struct MgsOptions {
    MembershipOptions membership;
    PolytopeOptions polytope;
    const GroupVertexLibrary* library = nullptr;
};

/// Sweeps k = 1..k_max and stops at the first feasible level. Levels whose
/// vertex data is unavailable are reported unresolved. Throws when no level
/// could be resolved.
MgsReport mgs(const Correlation& p, Resource resource, int k_max, const MgsOptions& opts = {});

/// decompose against the products for one partition.
MembershipResult fixed_partition_membership(const Correlation& p, Resource resource, const Partition& partition,
                                            const MgsOptions& opts = {});

}  // namespace mgs
