#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mgs/polytope.hpp"

namespace mgs::lp {

/// Vertex set as sparse columns: column j has entries num / den[j] on rows
/// (table cells) index[start[j]..start[j+1]).
struct ColumnMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> start;
    std::vector<std::uint32_t> index;
    std::vector<std::int64_t> num;
    std::vector<double> value;
    std::vector<std::int64_t> den;

    static ColumnMatrix from_vertices(const VertexSet& vertices);
};

struct SolverOptions {
    std::size_t initial_columns = 5000;  // restricted master size before pricing
    std::size_t columns_per_round = 500;
    std::uint64_t seed = 0x5eed;
    std::size_t max_iterations = 200000;
    std::size_t refactor_interval = 64;
    bool parallel = true;
};

enum class Outcome { Feasible, Infeasible, Failed };

/// Result of phase one: min sum of artificials s.t. A w + S a = b, w, a >= 0.
/// `basis` holds column ids (structural < cols, artificial cols + row).
template <class T>
struct PhaseOne {
    Outcome outcome = Outcome::Failed;
    T objective{};
    std::vector<std::size_t> basis;
    std::vector<T> values;  // basic variable values, aligned with basis
    std::vector<T> duals;   // one per row; y.A_j <= 0 on every column at optimum
    std::size_t iterations = 0;
    std::size_t pricing_rounds = 0;
};

/// Floating-point revised simplex with column generation and Dantzig pricing
/// (Bland's rule after a run of degenerate pivots). `tolerance` is the
/// objective level accepted as feasible.
PhaseOne<double> solve_double(const ColumnMatrix& a, std::span<const double> b, double tolerance,
                              const SolverOptions& opts);

/// Exact simplex with Bland's rule and full exact pricing, started from
/// `warm_basis` when it is primal feasible, else from the artificial basis.
PhaseOne<Rational> solve_exact(const ColumnMatrix& a, std::span<const Rational> b,
                               const std::vector<std::size_t>& warm_basis, const SolverOptions& opts);

namespace kernels {

/// Reduced costs d_j = -y.A_j for every column.
void reduced_costs_serial(const ColumnMatrix& a, std::span<const double> y, std::span<double> out);
void reduced_costs_parallel(const ColumnMatrix& a, std::span<const double> y, std::span<double> out);

/// Lowest column with y.A_j > 0 for integer-scaled duals, or a.cols when none.
std::size_t first_improving_serial(const ColumnMatrix& a, std::span<const mpz_class> y);
std::size_t first_improving_parallel(const ColumnMatrix& a, std::span<const mpz_class> y);

}  // namespace kernels

}  // namespace mgs::lp
