#pragma once

#include <optional>
#include <vector>

#include "mgs/rational.hpp"

namespace mgs::linalg {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;  // row-major, list of rows

/// Rank by exact Gaussian elimination (rows may be consumed).
std::size_t rank(RationalMatrix rows);

/// Affine rank of a point set: rank of {p_i - p_0}. Empty set -> -1.
long affine_rank(const RationalMatrix& points);

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RationalMatrix& rows);

/// Solution set of A p = b as origin + span(basis); nullopt if inconsistent.
struct AffineSolution {
    RationalVector origin;
    RationalMatrix basis;  // each entry is a direction vector of length cols
};
std::optional<AffineSolution> solve_affine(const RationalMatrix& a, const RationalVector& b, std::size_t cols);

/// Solves the square system B x = b exactly; nullopt when B is singular.
std::optional<RationalVector> solve_square(RationalMatrix b_matrix, RationalVector rhs);

}  // namespace mgs::linalg
