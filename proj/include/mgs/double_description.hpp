#pragma once

#include "mgs/linalg.hpp"

namespace mgs::dd {

/// Vertices of the bounded polytope {p : eq p = eq_rhs, ineq p >= ineq_rhs}
/// by the double description method in exact arithmetic. Equalities are
/// eliminated first by an affine parametrization; the remaining cone is
/// processed one inequality at a time with the combinatorial adjacency test.
/// Throws std::invalid_argument when the polyhedron is unbounded.
linalg::RationalMatrix enumerate_vertices(const linalg::RationalMatrix& eq, const linalg::RationalVector& eq_rhs,
                                          const linalg::RationalMatrix& ineq, const linalg::RationalVector& ineq_rhs,
                                          std::size_t dim);

}  // namespace mgs::dd
