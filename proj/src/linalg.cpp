#include "mgs/linalg.hpp"

#include <stdexcept>

namespace mgs::linalg {

std::vector<std::size_t> rref(RationalMatrix& rows) {
    std::vector<std::size_t> pivots;
    if (rows.empty()) return pivots;
    const std::size_t cols = rows.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[r]);
        const Rational inv = 1 / rows[r][c];
        for (std::size_t j = c; j < cols; ++j) rows[r][j] *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            const Rational f = rows[i][c];
            for (std::size_t j = c; j < cols; ++j)
                if (rows[r][j] != 0) rows[i][j] -= f * rows[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
    return pivots;
}

std::size_t rank(RationalMatrix rows) {
    // Forward elimination only.
    if (rows.empty()) return 0;
    const std::size_t cols = rows.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[r]);
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][c] == 0) continue;
            const Rational f = rows[i][c] / rows[r][c];
            for (std::size_t j = c; j < cols; ++j)
                if (rows[r][j] != 0) rows[i][j] -= f * rows[r][j];
        }
        ++r;
    }
    return r;
}

long affine_rank(const RationalMatrix& points) {
    if (points.empty()) return -1;
    RationalMatrix diffs;
    diffs.reserve(points.size() - 1);
    for (std::size_t i = 1; i < points.size(); ++i) {
        RationalVector d(points[i].size());
        for (std::size_t j = 0; j < d.size(); ++j) d[j] = points[i][j] - points[0][j];
        diffs.push_back(std::move(d));
    }
    return static_cast<long>(rank(std::move(diffs)));
}

std::optional<AffineSolution> solve_affine(const RationalMatrix& a, const RationalVector& b, std::size_t cols) {
    if (a.size() != b.size()) throw std::invalid_argument("solve_affine: row count mismatch");
    RationalMatrix aug;
    aug.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != cols) throw std::invalid_argument("solve_affine: column count mismatch");
        RationalVector row = a[i];
        row.push_back(b[i]);
        aug.push_back(std::move(row));
    }
    const auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
    AffineSolution sol;
    sol.origin.assign(cols, Rational(0));
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        is_pivot[pivots[r]] = true;
        sol.origin[pivots[r]] = aug[r][cols];
    }
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        RationalVector dir(cols, Rational(0));
        dir[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) dir[pivots[r]] = -aug[r][f];
        sol.basis.push_back(std::move(dir));
    }
    return sol;
}

std::optional<RationalVector> solve_square(RationalMatrix m, RationalVector rhs) {
    const std::size_t n = m.size();
    if (rhs.size() != n) throw std::invalid_argument("solve_square: size mismatch");
    for (std::size_t i = 0; i < n; ++i) m[i].push_back(rhs[i]);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return std::nullopt;
        std::swap(m[p], m[c]);
        const Rational inv = 1 / m[c][c];
        for (std::size_t j = c; j <= n; ++j) m[c][j] *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m[i][c] == 0) continue;
            const Rational f = m[i][c];
            for (std::size_t j = c; j <= n; ++j)
                if (m[c][j] != 0) m[i][j] -= f * m[c][j];
        }
    }
    RationalVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n];
    return x;
}

}  // namespace mgs::linalg
