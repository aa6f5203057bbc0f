#include "mgs/double_description.hpp"

#include <bitset>
#include <stdexcept>

namespace mgs::dd {

namespace {

constexpr std::size_t kMaxConstraints = 512;
using ZeroSet = std::bitset<kMaxConstraints>;

using IntVector = std::vector<mpz_class>;

struct Ray {
    IntVector coords;
    ZeroSet zeros;
};

void normalize(IntVector& v) {
    mpz_class g = 0;
    for (const auto& c : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g > 1)
        for (auto& c : v) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

IntVector to_integer_row(const linalg::RationalVector& row) {
    mpz_class l = 1;
    for (const auto& q : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    IntVector out(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) out[i] = row[i].get_num() * (l / row[i].get_den());
    normalize(out);
    return out;
}

mpz_class dot(const IntVector& a, const IntVector& b) {
    mpz_class s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

}  // namespace

linalg::RationalMatrix enumerate_vertices(const linalg::RationalMatrix& eq, const linalg::RationalVector& eq_rhs,
                                          const linalg::RationalMatrix& ineq, const linalg::RationalVector& ineq_rhs,
                                          std::size_t dim) {
    if (ineq.size() != ineq_rhs.size()) throw std::invalid_argument("inequality row count mismatch");
    const auto param = linalg::solve_affine(eq, eq_rhs, dim);
    if (!param) return {};
    const std::size_t free = param->basis.size();

    // Homogenized cone in y = (t, s): row . y >= 0.
    std::vector<IntVector> rows;
    for (std::size_t i = 0; i < ineq.size(); ++i) {
        linalg::RationalVector r(free + 1);
        for (std::size_t j = 0; j < free; ++j) {
            Rational v(0);
            for (std::size_t c = 0; c < dim; ++c)
                if (ineq[i][c] != 0 && param->basis[j][c] != 0) v += ineq[i][c] * param->basis[j][c];
            r[j] = v;
        }
        Rational v = -ineq_rhs[i];
        for (std::size_t c = 0; c < dim; ++c)
            if (ineq[i][c] != 0) v += ineq[i][c] * param->origin[c];
        r[free] = v;
        rows.push_back(to_integer_row(r));
    }
    {
        IntVector s_row(free + 1, mpz_class(0));
        s_row[free] = 1;
        rows.push_back(std::move(s_row));
    }
    if (rows.size() > kMaxConstraints) throw std::length_error("double description: too many constraints");

    const std::size_t cone_dim = free + 1;
    // Initial simplicial cone from cone_dim independent rows.
    std::vector<std::size_t> basis_rows;
    {
        linalg::RationalMatrix chosen;
        for (std::size_t i = 0; i < rows.size() && basis_rows.size() < cone_dim; ++i) {
            linalg::RationalVector candidate(rows[i].begin(), rows[i].end());
            chosen.push_back(candidate);
            if (linalg::rank(chosen) == chosen.size())
                basis_rows.push_back(i);
            else
                chosen.pop_back();
        }
    }
    if (basis_rows.size() < cone_dim) throw std::invalid_argument("double description: polyhedron is unbounded");

    std::vector<Ray> rays;
    {
        linalg::RationalMatrix b;
        for (std::size_t i : basis_rows) b.emplace_back(rows[i].begin(), rows[i].end());
        for (std::size_t k = 0; k < cone_dim; ++k) {
            linalg::RationalVector e(cone_dim, Rational(0));
            e[k] = 1;
            auto r = linalg::solve_square(b, e);
            if (!r) throw std::logic_error("double description: singular initial basis");
            Ray ray;
            ray.coords = to_integer_row(*r);
            rays.push_back(std::move(ray));
        }
    }
    std::vector<bool> processed(rows.size(), false);
    for (std::size_t i : basis_rows) processed[i] = true;
    auto refresh_zeros = [&](Ray& ray, std::size_t row) {
        if (dot(rows[row], ray.coords) == 0) ray.zeros.set(row);
    };
    for (auto& ray : rays)
        for (std::size_t i : basis_rows) refresh_zeros(ray, i);

    for (std::size_t row = 0; row < rows.size(); ++row) {
        if (processed[row]) continue;
        std::vector<mpz_class> values(rays.size());
        std::vector<std::size_t> pos, neg, zero;
        for (std::size_t r = 0; r < rays.size(); ++r) {
            values[r] = dot(rows[row], rays[r].coords);
            const int sign = sgn(values[r]);
            (sign > 0 ? pos : sign < 0 ? neg : zero).push_back(r);
        }
        processed[row] = true;
        if (neg.empty()) {
            for (std::size_t r : zero) rays[r].zeros.set(row);
            continue;
        }
        std::vector<Ray> next;
        for (std::size_t r : pos) next.push_back(rays[r]);
        for (std::size_t r : zero) {
            Ray ray = rays[r];
            ray.zeros.set(row);
            next.push_back(std::move(ray));
        }
        for (std::size_t p : pos) {
            for (std::size_t q : neg) {
                const ZeroSet common = rays[p].zeros & rays[q].zeros;
                if (common.count() + 2 < cone_dim) continue;
                bool adjacent = true;
                for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
                    if (r == p || r == q) continue;
                    if ((common & rays[r].zeros) == common) adjacent = false;
                }
                if (!adjacent) continue;
                Ray ray;
                ray.coords.resize(cone_dim);
                const mpz_class wp = -values[q];
                const mpz_class& wq = values[p];
                for (std::size_t c = 0; c < cone_dim; ++c) ray.coords[c] = wp * rays[p].coords[c] + wq * rays[q].coords[c];
                normalize(ray.coords);
                ray.zeros = common;
                ray.zeros.set(row);
                next.push_back(std::move(ray));
            }
        }
        rays = std::move(next);
    }

    linalg::RationalMatrix vertices;
    for (const auto& ray : rays) {
        const mpz_class& s = ray.coords[free];
        if (s == 0) throw std::invalid_argument("double description: polyhedron is unbounded");
        linalg::RationalVector p = param->origin;
        for (std::size_t j = 0; j < free; ++j) {
            if (ray.coords[j] == 0) continue;
            Rational t(ray.coords[j], s);
            t.canonicalize();
            for (std::size_t c = 0; c < dim; ++c)
                if (param->basis[j][c] != 0) p[c] += t * param->basis[j][c];
        }
        vertices.push_back(std::move(p));
    }
    return vertices;
}

}  // namespace mgs::dd
