#include "mgs/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace mgs::lp {

ColumnMatrix ColumnMatrix::from_vertices(const VertexSet& vertices) {
    ColumnMatrix a;
    a.rows = vertices.scenario().table_size();
    a.cols = vertices.size();
    a.start.reserve(a.cols + 1);
    a.start.push_back(0);
    for (const auto& v : vertices.vertices()) {
        for (const auto& e : v.entries) {
            a.index.push_back(e.cell);
            a.num.push_back(e.numerator);
            a.value.push_back(static_cast<double>(e.numerator) / static_cast<double>(v.denominator));
        }
        a.den.push_back(v.denominator);
        a.start.push_back(a.index.size());
    }
    return a;
}

namespace kernels {

void reduced_costs_serial(const ColumnMatrix& a, std::span<const double> y, std::span<double> out) {
    for (std::size_t j = 0; j < a.cols; ++j) {
        double s = 0.0;
        for (std::size_t k = a.start[j]; k < a.start[j + 1]; ++k) s += y[a.index[k]] * a.value[k];
        out[j] = -s;
    }
}

void reduced_costs_parallel(const ColumnMatrix& a, std::span<const double> y, std::span<double> out) {
    const long long n = static_cast<long long>(a.cols);
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = a.start[j]; k < a.start[j + 1]; ++k) s += y[a.index[k]] * a.value[k];
        out[j] = -s;
    }
}

namespace {

bool improving(const ColumnMatrix& a, std::span<const mpz_class> y, std::size_t j, mpz_class& acc) {
    acc = 0;
    for (std::size_t k = a.start[j]; k < a.start[j + 1]; ++k) {
        const std::int64_t n = a.num[k];
        if (n >= 0) mpz_addmul_ui(acc.get_mpz_t(), y[a.index[k]].get_mpz_t(), static_cast<unsigned long>(n));
        else mpz_submul_ui(acc.get_mpz_t(), y[a.index[k]].get_mpz_t(), static_cast<unsigned long>(-n));
    }
    return sgn(acc) > 0;
}

}  // namespace

std::size_t first_improving_serial(const ColumnMatrix& a, std::span<const mpz_class> y) {
    mpz_class acc;
    for (std::size_t j = 0; j < a.cols; ++j)
        if (improving(a, y, j, acc)) return j;
    return a.cols;
}

std::size_t first_improving_parallel(const ColumnMatrix& a, std::span<const mpz_class> y) {
    std::size_t best = a.cols;
    const long long n = static_cast<long long>(a.cols);
#pragma omp parallel
    {
        mpz_class acc;
        std::size_t local = a.cols;
#pragma omp for schedule(static)
        for (long long j = 0; j < n; ++j) {
            if (local != a.cols) continue;
            if (improving(a, y, static_cast<std::size_t>(j), acc)) local = static_cast<std::size_t>(j);
        }
#pragma omp critical(mgs_first_improving)
        best = std::min(best, local);
    }
    return best;
}

}  // namespace kernels

namespace {

bool is_zero(double v) { return v == 0.0; }
bool is_zero(const Rational& v) { return sgn(v) == 0; }
double magnitude(double v) { return std::fabs(v); }
double magnitude(const Rational& v) { return std::fabs(v.get_d()); }

template <class T>
T entry_value(const ColumnMatrix& a, std::size_t k, std::size_t j);
template <>
double entry_value<double>(const ColumnMatrix& a, std::size_t k, std::size_t) {
    return a.value[k];
}
template <>
Rational entry_value<Rational>(const ColumnMatrix& a, std::size_t k, std::size_t j) {
    Rational q(static_cast<long>(a.num[k]), static_cast<unsigned long>(a.den[j]));
    q.canonicalize();
    return q;
}

// Revised simplex state with an explicit dense basis inverse.
template <class T>
class Tableau {
public:
    Tableau(const ColumnMatrix& a, std::span<const T> b) : a_(a), m_(a.rows), n_(a.cols), b_(b.begin(), b.end()) {
        if (b_.size() != m_) throw std::invalid_argument("right-hand side size does not match the column rows");
        sign_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) sign_[i] = b_[i] < 0 ? -1 : 1;
    }

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }
    bool artificial(std::size_t var) const { return var >= n_; }
    const std::vector<std::size_t>& basis() const { return basis_; }
    const std::vector<T>& values() const { return x_; }

    void start_artificial() {
        basis_.resize(m_);
        binv_.assign(m_ * m_, T(0));
        x_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            basis_[i] = n_ + i;
            binv_[i * m_ + i] = T(sign_[i]);
            x_[i] = sign_[i] < 0 ? T(-b_[i]) : b_[i];
        }
    }

    // Gauss-Jordan on [B | I]; false when B is singular.
    bool factor(const std::vector<std::size_t>& basis) {
        if (basis.size() != m_) return false;
        std::vector<T> mat(m_ * m_, T(0)), inv(m_ * m_, T(0));
        for (std::size_t c = 0; c < m_; ++c) {
            const std::size_t var = basis[c];
            if (artificial(var)) {
                if (var - n_ >= m_) return false;
                mat[(var - n_) * m_ + c] = T(sign_[var - n_]);
            } else {
                for (std::size_t k = a_.start[var]; k < a_.start[var + 1]; ++k)
                    mat[a_.index[k] * m_ + c] = entry_value<T>(a_, k, var);
            }
        }
        for (std::size_t i = 0; i < m_; ++i) inv[i * m_ + i] = T(1);
        for (std::size_t c = 0; c < m_; ++c) {
            std::size_t p = m_;
            double best = 0.0;
            for (std::size_t r = c; r < m_; ++r) {
                if (is_zero(mat[r * m_ + c])) continue;
                const double mag = magnitude(mat[r * m_ + c]);
                if (p == m_ || mag > best) {
                    p = r;
                    best = mag;
                    if constexpr (!std::is_same_v<T, double>) break;
                }
            }
            if (p == m_) return false;
            if constexpr (std::is_same_v<T, double>)
                if (best < 1e-13) return false;
            if (p != c) {
                std::swap_ranges(mat.begin() + p * m_, mat.begin() + (p + 1) * m_, mat.begin() + c * m_);
                std::swap_ranges(inv.begin() + p * m_, inv.begin() + (p + 1) * m_, inv.begin() + c * m_);
            }
            const T piv = mat[c * m_ + c];
            for (std::size_t j = 0; j < m_; ++j) {
                if (!is_zero(mat[c * m_ + j])) mat[c * m_ + j] /= piv;
                if (!is_zero(inv[c * m_ + j])) inv[c * m_ + j] /= piv;
            }
            for (std::size_t r = 0; r < m_; ++r) {
                if (r == c || is_zero(mat[r * m_ + c])) continue;
                const T f = mat[r * m_ + c];
                for (std::size_t j = 0; j < m_; ++j) {
                    if (!is_zero(mat[c * m_ + j])) mat[r * m_ + j] -= f * mat[c * m_ + j];
                    if (!is_zero(inv[c * m_ + j])) inv[r * m_ + j] -= f * inv[c * m_ + j];
                }
            }
        }
        basis_ = basis;
        binv_ = std::move(inv);
        x_.assign(m_, T(0));
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < m_; ++j)
                if (!is_zero(binv_[i * m_ + j]) && !is_zero(b_[j])) x_[i] += binv_[i * m_ + j] * b_[j];
        return true;
    }

    T objective() const {
        T z(0);
        for (std::size_t i = 0; i < m_; ++i)
            if (artificial(basis_[i])) z += x_[i];
        return z;
    }

    std::vector<T> duals() const {
        std::vector<T> y(m_, T(0));
        for (std::size_t i = 0; i < m_; ++i) {
            if (!artificial(basis_[i])) continue;
            for (std::size_t j = 0; j < m_; ++j)
                if (!is_zero(binv_[i * m_ + j])) y[j] += binv_[i * m_ + j];
        }
        return y;
    }

    T reduced_cost(std::span<const T> y, std::size_t j) const {
        T s(0);
        for (std::size_t k = a_.start[j]; k < a_.start[j + 1]; ++k) s += y[a_.index[k]] * entry_value<T>(a_, k, j);
        return -s;
    }

    std::vector<T> direction(std::size_t q) const {
        std::vector<T> u(m_, T(0));
        for (std::size_t k = a_.start[q]; k < a_.start[q + 1]; ++k) {
            const T v = entry_value<T>(a_, k, q);
            const std::size_t r = a_.index[k];
            for (std::size_t i = 0; i < m_; ++i)
                if (!is_zero(binv_[i * m_ + r])) u[i] += binv_[i * m_ + r] * v;
        }
        return u;
    }

    void pivot(std::size_t r, std::size_t q, const std::vector<T>& u) {
        const T ur = u[r];
        T* row_r = &binv_[r * m_];
        for (std::size_t j = 0; j < m_; ++j)
            if (!is_zero(row_r[j])) row_r[j] /= ur;
        x_[r] /= ur;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || is_zero(u[i])) continue;
            const T f = u[i];
            T* row_i = &binv_[i * m_];
            for (std::size_t j = 0; j < m_; ++j)
                if (!is_zero(row_r[j])) row_i[j] -= f * row_r[j];
            x_[i] -= f * x_[r];
        }
        basis_[r] = q;
    }

    void clamp_values(double floor) {
        if constexpr (std::is_same_v<T, double>)
            for (auto& v : x_)
                if (v < 0 && v > -floor) v = 0;
    }

private:
    const ColumnMatrix& a_;
    std::size_t m_, n_;
    std::vector<T> b_;
    std::vector<int> sign_;
    std::vector<std::size_t> basis_;
    std::vector<T> binv_;
    std::vector<T> x_;
};

constexpr double kCostTolerance = 1e-9;
constexpr double kPivotTolerance = 1e-9;
constexpr std::size_t kDegenerateLimit = 50;

}  // namespace

PhaseOne<double> solve_double(const ColumnMatrix& a, std::span<const double> b, double tolerance,
                              const SolverOptions& opts) {
    Tableau<double> t(a, b);
    t.start_artificial();
    const std::size_t n = a.cols, m = a.rows;

    std::vector<std::size_t> pool;
    std::vector<char> in_pool(n, 0);
    if (n <= opts.initial_columns) {
        pool.resize(n);
        std::iota(pool.begin(), pool.end(), 0);
    } else {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        std::mt19937_64 rng(opts.seed);
        std::shuffle(all.begin(), all.end(), rng);
        pool.assign(all.begin(), all.begin() + opts.initial_columns);
        std::sort(pool.begin(), pool.end());
    }
    for (std::size_t j : pool) in_pool[j] = 1;

    PhaseOne<double> res;
    std::vector<double> d(n);
    std::size_t degenerate = 0;
    bool bland = false;
    bool converged = false;
    for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
        if (iter > 0 && iter % opts.refactor_interval == 0) {
            if (!t.factor(t.basis())) return res;
            t.clamp_values(1e-9);
        }
        res.iterations = iter;
        if (t.objective() <= tolerance) {
            converged = true;
            break;
        }
        const std::vector<double> y = t.duals();

        std::size_t q = n;
        double best = -kCostTolerance;
        for (std::size_t j : pool) {
            const double dj = t.reduced_cost(y, j);
            if (dj < best) {
                q = j;
                if (bland) break;
                best = dj;
            }
        }
        if (q == n) {
            ++res.pricing_rounds;
            if (opts.parallel) kernels::reduced_costs_parallel(a, y, d);
            else kernels::reduced_costs_serial(a, y, d);
            std::vector<std::size_t> fresh;
            for (std::size_t j = 0; j < n; ++j)
                if (!in_pool[j] && d[j] < -kCostTolerance) fresh.push_back(j);
            if (fresh.empty()) {
                converged = true;
                break;
            }
            if (fresh.size() > opts.columns_per_round) {
                std::partial_sort(fresh.begin(), fresh.begin() + opts.columns_per_round, fresh.end(),
                                  [&](std::size_t i, std::size_t j) { return d[i] < d[j] || (d[i] == d[j] && i < j); });
                fresh.resize(opts.columns_per_round);
            }
            for (std::size_t j : fresh) {
                in_pool[j] = 1;
                pool.push_back(j);
            }
            std::sort(pool.begin(), pool.end());
            continue;
        }

        const std::vector<double> u = t.direction(q);
        const auto& x = t.values();
        const auto& basis = t.basis();
        std::size_t r = m;
        double ratio = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (u[i] <= kPivotTolerance) continue;
            const double ri = std::max(x[i], 0.0) / u[i];
            if (r == m || ri < ratio - 1e-12) {
                r = i;
                ratio = ri;
                continue;
            }
            if (ri > ratio + 1e-12) continue;
            // Tie: Bland takes the lowest variable, otherwise drive artificials out first.
            const bool take = bland ? basis[i] < basis[r]
                                    : (t.artificial(basis[i]) && !t.artificial(basis[r])) ||
                                          (t.artificial(basis[i]) == t.artificial(basis[r]) && u[i] > u[r]);
            if (take) {
                r = i;
                ratio = std::min(ratio, ri);
            }
        }
        if (r == m) return res;  // unbounded ray in a bounded problem: numerical breakdown
        if (ratio < 1e-12) {
            if (++degenerate > kDegenerateLimit) bland = true;
        } else {
            degenerate = 0;
            bland = false;
        }
        t.pivot(r, q, u);
        t.clamp_values(1e-9);
    }
    if (!converged || !t.factor(t.basis())) return res;
    t.clamp_values(1e-9);
    res.objective = t.objective();
    res.basis = t.basis();
    res.values = t.values();
    res.duals = t.duals();
    res.outcome = res.objective <= tolerance ? Outcome::Feasible : Outcome::Infeasible;
    return res;
}

PhaseOne<Rational> solve_exact(const ColumnMatrix& a, std::span<const Rational> b,
                               const std::vector<std::size_t>& warm_basis, const SolverOptions& opts) {
    Tableau<Rational> t(a, b);
    bool warm = !warm_basis.empty() && t.factor(warm_basis);
    if (warm)
        for (const auto& v : t.values())
            if (v < 0) warm = false;
    if (!warm) t.start_artificial();

    const std::size_t n = a.cols, m = a.rows;
    PhaseOne<Rational> res;
    std::vector<mpz_class> scaled(m);
    for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
        res.iterations = iter;
        if (sgn(t.objective()) == 0) break;
        const std::vector<Rational> y = t.duals();
        mpz_class l = 1;
        for (const auto& v : y) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
        for (std::size_t i = 0; i < m; ++i) scaled[i] = y[i].get_num() * (l / y[i].get_den());
        ++res.pricing_rounds;
        const std::size_t q = opts.parallel ? kernels::first_improving_parallel(a, scaled)
                                            : kernels::first_improving_serial(a, scaled);
        if (q == n) break;
        const std::vector<Rational> u = t.direction(q);
        const auto& x = t.values();
        const auto& basis = t.basis();
        std::size_t r = m;
        Rational ratio;
        for (std::size_t i = 0; i < m; ++i) {
            if (sgn(u[i]) <= 0) continue;
            Rational ri = x[i] / u[i];
            if (r == m || ri < ratio || (ri == ratio && basis[i] < basis[r])) {
                r = i;
                ratio = std::move(ri);
            }
        }
        if (r == m) throw std::logic_error("exact phase one is unbounded");
        t.pivot(r, q, u);
        if (iter + 1 == opts.max_iterations) return res;
    }
    res.objective = t.objective();
    res.basis = t.basis();
    res.values = t.values();
    res.duals = t.duals();
    res.outcome = sgn(res.objective) == 0 ? Outcome::Feasible : Outcome::Infeasible;
    return res;
}

}  // namespace mgs::lp
