#include "mgs/quantum.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace mgs::quantum {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPositivityTol = 1e-10;
constexpr double kInvolutionTol = 1e-10;

int log2_exact(std::size_t d) {
    int q = 0;
    while ((std::size_t{1} << q) < d) ++q;
    if ((std::size_t{1} << q) != d) throw std::invalid_argument("matrix dimension is not a power of two");
    return q;
}

void check_permutation(std::span<const int> order, int n) {
    std::vector<bool> seen(n, false);
    if (static_cast<int>(order.size()) != n) throw std::invalid_argument("permutation has wrong length");
    for (int p : order) {
        if (p < 0 || p >= n || seen[p]) throw std::invalid_argument("not a permutation");
        seen[p] = true;
    }
}

// Tr_first[(pi (x) 1) r] for a projector pi on the most significant qubit of r.
ComplexMatrix trace_out_first(const ComplexMatrix& r, const ComplexMatrix& pi) {
    const std::size_t half = r.dim() / 2;
    ComplexMatrix out(half);
    for (std::size_t q = 0; q < 2; ++q) {
        for (std::size_t qp = 0; qp < 2; ++qp) {
            const Complex w = pi(q, qp);
            if (w == Complex(0.0)) continue;
            for (std::size_t i = 0; i < half; ++i)
                for (std::size_t j = 0; j < half; ++j) out(i, j) += w * r(qp * half + i, q * half + j);
        }
    }
    return out;
}

void born_recurse(const ComplexMatrix& r, const MeasurementSet& m, const Scenario& s, int party,
                  std::vector<int>& xs, std::vector<int>& as, std::vector<double>& table) {
    if (party == m.parties()) {
        table[s.cell(s.encode_inputs(xs), s.encode_outputs(as))] = r(0, 0).real();
        return;
    }
    const auto& settings = m.party(party);
    for (std::size_t x = 0; x < settings.size(); ++x) {
        xs[party] = static_cast<int>(x);
        for (int a = 0; a < 2; ++a) {
            as[party] = a;
            born_recurse(trace_out_first(r, settings[x].projector(a)), m, s, party + 1, xs, as, table);
        }
    }
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::projector(std::span<const Complex> psi) {
    ComplexMatrix m(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        for (std::size_t j = 0; j < psi.size(); ++j) m(i, j) = psi[i] * std::conj(psi[j]);
    return m;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m(i, j) = std::conj((*this)(j, i));
    return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw std::invalid_argument("matrix dimension mismatch");
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t k = 0; k < dim_; ++k) {
            const Complex v = (*this)(i, k);
            if (v == Complex(0.0)) continue;
            for (std::size_t j = 0; j < dim_; ++j) m(i, j) += v * rhs(k, j);
        }
    return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw std::invalid_argument("matrix dimension mismatch");
    ComplexMatrix m = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] += rhs.data_[i];
    return m;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw std::invalid_argument("matrix dimension mismatch");
    ComplexMatrix m = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] -= rhs.data_[i];
    return m;
}

ComplexMatrix ComplexMatrix::operator*(Complex s) const {
    ComplexMatrix m = *this;
    for (auto& v : m.data_) v *= s;
    return m;
}

double ComplexMatrix::distance(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw std::invalid_argument("matrix dimension mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) d = std::max(d, std::abs(data_[i] - rhs.data_[i]));
    return d;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t n = a.dim(), m = b.dim();
    ComplexMatrix k(n * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Complex v = a(i, j);
            if (v == Complex(0.0)) continue;
            for (std::size_t p = 0; p < m; ++p)
                for (std::size_t q = 0; q < m; ++q) k(i * m + p, j * m + q) = v * b(p, q);
        }
    return k;
}

ComplexMatrix pauli_x() {
    ComplexMatrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2);
    m(0, 1) = Complex(0.0, -1.0);
    m(1, 0) = Complex(0.0, 1.0);
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
    if (rho_.dim() == 0) throw std::invalid_argument("empty density matrix");
    qubits_ = log2_exact(rho_.dim());
    if (rho_.distance(rho_.adjoint()) > kHermitianTol) throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(rho_.trace() - Complex(1.0)) > kTraceTol) throw std::invalid_argument("density matrix trace is not 1");
    const auto d = static_cast<Eigen::Index>(rho_.dim());
    Eigen::MatrixXcd m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rho_(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation failed");
    if (solver.eigenvalues().minCoeff() < -kPositivityTol)
        throw std::invalid_argument("density matrix is not positive semidefinite");
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(kron(a.matrix(), b.matrix()));
}

DensityMatrix permute_qubits(const DensityMatrix& rho, std::span<const int> order) {
    const int n = rho.qubits();
    check_permutation(order, n);
    const std::size_t d = rho.matrix().dim();
    // new index bit k (from the top) = old bit order[k]
    std::vector<std::size_t> map(d);
    for (std::size_t idx = 0; idx < d; ++idx) {
        std::size_t old = 0;
        for (int k = 0; k < n; ++k) {
            const std::size_t bit = (idx >> (n - 1 - k)) & 1U;
            old |= bit << (n - 1 - order[k]);
        }
        map[idx] = old;
    }
    ComplexMatrix out(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out(i, j) = rho.matrix()(map[i], map[j]);
    return DensityMatrix(std::move(out));
}

DensityMatrix reduced_state(const DensityMatrix& rho, std::span<const int> keep) {
    const int n = rho.qubits();
    std::vector<int> order(keep.begin(), keep.end());
    std::vector<bool> kept(n, false);
    for (int k : keep) {
        if (k < 0 || k >= n || kept[k]) throw std::invalid_argument("invalid qubit list");
        kept[k] = true;
    }
    for (int i = 0; i < n; ++i)
        if (!kept[i]) order.push_back(i);
    const DensityMatrix permuted = permute_qubits(rho, order);
    const ComplexMatrix& r = permuted.matrix();
    const std::size_t dk = std::size_t{1} << keep.size();
    const std::size_t dt = r.dim() / dk;
    ComplexMatrix out(dk);
    for (std::size_t i = 0; i < dk; ++i)
        for (std::size_t j = 0; j < dk; ++j)
            for (std::size_t t = 0; t < dt; ++t) out(i, j) += r(i * dt + t, j * dt + t);
    return DensityMatrix(std::move(out));
}

DensityMatrix ghz_state(int n) {
    if (n < 1 || n > 10) throw std::invalid_argument("ghz: 1 <= n <= 10 required");
    const std::size_t d = std::size_t{1} << n;
    ComplexMatrix m(d);
    m(0, 0) = m(0, d - 1) = m(d - 1, 0) = m(d - 1, d - 1) = 0.5;
    return DensityMatrix(std::move(m));
}

DensityMatrix ghz3_minus_mixture() {
    const ComplexMatrix minus = [] {
        ComplexMatrix m(2);
        m(0, 0) = m(1, 1) = 0.5;
        m(0, 1) = m(1, 0) = -0.5;
        return m;
    }();
    const DensityMatrix base(kron(ghz_state(3).matrix(), minus));
    ComplexMatrix sum(16);
    // |-> on party 3, 0, 1, 2 in turn; GHZ_3 is symmetric so these cover all permutations.
    const int shifts[4][4] = {{0, 1, 2, 3}, {3, 0, 1, 2}, {2, 3, 0, 1}, {1, 2, 3, 0}};
    for (const auto& order : shifts) sum = sum + permute_qubits(base, order).matrix() * 0.25;
    return DensityMatrix(std::move(sum));
}

DensityMatrix ghz3_flagged_noise(double v) {
    if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("sec3c: v must lie in (0, 1]");
    ComplexMatrix zero(2), one(2);
    zero(0, 0) = 1.0;
    one(1, 1) = 1.0;
    const ComplexMatrix noise = ComplexMatrix::identity(8) * 0.125;
    return DensityMatrix(kron(ghz_state(3).matrix(), zero) * v + kron(noise, one) * (1.0 - v));
}

DensityMatrix builtin_state(std::string_view name, const std::map<std::string, double>& params) {
    auto param = [&](const std::string& key) {
        auto it = params.find(key);
        if (it == params.end()) throw std::invalid_argument("state '" + std::string(name) + "' needs parameter " + key);
        return it->second;
    };
    if (name == "ghz") {
        const double n = param("n");
        if (n != std::floor(n)) throw std::invalid_argument("ghz: n must be an integer");
        return ghz_state(static_cast<int>(n));
    }
    if (name == "sec3a") return ghz3_minus_mixture();
    if (name == "sec3c") return ghz3_flagged_noise(param("v"));
    throw std::invalid_argument("unknown builtin state: " + std::string(name));
}

Observable Observable::from_bloch(double nx, double ny, double nz) {
    const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (std::fabs(norm - 1.0) > 1e-12) throw std::invalid_argument("Bloch vector is not a unit vector");
    Observable o;
    o.op_ = pauli_x() * nx + pauli_y() * ny + pauli_z() * nz;
    o.bloch_ = {nx, ny, nz};
    return o;
}

Observable Observable::from_matrix(ComplexMatrix m) {
    if (m.dim() != 2) throw std::invalid_argument("observable must be a 2x2 matrix");
    if (m.distance(m.adjoint()) > kInvolutionTol) throw std::invalid_argument("observable is not Hermitian");
    if ((m * m).distance(ComplexMatrix::identity(2)) > kInvolutionTol)
        throw std::invalid_argument("observable does not square to the identity");
    // Traceless part only: O = +-1 is allowed but has no Bloch direction.
    Observable o;
    o.bloch_ = {m(0, 1).real(), -m(0, 1).imag(), (m(0, 0).real() - m(1, 1).real()) / 2.0};
    o.op_ = std::move(m);
    return o;
}

ComplexMatrix Observable::projector(int outcome) const {
    if (outcome != 0 && outcome != 1) throw std::out_of_range("dichotomic outcome must be 0 or 1");
    const double sign = outcome == 0 ? 0.5 : -0.5;
    return ComplexMatrix::identity(2) * 0.5 + op_ * sign;
}

MeasurementSet::MeasurementSet(std::vector<std::vector<Observable>> settings) : settings_(std::move(settings)) {
    if (settings_.empty()) throw std::invalid_argument("measurement set needs at least one party");
    for (const auto& p : settings_)
        if (p.empty()) throw std::invalid_argument("every party needs at least one setting");
}

Scenario MeasurementSet::scenario() const {
    std::vector<int> in;
    for (const auto& p : settings_) in.push_back(static_cast<int>(p.size()));
    return Scenario(in, std::vector<int>(in.size(), 2));
}

MeasurementSet MeasurementSet::extended(const MeasurementSet& more) const {
    auto all = settings_;
    all.insert(all.end(), more.settings_.begin(), more.settings_.end());
    return MeasurementSet(std::move(all));
}

MeasurementSet MeasurementSet::permuted(std::span<const int> order) const {
    check_permutation(order, parties());
    std::vector<std::vector<Observable>> out;
    for (int p : order) out.push_back(settings_[p]);
    return MeasurementSet(std::move(out));
}

MeasurementSet ineq10_measurements(int parties) {
    const double c = -std::sqrt(3.0) / 2.0;
    std::vector<Observable> obs{Observable::from_bloch(c, 0.5, 0.0), Observable::from_bloch(c, -0.5, 0.0)};
    return MeasurementSet(std::vector<std::vector<Observable>>(parties, obs));
}

MeasurementSet svetlichny_measurements() {
    const double h = 1.0 / std::sqrt(2.0);
    return MeasurementSet({
        {Observable::from_bloch(1, 0, 0), Observable::from_bloch(0, 1, 0)},
        {Observable::from_bloch(h, -h, 0), Observable::from_bloch(h, h, 0)},
        {Observable::from_bloch(0, -1, 0), Observable::from_bloch(1, 0, 0)},
    });
}

MeasurementSet sigma_xy_measurements(int parties) {
    std::vector<Observable> obs{Observable::from_bloch(1, 0, 0), Observable::from_bloch(0, 1, 0)};
    return MeasurementSet(std::vector<std::vector<Observable>>(parties, obs));
}

Correlation born_correlation(const DensityMatrix& rho, const MeasurementSet& measurements) {
    if (rho.qubits() != measurements.parties())
        throw std::invalid_argument("state has " + std::to_string(rho.qubits()) + " qubits but " +
                                    std::to_string(measurements.parties()) + " parties measure");
    const Scenario s = measurements.scenario();
    std::vector<double> table(s.table_size(), 0.0);
    std::vector<int> xs(s.parties()), as(s.parties());
    born_recurse(rho.matrix(), measurements, s, 0, xs, as, table);
    return Correlation::from_real(s, std::move(table));
}

}  // namespace mgs::quantum
