#pragma once

#include <array>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgs/correlation.hpp"

namespace mgs::quantum {

using Complex = std::complex<double>;

/// Dense row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

    static ComplexMatrix identity(std::size_t dim);
    /// |psi><psi|
    static ComplexMatrix projector(std::span<const Complex> psi);

    std::size_t dim() const { return dim_; }
    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

    Complex trace() const;
    ComplexMatrix adjoint() const;

    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix operator+(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix operator*(Complex s) const;

    /// Largest entrywise modulus of (this - rhs).
    double distance(const ComplexMatrix& rhs) const;

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// n-qubit density matrix, qubit 0 most significant in the computational basis.
class DensityMatrix {
public:
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity
    /// (smallest eigenvalue >= -1e-10).
    explicit DensityMatrix(ComplexMatrix rho);

    const ComplexMatrix& matrix() const { return rho_; }
    int qubits() const { return qubits_; }

private:
    ComplexMatrix rho_;
    int qubits_ = 0;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
/// Qubit k of the result is qubit order[k] of the input.
DensityMatrix permute_qubits(const DensityMatrix& rho, std::span<const int> order);
/// Partial trace keeping `keep` (in the given order).
DensityMatrix reduced_state(const DensityMatrix& rho, std::span<const int> keep);

/// |GHZ_n> = (|0...0> + |1...1>)/sqrt(2)
DensityMatrix ghz_state(int n);
/// Equal mixture of |GHZ_3> on three parties and |-> on the fourth, over
/// all four positions of the |-> party.
DensityMatrix ghz3_minus_mixture();
/// v |GHZ_3><GHZ_3| (x) |0><0| + (1 - v) 1/8 (x) |1><1|, 0 < v <= 1.
DensityMatrix ghz3_flagged_noise(double v);

/// Name dispatch used by the CLI: "ghz" (param "n"), "sec3a", "sec3c" (param "v").
DensityMatrix builtin_state(std::string_view name, const std::map<std::string, double>& params = {});

/// Qubit observable with eigenvalues +-1.
class Observable {
public:
    /// n . sigma for a unit Bloch vector (within 1e-12).
    static Observable from_bloch(double nx, double ny, double nz);
    /// Validates Hermiticity and O^2 = 1 within 1e-10.
    static Observable from_matrix(ComplexMatrix o);

    const ComplexMatrix& matrix() const { return op_; }
    /// (1 + (-1)^a O) / 2
    ComplexMatrix projector(int outcome) const;
    const std::array<double, 3>& bloch() const { return bloch_; }

private:
    ComplexMatrix op_;
    std::array<double, 3> bloch_{};
};

/// Per party, per setting, the measured observable.
class MeasurementSet {
public:
    explicit MeasurementSet(std::vector<std::vector<Observable>> settings);

    int parties() const { return static_cast<int>(settings_.size()); }
    const Observable& at(int party, int setting) const { return settings_[party][setting]; }
    const std::vector<Observable>& party(int p) const { return settings_[p]; }
    /// Matching scenario (two outcomes per party).
    Scenario scenario() const;

    MeasurementSet extended(const MeasurementSet& more) const;
    MeasurementSet permuted(std::span<const int> order) const;

private:
    std::vector<std::vector<Observable>> settings_;
};

/// Every party measures -(sqrt3/2) sx +- (1/2) sy (settings 0 / 1).
MeasurementSet ineq10_measurements(int parties = 4);
/// A: sx, sy; B: (sx -+ sy)/sqrt2; C: -sy, sx.
MeasurementSet svetlichny_measurements();
/// Every party: setting 0 = sx, setting 1 = sy.
MeasurementSet sigma_xy_measurements(int parties);

/// P(a|x) = Tr[rho (x)_i Pi_i^{a_i, x_i}] in real mode.
Correlation born_correlation(const DensityMatrix& rho, const MeasurementSet& measurements);

}  // namespace mgs::quantum
