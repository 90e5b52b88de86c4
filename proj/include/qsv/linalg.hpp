#pragma once

// Dense complex linear algebra for small Hilbert spaces (dim <= 49).
// Everything is double precision, row-major, value-semantic and pure.

#include <complex>
#include <cstddef>
#include <vector>

#include "qsv/errors.hpp"

namespace qsv {

using cxd = std::complex<double>;

class ComplexVector {
  public:
    ComplexVector() = default;
    explicit ComplexVector(std::size_t dim) : entries_(dim) {}
    explicit ComplexVector(std::vector<cxd> entries) : entries_(std::move(entries)) {}

    // Scales the entries to unit Euclidean norm. Throws ZeroState on an
    // all-zero input.
    static ComplexVector normalized(std::vector<cxd> entries);

    std::size_t dim() const { return entries_.size(); }
    cxd& operator[](std::size_t i) { return entries_[i]; }
    const cxd& operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<cxd>& entries() const { return entries_; }

    double norm() const;
    bool is_normalized(double tol = 1e-12) const;

    // Entry-wise complex conjugate.
    ComplexVector conjugate() const;

    // <this|rhs>: conjugate-linear in *this, linear in rhs.
    cxd inner(const ComplexVector& rhs) const;

  private:
    std::vector<cxd> entries_;
};

class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}
    ComplexMatrix(std::size_t dim, std::vector<cxd> entries);

    static ComplexMatrix identity(std::size_t dim);
    // |v><v|
    static ComplexMatrix outer(const ComplexVector& v);

    std::size_t dim() const { return dim_; }
    cxd& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
    const cxd& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
    const std::vector<cxd>& entries() const { return entries_; }

    cxd trace() const;
    ComplexMatrix adjoint() const;
    ComplexVector apply(const ComplexVector& v) const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(cxd scalar);
    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(cxd scalar, ComplexMatrix m) { return m *= scalar; }
    ComplexMatrix operator*(const ComplexMatrix& rhs) const;  // matrix product

    // max_{ij} |A_ij - conj(A_ji)|
    double hermiticity_error() const;
    // max_{ij} |A_ij - B_ij|
    double max_abs_diff(const ComplexMatrix& rhs) const;
    double max_abs() const;

  private:
    std::size_t dim_ = 0;
    std::vector<cxd> entries_;
};

struct EigenDecomposition {
    std::vector<double> eigenvalues;          // sorted descending
    std::vector<ComplexVector> eigenvectors;  // orthonormal, phase-fixed
};

// Kronecker product; entry (i*b.dim+k, j*b.dim+l) = a(i,j) * b(k,l).
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// Kronecker product of vectors; entry i*b.dim+k = a[i] * b[k].
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);

// Full spectrum of a Hermitian matrix by cyclic complex Jacobi rotations.
// Eigenvalues are sorted descending; each eigenvector is phase-fixed so its
// first nonzero entry is real-positive, and eigenvectors of eigenvalues that
// coincide within 1e-10 are ordered lexicographically by (re, im) entries.
// Throws NotHermitian if the symmetry error exceeds 1e-10.
EigenDecomposition hermitian_eigen(const ComplexMatrix& a);

// <psi|rho|psi>, real part clamped to [0, 1]. Throws DimensionMismatch.
double fidelity_pure(const ComplexMatrix& rho, const ComplexVector& psi);

// Validity predicates used by tests and input checks.
bool is_hermitian(const ComplexMatrix& a, double tol = 1e-12);
bool is_projector(const ComplexMatrix& p, double tol = 1e-10);
bool is_density_matrix(const ComplexMatrix& rho, double herm_tol = 1e-12,
                       double eig_tol = 1e-10, double trace_tol = 1e-12);

}  // namespace qsv
