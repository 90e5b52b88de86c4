#include "qsv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qsv {

ComplexVector ComplexVector::normalized(std::vector<cxd> entries) {
    double nsq = 0.0;
    for (const cxd& e : entries) nsq += std::norm(e);
    if (nsq == 0.0) throw ZeroState("cannot normalize the zero vector");
    const double inv = 1.0 / std::sqrt(nsq);
    for (cxd& e : entries) e *= inv;
    return ComplexVector(std::move(entries));
}

double ComplexVector::norm() const {
    double nsq = 0.0;
    for (const cxd& e : entries_) nsq += std::norm(e);
    return std::sqrt(nsq);
}

bool ComplexVector::is_normalized(double tol) const {
    double nsq = 0.0;
    for (const cxd& e : entries_) nsq += std::norm(e);
    return std::abs(nsq - 1.0) <= tol;
}

ComplexVector ComplexVector::conjugate() const {
    std::vector<cxd> out(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) out[i] = std::conj(entries_[i]);
    return ComplexVector(std::move(out));
}

cxd ComplexVector::inner(const ComplexVector& rhs) const {
    if (dim() != rhs.dim()) throw DimensionMismatch("inner product dimension mismatch");
    cxd acc = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) acc += std::conj(entries_[i]) * rhs.entries_[i];
    return acc;
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cxd> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_)
        throw DimensionMismatch("matrix entry count does not match dim*dim");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::outer(const ComplexVector& v) {
    ComplexMatrix m(v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i)
        for (std::size_t j = 0; j < v.dim(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    return m;
}

cxd ComplexMatrix::trace() const {
    cxd acc = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) acc += (*this)(i, i);
    return acc;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m(i, j) = std::conj((*this)(j, i));
    return m;
}

ComplexVector ComplexMatrix::apply(const ComplexVector& v) const {
    if (v.dim() != dim_) throw DimensionMismatch("matrix-vector dimension mismatch");
    ComplexVector out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        cxd acc = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) acc += (*this)(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (dim_ != rhs.dim_) throw DimensionMismatch("matrix addition dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    if (dim_ != rhs.dim_) throw DimensionMismatch("matrix subtraction dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cxd scalar) {
    for (cxd& e : entries_) e *= scalar;
    return *this;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw DimensionMismatch("matrix product dimension mismatch");
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t k = 0; k < dim_; ++k) {
            const cxd aik = (*this)(i, k);
            if (aik == cxd(0.0)) continue;
            for (std::size_t j = 0; j < dim_; ++j) out(i, j) += aik * rhs(k, j);
        }
    return out;
}

double ComplexMatrix::hermiticity_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw DimensionMismatch("matrix comparison dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        worst = std::max(worst, std::abs(entries_[i] - rhs.entries_[i]));
    return worst;
}

double ComplexMatrix::max_abs() const {
    double worst = 0.0;
    for (const cxd& e : entries_) worst = std::max(worst, std::abs(e));
    return worst;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t da = a.dim(), db = b.dim();
    ComplexMatrix out(da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j) {
            const cxd aij = a(i, j);
            if (aij == cxd(0.0)) continue;
            for (std::size_t k = 0; k < db; ++k)
                for (std::size_t l = 0; l < db; ++l)
                    out(i * db + k, j * db + l) = aij * b(k, l);
        }
    return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
    const std::size_t da = a.dim(), db = b.dim();
    ComplexVector out(da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t k = 0; k < db; ++k) out[i * db + k] = a[i] * b[k];
    return out;
}

namespace {

// Phase-fix in place: first entry with magnitude > 1e-12 made real-positive.
void fix_phase(ComplexVector& v) {
    for (std::size_t i = 0; i < v.dim(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > 1e-12) {
            const cxd rot = std::conj(v[i]) / mag;
            for (std::size_t j = 0; j < v.dim(); ++j) v[j] *= rot;
            return;
        }
    }
}

bool lex_less(const ComplexVector& a, const ComplexVector& b) {
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
        if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
    }
    return false;
}

}  // namespace

EigenDecomposition hermitian_eigen(const ComplexMatrix& input) {
    if (input.hermiticity_error() > 1e-10)
        throw NotHermitian("hermitian_eigen: symmetry error exceeds 1e-10");

    const std::size_t n = input.dim();
    // Work on the exactly Hermitian average (A + A^dagger)/2.
    ComplexMatrix a = input;
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = cxd(a(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const cxd avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(a.max_abs(), 1.0);
    const double stop = 1e-15 * scale;
    const int max_sweeps = 100;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= stop) break;
        if (sweep == max_sweeps - 1)
            throw NonConvergence("hermitian_eigen: Jacobi sweeps did not converge");

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cxd apq = a(p, q);
                const double beta = std::abs(apq);
                if (beta <= stop) continue;
                const cxd phase = apq / beta;  // apq = beta * phase
                const double alpha = a(p, p).real();
                const double gamma = a(q, q).real();
                const double tau = (gamma - alpha) / (2.0 * beta);
                // Small-magnitude root of t^2 - 2*tau*t - 1 = 0.
                double t;
                if (tau >= 0.0)
                    t = -1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cxd s = (t * c) * std::conj(phase);

                // A <- U^dagger A U with U = I except
                // U(p,p)=c, U(q,p)=s, U(p,q)=-conj(s), U(q,q)=c.
                for (std::size_t k = 0; k < n; ++k) {
                    const cxd akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp + s * akq;
                    a(k, q) = -std::conj(s) * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cxd apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(s) * aqk;
                    a(q, k) = -s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cxd(a(p, p).real(), 0.0);
                a(q, q) = cxd(a(q, q).real(), 0.0);

                for (std::size_t k = 0; k < n; ++k) {
                    const cxd vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp + s * vkq;
                    v(k, q) = -std::conj(s) * vkp + c * vkq;
                }
            }
        }
    }

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, ComplexVector(n));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> evals(n);
    for (std::size_t i = 0; i < n; ++i) evals[i] = a(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return evals[x] > evals[y]; });

    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = evals[order[k]];
        ComplexVector vec(n);
        for (std::size_t i = 0; i < n; ++i) vec[i] = v(i, order[k]);
        fix_phase(vec);
        out.eigenvectors[k] = std::move(vec);
    }

    // Deterministic ordering inside (near-)degenerate runs.
    std::size_t lo = 0;
    while (lo < n) {
        std::size_t hi = lo;
        while (hi + 1 < n && out.eigenvalues[hi] - out.eigenvalues[hi + 1] <= 1e-10) ++hi;
        if (hi > lo)
            std::sort(out.eigenvectors.begin() + static_cast<std::ptrdiff_t>(lo),
                      out.eigenvectors.begin() + static_cast<std::ptrdiff_t>(hi) + 1, lex_less);
        lo = hi + 1;
    }
    return out;
}

double fidelity_pure(const ComplexMatrix& rho, const ComplexVector& psi) {
    if (rho.dim() != psi.dim()) throw DimensionMismatch("fidelity_pure dimension mismatch");
    const double f = psi.inner(rho.apply(psi)).real();
    return std::clamp(f, 0.0, 1.0);
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
    return a.hermiticity_error() <= tol;
}

bool is_projector(const ComplexMatrix& p, double tol) {
    return (p * p).max_abs_diff(p) <= tol;
}

bool is_density_matrix(const ComplexMatrix& rho, double herm_tol, double eig_tol,
                       double trace_tol) {
    if (rho.hermiticity_error() > herm_tol) return false;
    if (std::abs(rho.trace() - cxd(1.0)) > trace_tol) return false;
    const EigenDecomposition eig = hermitian_eigen(rho);
    return eig.eigenvalues.back() >= -eig_tol;
}

}  // namespace qsv
