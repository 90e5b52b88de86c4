#include "qsv/mub.hpp"

#include <cmath>
#include <numbers>

namespace qsv {

namespace {

constexpr double kInvSqrt3 = 0.57735026918962576451;  // 1/sqrt(3)

bool is_supported_prime(std::size_t d) {
    return d == 2 || d == 3 || d == 5 || d == 7;
}

// w = exp(i*2*pi/3) with an exact -1/2 real part.
cxd omega3() { return cxd(-0.5, std::sqrt(0.75)); }

std::vector<ComplexVector> standard_basis(std::size_t d) {
    std::vector<ComplexVector> basis;
    basis.reserve(d);
    for (std::size_t k = 0; k < d; ++k) {
        ComplexVector v(d);
        v[k] = 1.0;
        basis.push_back(std::move(v));
    }
    return basis;
}

// The four qutrit bases in their fixed literal form.
MubSet mub_qutrit() {
    const cxd w = omega3();
    const cxd wc = std::conj(w);
    auto vec = [](cxd a, cxd b, cxd c) {
        ComplexVector v(3);
        v[0] = a * kInvSqrt3;
        v[1] = b * kInvSqrt3;
        v[2] = c * kInvSqrt3;
        return v;
    };
    MubSet m;
    m.d = 3;
    m.bases.push_back(standard_basis(3));
    m.bases.push_back({vec(1, 1, 1), vec(1, w, wc), vec(1, wc, w)});
    m.bases.push_back({vec(1, w, 1), vec(1, wc, wc), vec(1, 1, w)});
    m.bases.push_back({vec(1, wc, 1), vec(1, 1, wc), vec(1, w, w)});
    return m;
}

void fix_global_phase(ComplexVector& v) {
    for (std::size_t i = 0; i < v.dim(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > 1e-12) {
            const cxd rot = std::conj(v[i]) / mag;
            for (std::size_t j = 0; j < v.dim(); ++j) v[j] *= rot;
            return;
        }
    }
}

}  // namespace

MubSet build_mub_generic(std::size_t d) {
    if (!is_supported_prime(d))
        throw UnsupportedDimension("MUB construction requires prime d in {2,3,5,7}");

    MubSet m;
    m.d = d;
    m.bases.push_back(standard_basis(d));

    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t b = 0; b < d; ++b) {
        std::vector<ComplexVector> basis;
        basis.reserve(d);
        for (std::size_t k = 0; k < d; ++k) {
            ComplexVector v(d);
            for (std::size_t j = 0; j < d; ++j) {
                // d=2 needs the quartic root: exponent in units of pi/2,
                // phase i^(b*j^2) * (-1)^(k*j). Odd d uses w_d^(b*j^2 + k*j).
                double angle;
                if (d == 2) {
                    angle = std::numbers::pi * (0.5 * static_cast<double>(b * j * j) +
                                                static_cast<double>(k * j));
                } else {
                    angle = 2.0 * std::numbers::pi *
                            static_cast<double>((b * j * j + k * j) % d) /
                            static_cast<double>(d);
                }
                v[j] = std::polar(inv_sqrt_d, angle);
            }
            fix_global_phase(v);
            basis.push_back(std::move(v));
        }
        m.bases.push_back(std::move(basis));
    }
    return m;
}

MubSet build_mub(std::size_t d) {
    if (!is_supported_prime(d))
        throw UnsupportedDimension("MUB construction requires prime d in {2,3,5,7}");
    if (d == 3) return mub_qutrit();
    return build_mub_generic(d);
}

ComplexVector maximally_entangled_state(std::size_t d) {
    ComplexVector v(d * d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t j = 0; j < d; ++j) v[j * d + j] = amp;
    return v;
}

ComplexVector conjugate_vector(const ComplexVector& v) {
    return v.conjugate();
}

VerificationStrategy build_strategy(const MubSet& mubs) {
    const std::size_t d = mubs.d;
    VerificationStrategy s;
    s.d = d;
    s.mubs = mubs;
    s.target = maximally_entangled_state(d);
    s.omega = ComplexMatrix(d * d);
    const double p = 1.0 / static_cast<double>(d + 1);

    for (const auto& basis : mubs.bases) {
        ComplexMatrix m(d * d);
        for (const ComplexVector& phi : basis)
            m += tensor(ComplexMatrix::outer(phi), ComplexMatrix::outer(phi.conjugate()));
        s.omega += p * m;
        s.settings.push_back(std::move(m));
        s.probabilities.push_back(p);
    }

    const EigenDecomposition eig = hermitian_eigen(s.omega);
    s.lambda2 = eig.eigenvalues.at(1);
    return s;
}

double rejection_probability(double epsilon, double lambda2) {
    return (1.0 - lambda2) * epsilon;
}

double worst_case_pass_probability(double epsilon, double lambda2) {
    return 1.0 - rejection_probability(epsilon, lambda2);
}

double min_copies_real(double epsilon, double delta, double lambda2) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw DomainError("min_copies: epsilon must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw DomainError("min_copies: delta must lie in (0,1)");
    if (!(lambda2 >= 0.0 && lambda2 < 1.0))
        throw DomainError("min_copies: lambda2 must lie in [0,1)");
    return std::log(1.0 / delta) / ((1.0 - lambda2) * epsilon);
}

std::int64_t min_copies(double epsilon, double delta, double lambda2) {
    const double raw = min_copies_real(epsilon, delta, lambda2);
    const auto n = static_cast<std::int64_t>(std::ceil(raw));
    return n < 1 ? 1 : n;
}

}  // namespace qsv
