#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qsv/mub.hpp"

using namespace qsv;

namespace {

void check_mub_invariants(const MubSet& m) {
    const double d = static_cast<double>(m.d);
    REQUIRE(m.bases.size() == m.d + 1);
    for (const auto& basis : m.bases) {
        REQUIRE(basis.size() == m.d);
        for (std::size_t k = 0; k < m.d; ++k)
            for (std::size_t l = k; l < m.d; ++l) {
                const cxd ip = basis[k].inner(basis[l]);
                CHECK(std::abs(ip - (k == l ? cxd(1.0) : cxd(0.0))) <= 1e-12);
            }
    }
    for (std::size_t i = 0; i < m.bases.size(); ++i)
        for (std::size_t j = i + 1; j < m.bases.size(); ++j)
            for (const auto& u : m.bases[i])
                for (const auto& w : m.bases[j])
                    CHECK(std::abs(std::norm(u.inner(w)) - 1.0 / d) <= 1e-10);
}

ComplexVector qutrit_vec(cxd a, cxd b, cxd c) {
    const double s = 1.0 / std::sqrt(3.0);
    ComplexVector v(3);
    v[0] = a * s;
    v[1] = b * s;
    v[2] = c * s;
    return v;
}

}  // namespace

TEST_CASE("qutrit MUB set matches the fixed literal bases") {
    const MubSet m = build_mub(3);
    REQUIRE(m.d == 3);
    check_mub_invariants(m);

    const cxd w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const cxd wc = std::conj(w);

    // basis 0: standard
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(std::abs(m.bases[0][k][i] - (i == k ? cxd(1.0) : cxd(0.0))) <= 1e-15);

    const std::vector<std::vector<ComplexVector>> expected = {
        {qutrit_vec(1, 1, 1), qutrit_vec(1, w, wc), qutrit_vec(1, wc, w)},
        {qutrit_vec(1, w, 1), qutrit_vec(1, wc, wc), qutrit_vec(1, 1, w)},
        {qutrit_vec(1, wc, 1), qutrit_vec(1, 1, wc), qutrit_vec(1, w, w)},
    };
    for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t i = 0; i < 3; ++i)
                CHECK(std::abs(m.bases[b + 1][k][i] - expected[b][k][i]) <= 1e-15);
}

TEST_CASE("MUB invariants hold for every supported dimension") {
    for (const std::size_t d : {2ul, 3ul, 5ul, 7ul}) {
        check_mub_invariants(build_mub(d));
        check_mub_invariants(build_mub_generic(d));
    }
}

TEST_CASE("qubit construction contains the three standard bases up to phase") {
    const MubSet m = build_mub(2);
    const double s = 1.0 / std::sqrt(2.0);
    const std::vector<std::vector<cxd>> expected = {
        {s, s}, {s, -s}, {s, cxd(0.0, s)}, {s, cxd(0.0, -s)}};
    for (const auto& raw : expected) {
        const ComplexVector want{std::vector<cxd>(raw)};
        bool found = false;
        for (std::size_t b = 1; b < m.bases.size() && !found; ++b)
            for (const auto& v : m.bases[b])
                if (std::abs(std::abs(v.inner(want)) - 1.0) <= 1e-12) found = true;
        CHECK(found);
    }
}

TEST_CASE("generic d=3 construction yields the literal bases up to order and phase") {
    const MubSet fixed = build_mub(3);
    const MubSet generic = build_mub_generic(3);
    // Every literal vector appears in exactly one generic basis (up to a
    // global phase), and vice versa.
    std::size_t matched = 0;
    for (std::size_t bf = 1; bf < fixed.bases.size(); ++bf) {
        for (const auto& u : fixed.bases[bf]) {
            std::size_t hits = 0;
            for (std::size_t bg = 1; bg < generic.bases.size(); ++bg)
                for (const auto& v : generic.bases[bg])
                    if (std::abs(std::abs(u.inner(v)) - 1.0) <= 1e-10) ++hits;
            CHECK(hits == 1);
            matched += hits;
        }
    }
    CHECK(matched == 9);
}

TEST_CASE("unsupported dimensions are rejected") {
    for (const std::size_t d : {0ul, 1ul, 4ul, 6ul, 8ul, 9ul}) {
        CHECK_THROWS_AS(build_mub(d), UnsupportedDimension);
        CHECK_THROWS_AS(build_mub_generic(d), UnsupportedDimension);
    }
}

TEST_CASE("maximally entangled state amplitudes") {
    const ComplexVector psi2 = maximally_entangled_state(2);
    const double s2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(psi2[0] - s2) <= 1e-15);
    CHECK(std::abs(psi2[1]) == 0.0);
    CHECK(std::abs(psi2[2]) == 0.0);
    CHECK(std::abs(psi2[3] - s2) <= 1e-15);

    const ComplexVector psi3 = maximally_entangled_state(3);
    const double s3 = 1.0 / std::sqrt(3.0);
    for (std::size_t i = 0; i < 9; ++i) {
        const bool diag = i == 0 || i == 4 || i == 8;
        CHECK(std::abs(psi3[i] - (diag ? cxd(s3) : cxd(0.0))) <= 1e-15);
    }
    CHECK(psi3.is_normalized());
}

TEST_CASE("conjugate_vector") {
    ComplexVector real_vec{std::vector<cxd>{1.0, 0.5, -2.0}};
    const ComplexVector same = conjugate_vector(real_vec);
    for (std::size_t i = 0; i < 3; ++i) CHECK(same[i] == real_vec[i]);

    const cxd w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const ComplexVector v = qutrit_vec(1, w, std::conj(w));
    const ComplexVector vc = conjugate_vector(v);
    const ComplexVector expected = qutrit_vec(1, std::conj(w), w);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(vc[i] - expected[i]) <= 1e-15);

    const ComplexVector twice = conjugate_vector(vc);
    for (std::size_t i = 0; i < 3; ++i) CHECK(twice[i] == v[i]);
}

TEST_CASE("qutrit strategy: projectors, omega and constants") {
    const VerificationStrategy s = build_strategy(build_mub(3));
    REQUIRE(s.settings.size() == 4);
    REQUIRE(s.omega.dim() == 9);

    double psum = 0.0;
    for (double p : s.probabilities) psum += p;
    CHECK(std::abs(psum - 1.0) <= 1e-15);

    for (const ComplexMatrix& m : s.settings) {
        CHECK(is_projector(m, 1e-10));
        CHECK(std::abs(m.trace() - cxd(3.0)) <= 1e-10);  // rank d
        // M_j |Psi> = |Psi>
        const ComplexVector mp = m.apply(s.target);
        double diff = 0.0;
        for (std::size_t i = 0; i < 9; ++i) diff += std::norm(mp[i] - s.target[i]);
        CHECK(std::sqrt(diff) <= 1e-10);
    }

    CHECK(std::abs(s.omega.trace() - cxd(3.0)) <= 1e-12);
    const ComplexVector op = s.omega.apply(s.target);
    double diff = 0.0;
    for (std::size_t i = 0; i < 9; ++i) diff += std::norm(op[i] - s.target[i]);
    CHECK(std::sqrt(diff) <= 1e-10);

    CHECK(std::abs(s.lambda2 - 0.25) <= 1e-9);
    CHECK(s.delta_eps_coeff() == doctest::Approx(0.75).epsilon(1e-9));

    // Independent structural oracle: omega = P + (1/4)(I - P), P = |Psi><Psi|.
    const ComplexMatrix p = ComplexMatrix::outer(s.target);
    ComplexMatrix expected = ComplexMatrix::identity(9);
    expected -= p;
    expected *= 0.25;
    expected += p;
    CHECK(s.omega.max_abs_diff(expected) <= 1e-12);

    const EigenDecomposition eig = hermitian_eigen(s.omega);
    CHECK(std::abs(eig.eigenvalues[0] - 1.0) <= 1e-10);
    CHECK(std::abs(eig.eigenvalues[1] - 0.25) <= 1e-10);
    CHECK(std::abs(eig.eigenvalues[8] - 0.25) <= 1e-10);
    const double overlap = std::norm(eig.eigenvectors[0].inner(s.target));
    CHECK(overlap >= 1.0 - 1e-9);
}

TEST_CASE("strategy lambda2 equals 1/(d+1) for all supported dimensions") {
    for (const std::size_t d : {2ul, 3ul, 5ul, 7ul}) {
        const VerificationStrategy s = build_strategy(build_mub(d));
        CHECK(std::abs(s.lambda2 - 1.0 / static_cast<double>(d + 1)) <= 1e-9);
        const ComplexVector op = s.omega.apply(s.target);
        double diff = 0.0;
        for (std::size_t i = 0; i < s.target.dim(); ++i) diff += std::norm(op[i] - s.target[i]);
        CHECK(std::sqrt(diff) <= 1e-10);
    }
}

TEST_CASE("lambda2 bounds the orthogonal complement") {
    const VerificationStrategy s = build_strategy(build_mub(3));
    std::mt19937_64 rng(21);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int rep = 0; rep < 1000; ++rep) {
        std::vector<cxd> raw(9);
        for (cxd& e : raw) e = cxd(gauss(rng), gauss(rng));
        ComplexVector chi{std::move(raw)};
        const cxd overlap = s.target.inner(chi);
        for (std::size_t i = 0; i < 9; ++i) chi[i] -= overlap * s.target[i];
        chi = ComplexVector::normalized(chi.entries());
        const double value = chi.inner(s.omega.apply(chi)).real();
        CHECK(value <= s.lambda2 + 1e-9);
    }
}

TEST_CASE("worst case is attained on the lambda2 eigenvector family") {
    const VerificationStrategy s = build_strategy(build_mub(3));
    const EigenDecomposition eig = hermitian_eigen(s.omega);
    const ComplexVector& chi2 = eig.eigenvectors[1];

    for (const double eps : {0.08, 0.2, 0.5}) {
        const double c = std::sqrt(1.0 - eps), q = std::sqrt(eps);
        std::vector<cxd> raw(9);
        for (std::size_t i = 0; i < 9; ++i) raw[i] = c * s.target[i] + q * chi2[i];
        const ComplexVector state{std::move(raw)};
        CHECK(std::abs(fidelity_pure(ComplexMatrix::outer(state), s.target) - (1.0 - eps)) <=
              1e-10);
        const double value = state.inner(s.omega.apply(state)).real();
        CHECK(std::abs(value - worst_case_pass_probability(eps, s.lambda2)) <= 1e-6);
    }

    // No state at the same fidelity beats the bound.
    std::mt19937_64 rng(22);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double eps = 0.08;
    for (int rep = 0; rep < 500; ++rep) {
        std::vector<cxd> raw(9);
        for (cxd& e : raw) e = cxd(gauss(rng), gauss(rng));
        ComplexVector chi{std::move(raw)};
        const cxd overlap = s.target.inner(chi);
        for (std::size_t i = 0; i < 9; ++i) chi[i] -= overlap * s.target[i];
        chi = ComplexVector::normalized(chi.entries());
        std::vector<cxd> mixed(9);
        for (std::size_t i = 0; i < 9; ++i)
            mixed[i] = std::sqrt(1.0 - eps) * s.target[i] + std::sqrt(eps) * chi[i];
        const ComplexVector state{std::move(mixed)};
        const double value = state.inner(s.omega.apply(state)).real();
        CHECK(value <= worst_case_pass_probability(eps, s.lambda2) + 1e-9);
    }
}

TEST_CASE("worst_case_pass_probability arithmetic") {
    CHECK(worst_case_pass_probability(0.0, 0.7) == 1.0);
    CHECK(rejection_probability(0.08, 0.25) == doctest::Approx(0.06).epsilon(1e-12));
    CHECK(worst_case_pass_probability(0.08, 0.25) == doctest::Approx(0.94).epsilon(1e-12));
    CHECK(worst_case_pass_probability(0.0576, 0.25) == doctest::Approx(0.9568).epsilon(1e-12));
}

TEST_CASE("min_copies at the reference operating point and boundaries") {
    CHECK(min_copies(0.08, 0.05, 0.25) == 50);
    CHECK(min_copies(0.08, 0.999999999, 0.25) == 1);  // ln(1/delta) -> 0+

    CHECK_THROWS_AS(min_copies(0.0, 0.05, 0.25), DomainError);
    CHECK_THROWS_AS(min_copies(1.0, 0.05, 0.25), DomainError);
    CHECK_THROWS_AS(min_copies(0.08, 0.0, 0.25), DomainError);
    CHECK_THROWS_AS(min_copies(0.08, 1.0, 0.25), DomainError);

    // halving epsilon doubles the pre-ceiling value exactly
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.01, 0.99);
    for (int rep = 0; rep < 100; ++rep) {
        const double eps = unit(rng), delta = unit(rng), l2 = 0.5 * unit(rng);
        CHECK(min_copies_real(eps / 2.0, delta, l2) == 2.0 * min_copies_real(eps, delta, l2));
    }
}

TEST_CASE("min_copies is monotone non-increasing in epsilon and delta") {
    const double epsilons[] = {0.01, 0.02, 0.05, 0.08, 0.1, 0.2, 0.5};
    const double deltas[] = {0.001, 0.01, 0.05, 0.1, 0.5, 0.9};
    for (std::size_t i = 1; i < std::size(epsilons); ++i)
        for (double delta : deltas)
            CHECK(min_copies(epsilons[i], delta, 0.25) <= min_copies(epsilons[i - 1], delta, 0.25));
    for (double eps : epsilons)
        for (std::size_t j = 1; j < std::size(deltas); ++j)
            CHECK(min_copies(eps, deltas[j], 0.25) <= min_copies(eps, deltas[j - 1], 0.25));
}
