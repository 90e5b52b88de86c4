#pragma once

// Complete sets of mutually unbiased bases for prime dimensions 2..7 and the
// conjugate-basis verification strategy for the maximally entangled target.

#include <cstdint>
#include <vector>

#include "qsv/linalg.hpp"

namespace qsv {

struct MubSet {
    std::size_t d = 0;                            // prime, 2 <= d <= 7
    std::vector<std::vector<ComplexVector>> bases;  // d+1 bases of d unit vectors
};

// Complete MUB set. For d=3 the four bases carry the fixed literal form used
// throughout (standard basis first, then the three Fourier-type bases); for
// the other supported primes the generic construction below is used.
// Throws UnsupportedDimension for non-prime or out-of-range d.
MubSet build_mub(std::size_t d);

// Generic prime-d construction: the computational basis plus, for each
// b in 0..d-1, the basis with vectors phi_{k,b} propto sum_j w^(b*j^2 + k*j) |j>
// where w = exp(i*2*pi/d) (d odd; d=2 uses the quartic root i instead).
// Vectors are phase-fixed so the first nonzero amplitude is real-positive.
MubSet build_mub_generic(std::size_t d);

// (1/sqrt(d)) sum_j |jj>, dim d^2.
ComplexVector maximally_entangled_state(std::size_t d);

// Entry-wise complex conjugate with respect to the standard basis.
ComplexVector conjugate_vector(const ComplexVector& v);

struct VerificationStrategy {
    std::size_t d = 0;
    MubSet mubs;                          // measurement bases behind the settings
    std::vector<ComplexMatrix> settings;  // pass projectors M_i, dim d^2, rank d
    std::vector<double> probabilities;    // uniform 1/(d+1)
    ComplexMatrix omega;                  // sum_i p_i M_i
    double lambda2 = 0.0;                 // second largest eigenvalue of omega
    ComplexVector target;                 // maximally entangled state, dim d^2

    // Delta_eps = (1 - lambda2) * eps; this is the coefficient.
    double delta_eps_coeff() const { return 1.0 - lambda2; }
};

// M_i = sum_k |phi_{k,i}><phi_{k,i}| (x) |phi*_{k,i}><phi*_{k,i}|,
// omega = sum_i M_i / (d+1), lambda2 from the Hermitian eigendecomposition.
VerificationStrategy build_strategy(const MubSet& mubs);

// Single-test rejection probability Delta_eps = (1 - lambda2) * eps.
double rejection_probability(double epsilon, double lambda2);

// 1 - Delta_eps: the largest passing probability of any state with
// fidelity <= 1 - eps.
double worst_case_pass_probability(double epsilon, double lambda2);

// Pre-ceiling value ln(1/delta) / ((1 - lambda2) * eps).
double min_copies_real(double epsilon, double delta, double lambda2);

// ceil of the above, at least 1. Throws DomainError outside (0,1) ranges.
std::int64_t min_copies(double epsilon, double delta, double lambda2);

}  // namespace qsv
