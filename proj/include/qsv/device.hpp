#pragma once

// Simulated source emitting i.i.d. copies of a noisy entangled state, and
// the per-copy binary verification test under a seeded random stream.

#include <cstdint>
#include <vector>

#include "qsv/linalg.hpp"
#include "qsv/mub.hpp"

namespace qsv {

struct NoiseChannel {
    enum class Kind { none, white, dephase };
    Kind kind = Kind::none;
    double param = 0.0;

    static NoiseChannel none() { return {Kind::none, 0.0}; }
    // rho = v |psi><psi| + (1-v) I/d^2
    static NoiseChannel white(double visibility);
    // off-diagonal elements in the standard product basis scaled by (1-p)
    static NoiseChannel dephase(double p);
};

struct DeviceModel {
    std::size_t d = 0;
    std::vector<cxd> coefficients;  // normalized amplitudes C_k of sum_k C_k |kk>
    NoiseChannel noise;
    ComplexMatrix rho;              // cached density matrix of the emitted copy
};

// Normalizes the coefficients, builds |psi_C> = sum_k C_k |kk> and applies the
// noise channel. Throws ZeroState if all coefficients vanish.
DeviceModel build_device(std::size_t d, std::vector<cxd> coefficients, NoiseChannel noise);

// Tr(omega * rho), clamped to [0,1].
double pass_probability(const DeviceModel& device, const VerificationStrategy& strategy);

struct TestRecord {
    std::int64_t copy_index = 0;  // 1-based
    int setting = 0;              // basis index, 0..d
    int k_alice = 0;              // outcome 0..d-1
    int k_bob = 0;
    bool passed = false;          // k_alice == k_bob
};

struct RunLedger {
    std::vector<TestRecord> records;
    std::vector<std::int64_t> cumulative_passes;  // m(N), N = 1..records.size()

    std::int64_t copies() const { return static_cast<std::int64_t>(records.size()); }
    std::int64_t passes_at(std::int64_t n) const {
        return cumulative_passes.at(static_cast<std::size_t>(n - 1));
    }
};

// Deterministic counter-based stream: output i of stream (seed, trial) is
// mix64(key + (i+1)*GAMMA) with key = mix64(mix64(seed) + (trial+1)*GAMMA),
// GAMMA = 0x9e3779b97f4a7c15 and mix64 the splitmix64 finalizer. Distinct
// trials of one root seed give independent reproducible streams.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t trial = 0);

    std::uint64_t next_u64();
    // Uniform in [0, 1), 53 significant bits.
    double next_double();

    static std::uint64_t mix64(std::uint64_t z);

  private:
    std::uint64_t state_ = 0;
};

// Per-setting joint outcome distributions P_i(k_a, k_b) for a fixed device
// and strategy, precomputed for repeated sampling. Each per-setting
// distribution is validated to sum to 1 within 1e-10.
class JointSampler {
  public:
    JointSampler(const DeviceModel& device, const VerificationStrategy& strategy);

    TestRecord sample(RandomStream& stream, std::int64_t copy_index) const;

    // Row-major d x d table for one setting: entry k_a*d + k_b.
    const std::vector<double>& joint(std::size_t setting) const { return joints_.at(setting); }
    std::size_t n_settings() const { return joints_.size(); }

  private:
    std::size_t d_;
    std::vector<std::vector<double>> joints_;
    std::vector<std::vector<double>> cumulative_;
};

// Draws the setting uniformly from 0..d, then the joint outcome (k_a, k_b)
// from P(k_a,k_b) = <u|rho|u> with u = phi_{k_a,i} (x) conj(phi_{k_b,i}).
TestRecord sample_copy(const DeviceModel& device, const VerificationStrategy& strategy,
                       RandomStream& stream, std::int64_t copy_index = 1);

RunLedger run_copies(const DeviceModel& device, const VerificationStrategy& strategy,
                     std::int64_t n_copies, RandomStream& stream);

}  // namespace qsv
