#include "qsv/device.hpp"

#include <algorithm>
#include <cmath>

namespace qsv {

NoiseChannel NoiseChannel::white(double visibility) {
    if (!(visibility >= 0.0 && visibility <= 1.0))
        throw DomainError("white noise visibility must lie in [0,1]");
    return {Kind::white, visibility};
}

NoiseChannel NoiseChannel::dephase(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("dephasing strength must lie in [0,1]");
    return {Kind::dephase, p};
}

DeviceModel build_device(std::size_t d, std::vector<cxd> coefficients, NoiseChannel noise) {
    if (d < 2) throw UnsupportedDimension("device dimension must be >= 2");
    if (coefficients.size() != d)
        throw DimensionMismatch("expected one coefficient per level");

    const ComplexVector coeff = ComplexVector::normalized(std::move(coefficients));
    ComplexVector psi(d * d);
    for (std::size_t k = 0; k < d; ++k) psi[k * d + k] = coeff[k];

    ComplexMatrix rho = ComplexMatrix::outer(psi);
    switch (noise.kind) {
        case NoiseChannel::Kind::none:
            break;
        case NoiseChannel::Kind::white: {
            const double v = noise.param;
            rho *= v;
            const double bg = (1.0 - v) / static_cast<double>(d * d);
            for (std::size_t i = 0; i < d * d; ++i) rho(i, i) += bg;
            break;
        }
        case NoiseChannel::Kind::dephase: {
            const double keep = 1.0 - noise.param;
            for (std::size_t i = 0; i < d * d; ++i)
                for (std::size_t j = 0; j < d * d; ++j)
                    if (i != j) rho(i, j) *= keep;
            break;
        }
    }

    DeviceModel dev;
    dev.d = d;
    dev.coefficients = coeff.entries();
    dev.noise = noise;
    dev.rho = std::move(rho);
    return dev;
}

double pass_probability(const DeviceModel& device, const VerificationStrategy& strategy) {
    if (device.rho.dim() != strategy.omega.dim())
        throw DimensionMismatch("device and strategy dimensions differ");
    cxd tr = 0.0;
    const std::size_t n = device.rho.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) tr += strategy.omega(i, j) * device.rho(j, i);
    return std::clamp(tr.real(), 0.0, 1.0);
}

std::uint64_t RandomStream::mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t trial)
    : state_(mix64(mix64(seed) + (trial + 1) * kGamma)) {}

std::uint64_t RandomStream::next_u64() {
    state_ += kGamma;
    return mix64(state_);
}

double RandomStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

JointSampler::JointSampler(const DeviceModel& device, const VerificationStrategy& strategy)
    : d_(strategy.d) {
    if (device.d != strategy.d)
        throw DimensionMismatch("device and strategy dimensions differ");

    for (const auto& basis : strategy.mubs.bases) {
        std::vector<double> joint(d_ * d_);
        double total = 0.0;
        for (std::size_t ka = 0; ka < d_; ++ka) {
            for (std::size_t kb = 0; kb < d_; ++kb) {
                const ComplexVector u = tensor(basis[ka], basis[kb].conjugate());
                const double p = std::max(u.inner(device.rho.apply(u)).real(), 0.0);
                joint[ka * d_ + kb] = p;
                total += p;
            }
        }
        if (std::abs(total - 1.0) > 1e-10)
            throw DataError("joint outcome distribution does not sum to 1");
        std::vector<double> cum(joint.size());
        double acc = 0.0;
        for (std::size_t c = 0; c < joint.size(); ++c) {
            acc += joint[c];
            cum[c] = acc;
        }
        joints_.push_back(std::move(joint));
        cumulative_.push_back(std::move(cum));
    }
}

TestRecord JointSampler::sample(RandomStream& stream, std::int64_t copy_index) const {
    const std::size_t n_set = cumulative_.size();
    auto setting =
        static_cast<std::size_t>(stream.next_double() * static_cast<double>(n_set));
    if (setting >= n_set) setting = n_set - 1;

    const std::vector<double>& cum = cumulative_[setting];
    const double u = stream.next_double() * cum.back();
    std::size_t cell = cum.size() - 1;
    for (std::size_t c = 0; c < cum.size(); ++c) {
        if (u < cum[c]) {
            cell = c;
            break;
        }
    }

    TestRecord rec;
    rec.copy_index = copy_index;
    rec.setting = static_cast<int>(setting);
    rec.k_alice = static_cast<int>(cell / d_);
    rec.k_bob = static_cast<int>(cell % d_);
    rec.passed = rec.k_alice == rec.k_bob;
    return rec;
}

TestRecord sample_copy(const DeviceModel& device, const VerificationStrategy& strategy,
                       RandomStream& stream, std::int64_t copy_index) {
    return JointSampler(device, strategy).sample(stream, copy_index);
}

RunLedger run_copies(const DeviceModel& device, const VerificationStrategy& strategy,
                     std::int64_t n_copies, RandomStream& stream) {
    if (n_copies < 1) throw DomainError("run_copies requires n_copies >= 1");
    const JointSampler sampler(device, strategy);
    RunLedger ledger;
    ledger.records.reserve(static_cast<std::size_t>(n_copies));
    ledger.cumulative_passes.reserve(static_cast<std::size_t>(n_copies));
    std::int64_t passes = 0;
    for (std::int64_t i = 1; i <= n_copies; ++i) {
        TestRecord rec = sampler.sample(stream, i);
        if (rec.passed) ++passes;
        ledger.records.push_back(rec);
        ledger.cumulative_passes.push_back(passes);
    }
    return ledger;
}

}  // namespace qsv
