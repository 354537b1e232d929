#pragma once

#include <cstdint>
#include <limits>

namespace hazard {

/// Counter-based generator: the k-th output is a bijective 64-bit mix of
/// key + k * golden_gamma, where the key is derived from (seed, stream,
/// substream). Outputs therefore depend only on those three numbers and the
/// draw index, never on which thread produced them or in which order.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform draw in the open interval (0, 1).
    double uniform() noexcept;
    /// Standard normal draw (Box-Muller, pairs cached).
    double normal() noexcept;

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

/// Identity of one reproducible random stream.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    /// Gaussian increments of the Brownian path.
    static constexpr std::uint64_t kGaussian = 0;
    /// The uniform that places the default time.
    static constexpr std::uint64_t kDefault = 1;
    /// Anything else a consumer needs (random strategies, lattice paths).
    static constexpr std::uint64_t kAuxiliary = 2;

    CounterRng engine(std::uint64_t substream) const noexcept { return {seed, stream_id, substream}; }

    /// Stream for item `k` of a batch rooted at this stream.
    RngStream child(std::uint64_t k) const noexcept
    {
        return {seed, stream_id == 0 ? k : mix64(stream_id ^ mix64(k + 0x632be59bd9b4e019ULL))};
    }

    friend bool operator==(const RngStream&, const RngStream&) = default;
};

}  // namespace hazard
