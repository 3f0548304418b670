#pragma once

#include <array>
#include <cstdint>

namespace mjsre {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Stateless: the output
/// block is a pure function of (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

/// Addresses one job's randomness: job `job_index` of replica `replica`
/// under `seed`. Backward windows use index n for job -n.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
  std::uint64_t job_index = 0;
};

/// Independent draw families under one job index. Changing how one family is
/// consumed never perturbs the others.
enum class Substream : std::uint32_t {
  job_class = 0,
  service = 1,
  arrival = 2,
  ra_subset = 3,
  specific_subset = 4,
};

/// Sequence of uniforms for one (key, substream) pair.
class KeyedStream {
 public:
  static constexpr std::uint64_t kMaxReplica = (std::uint64_t{1} << 40) - 1;
  static constexpr std::uint32_t kMaxBlocks = 1u << 16;

  KeyedStream(const StreamKey& key, Substream sub) noexcept;

  /// 64 random bits.
  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;

 private:
  Philox4x32::Counter ctr_;
  Philox4x32::Key key_;
  Philox4x32::Counter out_{};
  int used_ = 4;  // 32-bit words consumed from out_
};

}  // namespace mjsre
