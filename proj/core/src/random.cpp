#include "mjsre/random.hpp"

namespace mjsre {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

// Counter layout: [job lo, job hi, replica lo, substream:8 | replica hi:8 | block:16].
KeyedStream::KeyedStream(const StreamKey& key, Substream sub) noexcept
    : ctr_{static_cast<std::uint32_t>(key.job_index), static_cast<std::uint32_t>(key.job_index >> 32),
           static_cast<std::uint32_t>(key.replica),
           (static_cast<std::uint32_t>(sub) << 24) | ((static_cast<std::uint32_t>(key.replica >> 32) & 0xFFu) << 16)},
      key_{static_cast<std::uint32_t>(key.seed), static_cast<std::uint32_t>(key.seed >> 32)} {}

std::uint64_t KeyedStream::next_u64() noexcept {
  if (used_ > 2) {
    out_ = Philox4x32::block(ctr_, key_);
    // Wraps after kMaxBlocks blocks; no sampler draws that many per job.
    ctr_[3] = (ctr_[3] & 0xFFFF0000u) | ((ctr_[3] + 1) & 0xFFFFu);
    used_ = 0;
  }
  const std::uint64_t v = (static_cast<std::uint64_t>(out_[used_]) << 32) | out_[used_ + 1];
  used_ += 2;
  return v;
}

double KeyedStream::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t KeyedStream::below(std::uint64_t n) noexcept {
  // Lemire's multiply-shift with rejection.
  std::uint64_t x = next_u64();
  __uint128_t m = static_cast<__uint128_t>(x) * n;
  std::uint64_t low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = next_u64();
      m = static_cast<__uint128_t>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace mjsre
