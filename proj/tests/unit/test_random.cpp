#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "mjsre/random.hpp"

using namespace mjsre;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("keyed streams are deterministic and separated") {
  const StreamKey key{42, 3, 17};
  KeyedStream a(key, Substream::service);
  KeyedStream b(key, Substream::service);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  std::set<std::uint64_t> firsts;
  for (Substream sub : {Substream::job_class, Substream::service, Substream::arrival, Substream::ra_subset,
                        Substream::specific_subset}) {
    firsts.insert(KeyedStream(key, sub).next_u64());
  }
  for (const StreamKey& other : {StreamKey{43, 3, 17}, StreamKey{42, 4, 17}, StreamKey{42, 3, 18}}) {
    firsts.insert(KeyedStream(other, Substream::service).next_u64());
  }
  CHECK(firsts.size() == 8);
}

TEST_CASE("uniforms are in the open unit interval with the right moments") {
  KeyedStream s(StreamKey{7, 0, 0}, Substream::service);
  double sum = 0.0;
  double sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sum_sq / n - mean * mean - 1.0 / 12.0) < 0.002);
}

TEST_CASE("bounded integers are unbiased") {
  KeyedStream s(StreamKey{9, 1, 2}, Substream::ra_subset);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto v = s.below(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
  CHECK(chi2 < 22.46);  // 99.9% quantile of chi-square with 6 degrees of freedom
}

TEST_CASE("disjoint seeds give uncorrelated sequences") {
  KeyedStream a(StreamKey{1, 0, 0}, Substream::service);
  KeyedStream b(StreamKey{2, 0, 0}, Substream::service);
  const int n = 100000;
  double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform();
    const double y = b.uniform();
    sx += x;
    sy += y;
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  const double cov = sxy / n - sx / n * sy / n;
  const double corr = cov / std::sqrt((sxx / n - sx / n * sx / n) * (syy / n - sy / n * sy / n));
  CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
}
