#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "attk2/bits.hpp"
#include "attk2/errors.hpp"

namespace attk2 {
namespace {

// Linear-scan oracles over a plain vector<bool>, 1-based like the API.
std::size_t scan_rank(const std::vector<bool>& v, std::size_t i) {
  std::size_t r = 0;
  for (std::size_t p = 0; p < i; ++p) r += v[p];
  return r;
}

std::size_t scan_select(const std::vector<bool>& v, std::size_t j, bool bit = true) {
  for (std::size_t p = 0; p < v.size(); ++p) {
    if (v[p] == bit && --j == 0) return p + 1;
  }
  return 0;
}

BitSequence from_bools(const std::vector<bool>& v) {
  BitBuilder b;
  for (bool x : v) b.push_back(x);
  return std::move(b).build();
}

TEST(BitSequence, RankExamples) {
  BitSequence bs("101100");
  EXPECT_EQ(bs.rank1(4), 3u);
  EXPECT_EQ(bs.rank1(0), 0u);
  EXPECT_EQ(BitSequence("111111").rank1(6), 6u);
  EXPECT_THROW(bs.rank1(7), OutOfRange);
}

TEST(BitSequence, SelectExamples) {
  EXPECT_EQ(BitSequence("101100").select1(2), 3u);
  EXPECT_EQ(BitSequence("100000").select1(1), 1u);
  EXPECT_EQ(BitSequence("000001").select1(1), 6u);
  EXPECT_THROW(BitSequence("101100").select1(0), NotFound);
  EXPECT_THROW(BitSequence("101100").select1(4), NotFound);
  EXPECT_EQ(BitSequence("101100").select0(2), 5u);
}

TEST(BitSequence, AccessAndRoundTrip) {
  BitSequence bs("0110 1");
  EXPECT_EQ(bs.size(), 5u);
  EXPECT_FALSE(bs.access(1));
  EXPECT_TRUE(bs.access(5));
  EXPECT_THROW(bs.access(0), OutOfRange);
  EXPECT_THROW(bs.access(6), OutOfRange);
  EXPECT_EQ(bs.to_string(), "01101");

  wire::Writer w;
  bs.serialize(w);
  EXPECT_EQ(w.size(), 16u);  // u64 length + one word
  wire::Reader r(w.buffer());
  EXPECT_EQ(BitSequence::deserialize(r), bs);
}

TEST(BitSequence, EmptySequence) {
  BitSequence bs;
  EXPECT_EQ(bs.rank1(0), 0u);
  EXPECT_THROW(bs.select1(1), NotFound);
}

TEST(BitSequence, RandomProbesMatchLinearScan) {
  std::mt19937_64 rng(7);
  const std::size_t sizes[] = {1, 63, 64, 65, 511, 512, 513, 4099, 100000, 1000000};
  std::size_t probes = 0;
  for (std::size_t n : sizes) {
    for (double density : {0.01, 0.5, 0.97}) {
      std::bernoulli_distribution coin(density);
      std::vector<bool> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = coin(rng);
      const BitSequence bs = from_bools(v);
      // Prefix counts make the oracle O(1) per probe on the large bitmaps.
      std::vector<std::size_t> prefix(n + 1, 0);
      std::vector<std::size_t> one_pos, zero_pos;
      for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + v[i];
        (v[i] ? one_pos : zero_pos).push_back(i + 1);
      }
      ASSERT_EQ(bs.ones(), one_pos.size());
      std::uniform_int_distribution<std::size_t> pos(0, n);
      for (int t = 0; t < 350; ++t, ++probes) {
        const std::size_t i = pos(rng);
        ASSERT_EQ(bs.rank1(i), prefix[i]) << "n=" << n << " i=" << i;
        if (!one_pos.empty()) {
          const std::size_t j = 1 + pos(rng) % one_pos.size();
          ASSERT_EQ(bs.select1(j), one_pos[j - 1]);
          ASSERT_EQ(bs.rank1(bs.select1(j)), j);
        }
        if (!zero_pos.empty()) {
          const std::size_t j = 1 + pos(rng) % zero_pos.size();
          ASSERT_EQ(bs.select0(j), zero_pos[j - 1]);
        }
      }
      if (n <= 4099) {
        for (std::size_t i = 0; i <= n; ++i) ASSERT_EQ(bs.rank1(i), scan_rank(v, i));
      }
    }
  }
  EXPECT_GE(probes, 10000u);
}

TEST(DynBitSequence, InsertExamples) {
  DynBitSequence a("10");
  a.insert(2, true);
  EXPECT_EQ(a.to_string(), "110");

  DynBitSequence b;
  b.insert(1, false);
  EXPECT_EQ(b.to_string(), "0");

  DynBitSequence c("111");
  c.insert(4, false);
  EXPECT_EQ(c.to_string(), "1110");
  EXPECT_THROW(c.insert(6, true), OutOfRange);
  EXPECT_THROW(c.insert(0, true), OutOfRange);
}

TEST(DynBitSequence, RemoveAndSet) {
  DynBitSequence d("10110");
  EXPECT_TRUE(d.remove(3));
  EXPECT_EQ(d.to_string(), "1010");
  EXPECT_FALSE(d.set(2, true));
  EXPECT_EQ(d.to_string(), "1110");
  EXPECT_EQ(d.rank1(4), 3u);
  EXPECT_EQ(d.select0(1), 4u);
  EXPECT_THROW(d.remove(5), OutOfRange);
}

// Replays random insert/remove/flip operations against a naive growable
// array and compares the full observable state after every step.
TEST(DynBitSequence, RandomOperationsMatchNaiveReplay) {
  std::mt19937_64 rng(11);
  DynBitSequence dyn;
  std::vector<bool> naive;
  for (int step = 0; step < 10000; ++step) {
    const int op = static_cast<int>(rng() % 10);
    if (naive.empty() || op < 6) {
      const std::size_t p = 1 + rng() % (naive.size() + 1);
      const bool bit = rng() & 1;
      dyn.insert(p, bit);
      naive.insert(naive.begin() + static_cast<std::ptrdiff_t>(p - 1), bit);
    } else if (op < 8) {
      const std::size_t p = 1 + rng() % naive.size();
      ASSERT_EQ(dyn.remove(p), static_cast<bool>(naive[p - 1]));
      naive.erase(naive.begin() + static_cast<std::ptrdiff_t>(p - 1));
    } else {
      const std::size_t p = 1 + rng() % naive.size();
      const bool flipped = !naive[p - 1];
      dyn.set(p, flipped);
      naive[p - 1] = flipped;
    }
    ASSERT_EQ(dyn.size(), naive.size());
    const std::size_t ones = scan_rank(naive, naive.size());
    ASSERT_EQ(dyn.ones(), ones);
    // Spot probes every step, full comparison periodically.
    const std::size_t i = rng() % (naive.size() + 1);
    ASSERT_EQ(dyn.rank1(i), scan_rank(naive, i)) << "step " << step;
    if (ones > 0) {
      const std::size_t j = 1 + rng() % ones;
      ASSERT_EQ(dyn.select1(j), scan_select(naive, j)) << "step " << step;
    }
    if (naive.size() > ones) {
      const std::size_t j = 1 + rng() % (naive.size() - ones);
      ASSERT_EQ(dyn.select0(j), scan_select(naive, j, false)) << "step " << step;
    }
    if (step % 500 == 0) {
      std::string expect;
      for (bool b : naive) expect.push_back(b ? '1' : '0');
      ASSERT_EQ(dyn.to_string(), expect);
    }
  }
  EXPECT_EQ(dyn.freeze().to_string(), dyn.to_string());
}

TEST(DynBitSequence, LargeFillSplitsBlocks) {
  DynBitSequence d(10000, true);
  for (std::size_t i = 0; i < 5000; ++i) d.insert(1 + (i * 7919) % d.size(), false);
  EXPECT_EQ(d.size(), 15000u);
  EXPECT_EQ(d.ones(), 10000u);
  EXPECT_EQ(d.rank1(d.size()), 10000u);
  EXPECT_EQ(d.rank0(d.size()), 5000u);
  EXPECT_EQ(d.freeze().ones(), 10000u);
}

TEST(DynSequence, Examples) {
  // a=0, b=1, c=2
  DynSequence s;
  for (auto c : {0u, 1u, 0u, 1u}) s.push_back(c);
  EXPECT_EQ(s.rank(0, 3), 2u);
  EXPECT_EQ(s.select(1, 2), 4u);
  s.insert(2, 2);
  EXPECT_EQ(s.access(2), 2u);
  const std::vector<DynSequence::Symbol> expect = {0, 2, 1, 0, 1};
  for (std::size_t p = 1; p <= expect.size(); ++p) EXPECT_EQ(s.access(p), expect[p - 1]);
  EXPECT_EQ(s.rank(9, 5), 0u);
  EXPECT_THROW(s.select(9, 1), NotFound);
  EXPECT_THROW(s.select(2, 2), NotFound);
  EXPECT_THROW(s.access(6), OutOfRange);
  EXPECT_THROW(s.insert(7, 0), OutOfRange);
}

TEST(DynSequence, RandomInsertsMatchNaiveSequence) {
  std::mt19937_64 rng(23);
  DynSequence seq;
  std::vector<DynSequence::Symbol> naive;
  DynSequence::Symbol sigma = 1;
  for (int step = 0; step < 10000; ++step) {
    // Alphabet grows over time up to 64 symbols, forcing level prepends.
    if (sigma < 64 && step % 150 == 0) ++sigma;
    const DynSequence::Symbol c = static_cast<DynSequence::Symbol>(rng() % sigma);
    const std::size_t p = 1 + rng() % (naive.size() + 1);
    seq.insert(p, c);
    naive.insert(naive.begin() + static_cast<std::ptrdiff_t>(p - 1), c);

    const std::size_t i = 1 + rng() % naive.size();
    ASSERT_EQ(seq.access(i), naive[i - 1]) << "step " << step;
    const auto probe = static_cast<DynSequence::Symbol>(rng() % (sigma + 1));
    std::size_t expect_rank = 0;
    for (std::size_t q = 0; q < i; ++q) expect_rank += naive[q] == probe;
    ASSERT_EQ(seq.rank(probe, i), expect_rank);
    const std::size_t total = seq.count(probe);
    if (total > 0) {
      const std::size_t j = 1 + rng() % total;
      std::size_t seen = 0, where = 0;
      for (std::size_t q = 0; q < naive.size(); ++q) {
        if (naive[q] == probe && ++seen == j) {
          where = q + 1;
          break;
        }
      }
      ASSERT_EQ(seq.select(probe, j), where);
      ASSERT_EQ(seq.access(where), probe);
    }
  }
  std::size_t sum = 0;
  for (DynSequence::Symbol c = 0; c < 64; ++c) sum += seq.count(c);
  EXPECT_EQ(sum, seq.size());
}

TEST(IntVector, PackedValues) {
  const std::vector<std::uint64_t> values = {0, 5, 17, 1ull << 40, 3, 0};
  IntVector iv(values);
  EXPECT_EQ(iv.width(), 41u);
  EXPECT_EQ(iv.to_vector(), values);
  EXPECT_EQ(IntVector(std::vector<std::uint64_t>{0, 0}).width(), 1u);
}

}  // namespace
}  // namespace attk2
