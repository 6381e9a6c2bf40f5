#include "combridge/combinat.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "combridge/error.hpp"
#include "oracles.hpp"

namespace combridge {
namespace {

// Frozen from oracle::pascal_row(700).
const Natural kC700_4("9918641075");
const Natural kC700_10("7297452464858376897230");
const Natural kC700_20("249371121135007381562386080915398229615");

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected combridge::Error";
  return Errc::io_error;
}

TEST(Binomial, SmallValues) {
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(binomial(0, 0), 1);
  EXPECT_EQ(binomial(9, 0), 1);
  EXPECT_EQ(binomial(9, 9), 1);
  EXPECT_EQ(binomial(3, 4), 0);
}

TEST(Binomial, MatchesPascalRecurrence) {
  for (std::uint32_t n = 0; n <= 60; ++n) {
    const auto row = oracle::pascal_row(n);
    for (std::uint32_t k = 0; k <= n + 1; ++k) {
      EXPECT_EQ(binomial(n, k), k <= n ? row[k] : Natural(0)) << "C(" << n << "," << k << ")";
    }
  }
}

TEST(Binomial, LargeFrozenValues) {
  EXPECT_EQ(binomial(700, 4), kC700_4);
  EXPECT_EQ(binomial(700, 10), kC700_10);
  EXPECT_EQ(binomial(700, 20), kC700_20);
  EXPECT_EQ(binomial(700, 696), kC700_4);
}

TEST(Binomial, LargeAgreesWithOracleRow) {
  const auto row = oracle::pascal_row(700);
  EXPECT_EQ(row[4], kC700_4);
  EXPECT_EQ(row[10], kC700_10);
  for (std::uint32_t k : {0U, 1U, 7U, 33U, 350U, 699U, 700U}) EXPECT_EQ(binomial(700, k), row[k]);
}

TEST(Combination, RejectsUnsortedAndZero) {
  EXPECT_EQ(code_of([] { Combination({2, 1}); }), Errc::invalid_combination);
  EXPECT_EQ(code_of([] { Combination({1, 1}); }), Errc::invalid_combination);
  EXPECT_EQ(code_of([] { Combination({0, 3}); }), Errc::invalid_combination);
}

TEST(RankGroup, StatedIdentities) {
  for (std::uint32_t n = 3; n <= 9; ++n) {
    for (std::uint32_t k = 1; k < n; ++k) {
      std::vector<std::uint32_t> first(k), second(k), last(k);
      for (std::uint32_t i = 0; i < k; ++i) {
        first[i] = i + 1;
        second[i] = i + 1;
        last[i] = n - k + 1 + i;
      }
      second.back() = k + 1;
      EXPECT_EQ(rank_group(first, n), 1);
      EXPECT_EQ(rank_group(second, n), 2);
      EXPECT_EQ(rank_group(last, n), binomial(n, k));
    }
  }
}

TEST(RankGroup, PairInFive) { EXPECT_EQ(rank_group(Combination{2, 3}, 5), 5); }

TEST(RankGroup, Errors) {
  const std::vector<std::uint32_t> empty;
  EXPECT_EQ(code_of([&] { rank_group(empty, 5); }), Errc::invalid_combination);
  EXPECT_EQ(code_of([] { rank_group(std::vector<std::uint32_t>{3, 2}, 5); }), Errc::invalid_combination);
  EXPECT_EQ(code_of([] { rank_group(std::vector<std::uint32_t>{1, 6}, 5); }), Errc::invalid_combination);
  EXPECT_EQ(code_of([] { rank_group(std::vector<std::uint32_t>{1, 2, 3}, 2); }), Errc::invalid_combination);
  EXPECT_EQ(code_of([] { rank_group(std::vector<std::uint32_t>{1}, 0); }), Errc::invalid_size);
}

TEST(UnrankGroup, Examples) {
  EXPECT_EQ(unrank_group(1, 3, 7), (Combination{1, 2, 3}));
  EXPECT_EQ(unrank_group(1, 2, 2), (Combination{1, 2}));
  EXPECT_EQ(unrank_group(5, 2, 5), (Combination{2, 3}));
  EXPECT_EQ(unrank_group(binomial(9, 4), 4, 9), (Combination{6, 7, 8, 9}));
  EXPECT_EQ(unrank_group(1, 1, 1), (Combination{1}));
}

TEST(UnrankGroup, Errors) {
  EXPECT_EQ(code_of([] { unrank_group(0, 2, 5); }), Errc::rank_out_of_range);
  EXPECT_EQ(code_of([] { unrank_group(11, 2, 5); }), Errc::rank_out_of_range);
  EXPECT_EQ(code_of([] { unrank_group(1, 6, 5); }), Errc::invalid_size);
  EXPECT_EQ(code_of([] { unrank_group(1, 0, 5); }), Errc::invalid_size);
}

TEST(Enumerate, Small) {
  const auto three_two = enumerate_combinations(3, 2);
  ASSERT_EQ(three_two.size(), 3U);
  EXPECT_EQ(three_two[0], (Combination{1, 2}));
  EXPECT_EQ(three_two[1], (Combination{1, 3}));
  EXPECT_EQ(three_two[2], (Combination{2, 3}));

  const auto all = enumerate_combinations(6, 6);
  ASSERT_EQ(all.size(), 1U);
  EXPECT_EQ(all[0], (Combination{1, 2, 3, 4, 5, 6}));

  const auto five_two = enumerate_combinations(5, 2);
  ASSERT_EQ(five_two.size(), 10U);
  EXPECT_EQ(five_two[4], (Combination{2, 3}));
}

TEST(Enumerate, MatchesBitmaskOracle) {
  for (std::uint32_t n = 1; n <= 10; ++n) {
    for (std::uint32_t k = 1; k <= n; ++k) {
      const auto expected = oracle::bitmask_combinations(n, k);
      const auto actual = enumerate_combinations(n, k);
      ASSERT_EQ(actual.size(), expected.size());
      for (std::size_t i = 0; i < actual.size(); ++i) {
        EXPECT_EQ(std::vector<std::uint32_t>(actual[i].begin(), actual[i].end()), expected[i]);
      }
    }
  }
}

// Exhaustive bijection and order preservation against the bitmask oracle.
TEST(RankUnrank, ExhaustiveUpToTwelve) {
  for (std::uint32_t n = 1; n <= 12; ++n) {
    for (std::uint32_t k = 1; k <= n; ++k) {
      const auto all = oracle::bitmask_combinations(n, k);
      ASSERT_EQ(Natural(all.size()), binomial(n, k));
      for (std::size_t pos = 0; pos < all.size(); ++pos) {
        const Natural h = rank_group(all[pos], n);
        ASSERT_EQ(h, Natural(pos + 1)) << "n=" << n << " k=" << k;
        const Combination back = unrank_group(h, k, n);
        ASSERT_EQ(std::vector<std::uint32_t>(back.begin(), back.end()), all[pos]);
      }
    }
  }
}

TEST(RankUnrank, DistinctAcrossSizes) {
  const std::uint32_t n = 8;
  std::set<std::pair<Natural, std::size_t>> seen;
  std::size_t total = 0;
  for (std::uint32_t k = 1; k <= n; ++k) {
    for (const auto& c : enumerate_combinations(n, k)) {
      seen.emplace(rank_group(c, n), c.size());
      ++total;
    }
  }
  EXPECT_EQ(seen.size(), total);
  EXPECT_EQ(total, 255U);
}

TEST(RankUnrank, RandomLargeUniverse) {
  std::mt19937_64 rng(7);
  const Natural two64 = Natural(1) << 64;
  for (std::uint32_t k : {4U, 10U, 20U, 100U, 699U}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<std::uint32_t> pool(700);
      for (std::uint32_t i = 0; i < 700; ++i) pool[i] = i + 1;
      std::shuffle(pool.begin(), pool.end(), rng);
      std::vector<std::uint32_t> c(pool.begin(), pool.begin() + k);
      std::sort(c.begin(), c.end());
      const Natural h = rank_group(c, 700);
      ASSERT_GE(h, 1);
      ASSERT_LE(h, binomial(700, k));
      if (k == 20) {
        EXPECT_GT(h, two64);
      }
      const Combination back = unrank_group(h, k, 700);
      ASSERT_EQ(std::vector<std::uint32_t>(back.begin(), back.end()), c);
    }
  }
}

TEST(RankUnrank, NeighboursInLargeUniverse) {
  // Consecutive ranks must be lexicographic successors.
  const std::uint32_t n = 700;
  const std::uint32_t k = 10;
  const Natural start = binomial(n, k) / 3;
  Combination prev = unrank_group(start, k, n);
  for (int step = 1; step <= 200; ++step) {
    const Combination next = unrank_group(start + step, k, n);
    EXPECT_LT(prev, next);
    EXPECT_EQ(rank_group(next, n), start + step);
    prev = next;
  }
}

}  // namespace
}  // namespace combridge
