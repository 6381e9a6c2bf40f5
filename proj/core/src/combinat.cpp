#include "combridge/combinat.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "combridge/error.hpp"

namespace combridge {

std::string to_decimal(const Natural& value) { return value.str(); }

bool parse_decimal(std::string_view text, Natural& out) {
  if (text.empty()) return false;
  if (text.size() > 1 && text.front() == '0') return false;
  if (!std::all_of(text.begin(), text.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
    return false;
  }
  out = 0;
  for (char ch : text) {
    out *= 10;
    out += ch - '0';
  }
  return true;
}

std::size_t byte_length(const Natural& value) {
  if (value == 0) return 1;
  return (boost::multiprecision::msb(value) / 8) + 1;
}

Natural binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Natural result = 1;
  // After step i the accumulator equals C(n - k + i, i), so each division is exact.
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

Combination::Combination(std::vector<std::uint32_t> indices) : indices_(std::move(indices)) {
  for (std::size_t pos = 0; pos < indices_.size(); ++pos) {
    if (indices_[pos] == 0) {
      throw Error(Errc::invalid_combination, "dense indices are 1-based; found 0");
    }
    if (pos > 0 && indices_[pos - 1] >= indices_[pos]) {
      throw Error(Errc::invalid_combination,
                  "indices must be strictly increasing; found " + std::to_string(indices_[pos - 1]) +
                      " before " + std::to_string(indices_[pos]));
    }
  }
}

Natural rank_group(std::span<const std::uint32_t> indices, std::uint32_t n) {
  if (n == 0) throw Error(Errc::invalid_size, "universe size must be at least 1");
  const std::size_t k = indices.size();
  if (k == 0) throw Error(Errc::invalid_combination, "empty group has no rank");
  if (k > n) {
    throw Error(Errc::invalid_combination,
                "group of " + std::to_string(k) + " items exceeds universe of " + std::to_string(n));
  }
  for (std::size_t pos = 0; pos < k; ++pos) {
    const std::uint32_t idx = indices[pos];
    if (idx < 1 || idx > n) {
      throw Error(Errc::invalid_combination,
                  "index " + std::to_string(idx) + " outside 1.." + std::to_string(n));
    }
    if (pos > 0 && indices[pos - 1] >= idx) {
      throw Error(Errc::invalid_combination, "indices must be strictly increasing");
    }
  }

  // Count the combinations that come lexicographically after `indices`: with
  // the first p entries fixed, the tail can be any (k-p)-subset of the n - c_p
  // items above position p.
  Natural after = 0;
  for (std::size_t pos = 0; pos < k; ++pos) {
    after += binomial(n - indices[pos], k - pos);
  }
  return binomial(n, k) - after;
}

Combination unrank_group(const Natural& h, std::uint32_t k, std::uint32_t n) {
  if (k == 0 || n == 0 || k > n) {
    throw Error(Errc::invalid_size,
                "need 1 <= k <= n; got k=" + std::to_string(k) + ", n=" + std::to_string(n));
  }
  const Natural total = binomial(n, k);
  if (h < 1 || h > total) {
    throw Error(Errc::rank_out_of_range,
                "rank " + to_decimal(h) + " outside 1.." + to_decimal(total) + " for k=" +
                    std::to_string(k) + ", n=" + std::to_string(n));
  }

  // Write g = C(n,k) - h as a sum of C(a_l, l) with a_k > ... > a_1 >= 0
  // (greedy, largest first), then complement: position p holds n - a_{k-p+1}.
  // `t` tracks C(a, l) and is stepped by exact ratios instead of recomputed.
  Natural g = total - h;
  std::uint32_t a = n - 1;
  Natural t = binomial(a, k);
  std::vector<std::uint32_t> out(k);
  for (std::uint32_t pos = 0; pos < k; ++pos) {
    const std::uint32_t l = k - pos;
    while (t > g) {
      t = t * (a - l) / a;  // C(a-1, l)
      --a;
    }
    out[pos] = n - a;
    g -= t;
    if (l > 1) {
      t = t * l / a;  // C(a-1, l-1)
      --a;
    }
  }
  return Combination(std::move(out));
}

std::vector<Combination> enumerate_combinations(std::uint32_t n, std::uint32_t k) {
  std::vector<Combination> out;
  if (k == 0 || k > n) return out;
  std::vector<std::uint32_t> cur(k);
  for (std::uint32_t i = 0; i < k; ++i) cur[i] = i + 1;
  while (true) {
    out.emplace_back(cur);
    // Rightmost slot that can still move up.
    std::int64_t pos = static_cast<std::int64_t>(k) - 1;
    while (pos >= 0 && cur[pos] == n - k + pos + 1) --pos;
    if (pos < 0) break;
    ++cur[pos];
    for (std::uint32_t j = static_cast<std::uint32_t>(pos) + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

}  // namespace combridge
