#include "combridge/synth.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

#include "combridge/error.hpp"

namespace combridge {

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return lo + engine_();
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + x % span;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

std::vector<std::uint64_t> apportion_inpatient(std::uint64_t group_count) {
  std::uint64_t total = 0;
  for (const auto& b : kInpatientHistogram) total += b.patients;

  std::vector<std::uint64_t> counts(kInpatientHistogram.size());
  std::vector<std::pair<std::uint64_t, std::size_t>> remainders;
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < kInpatientHistogram.size(); ++i) {
    const boost::multiprecision::uint128_t scaled =
        boost::multiprecision::uint128_t(kInpatientHistogram[i].patients) * group_count;
    counts[i] = static_cast<std::uint64_t>(scaled / total);
    remainders.emplace_back(static_cast<std::uint64_t>(scaled % total), i);
    assigned += counts[i];
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < group_count; ++r, ++assigned) ++counts[remainders[r].second];
  return counts;
}

SynthDataset generate_dataset(const SynthOptions& options) {
  const std::uint32_t n = options.universe_size;
  if (n == 0) throw Error(Errc::empty_universe, "synthetic universe needs at least one item");
  Draw draw(options.seed);

  std::vector<std::uint32_t> widths;
  widths.reserve(options.group_count);
  if (options.distribution == WidthDistribution::inpatient) {
    const auto counts = apportion_inpatient(options.group_count);
    for (std::size_t b = 0; b < counts.size(); ++b) {
      const auto& bucket = kInpatientHistogram[b];
      for (std::uint64_t c = 0; c < counts[b]; ++c) {
        const auto w = static_cast<std::uint32_t>(draw.between(bucket.min_width, bucket.max_width));
        widths.push_back(std::min(w, n));
      }
    }
    // Decouple group ids from bucket order.
    for (std::size_t i = widths.size(); i > 1; --i) {
      std::swap(widths[i - 1], widths[draw.between(0, i - 1)]);
    }
  } else {
    const std::uint32_t cap = options.max_width == 0 ? n : std::min(options.max_width, n);
    for (std::uint64_t g = 0; g < options.group_count; ++g) {
      widths.push_back(static_cast<std::uint32_t>(draw.between(1, cap)));
    }
  }

  SynthDataset data{
      Relation(Schema({{"Group_PK", ValueKind::integer}, {"visit", ValueKind::text}}, {"Group_PK"})),
      Relation(Schema({{"Item_PK", ValueKind::integer}, {"description", ValueKind::text}}, {"Item_PK"})),
      Relation(Schema({{"Group_PK", ValueKind::integer}, {"Item_PK", ValueKind::integer}})),
  };

  // Item keys are sparse codes: one per block of seven starting at 1000.
  std::vector<std::int64_t> item_keys(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    item_keys[j] = 1000 + 7 * static_cast<std::int64_t>(j) + static_cast<std::int64_t>(draw.between(0, 6));
    data.items.insert({item_keys[j], "dx-" + std::to_string(item_keys[j])});
  }

  for (std::size_t g = 0; g < widths.size(); ++g) {
    const auto group_pk = static_cast<std::int64_t>(g + 1);
    data.groups.insert({group_pk, "visit-" + std::to_string(group_pk)});
    // Floyd's sampling of `width` distinct positions out of n.
    std::set<std::uint32_t> chosen;
    for (std::uint32_t j = n - widths[g]; j < n; ++j) {
      const auto t = static_cast<std::uint32_t>(draw.between(0, j));
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    for (std::uint32_t pos : chosen) data.bridge.insert({group_pk, item_keys[pos]});
  }
  return data;
}

}  // namespace combridge
