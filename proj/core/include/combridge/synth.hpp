#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "combridge/relmodel.hpp"

namespace combridge {

enum class WidthDistribution {
  // Inpatient diagnosis-count histogram: widths 1..10 plus an open ">=11"
  // bucket drawn uniformly from 11..15.
  inpatient,
  // Widths uniform in 1..max_width.
  uniform,
};

struct InpatientBucket {
  std::uint32_t min_width;
  std::uint32_t max_width;
  std::uint64_t patients;
};

// Full-scale histogram: 740,731 inpatient visits over 700 diagnosis codes.
inline constexpr std::array<InpatientBucket, 11> kInpatientHistogram{{
    {1, 1, 102747},
    {2, 2, 185211},
    {3, 3, 130781},
    {4, 4, 83743},
    {5, 5, 69580},
    {6, 6, 53660},
    {7, 7, 32723},
    {8, 8, 20036},
    {9, 9, 13506},
    {10, 10, 9402},
    {11, 15, 39342},
}};

inline constexpr std::uint64_t kInpatientVisits = 740731;
inline constexpr std::uint32_t kDiagnosisCodes = 700;

// Splits `group_count` across the histogram buckets in proportion to their
// frequencies (largest remainder, ties to the earlier bucket).
std::vector<std::uint64_t> apportion_inpatient(std::uint64_t group_count);

struct SynthOptions {
  std::uint64_t seed = 1;
  std::uint32_t universe_size = kDiagnosisCodes;
  std::uint64_t group_count = (kInpatientVisits + 500) / 1000;
  WidthDistribution distribution = WidthDistribution::inpatient;
  std::uint32_t max_width = 0;  // uniform only; 0 means universe_size
};

// G = (Group_PK, visit), I = (Item_PK, description), B = (Group_PK, Item_PK).
struct SynthDataset {
  Relation groups;
  Relation items;
  Relation bridge;
};

// Deterministic for a given options value on every platform: draws come from
// mt19937_64 with an explicit rejection-sampled range reduction.
SynthDataset generate_dataset(const SynthOptions& options);

}  // namespace combridge
