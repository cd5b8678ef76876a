#pragma once

// Record sphere packing densities and linear programming bounds for 1 ≤ n ≤ 36,
// as published (records rounded down, bounds rounded up). Stored as the printed
// decimal strings and guarded by a checksum.

#include <array>
#include <cstdint>
#include <string_view>

namespace e8lp::reference {

struct Row {
  int n;
  std::string_view text;  // as printed
  double value() const;
};

inline constexpr int kRows = 36;

const std::array<Row, kRows>& table1();  // record densities
const std::array<Row, kRows>& table2();  // LP bounds

/// FNV-1a over "n:text\n" for both tables, and the value recorded at transcription.
std::uint64_t checksum();
std::uint64_t expected_checksum();

/// Throws std::logic_error on a checksum mismatch or a record above its bound.
void verify_tables();

double record_density(int n);
double lp_bound(int n);

/// Squared radius the n = 16 optimization approaches.
inline constexpr double kDim16RadiusSquared = 3.0252593116828820;

std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 14695981039346656037ull);

}  // namespace e8lp::reference
