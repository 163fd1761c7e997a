#pragma once

#include <cmath>
#include <cstddef>

#include "regimecast/error.hpp"
#include "regimecast/io.hpp"

namespace regimecast {

/// Chronological split: the first ceil(n * (1 - test_fraction)) rows train,
/// the remainder tests. Never shuffles.
struct SplitSpec {
  double test_fraction = 0.2;
};

/// Index of the first test row. The small epsilon keeps intended-integer
/// products like 10 * 0.8 from ceiling up to 9.
inline std::size_t split_boundary(std::size_t n, double test_fraction) {
  if (n < 5) throw split_error("temporal split needs at least 5 observations, got " +
                               format_int(std::int64_t(n)));
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw split_error("test fraction must lie in (0, 1)");
  const std::size_t boundary =
      static_cast<std::size_t>(std::ceil(static_cast<double>(n) * (1.0 - test_fraction) - 1e-9));
  if (boundary == 0 || boundary >= n)
    throw split_error("temporal split leaves an empty side for n=" + format_int(std::int64_t(n)));
  return boundary;
}

template <typename T>
struct TemporalSplit {
  std::vector<T> train;
  std::vector<T> test;
};

template <typename T>
TemporalSplit<T> temporal_split(const std::vector<T>& rows, double test_fraction) {
  const std::size_t boundary = split_boundary(rows.size(), test_fraction);
  TemporalSplit<T> out;
  out.train.assign(rows.begin(), rows.begin() + boundary);
  out.test.assign(rows.begin() + boundary, rows.end());
  return out;
}

}  // namespace regimecast
