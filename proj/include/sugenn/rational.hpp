#pragma once

#include <cstdint>

namespace sugenn {

/// Exact fraction num/den with den > 0. Scores on the scale {0, 1/n, ..., 1}
/// keep den = n and are never reduced, so equality is plain pair equality.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
};

}  // namespace sugenn
