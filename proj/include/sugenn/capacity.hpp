#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sugenn/bitvec.hpp"
#include "sugenn/core.hpp"
#include "sugenn/errors.hpp"
#include "sugenn/rational.hpp"

namespace sugenn {

/// C(n, k), saturating at the uint64 maximum instead of overflowing.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Visits the k-element subsets of `items` (assumed sorted ascending) in
/// lexicographic order. `visit` receives a span over the current combination
/// and returns false to stop early; the function returns false iff stopped.
template <typename Fn>
bool for_each_combination(std::span<const std::size_t> items, std::size_t k, Fn&& visit) {
  if (k > items.size()) return true;
  std::vector<std::size_t> pick(k);
  std::vector<std::size_t> pos(k);
  for (std::size_t i = 0; i < k; ++i) {
    pos[i] = i;
    pick[i] = items[i];
  }
  while (true) {
    if (!visit(std::span<const std::size_t>(pick))) return false;
    if (k == 0) return true;
    // advance the rightmost index that still has room
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (pos[i] != i + items.size() - k) {
        ++pos[i];
        pick[i] = items[pos[i]];
        for (std::size_t j = i + 1; j < k; ++j) {
          pos[j] = pos[j - 1] + 1;
          pick[j] = items[pos[j]];
        }
        break;
      }
      if (i == 0) return true;
    }
  }
}

/// Capacity given by a full table over the subsets of an m-element ground
/// set, subset encoded as an m-bit mask. Validates the capacity axioms.
class ExplicitCapacity {
 public:
  static constexpr std::size_t kMaxGroundSet = 24;

  ExplicitCapacity(std::size_t ground_set_size, std::vector<double> table);

  std::size_t ground_set_size() const { return m_; }
  std::uint32_t full_mask() const {
    return static_cast<std::uint32_t>((std::uint64_t{1} << m_) - 1);
  }

  double value(std::uint32_t subset_mask) const { return table_[subset_mask]; }
  double value(const BitVec& subset) const;

  const std::vector<double>& table() const { return table_; }

  friend bool operator==(const ExplicitCapacity&, const ExplicitCapacity&) = default;

 private:
  std::size_t m_ = 0;
  std::vector<double> table_;
};

/// mu(A) = 1 iff |A intersect Lambda| >= tau, on the 2n-literal ground set.
class ThresholdCapacity {
 public:
  ThresholdCapacity(LiteralSet lambda, int tau);

  const LiteralSet& lambda() const { return lambda_; }
  int tau() const { return tau_; }
  std::size_t base_dimension() const { return lambda_.base_dimension(); }
  std::size_t ground_set_size() const { return 2 * base_dimension(); }

  int value(const BitVec& subset) const {
    return intersection_count(subset, lambda_.members()) >=
                   static_cast<std::size_t>(tau_)
               ? 1
               : 0;
  }

  /// Full table on the 2n literals; requires 2n <= 24.
  ExplicitCapacity materialize() const;

  friend bool operator==(const ThresholdCapacity&, const ThresholdCapacity&) = default;

 private:
  LiteralSet lambda_;
  int tau_ = 0;
};

/// mu(A) = 1 iff |A| >= tau, on the ground set [n] (match-bit view).
class CardinalityCapacity {
 public:
  CardinalityCapacity(std::size_t n, int tau);

  std::size_t ground_set_size() const { return n_; }
  int tau() const { return tau_; }

  int value(const BitVec& subset) const {
    return subset.count() >= static_cast<std::size_t>(tau_) ? 1 : 0;
  }

  ExplicitCapacity materialize() const;

 private:
  std::size_t n_ = 0;
  int tau_ = 0;
};

/// nu(A) = |A intersect Lambda| / n on the 2n-literal ground set; values are
/// exact rationals on the scale {0, 1/n, ..., 1}.
class NormalizedMatchCapacity {
 public:
  explicit NormalizedMatchCapacity(LiteralSet lambda);

  const LiteralSet& lambda() const { return lambda_; }
  std::size_t base_dimension() const { return lambda_.base_dimension(); }
  std::size_t ground_set_size() const { return 2 * base_dimension(); }

  Rational value(const BitVec& subset) const {
    return {static_cast<std::int64_t>(intersection_count(subset, lambda_.members())),
            static_cast<std::int64_t>(base_dimension())};
  }

  ExplicitCapacity materialize() const;

 private:
  LiteralSet lambda_;
};

/// mu(A) = 1 iff sum of the selected nonnegative weights reaches theta.
/// Construction requires 0 < theta <= sum(w), else the axioms fail.
class WeightedThresholdCapacity {
 public:
  WeightedThresholdCapacity(std::vector<double> weights, double theta);

  std::size_t ground_set_size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double theta() const { return theta_; }

  int value(const BitVec& subset) const;
  int value(std::uint32_t subset_mask) const;

  /// Minimal subsets whose weight sum reaches theta, lexicographic order.
  /// Enumerates all 2^n subsets, so the ground set is capped at 20.
  std::vector<BitVec> focal_sets() const;

  ExplicitCapacity materialize() const;

 private:
  std::vector<double> weights_;
  double theta_ = 0.0;
};

/// Qualitative Mobius transform output: the focal sets with their weights,
/// either listed explicitly or implied as "all tau-subsets of Lambda".
class FocalFamily {
 public:
  struct Element {
    BitVec set;
    double weight = 1.0;
  };

  static constexpr std::uint64_t kDefaultMaterializeLimit = 1'000'000;

  /// Validates weights in (0,1], uniqueness, and Mobius minimality (a focal
  /// superset must carry a strictly larger weight).
  static FocalFamily explicit_family(std::size_t ground_set_size,
                                     std::vector<Element> elements);

  static FocalFamily choose_tau(LiteralSet lambda, int tau);

  bool is_implicit() const { return implicit_; }
  std::size_t ground_set_size() const { return ground_set_size_; }

  /// Exact number of focal sets (saturating for huge choose counts).
  std::uint64_t count() const;

  /// Explicit families only.
  const std::vector<Element>& elements() const;

  const LiteralSet& lambda() const;  // implicit families only
  int tau() const;                   // implicit families only

  /// Visits every focal set in lexicographic order; visitor returns false to
  /// stop. Returns false iff stopped early.
  template <typename Fn>
  bool for_each(Fn&& visit) const {
    if (!implicit_) {
      for (const Element& e : elements_)
        if (!visit(e.set, e.weight)) return false;
      return true;
    }
    const auto positions = lambda_.members().indices();
    return for_each_combination(
        positions, static_cast<std::size_t>(tau_),
        [&](std::span<const std::size_t> combo) {
          return visit(BitVec::from_indices(ground_set_size_, combo), 1.0);
        });
  }

  /// Lists the focal sets; throws limit_exceeded when count() > limit.
  std::vector<BitVec> materialize(std::uint64_t limit = kDefaultMaterializeLimit) const;

 private:
  friend FocalFamily mobius_transform(const ExplicitCapacity&);

  /// Construction bypass for families that are valid by construction.
  static FocalFamily explicit_presorted(std::size_t ground_set_size,
                                        std::vector<Element> elements);

  bool implicit_ = false;
  std::size_t ground_set_size_ = 0;
  std::vector<Element> elements_;  // explicit
  LiteralSet lambda_;              // implicit
  int tau_ = 0;                    // implicit
};

// ---------------------------------------------------------------------------
// Sugeno integral evaluation
// ---------------------------------------------------------------------------

/// Eq-by-definition evaluation: max over every subset A of
/// min(mu(A), min_{i in A} x_i). Ground set capped at 20.
double sugeno_eval_general(const std::function<double(std::uint32_t)>& mu,
                           std::size_t ground_set_size, std::span<const double> x);
double sugeno_eval_general(const ExplicitCapacity& mu, std::span<const double> x);

/// On binary input the integral collapses to mu(E(x)).
double sugeno_eval_binary(const ExplicitCapacity& mu, const BitVec& x);
int sugeno_eval_binary(const ThresholdCapacity& mu, const BitVec& x);
int sugeno_eval_binary(const ThresholdCapacity& mu, const PolarizedVector& x);
int sugeno_eval_binary(const CardinalityCapacity& mu, const BitVec& x);
Rational sugeno_eval_binary(const NormalizedMatchCapacity& mu, const BitVec& x);
Rational sugeno_eval_binary(const NormalizedMatchCapacity& mu, const PolarizedVector& x);
int sugeno_eval_binary(const WeightedThresholdCapacity& mu, const BitVec& x);

/// Qualitative Mobius transform: keeps mu(A) where it strictly exceeds every
/// proper subset's value. Ground set capped at 20.
FocalFamily mobius_transform(const ExplicitCapacity& mu);

/// Closed-form focal family of a threshold capacity: all tau-subsets of
/// Lambda, weight 1, without materializing.
FocalFamily focal_family(const ThresholdCapacity& mu);

/// Evaluation through the focal representation only. For an implicit family
/// this is the tau-th largest coordinate of x restricted to Lambda (O(n)),
/// never an enumeration.
double sugeno_eval_focal(const FocalFamily& fam, std::span<const double> x);
double sugeno_eval_focal(const FocalFamily& fam, const BitVec& x);

/// Conjugate capacity mu^c(B) = 1 - mu(complement of B).
ExplicitCapacity conjugate(const ExplicitCapacity& mu);

/// For threshold capacities the conjugate stays in the family:
/// (Lambda, tau) -> (Lambda, n - tau + 1).
ThresholdCapacity conjugate(const ThresholdCapacity& mu);

}  // namespace sugenn
