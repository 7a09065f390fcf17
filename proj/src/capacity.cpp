#include "sugenn/capacity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <utility>

namespace sugenn {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;  // exact at every step
    if (r > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(r);
}

namespace {

std::uint32_t mask_of(const BitVec& subset) {
  if (subset.size() > 32)
    throw ground_set_too_large("subset-as-mask conversion limited to 32 positions");
  return subset.size() == 0 ? 0u
                            : static_cast<std::uint32_t>(subset.words()[0]);
}

BitVec mask_to_bits(std::uint32_t mask, std::size_t m) {
  BitVec v(m);
  while (mask) {
    const int b = std::countr_zero(mask);
    v.set(static_cast<std::size_t>(b));
    mask &= mask - 1;
  }
  return v;
}

void check_enumeration_size(std::size_t m) {
  if (m > 20)
    throw ground_set_too_large("subset enumeration limited to 20 criteria, got " +
                               std::to_string(m));
}

}  // namespace

ExplicitCapacity::ExplicitCapacity(std::size_t m, std::vector<double> table)
    : m_(m), table_(std::move(table)) {
  if (m_ == 0 || m_ > kMaxGroundSet)
    throw ground_set_too_large("ExplicitCapacity: ground set size " +
                               std::to_string(m_) + " outside [1, " +
                               std::to_string(kMaxGroundSet) + "]");
  const std::size_t expected = std::size_t{1} << m_;
  if (table_.size() != expected)
    throw invalid_capacity("ExplicitCapacity: table has " +
                           std::to_string(table_.size()) + " entries, expected " +
                           std::to_string(expected));
  if (table_[0] != 0.0) throw invalid_capacity("ExplicitCapacity: mu(empty) must be 0");
  if (table_[expected - 1] != 1.0)
    throw invalid_capacity("ExplicitCapacity: mu(full set) must be 1");
  for (double v : table_)
    if (!(v >= 0.0 && v <= 1.0))
      throw invalid_capacity("ExplicitCapacity: values must lie in [0,1]");
  for (std::uint32_t mask = 1; mask < expected; ++mask) {
    std::uint32_t rest = mask;
    while (rest) {
      const std::uint32_t bit = rest & (~rest + 1);
      if (table_[mask] < table_[mask ^ bit])
        throw invalid_capacity("ExplicitCapacity: not monotone at subset " +
                               std::to_string(mask));
      rest ^= bit;
    }
  }
}

double ExplicitCapacity::value(const BitVec& subset) const {
  if (subset.size() != m_)
    throw dimension_error("ExplicitCapacity: subset width mismatch");
  return table_[mask_of(subset)];
}

ThresholdCapacity::ThresholdCapacity(LiteralSet lambda, int tau)
    : lambda_(std::move(lambda)), tau_(tau) {
  const std::size_t n = lambda_.base_dimension();
  if (lambda_.count() != n)
    throw invalid_capacity("ThresholdCapacity: Lambda must pick one literal per coordinate");
  if (tau_ < 1 || static_cast<std::size_t>(tau_) > n)
    throw invalid_capacity("ThresholdCapacity: tau " + std::to_string(tau_) +
                           " outside [1, " + std::to_string(n) + "]");
}

ExplicitCapacity ThresholdCapacity::materialize() const {
  const std::size_t m = ground_set_size();
  if (m > ExplicitCapacity::kMaxGroundSet)
    throw ground_set_too_large("ThresholdCapacity::materialize: 2n = " +
                               std::to_string(m) + " exceeds table guard");
  const std::uint32_t lambda_mask = mask_of(lambda_.members());
  std::vector<double> table(std::size_t{1} << m);
  for (std::uint32_t mask = 0; mask < table.size(); ++mask)
    table[mask] = std::popcount(mask & lambda_mask) >= tau_ ? 1.0 : 0.0;
  return ExplicitCapacity(m, std::move(table));
}

CardinalityCapacity::CardinalityCapacity(std::size_t n, int tau) : n_(n), tau_(tau) {
  if (n_ == 0) throw invalid_capacity("CardinalityCapacity: empty ground set");
  if (tau_ < 1 || static_cast<std::size_t>(tau_) > n_)
    throw invalid_capacity("CardinalityCapacity: tau " + std::to_string(tau_) +
                           " outside [1, " + std::to_string(n_) + "]");
}

ExplicitCapacity CardinalityCapacity::materialize() const {
  if (n_ > ExplicitCapacity::kMaxGroundSet)
    throw ground_set_too_large("CardinalityCapacity::materialize: n too large");
  std::vector<double> table(std::size_t{1} << n_);
  for (std::uint32_t mask = 0; mask < table.size(); ++mask)
    table[mask] = std::popcount(mask) >= tau_ ? 1.0 : 0.0;
  return ExplicitCapacity(n_, std::move(table));
}

NormalizedMatchCapacity::NormalizedMatchCapacity(LiteralSet lambda)
    : lambda_(std::move(lambda)) {
  if (lambda_.count() != lambda_.base_dimension())
    throw invalid_capacity(
        "NormalizedMatchCapacity: Lambda must pick one literal per coordinate");
}

ExplicitCapacity NormalizedMatchCapacity::materialize() const {
  const std::size_t m = ground_set_size();
  if (m > ExplicitCapacity::kMaxGroundSet)
    throw ground_set_too_large("NormalizedMatchCapacity::materialize: 2n too large");
  const std::uint32_t lambda_mask = mask_of(lambda_.members());
  const double n = static_cast<double>(base_dimension());
  std::vector<double> table(std::size_t{1} << m);
  for (std::uint32_t mask = 0; mask < table.size(); ++mask)
    table[mask] = static_cast<double>(std::popcount(mask & lambda_mask)) / n;
  return ExplicitCapacity(m, std::move(table));
}

WeightedThresholdCapacity::WeightedThresholdCapacity(std::vector<double> weights,
                                                     double theta)
    : weights_(std::move(weights)), theta_(theta) {
  if (weights_.empty())
    throw invalid_capacity("WeightedThresholdCapacity: no weights");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0))
      throw invalid_capacity("WeightedThresholdCapacity: weights must be nonnegative");
    total += w;
  }
  if (!(theta_ > 0.0))
    throw invalid_capacity("WeightedThresholdCapacity: theta must be positive");
  if (theta_ > total)
    throw invalid_capacity(
        "WeightedThresholdCapacity: theta exceeds the total weight, mu(full) would be 0");
}

int WeightedThresholdCapacity::value(const BitVec& subset) const {
  if (subset.size() != weights_.size())
    throw dimension_error("WeightedThresholdCapacity: subset width mismatch");
  double sum = 0.0;
  subset.for_each_set([&](std::size_t i) { sum += weights_[i]; });
  return sum >= theta_ ? 1 : 0;
}

int WeightedThresholdCapacity::value(std::uint32_t subset_mask) const {
  double sum = 0.0;
  std::uint32_t rest = subset_mask;
  while (rest) {
    sum += weights_[static_cast<std::size_t>(std::countr_zero(rest))];
    rest &= rest - 1;
  }
  return sum >= theta_ ? 1 : 0;
}

std::vector<BitVec> WeightedThresholdCapacity::focal_sets() const {
  const std::size_t n = weights_.size();
  check_enumeration_size(n);
  std::vector<BitVec> out;
  const std::uint32_t full = static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (!value(mask)) continue;
    bool minimal = true;
    std::uint32_t rest = mask;
    while (rest && minimal) {
      const std::uint32_t bit = rest & (~rest + 1);
      if (value(mask ^ bit)) minimal = false;
      rest ^= bit;
    }
    if (minimal) out.push_back(mask_to_bits(mask, n));
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

ExplicitCapacity WeightedThresholdCapacity::materialize() const {
  const std::size_t n = weights_.size();
  if (n > ExplicitCapacity::kMaxGroundSet)
    throw ground_set_too_large("WeightedThresholdCapacity::materialize: n too large");
  std::vector<double> table(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < table.size(); ++mask)
    table[mask] = value(mask) ? 1.0 : 0.0;
  return ExplicitCapacity(n, std::move(table));
}

FocalFamily FocalFamily::explicit_family(std::size_t ground_set_size,
                                         std::vector<Element> elements) {
  for (const Element& e : elements) {
    if (e.set.size() != ground_set_size)
      throw dimension_error("FocalFamily: focal set width mismatch");
    if (!(e.weight > 0.0 && e.weight <= 1.0))
      throw invalid_capacity("FocalFamily: focal weights must lie in (0,1]");
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = 0; j < elements.size(); ++j) {
      if (i == j) continue;
      if (elements[i].set == elements[j].set)
        throw invalid_capacity("FocalFamily: duplicate focal set");
      if (elements[i].set.is_subset_of(elements[j].set) &&
          elements[j].weight <= elements[i].weight)
        throw invalid_capacity(
            "FocalFamily: focal superset must carry a strictly larger weight");
    }
  }
  std::sort(elements.begin(), elements.end(),
            [](const Element& a, const Element& b) { return lex_less(a.set, b.set); });
  FocalFamily fam;
  fam.implicit_ = false;
  fam.ground_set_size_ = ground_set_size;
  fam.elements_ = std::move(elements);
  return fam;
}

FocalFamily FocalFamily::explicit_presorted(std::size_t ground_set_size,
                                            std::vector<Element> elements) {
  std::sort(elements.begin(), elements.end(),
            [](const Element& a, const Element& b) { return lex_less(a.set, b.set); });
  FocalFamily fam;
  fam.implicit_ = false;
  fam.ground_set_size_ = ground_set_size;
  fam.elements_ = std::move(elements);
  return fam;
}

FocalFamily FocalFamily::choose_tau(LiteralSet lambda, int tau) {
  if (tau < 1 || static_cast<std::size_t>(tau) > lambda.count())
    throw invalid_capacity("FocalFamily: tau outside [1, |Lambda|]");
  FocalFamily fam;
  fam.implicit_ = true;
  fam.ground_set_size_ = 2 * lambda.base_dimension();
  fam.lambda_ = std::move(lambda);
  fam.tau_ = tau;
  return fam;
}

std::uint64_t FocalFamily::count() const {
  if (!implicit_) return elements_.size();
  return binomial(lambda_.count(), static_cast<std::uint64_t>(tau_));
}

const std::vector<FocalFamily::Element>& FocalFamily::elements() const {
  if (implicit_)
    throw error("FocalFamily: implicit family has no explicit element list");
  return elements_;
}

const LiteralSet& FocalFamily::lambda() const {
  if (!implicit_) throw error("FocalFamily: explicit family has no Lambda");
  return lambda_;
}

int FocalFamily::tau() const {
  if (!implicit_) throw error("FocalFamily: explicit family has no tau");
  return tau_;
}

std::vector<BitVec> FocalFamily::materialize(std::uint64_t limit) const {
  if (count() > limit)
    throw limit_exceeded("FocalFamily: " + std::to_string(count()) +
                         " focal sets exceed the limit of " + std::to_string(limit));
  std::vector<BitVec> out;
  out.reserve(static_cast<std::size_t>(count()));
  for_each([&](const BitVec& set, double) {
    out.push_back(set);
    return true;
  });
  return out;
}

double sugeno_eval_general(const std::function<double(std::uint32_t)>& mu,
                           std::size_t m, std::span<const double> x) {
  check_enumeration_size(m);
  if (x.size() != m)
    throw dimension_error("sugeno_eval_general: profile has " +
                          std::to_string(x.size()) + " values, ground set has " +
                          std::to_string(m));
  const std::size_t subsets = std::size_t{1} << m;
  // min_{i in A} x_i for every A, built from each mask's lowest bit.
  std::vector<double> min_x(subsets);
  min_x[0] = 1.0;  // empty min is the scale top; its term is mu(empty) = 0
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    const std::uint32_t low = mask & (~mask + 1);
    min_x[mask] =
        std::min(min_x[mask ^ low], x[static_cast<std::size_t>(std::countr_zero(low))]);
  }
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < subsets; ++mask)
    best = std::max(best, std::min(mu(mask), min_x[mask]));
  return best;
}

double sugeno_eval_general(const ExplicitCapacity& mu, std::span<const double> x) {
  return sugeno_eval_general(
      [&](std::uint32_t mask) { return mu.value(mask); }, mu.ground_set_size(), x);
}

double sugeno_eval_binary(const ExplicitCapacity& mu, const BitVec& x) {
  return mu.value(x);
}

int sugeno_eval_binary(const ThresholdCapacity& mu, const BitVec& x) {
  if (x.size() != mu.ground_set_size())
    throw dimension_error("sugeno_eval_binary: literal width mismatch");
  return mu.value(x);
}

int sugeno_eval_binary(const ThresholdCapacity& mu, const PolarizedVector& x) {
  return sugeno_eval_binary(mu, x.bits());
}

int sugeno_eval_binary(const CardinalityCapacity& mu, const BitVec& x) {
  if (x.size() != mu.ground_set_size())
    throw dimension_error("sugeno_eval_binary: ground set width mismatch");
  return mu.value(x);
}

Rational sugeno_eval_binary(const NormalizedMatchCapacity& mu, const BitVec& x) {
  if (x.size() != mu.ground_set_size())
    throw dimension_error("sugeno_eval_binary: literal width mismatch");
  return mu.value(x);
}

Rational sugeno_eval_binary(const NormalizedMatchCapacity& mu, const PolarizedVector& x) {
  return sugeno_eval_binary(mu, x.bits());
}

int sugeno_eval_binary(const WeightedThresholdCapacity& mu, const BitVec& x) {
  return mu.value(x);
}

FocalFamily mobius_transform(const ExplicitCapacity& mu) {
  const std::size_t m = mu.ground_set_size();
  check_enumeration_size(m);
  const std::size_t subsets = std::size_t{1} << m;
  // best[A] = max over B subseteq A of mu(B); focal iff mu strictly beats
  // every proper subset.
  std::vector<double> best(subsets);
  std::vector<FocalFamily::Element> focal;
  best[0] = mu.value(0);
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    double proper = 0.0;
    std::uint32_t rest = mask;
    while (rest) {
      const std::uint32_t bit = rest & (~rest + 1);
      proper = std::max(proper, best[mask ^ bit]);
      rest ^= bit;
    }
    const double v = mu.value(mask);
    if (v > proper) focal.push_back({mask_to_bits(mask, m), v});
    best[mask] = std::max(v, proper);
  }
  // Minimality and uniqueness hold by construction; skip the pairwise check.
  return FocalFamily::explicit_presorted(m, std::move(focal));
}

FocalFamily focal_family(const ThresholdCapacity& mu) {
  return FocalFamily::choose_tau(mu.lambda(), mu.tau());
}

double sugeno_eval_focal(const FocalFamily& fam, std::span<const double> x) {
  if (x.size() != fam.ground_set_size())
    throw dimension_error("sugeno_eval_focal: profile width mismatch");
  if (fam.is_implicit()) {
    // All tau-subsets of Lambda carry weight 1, so the max-min collapses to
    // the tau-th largest coordinate of x restricted to Lambda.
    std::vector<double> vals;
    vals.reserve(fam.lambda().count());
    fam.lambda().members().for_each_set([&](std::size_t p) { vals.push_back(x[p]); });
    const std::size_t k = static_cast<std::size_t>(fam.tau()) - 1;
    std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(k),
                     vals.end(), std::greater<double>());
    return vals[k];
  }
  double best = 0.0;
  for (const auto& e : fam.elements()) {
    double term = e.weight;
    e.set.for_each_set([&](std::size_t p) { term = std::min(term, x[p]); });
    best = std::max(best, term);
  }
  return best;
}

double sugeno_eval_focal(const FocalFamily& fam, const BitVec& x) {
  if (x.size() != fam.ground_set_size())
    throw dimension_error("sugeno_eval_focal: profile width mismatch");
  if (fam.is_implicit())
    return intersection_count(x, fam.lambda().members()) >=
                   static_cast<std::size_t>(fam.tau())
               ? 1.0
               : 0.0;
  double best = 0.0;
  for (const auto& e : fam.elements())
    if (e.set.is_subset_of(x)) best = std::max(best, e.weight);
  return best;
}

ExplicitCapacity conjugate(const ExplicitCapacity& mu) {
  const std::uint32_t full = mu.full_mask();
  std::vector<double> table(mu.table().size());
  for (std::uint32_t mask = 0; mask <= full; ++mask)
    table[mask] = 1.0 - mu.value(full ^ mask);
  return ExplicitCapacity(mu.ground_set_size(), std::move(table));
}

ThresholdCapacity conjugate(const ThresholdCapacity& mu) {
  const int n = static_cast<int>(mu.base_dimension());
  return ThresholdCapacity(mu.lambda(), n - mu.tau() + 1);
}

}  // namespace sugenn
