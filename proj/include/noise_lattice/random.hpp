#pragma once

#include "noise_lattice/finmeas.hpp"
#include "noise_lattice/sigma_field.hpp"

#include <cstdint>
#include <numeric>
#include <vector>

namespace noise_lattice {

/// SplitMix64 finalizer; also used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Small splittable generator: one stream per (seed, stream id). Output is
/// identical on every platform, unlike the std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : state_(mix64(seed ^ mix64(stream + 0x5851f42d4c957f2dULL))) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), rejection sampled.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t r;
    do r = next(); while (r >= limit);
    return r % n;
  }

  /// Uniform integer in [lo, hi].
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

  bool coin() { return (next() >> 63) != 0; }

  Rng split(std::uint64_t stream) { return Rng(next(), stream); }

 private:
  std::uint64_t state_;
};

/// Random partition of {0..n-1} into at most `max_blocks` blocks.
inline SigmaField random_partition(Rng& rng, std::size_t n, std::size_t max_blocks) {
  std::vector<std::size_t> labels(n);
  const std::size_t k = 1 + rng.below(std::max<std::size_t>(1, max_blocks));
  for (auto& l : labels) l = rng.below(k);
  return SigmaField::from_labels(labels);
}

/// Space of `n` outcomes with random (generally non-uniform) probabilities;
/// uniform with probability 1/4 so coincidental independence shows up too.
template <class Scalar>
SpacePtr<Scalar> random_space(Rng& rng, std::size_t n) {
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = "w" + std::to_string(i);
  Vec<Scalar> probs(static_cast<Eigen::Index>(n));
  if (rng.below(4) == 0) {
    probs.setConstant(Scalar(1) / Scalar(static_cast<long>(n)));
  } else {
    std::vector<long> w(n);
    for (auto& x : w) x = 1 + static_cast<long>(rng.below(6));
    const long total = std::accumulate(w.begin(), w.end(), 0L);
    if constexpr (ScalarTraits<Scalar>::exact) {
      for (std::size_t i = 0; i < n; ++i) probs[static_cast<Eigen::Index>(i)] = Rational(w[i], total);
    } else {
      for (std::size_t i = 0; i < n; ++i) probs[static_cast<Eigen::Index>(i)] = double(w[i]) / double(total);
    }
  }
  return std::make_shared<const ProbSpace<Scalar>>(std::move(ids), std::move(probs));
}

template <class Scalar>
RV<Scalar> random_rv(Rng& rng, std::size_t n) {
  RV<Scalar> f(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = Scalar(rng.between(-4, 4));
  return f;
}

}  // namespace noise_lattice
