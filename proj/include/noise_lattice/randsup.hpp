#pragma once

#include "noise_lattice/ntba.hpp"
#include "noise_lattice/random.hpp"

#include <cstdint>
#include <vector>

namespace noise_lattice::randsup {

/// Finest level is stored as a 64-bit atom mask.
inline constexpr int kMaxLevelAtoms = 64;

/// Levels b_1 c b_2 c ... given by atom counts; atom j of level k splits
/// into a contiguous group of atoms of level k+1.
struct SampleConfig {
  std::vector<int> atom_counts;
  std::vector<double> ps;
  std::uint64_t seed = 0;
  std::uint64_t trials = 10000;
  /// Exponents c_n for the (1-p_n)^{c_n} report; empty means c_n = n^2.
  std::vector<double> c;
  /// Test hook: every sampled element is 0.
  bool force_zero = false;
};

/// Atom counts 2^min(k,6) for levels k = 1..ps.size().
SampleConfig make_config(std::vector<double> ps, std::uint64_t trials, std::uint64_t seed);

/// Throws DomainError on p outside (0,1), bad counts, or (when
/// `need_summable`) sum p >= 1.
void validate(const SampleConfig& cfg, bool need_summable);

/// Each of `atom_count` atoms included independently with probability p.
AtomSet sample_element(int atom_count, double p, Rng& rng);

/// Element of `b` built from a sampled atom subset.
template <class Scalar>
AtomSet sample_element(const Ntba<Scalar>& b, double p, Rng& rng) {
  return sample_element(b.atom_count(), p, rng);
}

/// Image of a level-k atom set at the finest level.
AtomSet refine_to_finest(const SampleConfig& cfg, std::size_t level, AtomSet e);

/// Y_1 <= Y_2 <= ... for one trial, as finest-level masks. Trial t always
/// draws from stream (seed, t).
std::vector<AtomSet> trajectory(const SampleConfig& cfg, std::uint64_t trial);

std::vector<std::vector<AtomSet>> run_join_process(const SampleConfig& cfg);

struct UnionBoundRow {
  std::size_t n = 0;
  std::uint64_t hits = 0;
  double estimate = 0, exact = 0, bound = 0, sigma = 0;
  bool below_bound = false, near_exact = false;
};

struct UnionBoundReport {
  int atom = 0;
  std::uint64_t trials = 0;
  bool monotone = true;
  std::vector<UnionBoundRow> rows;  // one per prefix length n
  bool pass = false;
};

/// Pr[a <= Y_n] by Monte Carlo against 1 - prod(1-p_k) and sum p_k, with
/// a a finest-level atom.
UnionBoundReport union_bound_report(const SampleConfig& cfg, int atom = 0);

struct ChiSquareReport {
  int atoms = 0;
  double p = 0;
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> counts;  // indexed by atom mask
  std::vector<double> expected;
  double statistic = 0;
  int dof = 0;
  double p_value = 0;
  bool pass = false;
};

/// Goodness of fit of sampled masks to p^k (1-p)^(n-k); pass iff p-value > 0.001.
ChiSquareReport chi_square_law(int atoms, double p, std::uint64_t trials, std::uint64_t seed);

/// (1 - p_n)^{c_n}, n = 1..levels.
std::vector<double> decay_sequence(const SampleConfig& cfg);

}  // namespace noise_lattice::randsup
