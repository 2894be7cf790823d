#pragma once

#include "noise_lattice/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace noise_lattice::checks {

struct Options {
  std::uint64_t seed = 1;
  /// Randomized instances per suite.
  std::size_t cases = 50;
  /// Test hook: swap two outcome probabilities wherever a suite builds a
  /// product space, so independence-based suites must fail.
  bool inject_fault = false;
};

struct Suite {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  /// First failing case: seed, case index and the inputs needed to rebuild it.
  Json witness;
  bool passed() const { return failures == 0; }
};

// finmeas
template <class Scalar> Suite span_rank(const Options& o);
template <class Scalar> Suite product_isometry(const Options& o);
template <class Scalar> Suite walsh_orthonormal(const Options& o);
// sigma
template <class Scalar> Suite meet_intersection(const Options& o);
template <class Scalar> Suite independence_criterion(const Options& o);
template <class Scalar> Suite independent_lattice_identities(const Options& o);
template <class Scalar> Suite independent_join_decomposition(const Options& o);
template <class Scalar> Suite cond_exp_projection(const Options& o);
template <class Scalar> Suite sigma_round_trip(const Options& o);
// ntba
template <class Scalar> Suite ntba_validate(const Options& o);
template <class Scalar> Suite atom_coarsening_meets(const Options& o);
template <class Scalar> Suite parity_recoding(const Options& o);
// chaos
template <class Scalar> Suite chaos_superadditivity(const Options& o);
template <class Scalar> Suite chaos_membership_conditions(const Options& o);
template <class Scalar> Suite chaos_split_identity(const Options& o);
template <class Scalar> Suite chaos_additivity(const Options& o);
template <class Scalar> Suite finite_classical(const Options& o);
template <class Scalar> Suite up_down(const Options& o);
template <class Scalar> Suite presentation_invariance(const Options& o);
// spectrum
template <class Scalar> Suite level_one_chaos(const Options& o);
template <class Scalar> Suite spectral_identities(const Options& o);
template <class Scalar> Suite walsh_spectrum(const Options& o);
template <class Scalar> Suite recoding_spectrum(const Options& o);
template <class Scalar> Suite k_monotone(const Options& o);
template <class Scalar> Suite k_additivity(const Options& o);
// cofinite (symbolic, backend independent)
Suite cofinite_laws(const Options& o);
Suite cofinite_complements(const Options& o);
Suite cofinite_truncation(const Options& o);
Suite cofinite_limits(const Options& o);
// randsup
Suite randsup_reproducible(const Options& o);

/// Every suite above, in a fixed order.
template <class Scalar>
std::vector<Suite> run_all(const Options& o);

Json to_json(const Suite& s);

}  // namespace noise_lattice::checks
