#pragma once

#include "noise_lattice/ntba.hpp"
#include "noise_lattice/random.hpp"
#include "noise_lattice/sigma.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace noise_lattice {

template <class Scalar>
struct ChaosResult {
  Subspace<Scalar> h1;
  bool classical = false;
  bool black = false;
  /// sigma-field generated by the first chaos.
  SigmaField generated;
};

namespace detail {

/// Shrinks the columns of `kernel` to those f with f = Q_x f + Q_x' f.
template <class Scalar>
Mat<Scalar> impose_split(const ProbSpace<Scalar>& space, const SigmaField& x, const SigmaField& xc,
                         const Mat<Scalar>& kernel) {
  Mat<Scalar> residual(kernel.rows(), kernel.cols());
  for (Eigen::Index k = 0; k < kernel.cols(); ++k) {
    const RV<Scalar> f = kernel.col(k);
    residual.col(k) = f - cond_exp(space, x, f) - cond_exp(space, xc, f);
  }
  return kernel * nullspace(residual);
}

template <class Scalar>
ChaosResult<Scalar> finish_chaos(const Ntba<Scalar>& b, const Mat<Scalar>& kernel) {
  ChaosResult<Scalar> r{span(b.space_ptr(), kernel), false, false, {}};
  r.generated = sigma_of(r.h1);
  r.classical = r.generated.is_discrete();
  r.black = r.h1.dim() == 0 && b.space().size() > 1;
  return r;
}

}  // namespace detail

/// First chaos: all f with f = Q_x f + Q_x' f for every x in B. The
/// constraint for x = 0 forces E f = 0; the remaining constraints are
/// imposed for the co-atoms only.
template <class Scalar>
ChaosResult<Scalar> first_chaos(const Ntba<Scalar>& b) {
  const std::size_t n = b.space().size();
  const auto nn = static_cast<Eigen::Index>(n);
  Mat<Scalar> kernel = detail::impose_split(b.space(), SigmaField::trivial(n), SigmaField::discrete(n),
                                            Mat<Scalar>(Mat<Scalar>::Identity(nn, nn)));
  for (std::size_t i = 0; i < b.atom_count() && kernel.cols() > 0; ++i)
    kernel = detail::impose_split(b.space(), b.realize(b.coatom(i)), b.atoms()[i], kernel);
  return detail::finish_chaos(b, kernel);
}

/// Same subspace computed from every element of B; used to audit first_chaos.
template <class Scalar>
ChaosResult<Scalar> first_chaos_all_elements(const Ntba<Scalar>& b) {
  const auto nn = static_cast<Eigen::Index>(b.space().size());
  const auto elems = b.realize_all();
  Mat<Scalar> kernel = Mat<Scalar>::Identity(nn, nn);
  for (AtomSet e = 0; e < b.element_count() && kernel.cols() > 0; ++e)
    kernel = detail::impose_split(b.space(), elems[e], elems[b.complement(e)], kernel);
  return detail::finish_chaos(b, kernel);
}

/// {f : f = Q_x f + Q_x' f} for one element x.
template <class Scalar>
Subspace<Scalar> split_subspace(const Ntba<Scalar>& b, AtomSet e) {
  const auto nn = static_cast<Eigen::Index>(b.space().size());
  return span(b.space_ptr(), detail::impose_split(b.space(), b.realize(e), b.realize(b.complement(e)),
                                                  Mat<Scalar>(Mat<Scalar>::Identity(nn, nn))));
}

// ---------------------------------------------------------------------------

struct MembershipReport {
  bool verdict = false;
  bool cond_a = false;  ///< f = Q_x f + Q_x' f for all x
  bool cond_b = false;  ///< Q_{x v y} f = Q_x f + Q_y f whenever x ^ y = 0
  bool cond_c = false;  ///< Q_{x v y} f + Q_{x ^ y} f = Q_x f + Q_y f for all x, y, and Q_0 f = 0
  /// First element (or pair) where the verdict fails, as atom sets.
  std::vector<AtomSet> witness;
};

/// Evaluates the three equivalent descriptions of first-chaos membership
/// independently. Throws ConsistencyError if they disagree.
template <class Scalar>
MembershipReport chaos_membership(const Ntba<Scalar>& b, const RV<Scalar>& f) {
  require_on_space(b.space(), f);
  const auto elems = b.realize_all();
  std::vector<RV<Scalar>> q(elems.size());
  for (AtomSet e = 0; e < elems.size(); ++e) q[e] = cond_exp(b.space(), elems[e], f);

  MembershipReport r;
  std::vector<AtomSet> wa, wb, wc;
  r.cond_a = true;
  for (AtomSet e = 0; e < elems.size() && r.cond_a; ++e)
    if (!equal_vec<Scalar>(f, RV<Scalar>(q[e] + q[b.complement(e)]))) r.cond_a = false, wa = {e};

  r.cond_b = true;
  for (AtomSet x = 0; x < elems.size() && r.cond_b; ++x)
    for (AtomSet y = 0; y < elems.size() && r.cond_b; ++y) {
      if (!meet(elems[x], elems[y]).is_trivial()) continue;
      const SigmaField xy = join(elems[x], elems[y]);
      if (!equal_vec<Scalar>(cond_exp(b.space(), xy, f), RV<Scalar>(q[x] + q[y]))) r.cond_b = false, wb = {x, y};
    }

  r.cond_c = is_zero_vec<Scalar>(q[0]);
  if (!r.cond_c) wc = {0};
  for (AtomSet x = 0; x < elems.size() && r.cond_c; ++x)
    for (AtomSet y = x + 1; y < elems.size() && r.cond_c; ++y) {
      const RV<Scalar> lhs = cond_exp(b.space(), join(elems[x], elems[y]), f) +
                             cond_exp(b.space(), meet(elems[x], elems[y]), f);
      if (!equal_vec<Scalar>(lhs, RV<Scalar>(q[x] + q[y]))) r.cond_c = false, wc = {x, y};
    }

  if (r.cond_a != r.cond_b || r.cond_b != r.cond_c)
    throw ConsistencyError("first-chaos membership conditions disagree");
  r.verdict = r.cond_a;
  if (!r.verdict) r.witness = wa;
  return r;
}

// ---------------------------------------------------------------------------

struct SplitResult {
  bool found = false;
  /// Elements covering 1 with every ||Q_x f|| <= eps (when found).
  std::vector<AtomSet> elements;
  /// Smallest achievable max_i ||Q_{x_i} f|| over the searched splits.
  double best_max_norm = 0.0;
};

inline constexpr std::size_t kExhaustiveSplitAtoms = 12;

/// Looks for x_1 v ... v x_n = 1 with all ||Q_{x_i} f|| <= eps, the x_i
/// being the groups of a partition of the atom set. Exhaustive (coarsest
/// witness first) up to 12 atoms, seeded simulated annealing above.
template <class Scalar>
SplitResult atomless_split(const Ntba<Scalar>& b, const RV<Scalar>& f, double eps, std::uint64_t seed = 1) {
  require_on_space(b.space(), f);
  if (!(eps > 0)) throw PreconditionError("eps must be positive");
  if (!ScalarTraits<Scalar>::is_zero(expectation(b.space(), f)))
    throw PreconditionError("atomless split needs E f = 0");
  const std::size_t n = b.atom_count();
  const Scalar eps2 = scalar_from_rational<Scalar>(rational_from_double(eps)) *
                      scalar_from_rational<Scalar>(rational_from_double(eps));

  std::map<AtomSet, Scalar> cache;
  auto sq = [&](AtomSet e) -> const Scalar& {
    auto it = cache.find(e);
    if (it == cache.end()) it = cache.emplace(e, norm_squared(b.space(), cond_exp(b.space(), b.realize(e), f))).first;
    return it->second;
  };
  auto to_double = [](const Scalar& s) { return std::sqrt(ScalarTraits<Scalar>::to_double(s)); };
  auto groups_of = [&](const std::vector<std::size_t>& label, std::size_t k) {
    std::vector<AtomSet> g(k, 0);
    for (std::size_t i = 0; i < n; ++i) g[label[i]] |= AtomSet{1} << i;
    return g;
  };

  SplitResult r;
  if (n == 0) {
    r.found = true;
    r.elements = {0};
    return r;
  }
  std::optional<Scalar> best;

  if (n <= kExhaustiveSplitAtoms) {
    // restricted growth strings with exactly k blocks, k ascending
    for (std::size_t k = 1; k <= n; ++k) {
      std::vector<std::size_t> label(n, 0), prefix_max(n, 0);
      bool more = true;
      while (more) {
        if (prefix_max[n - 1] + 1 == k) {
          const auto groups = groups_of(label, k);
          Scalar worst(0);
          for (AtomSet g : groups) worst = std::max(worst, sq(g));
          if (!best || worst < *best) best = worst;
          if (!r.found && ScalarTraits<Scalar>::less_equal(worst, eps2)) {
            r.found = true;
            r.elements = groups;
          }
        }
        // next restricted growth string
        more = false;
        for (std::size_t i = n; i-- > 1;) {
          const std::size_t cap = std::min(prefix_max[i - 1] + 1, k - 1);
          if (label[i] < cap) {
            ++label[i];
            prefix_max[i] = std::max(prefix_max[i - 1], label[i]);
            for (std::size_t j = i + 1; j < n; ++j) label[j] = 0, prefix_max[j] = prefix_max[i];
            more = true;
            break;
          }
        }
      }
      if (r.found) break;
    }
    if (r.found) {
      Scalar worst(0);
      for (AtomSet g : r.elements) worst = std::max(worst, sq(g));
      r.best_max_norm = to_double(worst);
    } else {
      r.best_max_norm = to_double(*best);
    }
    return r;
  }

  // annealing over labelings with up to n groups
  Rng rng(seed, 0xa11ea1);
  std::vector<std::size_t> label(n);
  for (auto& l : label) l = rng.below(n);
  auto cost = [&](const std::vector<std::size_t>& l) {
    std::vector<AtomSet> g(n, 0);
    for (std::size_t i = 0; i < n; ++i) g[l[i]] |= AtomSet{1} << i;
    Scalar worst(0);
    for (AtomSet x : g)
      if (x) worst = std::max(worst, sq(x));
    return worst;
  };
  Scalar current = cost(label);
  best = current;
  std::vector<std::size_t> best_label = label;
  double temperature = 1.0;
  for (int step = 0; step < 20000 && !ScalarTraits<Scalar>::less_equal(*best, eps2); ++step, temperature *= 0.9995) {
    auto trial = label;
    trial[rng.below(n)] = rng.below(n);
    const Scalar c = cost(trial);
    const double delta = ScalarTraits<Scalar>::to_double(c) - ScalarTraits<Scalar>::to_double(current);
    if (delta <= 0 || rng.uniform() < std::exp(-delta / temperature)) {
      label = trial;
      current = c;
      if (current < *best) best = current, best_label = label;
    }
  }
  r.best_max_norm = to_double(*best);
  if (ScalarTraits<Scalar>::less_equal(*best, eps2)) {
    r.found = true;
    for (AtomSet g : groups_of(best_label, n))
      if (g) r.elements.push_back(g);
  }
  return r;
}

/// Up(Down(x)) = x: the images Q_x h1 generate exactly x.
template <class Scalar>
bool up_down_roundtrip(const Ntba<Scalar>& b, const ChaosResult<Scalar>& chaos, AtomSet e) {
  const SigmaField x = b.realize(e);
  Mat<Scalar> images(chaos.h1.basis().rows(), chaos.h1.dim());
  for (Eigen::Index k = 0; k < chaos.h1.dim(); ++k)
    images.col(k) = cond_exp(b.space(), x, RV<Scalar>(chaos.h1.basis().col(k)));
  return sigma_of_vectors<Scalar>(b.space().size(), images) == x;
}

}  // namespace noise_lattice
