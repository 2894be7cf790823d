#include "noise_lattice/randsup.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <bit>
#include <cmath>
#include <numeric>

namespace noise_lattice::randsup {

SampleConfig make_config(std::vector<double> ps, std::uint64_t trials, std::uint64_t seed) {
  SampleConfig cfg;
  for (std::size_t k = 1; k <= ps.size(); ++k) cfg.atom_counts.push_back(1 << std::min<std::size_t>(k, 6));
  cfg.ps = std::move(ps);
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

void validate(const SampleConfig& cfg, bool need_summable) {
  if (cfg.ps.empty()) throw DomainError("at least one level is needed");
  if (cfg.atom_counts.size() != cfg.ps.size()) throw DomainError("one atom count per level");
  if (cfg.trials == 0) throw DomainError("trials must be positive");
  for (double p : cfg.ps)
    if (!(p > 0 && p < 1)) throw DomainError("level probabilities must lie in (0,1)");
  for (std::size_t k = 0; k < cfg.atom_counts.size(); ++k) {
    const int a = cfg.atom_counts[k];
    if (a < 1 || a > kMaxLevelAtoms) throw CapacityError("atom counts must lie in [1, 64]");
    if (k > 0 && a % cfg.atom_counts[k - 1] != 0) throw DomainError("each level must refine the previous one");
  }
  if (!cfg.c.empty() && cfg.c.size() != cfg.ps.size()) throw DomainError("one exponent c_n per level");
  if (need_summable && std::accumulate(cfg.ps.begin(), cfg.ps.end(), 0.0) >= 1)
    throw DomainError("union bound needs sum of p_k < 1");
}

AtomSet sample_element(int atom_count, double p, Rng& rng) {
  if (!(p > 0 && p < 1)) throw DomainError("inclusion probability must lie in (0,1)");
  if (atom_count < 0 || atom_count > kMaxLevelAtoms) throw CapacityError("at most 64 atoms");
  AtomSet e = 0;
  for (int i = 0; i < atom_count; ++i)
    if (rng.uniform() < p) e |= AtomSet{1} << i;
  return e;
}

AtomSet refine_to_finest(const SampleConfig& cfg, std::size_t level, AtomSet e) {
  const int group = cfg.atom_counts.back() / cfg.atom_counts[level];
  const AtomSet block = group == 64 ? ~AtomSet{0} : (AtomSet{1} << group) - 1;
  AtomSet out = 0;
  for (int j = 0; j < cfg.atom_counts[level]; ++j)
    if ((e >> j) & 1) out |= block << (j * group);
  return out;
}

std::vector<AtomSet> trajectory(const SampleConfig& cfg, std::uint64_t trial) {
  Rng rng(cfg.seed, trial);
  std::vector<AtomSet> ys;
  ys.reserve(cfg.ps.size());
  AtomSet y = 0;
  for (std::size_t k = 0; k < cfg.ps.size(); ++k) {
    AtomSet x = sample_element(cfg.atom_counts[k], cfg.ps[k], rng);
    if (cfg.force_zero) x = 0;
    y |= refine_to_finest(cfg, k, x);
    ys.push_back(y);
  }
  return ys;
}

std::vector<std::vector<AtomSet>> run_join_process(const SampleConfig& cfg) {
  validate(cfg, false);
  std::vector<std::vector<AtomSet>> out;
  out.reserve(cfg.trials);
  for (std::uint64_t t = 0; t < cfg.trials; ++t) out.push_back(trajectory(cfg, t));
  return out;
}

UnionBoundReport union_bound_report(const SampleConfig& cfg, int atom) {
  validate(cfg, true);
  if (atom < 0 || atom >= cfg.atom_counts.back()) throw DomainError("atom index out of range");
  UnionBoundReport r;
  r.atom = atom;
  r.trials = cfg.trials;
  const std::size_t levels = cfg.ps.size();
  std::vector<std::uint64_t> hits(levels, 0);
  const AtomSet a = AtomSet{1} << atom;
  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    const auto ys = trajectory(cfg, t);
    for (std::size_t n = 0; n < levels; ++n) {
      if (n > 0 && (ys[n - 1] & ~ys[n]) != 0) r.monotone = false;
      if (ys[n] & a) ++hits[n];
    }
  }
  // 1 - prod(1 - p) can round above sum p when one term dominates
  constexpr double kBoundSlack = 1e-12;
  double miss = 1, bound = 0;
  const double trials = static_cast<double>(cfg.trials);
  r.pass = r.monotone;
  for (std::size_t n = 0; n < levels; ++n) {
    miss *= 1 - cfg.ps[n];
    bound += cfg.ps[n];
    UnionBoundRow row;
    row.n = n + 1;
    row.hits = hits[n];
    row.estimate = static_cast<double>(hits[n]) / trials;
    row.exact = 1 - miss;
    row.bound = bound;
    row.sigma = std::sqrt(row.exact * (1 - row.exact) / trials);
    row.below_bound = row.estimate <= row.bound + 3 * row.sigma;
    row.near_exact = std::abs(row.estimate - row.exact) <= 3 * row.sigma;
    r.pass = r.pass && row.below_bound && row.near_exact && row.exact <= row.bound + kBoundSlack;
    r.rows.push_back(row);
  }
  return r;
}

ChiSquareReport chi_square_law(int atoms, double p, std::uint64_t trials, std::uint64_t seed) {
  if (atoms < 1 || atoms > 16) throw CapacityError("chi-square law check supports 1..16 atoms");
  if (trials == 0) throw DomainError("trials must be positive");
  ChiSquareReport r;
  r.atoms = atoms;
  r.p = p;
  r.trials = trials;
  const std::size_t cells = std::size_t{1} << atoms;
  r.counts.assign(cells, 0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(seed, t);
    ++r.counts[sample_element(atoms, p, rng)];
  }
  for (std::size_t m = 0; m < cells; ++m) {
    const int k = std::popcount(m);
    const double e = static_cast<double>(trials) * std::pow(p, k) * std::pow(1 - p, atoms - k);
    r.expected.push_back(e);
    const double d = static_cast<double>(r.counts[m]) - e;
    r.statistic += d * d / e;
  }
  r.dof = static_cast<int>(cells) - 1;
  r.p_value = boost::math::gamma_q(r.dof / 2.0, r.statistic / 2.0);
  r.pass = r.p_value > 0.001;
  return r;
}

std::vector<double> decay_sequence(const SampleConfig& cfg) {
  std::vector<double> out;
  for (std::size_t n = 1; n <= cfg.ps.size(); ++n) {
    const double c = cfg.c.empty() ? static_cast<double>(n * n) : cfg.c[n - 1];
    out.push_back(std::pow(1 - cfg.ps[n - 1], c));
  }
  return out;
}

}  // namespace noise_lattice::randsup
