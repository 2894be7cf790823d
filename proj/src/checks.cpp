#include "noise_lattice/checks.hpp"

#include "noise_lattice/chaos.hpp"
#include "noise_lattice/cofinite.hpp"
#include "noise_lattice/linalg.hpp"
#include "noise_lattice/randsup.hpp"
#include "noise_lattice/sigma.hpp"
#include "noise_lattice/spectrum.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>

namespace noise_lattice::checks {

namespace {

using Witness = std::optional<Json>;

std::uint64_t name_tag(const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

/// Runs `cases` independent cases, each with its own stream; exceptions count
/// as failures.
Suite run_cases(const std::string& name, const Options& o, std::size_t cases, const std::function<Witness(Rng&)>& body) {
  Suite s{name, cases, 0, nullptr};
  const std::uint64_t tag = name_tag(name);
  for (std::size_t i = 0; i < cases; ++i) {
    Rng rng(o.seed ^ tag, i);
    Witness w;
    try {
      w = body(rng);
    } catch (const std::exception& e) {
      w = Json{{"error", e.what()}};
    }
    if (!w) continue;
    if (s.failures++ == 0) {
      Json head{{"seed", o.seed}, {"case", i}};
      head.update(*w);
      s.witness = std::move(head);
    }
  }
  return s;
}

template <class Scalar>
bool eq(const Scalar& a, const Scalar& b) {
  return ScalarTraits<Scalar>::equal(a, b);
}

/// Swaps the first two outcomes with different probabilities.
template <class Scalar>
SpacePtr<Scalar> perturb(const SpacePtr<Scalar>& space, bool fault) {
  if (!fault) return space;
  Vec<Scalar> p = space->probs();
  for (Eigen::Index j = 1; j < p.size(); ++j)
    if (p[j] != p[0]) {
      std::swap(p[0], p[j]);
      return std::make_shared<const ProbSpace<Scalar>>(space->outcomes(), std::move(p));
    }
  return space;
}

template <class Scalar>
Json partitions_json(const ProbSpace<Scalar>& space, std::initializer_list<const SigmaField*> xs) {
  Json parts = Json::array();
  for (const auto* x : xs) parts.push_back(partition_to_json(*x));
  return Json{{"space", space_to_json(space)}, {"partitions", std::move(parts)}};
}

/// Plain Gaussian elimination on a row-major copy, independent of linalg.hpp.
template <class Scalar>
Eigen::Index elimination_rank(const Mat<Scalar>& m) {
  std::vector<std::vector<Scalar>> a(static_cast<std::size_t>(m.rows()), std::vector<Scalar>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  const std::size_t cols = static_cast<std::size_t>(m.cols());
  auto magnitude = [](const Scalar& v) { return std::abs(ScalarTraits<Scalar>::to_double(v)); };
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t best = r;
    for (std::size_t i = r; i < a.size(); ++i)
      if (magnitude(a[i][c]) > magnitude(a[best][c])) best = i;
    const bool zero = ScalarTraits<Scalar>::exact ? a[best][c] == 0 : magnitude(a[best][c]) < 1e-9;
    if (zero) continue;
    std::swap(a[r], a[best]);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      const Scalar f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return static_cast<Eigen::Index>(r);
}

/// Intersection through the kernel of [U, -V].
template <class Scalar>
Subspace<Scalar> stacked_intersection(const Subspace<Scalar>& u, const Subspace<Scalar>& v) {
  Mat<Scalar> m(u.basis().rows(), u.dim() + v.dim());
  m << u.basis(), -v.basis();
  const Mat<Scalar> k = nullspace(m);
  return span(u.space_ptr(), Mat<Scalar>(u.basis() * k.topRows(u.dim())));
}

template <class Scalar>
Ntba<Scalar> ntba_with_atoms(Rng& rng, std::size_t min_atoms, std::size_t max_outcomes = 64) {
  for (;;) {
    auto b = random_ntba<Scalar>(rng, max_outcomes);
    if (b.atom_count() >= min_atoms) return b;
  }
}

/// Random grouping of the atoms into nonempty atom sets.
std::vector<AtomSet> random_grouping(Rng& rng, std::size_t atoms) {
  const std::size_t groups = 1 + rng.below(atoms);
  std::vector<AtomSet> out(groups, 0);
  for (std::size_t i = 0; i < atoms; ++i) out[i < groups ? i : rng.below(groups)] |= AtomSet{1} << i;
  return out;
}

template <class Scalar>
RV<Scalar> random_in(Rng& rng, const Subspace<Scalar>& v) {
  RV<Scalar> f = RV<Scalar>::Zero(v.basis().rows());
  for (Eigen::Index k = 0; k < v.dim(); ++k) f += Scalar(rng.between(-3, 3)) * v.basis().col(k);
  return f;
}

template <class Scalar>
Json ntba_case(const Ntba<Scalar>& b) {
  return Json{{"ntba", ntba_to_json(b)}};
}

/// Constructed NTBAs: coordinate algebras on 1..5 signs and parity truncations with 1..4 y-atoms.
template <class Scalar>
std::vector<Ntba<Scalar>> constructed_ntbas() {
  std::vector<Ntba<Scalar>> out;
  for (int n = 1; n <= 5; ++n) out.push_back(mk_coordinate_ntba(mk_dyadic<Scalar>(n)));
  for (int n = 1; n <= 4; ++n) out.push_back(mk_parity_ntba<Scalar>(n));
  return out;
}

}  // namespace

Json to_json(const Suite& s) {
  Json j{{"name", s.name}, {"cases", s.cases}, {"failures", s.failures}, {"pass", s.passed()}};
  if (!s.passed()) j["witness"] = s.witness;
  return j;
}

// ---------------------------------------------------------------------------
// finmeas

template <class Scalar>
Suite span_rank(const Options& o) {
  return run_cases("span_rank", o, o.cases, [](Rng& rng) -> Witness {
    const std::size_t n = 2 + rng.below(7);
    auto space = random_space<Scalar>(rng, n);
    const std::size_t count = rng.below(7);
    std::vector<RV<Scalar>> vs;
    for (std::size_t i = 0; i < count; ++i) {
      if (i >= 2 && rng.coin())
        vs.push_back(RV<Scalar>(vs[rng.below(i)] - Scalar(rng.between(-2, 2)) * vs[rng.below(i)]));
      else
        vs.push_back(random_rv<Scalar>(rng, n));
    }
    Mat<Scalar> m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) m.col(static_cast<Eigen::Index>(i)) = vs[i];
    const auto dim = span(space, vs).dim();
    const auto oracle = elimination_rank<Scalar>(m.transpose());
    if (dim == oracle) return std::nullopt;
    return Json{{"span_dim", dim}, {"elimination_rank", oracle}, {"space", space_to_json(*space)}};
  });
}

template <class Scalar>
Suite product_isometry(const Options& o) {
  const bool fault = o.inject_fault;
  return run_cases("product_isometry", o, o.cases, [fault](Rng& rng) -> Witness {
    auto a = random_space<Scalar>(rng, 2 + rng.below(3));
    auto b = random_space<Scalar>(rng, 2 + rng.below(3));
    const auto prod = product(*a, *b);
    const auto space = perturb(prod.space, fault);
    const RV<Scalar> f = random_rv<Scalar>(rng, a->size()), g = random_rv<Scalar>(rng, a->size());
    const RV<Scalar> h = random_rv<Scalar>(rng, b->size()), k = random_rv<Scalar>(rng, b->size());
    const bool ok = eq(inner(*space, prod.embed_a(f), prod.embed_a(g)), inner(*a, f, g)) &&
                    eq(inner(*space, prod.embed_b(h), prod.embed_b(k)), inner(*b, h, k)) &&
                    eq(norm_squared(*space, RV<Scalar>(prod.embed_a(f).cwiseProduct(prod.embed_b(h)))),
                       Scalar(norm_squared(*a, f) * norm_squared(*b, h)));
    if (ok) return std::nullopt;
    return Json{{"a", space_to_json(*a)}, {"b", space_to_json(*b)}, {"product", space_to_json(*space)},
                {"f", vector_to_json(f)}, {"h", vector_to_json(h)}};
  });
}

template <class Scalar>
Suite walsh_orthonormal(const Options& o) {
  return run_cases("walsh_orthonormal", o, 6, [n = 0](Rng&) mutable -> Witness {
    ++n;
    auto space = mk_dyadic<Scalar>(n);
    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<RV<Scalar>> chars;
    for (std::uint64_t m = 0; m < count; ++m) chars.push_back(walsh(*space, m));
    for (std::uint64_t s = 0; s < count; ++s)
      for (std::uint64_t t = s; t < count; ++t)
        if (!eq(inner(*space, chars[s], chars[t]), Scalar(s == t ? 1 : 0))) return Json{{"n", n}, {"masks", {s, t}}};
    return std::nullopt;
  });
}

// ---------------------------------------------------------------------------
// sigma

template <class Scalar>
Suite meet_intersection(const Options& o) {
  return run_cases("meet_intersection", o, o.cases, [](Rng& rng) -> Witness {
    const std::size_t n = 2 + rng.below(7);
    auto space = random_space<Scalar>(rng, n);
    std::vector<SigmaField> xs(2 + rng.below(2));
    for (auto& x : xs) x = random_partition(rng, n, n);
    Subspace<Scalar> oracle = subspace_of(space, xs[0]);
    for (std::size_t i = 1; i < xs.size(); ++i) oracle = stacked_intersection(oracle, subspace_of(space, xs[i]));
    const auto lhs = subspace_of(space, inf_family(xs));
    if (same_subspace(lhs, oracle)) return std::nullopt;
    Json parts = Json::array();
    for (const auto& x : xs) parts.push_back(partition_to_json(x));
    return Json{{"space", space_to_json(*space)}, {"partitions", parts}, {"meet_dim", lhs.dim()}, {"intersection_dim", oracle.dim()}};
  });
}

template <class Scalar>
Suite independence_criterion(const Options& o) {
  const bool fault = o.inject_fault;
  Suite s = run_cases("independence_criterion", o, o.cases, [fault](Rng& rng) -> Witness {
    SpacePtr<Scalar> space;
    SigmaField x, y;
    bool by_construction = false;
    if (rng.coin()) {
      auto a = random_space<Scalar>(rng, 2 + rng.below(3));
      auto b = random_space<Scalar>(rng, 2 + rng.below(3));
      const auto prod = product(*a, *b);
      space = perturb(prod.space, fault);
      x = prod.embed_a(random_partition(rng, a->size(), a->size()));
      y = prod.embed_b(random_partition(rng, b->size(), b->size()));
      by_construction = true;
    } else {
      const std::size_t n = 2 + rng.below(7);
      space = random_space<Scalar>(rng, n);
      x = random_partition(rng, n, 4);
      y = random_partition(rng, n, 4);
    }
    const bool indep = independent(*space, x, y);
    const bool criterion = commutes(*space, x, y) && meet(x, y).is_trivial();
    if (indep == criterion && (!by_construction || indep)) return std::nullopt;
    Json w = partitions_json(*space, {&x, &y});
    w["independent"] = indep;
    w["commuting_and_meet_trivial"] = criterion;
    w["product_pair"] = by_construction;
    return w;
  });
  // uniform 3 points: {{1},{2,3}} and {{1,2},{3}} commute-fail and are dependent
  auto three = mk_uniform<Scalar>(3);
  const auto x = SigmaField::from_blocks(3, {{0}, {1, 2}}), y = SigmaField::from_blocks(3, {{0, 1}, {2}});
  ++s.cases;
  if (independent(*three, x, y) || commutes(*three, x, y) || !meet(x, y).is_trivial()) {
    if (s.failures++ == 0) s.witness = Json{{"three_point_witness", partitions_json(*three, {&x, &y})}};
  }
  return s;
}

template <class Scalar>
Suite independent_lattice_identities(const Options& o) {
  const bool fault = o.inject_fault;
  return run_cases("independent_lattice_identities", o, o.cases, [fault](Rng& rng) -> Witness {
    auto a = random_space<Scalar>(rng, 2 + rng.below(4));
    auto b = random_space<Scalar>(rng, 2 + rng.below(4));
    const auto prod = product(*a, *b);
    const auto space = perturb(prod.space, fault);
    const std::size_t na = a->size(), nb = b->size();
    const SigmaField xa = random_partition(rng, na, na), yb = random_partition(rng, nb, nb);
    const SigmaField x = prod.embed_a(xa), y = prod.embed_b(yb);
    auto below = [&](const SigmaField& top, std::size_t n, bool first) {
      const SigmaField c = meet(top, random_partition(rng, n, n));
      return first ? prod.embed_a(c) : prod.embed_b(c);
    };
    const SigmaField u1 = below(xa, na, true), u2 = below(xa, na, true);
    const SigmaField v1 = below(yb, nb, false), v2 = below(yb, nb, false);
    std::string failed;
    if (!independent(*space, x, y))
      failed = "x and y are not independent";
    else if (meet(join(u1, v1), join(u2, v2)) != join(meet(u1, u2), meet(v1, v2)))
      failed = "(u1 v v1) ^ (u2 v v2) != (u1 ^ u2) v (v1 ^ v2)";
    else if (meet(join(u1, v1), x) != u1)
      failed = "(u v v) ^ x != u";
    else if (meet(join(u1, v1), y) != v1)
      failed = "(u v v) ^ y != v";
    if (failed.empty()) return std::nullopt;
    Json w = partitions_json(*space, {&x, &y, &u1, &u2, &v1, &v2});
    w["failed"] = failed;
    return w;
  });
}

template <class Scalar>
Suite independent_join_decomposition(const Options& o) {
  const bool fault = o.inject_fault;
  return run_cases("independent_join_decomposition", o, o.cases, [fault](Rng& rng) -> Witness {
    auto a = random_space<Scalar>(rng, 2 + rng.below(4));
    auto b = random_space<Scalar>(rng, 2 + rng.below(4));
    const auto prod = product(*a, *b);
    const auto space = perturb(prod.space, fault);
    const SigmaField x = prod.embed_a(SigmaField::discrete(a->size()));
    const SigmaField y = prod.embed_b(SigmaField::discrete(b->size()));
    const SigmaField u = prod.embed_a(random_partition(rng, a->size(), a->size()));
    const SigmaField v = prod.embed_b(random_partition(rng, b->size(), b->size()));
    const SigmaField z = join(u, v);
    std::string failed;
    if (!independent(*space, x, y) || !join(x, y).is_discrete())
      failed = "x, y not an independent pair generating everything";
    else if (z != join(meet(x, z), meet(y, z)))
      failed = "z != (x ^ z) v (y ^ z)";
    if (failed.empty()) return std::nullopt;
    Json w = partitions_json(*space, {&x, &y, &z});
    w["failed"] = failed;
    return w;
  });
}

template <class Scalar>
Suite cond_exp_projection(const Options& o) {
  return run_cases("cond_exp_projection", o, o.cases, [](Rng& rng) -> Witness {
    const std::size_t n = 1 + rng.below(8);
    auto space = random_space<Scalar>(rng, n);
    const SigmaField x = random_partition(rng, n, n);
    const RV<Scalar> f = random_rv<Scalar>(rng, n), g = random_rv<Scalar>(rng, n);
    const RV<Scalar> qf = cond_exp(*space, x, f), qg = cond_exp(*space, x, g);
    const auto hx = subspace_of(space, x);
    std::string failed;
    if (!equal_vec<Scalar>(cond_exp(*space, x, qf), qf))
      failed = "not idempotent";
    else if (!eq(inner(*space, qf, g), inner(*space, f, qg)))
      failed = "not self-adjoint";
    else if (!is_measurable(x, qf) || !hx.contains(qf))
      failed = "image outside L2(x)";
    else if (hx.dim() != static_cast<Eigen::Index>(x.block_count()))
      failed = "dim L2(x) != block count";
    else if (!equal_vec<Scalar>(hx.project(f), qf))
      failed = "differs from orthogonal projection onto L2(x)";
    if (failed.empty()) return std::nullopt;
    Json w = partitions_json(*space, {&x});
    w["f"] = vector_to_json(f);
    w["failed"] = failed;
    return w;
  });
}

template <class Scalar>
Suite sigma_round_trip(const Options& o) {
  return run_cases("sigma_round_trip", o, o.cases, [](Rng& rng) -> Witness {
    const std::size_t n = 1 + rng.below(10);
    auto space = random_space<Scalar>(rng, n);
    const SigmaField x = random_partition(rng, n, n);
    if (sigma_of(subspace_of(space, x)) == x) return std::nullopt;
    return partitions_json(*space, {&x});
  });
}

// ---------------------------------------------------------------------------
// ntba

template <class Scalar>
Suite ntba_validate(const Options& o) {
  const bool fault = o.inject_fault;
  return run_cases("ntba_validate", o, o.cases, [fault](Rng& rng) -> Witness {
    const auto b = random_ntba<Scalar>(rng);
    const auto space = perturb(b.space_ptr(), fault);
    const auto elems = b.realize_all();
    const auto verdict = validate_family(*space, elems);
    if (!verdict.valid) {
      Json w = ntba_case(b);
      w["space_used"] = space_to_json(*space);
      w["failed"] = verdict.reason;
      return w;
    }
    for (int t = 0; t < 8; ++t) {
      const AtomSet e1 = rng.below(b.element_count()), e2 = rng.below(b.element_count());
      if (b.realize(e1 & e2) != meet(elems[e1], elems[e2]) || b.realize(e1 | e2) != join(elems[e1], elems[e2])) {
        Json w = ntba_case(b);
        w["elements"] = {atomset_to_json(e1), atomset_to_json(e2)};
        w["failed"] = "lattice operations differ from atom set operations";
        return w;
      }
    }
    return std::nullopt;
  });
}

template <class Scalar>
Suite atom_coarsening_meets(const Options& o) {
  return run_cases("atom_coarsening_meets", o, o.cases, [](Rng& rng) -> Witness {
    const auto b = ntba_with_atoms<Scalar>(rng, 2);
    const auto g1 = random_grouping(rng, b.atom_count()), g2 = random_grouping(rng, b.atom_count());
    // elements of the generated subalgebra: closure of both element sets
    std::set<AtomSet> elems;
    for (const auto* g : {&g1, &g2})
      for (AtomSet pick = 0; pick < (AtomSet{1} << g->size()); ++pick) {
        AtomSet e = 0;
        for (std::size_t i = 0; i < g->size(); ++i)
          if ((pick >> i) & 1U) e |= (*g)[i];
        elems.insert(e);
      }
    for (bool grew = true; grew;) {
      grew = false;
      const std::vector<AtomSet> cur(elems.begin(), elems.end());
      for (AtomSet p : cur)
        for (AtomSet q : cur) grew = elems.insert(p & q).second | elems.insert(p | q).second | grew;
    }
    std::set<AtomSet> atoms_generated;
    for (AtomSet e : elems) {
      if (e == 0) continue;
      bool minimal = true;
      for (AtomSet f : elems)
        if (f != 0 && f != e && (f & ~e) == 0) minimal = false;
      if (minimal) atoms_generated.insert(e);
    }
    std::set<AtomSet> meets;
    for (AtomSet p : g1)
      for (AtomSet q : g2)
        if ((p & q) != 0) {
          meets.insert(p & q);
          if (b.realize(p & q) != meet(b.realize(p), b.realize(q))) {
            Json w = ntba_case(b);
            w["groups"] = {atomset_to_json(p), atomset_to_json(q)};
            w["failed"] = "meet of coarsened atoms is not the realized atom intersection";
            return w;
          }
        }
    if (meets == atoms_generated) return std::nullopt;
    Json w = ntba_case(b);
    w["failed"] = "atoms of the generated algebra differ from the nonzero meets";
    return w;
  });
}

template <class Scalar>
Suite parity_recoding(const Options& o) {
  return run_cases("parity_recoding", o, 4, [n = 0](Rng&) mutable -> Witness {
    ++n;
    const int signs = n + 1;
    const auto parity = mk_parity_ntba<Scalar>(n);
    const auto coords = mk_coordinate_ntba(mk_dyadic<Scalar>(signs));
    const std::size_t size = std::size_t{1} << signs;
    // bit (signs-1-j) of an outcome index is set when xi_{j+1} = -1
    auto sign_bit = [&](std::size_t w, int j) { return (w >> (signs - 1 - j)) & 1U; };
    std::vector<std::size_t> eta(size);
    std::set<std::size_t> image;
    for (std::size_t w = 0; w < size; ++w) {
      std::size_t code = 0;
      for (int j = 0; j < signs; ++j) {
        const std::size_t bit = j + 1 < signs ? sign_bit(w, j) ^ sign_bit(w, j + 1) : sign_bit(w, j);
        code |= bit << (signs - 1 - j);
      }
      eta[w] = code;
      image.insert(code);
    }
    if (image.size() != size) return Json{{"n", n}, {"failed", "recoding is not a bijection"}};
    for (std::size_t i = 0; i < parity.atom_count(); ++i) {
      std::vector<std::size_t> labels(size);
      for (std::size_t w = 0; w < size; ++w) labels[w] = coords.atoms()[i].block_of(eta[w]);
      if (SigmaField::from_labels(labels) != parity.atoms()[i]) return Json{{"n", n}, {"atom", i + 1}};
    }
    return std::nullopt;
  });
}

// ---------------------------------------------------------------------------
// chaos

template <class Scalar>
Suite chaos_superadditivity(const Options& o) {
  return run_cases("chaos_superadditivity", o, o.cases, [](Rng& rng) -> Witness {
    const auto b = random_ntba<Scalar>(rng);
    const AtomSet x = rng.below(b.element_count()), y = rng.below(b.element_count());
    const RV<Scalar> f = random_rv<Scalar>(rng, b.space().size());
    auto q2 = [&](AtomSet e) { return norm_squared(b.space(), cond_exp(b.space(), b.realize(e), f)); };
    const Scalar lhs = q2(x) + q2(y), rhs = q2(x | y) + q2(x & y);
    if (ScalarTraits<Scalar>::less_equal(lhs, rhs)) return std::nullopt;
    Json w = ntba_case(b);
    w["x"] = atomset_to_json(x);
    w["y"] = atomset_to_json(y);
    w["f"] = vector_to_json(f);
    return w;
  });
}

template <class Scalar>
Suite chaos_membership_conditions(const Options& o) {
  return run_cases("chaos_membership_conditions", o, o.cases, [](Rng& rng) -> Witness {
    const auto b = random_ntba<Scalar>(rng, 32);
    const auto chaos = first_chaos(b);
    RV<Scalar> f;
    switch (rng.below(3)) {
      case 0: f = random_rv<Scalar>(rng, b.space().size()); break;
      case 1: f = random_in(rng, chaos.h1); break;
      default:
        f = RV<Scalar>(random_in(rng, chaos.h1) + cond_exp(b.space(), b.realize(rng.below(b.element_count())),
                                                            random_rv<Scalar>(rng, b.space().size())));
    }
    const auto report = chaos_membership(b, f);  // throws on disagreement between the conditions
    if (report.verdict == chaos.h1.contains(f)) return std::nullopt;
    Json w = ntba_case(b);
    w["f"] = vector_to_json(f);
    w["failed"] = "membership verdict differs from first chaos";
    return w;
  });
}

template <class Scalar>
Suite chaos_split_identity(const Options& o) {
  return run_cases("chaos_split_identity", o, o.cases, [](Rng& rng) -> Witness {
    const auto b = random_ntba<Scalar>(rng, 32);
    const AtomSet e = rng.below(b.element_count());
    const auto h0 = constants_subspace(b.space_ptr());
    const auto rhs = direct_sum(orthogonal_difference(subspace_of(b.space_ptr(), b.realize(e)), h0),
                                orthogonal_difference(subspace_of(b.space_ptr(), b.realize(b.complement(e))), h0));
    if (same_subspace(split_subspace(b, e), rhs)) return std::nullopt;
    Json w = ntba_case(b);
    w["x"] = atomset_to_json(e);
    return w;
  });
}

template <class Scalar>
Suite chaos_additivity(const Options& o) {
  return run_cases("chaos_additivity", o, o.cases, [](Rng& rng) -> Witness {
    const auto b = random_ntba<Scalar>(rng, 32);
    const auto chaos = first_chaos(b);
    const AtomSet e1 = rng.below(b.element_count());
    const AtomSet e2 = rng.below(b.element_count()) & ~e1;
    const SigmaField x = b.realize(e1), y = b.realize(e2), xy = b.realize(e1 | e2);
    for (Eigen::Index k = 0; k < chaos.h1.dim(); ++k) {
      const RV<Scalar> f = chaos.h1.basis().col(k);
      if (!equal_vec<Scalar>(cond_exp(b.space(), xy, f), RV<Scalar>(cond_exp(b.space(), x, f) + cond_exp(b.space(), y, f)))) {
        Json w = ntba_case(b);
        w["x"] = atomset_to_json(e1);
        w["y"] = atomset_to_json(e2);
        return w;
      }
    }
    return std::nullopt;
  });
}

template <class Scalar>
Suite finite_classical(const Options& o) {
  return run_cases("finite_classical", o, o.cases, [](Rng& rng) -> Witness {
    const auto b = random_ntba<Scalar>(rng, 32);
    const auto chaos = first_chaos(b);
    std::string failed;
    if (!chaos.classical)
      failed = "first chaos does not generate everything";
    else if (!same_subspace(chaos.h1, first_chaos_all_elements(b).h1))
      failed = "co-atom intersection differs from all-element intersection";
    else
      for (Eigen::Index k = 0; k < chaos.h1.dim(); ++k)
        if (!ScalarTraits<Scalar>::is_zero(expectation(b.space(), RV<Scalar>(chaos.h1.basis().col(k)))))
          failed = "first chaos not orthogonal to constants";
    if (failed.empty()) return std::nullopt;
    Json w = ntba_case(b);
    w["failed"] = failed;
    return w;
  });
}

template <class Scalar>
Suite up_down(const Options& o) {
  const auto fixed = constructed_ntbas<Scalar>();
  return run_cases("up_down", o, fixed.size() + o.cases, [&fixed, i = std::size_t{0}](Rng& rng) mutable -> Witness {
    const auto b = i < fixed.size() ? fixed[i] : random_ntba<Scalar>(rng, 32);
    ++i;
    const auto chaos = first_chaos(b);
    for (AtomSet e = 0; e < b.element_count(); ++e)
      if (!up_down_roundtrip(b, chaos, e)) {
        Json w = ntba_case(b);
        w["x"] = atomset_to_json(e);
        return w;
      }
    return std::nullopt;
  });
}

template <class Scalar>
Suite presentation_invariance(const Options& o) {
  return run_cases("presentation_invariance", o, o.cases, [](Rng& rng) -> Witness {
    const auto b = random_ntba<Scalar>(rng, 32);
    auto atoms = b.atoms();
    for (std::size_t i = atoms.size(); i > 1; --i) std::swap(atoms[i - 1], atoms[rng.below(i)]);
    const Ntba<Scalar> permuted(b.space_ptr(), atoms);
    if (same_subspace(first_chaos(b).h1, first_chaos(permuted).h1)) return std::nullopt;
    return ntba_case(b);
  });
}

// ---------------------------------------------------------------------------
// spectrum

template <class Scalar>
Suite level_one_chaos(const Options& o) {
  return run_cases("level_one_chaos", o, o.cases, [](Rng& rng) -> Witness {
    const auto b = random_ntba<Scalar>(rng, 64);
    const auto d = spectral_decompose(b);
    const auto h1 = first_chaos(b).h1;
    const auto& level = d.level(1);
    if (contains(level, h1) && contains(h1, level)) return std::nullopt;
    Json w = ntba_case(b);
    w["level_one_dim"] = level.dim();
    w["first_chaos_dim"] = h1.dim();
    return w;
  });
}

template <class Scalar>
Suite spectral_identities(const Options& o) {
  return run_cases("spectral_identities", o, o.cases, [](Rng& rng) -> Witness {
    const auto b = random_ntba<Scalar>(rng, 32);
    const auto d = spectral_decompose(b);
    const auto report = verify_spectral_identities(d);
    std::string failed = report.ok ? "" : report.failed;
    if (failed.empty()) {
      const auto grading = chaos_grading(d, first_chaos(b));
      if (!grading.classical || !grading.level1_is_first_chaos)
        failed = "grading disagrees with first chaos";
      else if (!sigma_tower_check(d))
        failed = "higher chaos generates more than the first chaos";
    }
    if (failed.empty()) return std::nullopt;
    Json w = ntba_case(b);
    w["failed"] = failed;
    return w;
  });
}

template <class Scalar>
Suite walsh_spectrum(const Options& o) {
  return run_cases("walsh_spectrum", o, 4, [n = 0](Rng&) mutable -> Witness {
    ++n;
    auto space = mk_dyadic<Scalar>(n);
    const auto d = spectral_decompose(mk_coordinate_ntba(space));
    if (d.points.size() != (std::size_t{1} << n)) return Json{{"n", n}, {"points", d.points.size()}};
    for (const auto& p : d.points) {
      // generator bit i <-> xi_{i+1}, the same convention as walsh masks
      const auto chi = span(space, std::vector<RV<Scalar>>{walsh(*space, p.generator)});
      if (!same_subspace(p.eigenspace, chi) || p.k != std::popcount(p.generator))
        return Json{{"n", n}, {"generator", atomset_to_json(p.generator)}};
    }
    return std::nullopt;
  });
}

template <class Scalar>
Suite recoding_spectrum(const Options& o) {
  return run_cases("recoding_spectrum", o, 4, [n = 0](Rng&) mutable -> Witness {
    ++n;
    const auto dp = spectral_decompose(mk_parity_ntba<Scalar>(n));
    const auto dc = spectral_decompose(mk_coordinate_ntba(mk_dyadic<Scalar>(n + 1)));
    std::map<int, Eigen::Index> lp, lc;
    for (const auto& [k, v] : dp.levels) lp[k] = v.dim();
    for (const auto& [k, v] : dc.levels) lc[k] = v.dim();
    if (lp == lc && dp.points.size() == dc.points.size()) return std::nullopt;
    return Json{{"n", n}, {"failed", "parity and coordinate spectra differ"}};
  });
}

template <class Scalar>
Suite k_monotone(const Options& o) {
  return run_cases("k_monotone", o, o.cases, [](Rng& rng) -> Witness {
    const auto b = ntba_with_atoms<Scalar>(rng, 2, 32);
    const auto groups = random_grouping(rng, b.atom_count());
    std::vector<SigmaField> coarse;
    for (AtomSet g : groups) coarse.push_back(b.realize(g));
    const Ntba<Scalar> sub(b.space_ptr(), coarse);
    const auto d = spectral_decompose(b), ds = spectral_decompose(sub);
    for (const auto& p : d.points) {
      auto it = std::find_if(ds.points.begin(), ds.points.end(), [&](const auto& q) { return contains(q.eigenspace, p.eigenspace); });
      if (it == ds.points.end() || it->k > p.k) {
        Json w = ntba_case(b);
        Json g = Json::array();
        for (AtomSet x : groups) g.push_back(atomset_to_json(x));
        w["groups"] = g;
        w["point"] = atomset_to_json(p.generator);
        return w;
      }
    }
    return std::nullopt;
  });
}

template <class Scalar>
Suite k_additivity(const Options& o) {
  return run_cases("k_additivity", o, o.cases, [](Rng& rng) -> Witness {
    const auto b = ntba_with_atoms<Scalar>(rng, 2, 32);
    const AtomSet e = 1 + rng.below(b.element_count() - 2);
    const auto r = k_restriction_additivity(b, e);
    if (r.ok) return std::nullopt;
    Json w = ntba_case(b);
    w["e"] = atomset_to_json(e);
    w["failed"] = r.failure;
    return w;
  });
}

// ---------------------------------------------------------------------------
// cofinite

namespace {

using cofinite::CofElem;

const std::vector<CofElem>& small_elements() {
  static const std::vector<CofElem> elems = cofinite::bounded_enumeration(6, 2);
  return elems;
}

/// Element with y-indices and tail inside a parity truncation with n y-atoms.
CofElem random_truncated(Rng& rng, int n) {
  std::vector<long> ys;
  for (long k = 1; k <= n; ++k)
    if (rng.coin()) ys.push_back(k);
  const auto yset = cofinite::NatSet::of(ys);
  if (rng.coin()) return CofElem::Y(yset);
  const long m = rng.between(1, n + 1);
  return CofElem::from_index(yset | cofinite::NatSet::from(m), true);
}

/// Atom set inside mk_parity_ntba(n): y_k is atom k, x_{n+1} is atom n+1.
AtomSet truncation_atoms(const CofElem& e, int n) {
  AtomSet out = 0;
  for (long k : e.index_set().members_below(n + 2)) out |= AtomSet{1} << (k - 1);
  return out;
}

}  // namespace

Suite cofinite_laws(const Options& o) {
  const auto& elems = small_elements();
  Suite s = run_cases("cofinite_laws", o, o.cases, [&elems](Rng& rng) -> Witness {
    const auto& a = elems[rng.below(elems.size())];
    const auto& b = elems[rng.below(elems.size())];
    const auto& c = elems[rng.below(elems.size())];
    using cofinite::cof_join;
    using cofinite::cof_meet;
    std::string failed;
    if (cof_meet(a, cof_meet(b, c)) != cof_meet(cof_meet(a, b), c) || cof_join(a, cof_join(b, c)) != cof_join(cof_join(a, b), c))
      failed = "associativity";
    else if (cof_meet(a, cof_join(b, c)) != cof_join(cof_meet(a, b), cof_meet(a, c)))
      failed = "distributivity";
    if (failed.empty()) return std::nullopt;
    return Json{{"failed", failed}, {"elements", {format(a), format(b), format(c)}}};
  });
  // two-variable laws exhaustively over the enumeration
  ++s.cases;
  for (const auto& a : elems) {
    for (const auto& b : elems) {
      using cofinite::cof_join;
      using cofinite::cof_meet;
      const bool ok = cof_meet(a, b) == cof_meet(b, a) && cof_join(a, b) == cof_join(b, a) &&
                      cof_meet(a, cof_join(a, b)) == a && cof_join(a, cof_meet(a, b)) == a &&
                      cofinite::cof_le(a, b) == (cof_join(a, b) == b);
      if (!ok) {
        if (s.failures++ == 0) s.witness = Json{{"failed", "two-variable law"}, {"elements", {format(a), format(b)}}};
        return s;
      }
    }
    if (cofinite::cof_meet(a, a) != a || cofinite::cof_join(a, a) != a) {
      if (s.failures++ == 0) s.witness = Json{{"failed", "idempotence"}, {"element", format(a)}};
      return s;
    }
  }
  return s;
}

Suite cofinite_complements(const Options& o) {
  const auto& elems = small_elements();
  return run_cases("cofinite_complements", o, 1, [&elems](Rng&) -> Witness {
    for (const auto& e : elems) {
      const auto c = cofinite::has_complement(e);
      const bool in_b = cofinite::closure_membership(e) == cofinite::Membership::in_algebra;
      if (c.has_value() != in_b) return Json{{"failed", "complemented elements differ from B"}, {"element", format(e)}};
      std::size_t found = 0;
      for (const auto& z : elems)
        if (cofinite::cof_meet(e, z) == CofElem::zero() && cofinite::cof_join(e, z) == CofElem::one()) {
          ++found;
          if (!c || z != *c) return Json{{"failed", "unexpected complement"}, {"element", format(e)}, {"other", format(z)}};
        }
      if (c && found != 1) return Json{{"failed", "complement not unique"}, {"element", format(e)}};
    }
    return std::nullopt;
  });
}

Suite cofinite_truncation(const Options& o) {
  static const std::vector<Ntba<Rational>> parity = [] {
    std::vector<Ntba<Rational>> v;
    for (int n = 1; n <= 6; ++n) v.push_back(mk_parity_ntba<Rational>(n));
    return v;
  }();
  return run_cases("cofinite_truncation", o, o.cases, [](Rng& rng) -> Witness {
    const int n = rng.between(1, 6);
    const auto& b = parity[static_cast<std::size_t>(n - 1)];
    const CofElem a = random_truncated(rng, n), c = random_truncated(rng, n);
    const SigmaField ra = b.realize(truncation_atoms(a, n)), rc = b.realize(truncation_atoms(c, n));
    const bool ok = b.realize(truncation_atoms(cofinite::cof_meet(a, c), n)) == meet(ra, rc) &&
                    b.realize(truncation_atoms(cofinite::cof_join(a, c), n)) == join(ra, rc) &&
                    cofinite::cof_le(a, c) == le(ra, rc);
    if (ok) return std::nullopt;
    return Json{{"n", n}, {"elements", {format(a), format(c)}}};
  });
}

Suite cofinite_limits(const Options& o) {
  return run_cases("cofinite_limits", o, o.cases, [](Rng& rng) -> Witness {
    std::vector<std::string> descriptors;
    const long step = rng.between(1, 3), offset = rng.between(0, 2);
    const std::string set = "Y(" + std::to_string(step) + "k+" + std::to_string(offset) + ")";
    descriptors.push_back("prefix(" + set + ")");
    descriptors.push_back("tail(" + std::to_string(rng.between(0, 4)) + ")");
    descriptors.push_back("comp(prefix(y" + std::to_string(rng.between(1, 5)) + "|y" + std::to_string(rng.between(1, 5)) + "))");
    descriptors.push_back("const(y" + std::to_string(rng.between(1, 3)) + ", x" + std::to_string(rng.between(1, 3)) + ")");
    for (const auto& text : descriptors) {
      cofinite::Sequence seq = cofinite::parse_sequence("tail(0)");
      try {
        seq = cofinite::parse_sequence(text);
        (void)seq.direction();
      } catch (const cofinite::UnsupportedSequence&) {
        continue;  // not monotone
      }
      const CofElem lim = cofinite::monotone_limit(seq);
      (void)cofinite::closure_membership(lim);
      // the limit bounds every term in the right direction
      const bool up = seq.direction() != cofinite::Sequence::Direction::decreasing;
      for (long n = 1; n <= 12; ++n) {
        const CofElem t = seq.at(n);
        if (up ? !cofinite::cof_le(t, lim) : !cofinite::cof_le(lim, t))
          return Json{{"sequence", text}, {"n", n}, {"limit", format(lim)}};
      }
      if (up) {
        const auto dl = cofinite::double_limit_check(seq);
        if (!dl.equal) return Json{{"sequence", text}, {"failed", "double limit"}, {"lhs", format(dl.lhs)}, {"rhs", format(dl.rhs)}};
      }
    }
    return std::nullopt;
  });
}

// ---------------------------------------------------------------------------
// randsup

Suite randsup_reproducible(const Options& o) {
  return run_cases("randsup_reproducible", o, o.cases, [&o](Rng& rng) -> Witness {
    std::vector<double> ps;
    const int levels = rng.between(1, 4);
    for (int k = 0; k < levels; ++k) ps.push_back(0.01 + 0.2 * rng.uniform());
    auto cfg = randsup::make_config(ps, 40, rng.next());
    const auto first = randsup::run_join_process(cfg);
    if (first != randsup::run_join_process(cfg)) return Json{{"failed", "trajectories differ for the same seed"}};
    for (const auto& traj : first)
      for (std::size_t n = 1; n < traj.size(); ++n)
        if ((traj[n - 1] & ~traj[n]) != 0) return Json{{"failed", "join process not monotone"}};
    cfg.force_zero = true;
    for (const auto& traj : randsup::run_join_process(cfg))
      for (AtomSet y : traj)
        if (y != 0) return Json{{"failed", "forced-zero process left 0"}};
    (void)o;
    return std::nullopt;
  });
}

// ---------------------------------------------------------------------------

template <class Scalar>
std::vector<Suite> run_all(const Options& o) {
  return {
      span_rank<Scalar>(o),
      product_isometry<Scalar>(o),
      walsh_orthonormal<Scalar>(o),
      meet_intersection<Scalar>(o),
      independence_criterion<Scalar>(o),
      independent_lattice_identities<Scalar>(o),
      independent_join_decomposition<Scalar>(o),
      cond_exp_projection<Scalar>(o),
      sigma_round_trip<Scalar>(o),
      ntba_validate<Scalar>(o),
      atom_coarsening_meets<Scalar>(o),
      parity_recoding<Scalar>(o),
      chaos_superadditivity<Scalar>(o),
      chaos_membership_conditions<Scalar>(o),
      chaos_split_identity<Scalar>(o),
      chaos_additivity<Scalar>(o),
      finite_classical<Scalar>(o),
      up_down<Scalar>(o),
      presentation_invariance<Scalar>(o),
      level_one_chaos<Scalar>(o),
      spectral_identities<Scalar>(o),
      walsh_spectrum<Scalar>(o),
      recoding_spectrum<Scalar>(o),
      k_monotone<Scalar>(o),
      k_additivity<Scalar>(o),
      cofinite_laws(o),
      cofinite_complements(o),
      cofinite_truncation(o),
      cofinite_limits(o),
      randsup_reproducible(o),
  };
}

#define NOISE_LATTICE_INSTANTIATE(S)                                 \
  template Suite span_rank<S>(const Options&);                       \
  template Suite product_isometry<S>(const Options&);                \
  template Suite walsh_orthonormal<S>(const Options&);               \
  template Suite meet_intersection<S>(const Options&);               \
  template Suite independence_criterion<S>(const Options&);          \
  template Suite independent_lattice_identities<S>(const Options&);  \
  template Suite independent_join_decomposition<S>(const Options&);  \
  template Suite cond_exp_projection<S>(const Options&);             \
  template Suite sigma_round_trip<S>(const Options&);                \
  template Suite ntba_validate<S>(const Options&);                   \
  template Suite atom_coarsening_meets<S>(const Options&);           \
  template Suite parity_recoding<S>(const Options&);                 \
  template Suite chaos_superadditivity<S>(const Options&);           \
  template Suite chaos_membership_conditions<S>(const Options&);     \
  template Suite chaos_split_identity<S>(const Options&);            \
  template Suite chaos_additivity<S>(const Options&);                \
  template Suite finite_classical<S>(const Options&);                \
  template Suite up_down<S>(const Options&);                         \
  template Suite presentation_invariance<S>(const Options&);         \
  template Suite level_one_chaos<S>(const Options&);                 \
  template Suite spectral_identities<S>(const Options&);             \
  template Suite walsh_spectrum<S>(const Options&);                  \
  template Suite recoding_spectrum<S>(const Options&);               \
  template Suite k_monotone<S>(const Options&);                      \
  template Suite k_additivity<S>(const Options&);                    \
  template std::vector<Suite> run_all<S>(const Options&);

NOISE_LATTICE_INSTANTIATE(Rational)
NOISE_LATTICE_INSTANTIATE(double)

}  // namespace noise_lattice::checks
