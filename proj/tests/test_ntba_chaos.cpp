#include "oracles.hpp"

#include "noise_lattice/chaos.hpp"
#include "noise_lattice/ntba.hpp"

#include <doctest.h>

using namespace noise_lattice;
using R = Rational;

namespace {

SigmaField sig(const ProbSpace<R>& s, const RV<R>& v) { return sigma_of_vectors<R>(s.size(), Mat<R>(v)); }

std::vector<R> probs_of(const ProbSpace<R>& s) { return {s.probs().data(), s.probs().data() + s.size()}; }

// f = Q_x f + Q_x' f for every element, as the stacked kernel of
// I - P_x - P_x' built from explicit projector matrices
struct ChaosOracle {
  long dim = 0;
  std::vector<Mat<R>> equations;
};

ChaosOracle chaos_oracle(const Ntba<R>& b) {
  const auto n = static_cast<Eigen::Index>(b.space().size());
  const auto p = probs_of(b.space());
  ChaosOracle o;
  std::vector<std::vector<R>> rows;
  for (AtomSet e = 0; e < b.element_count(); ++e) {
    const Mat<R> m = Mat<R>::Identity(n, n) - oracle::projector(p, b.realize(e).labels()) -
                     oracle::projector(p, b.realize(b.complement(e)).labels());
    o.equations.push_back(m);
    for (Eigen::Index i = 0; i < n; ++i) {
      std::vector<R> r;
      for (Eigen::Index j = 0; j < n; ++j) r.push_back(m(i, j));
      rows.push_back(r);
    }
  }
  o.dim = n - oracle::rank(rows);
  return o;
}

void check_against_oracle(const Ntba<R>& b, const ChaosResult<R>& c) {
  const auto o = chaos_oracle(b);
  CHECK(c.h1.dim() == o.dim);
  for (Eigen::Index k = 0; k < c.h1.dim(); ++k)
    for (const auto& m : o.equations) CHECK(is_zero_vec<R>(RV<R>(m * c.h1.basis().col(k))));
}

}  // namespace

TEST_CASE("coordinate and parity constructors") {
  auto b = mk_coordinate_ntba(mk_dyadic<R>(2));
  CHECK(b.atom_count() == 2);
  CHECK(b.element_count() == 4);
  auto p1 = mk_parity_ntba<R>(1);
  CHECK(p1.space().size() == 4);
  CHECK(p1.atom_count() == 2);
  CHECK(oracle::independent_all_events(probs_of(p1.space()), p1.atoms()[0].labels(), p1.atoms()[1].labels()));
  CHECK(p1.atoms()[0] == sig(p1.space(), walsh(p1.space(), 0b11)));
  auto p2 = mk_parity_ntba<R>(2);
  CHECK(p2.atom_count() == 3);
  CHECK(p2.element_count() == 8);
  CHECK_THROWS_AS(mk_parity_ntba<R>(0), DomainError);
  CHECK_THROWS_AS(mk_parity_ntba<R>(20), CapacityError);
}

TEST_CASE("atoms must be independent and generate") {
  auto s = mk_dyadic<R>(2);
  const auto x1 = sig(*s, coordinate(*s, 1));
  CHECK_THROWS_AS(Ntba<R>(s, {x1}), DomainError);
  CHECK_THROWS_AS(Ntba<R>(s, {x1, x1}), DomainError);
  CHECK_THROWS_AS(Ntba<R>(s, {x1, SigmaField::trivial(4)}), DomainError);
}

TEST_CASE("validate_family examples") {
  auto s = mk_dyadic<R>(2);
  const auto x1 = sig(*s, coordinate(*s, 1)), x2 = sig(*s, coordinate(*s, 2)), x12 = sig(*s, walsh(*s, 3));
  const auto zero = SigmaField::trivial(4), one = SigmaField::discrete(4);
  CHECK(validate_family(*s, {zero, x1, x2, one}).valid);
  CHECK(validate_family(*s, {zero, x1, x12, one}).valid);

  auto s3 = mk_uniform<R>(3);
  const auto x = SigmaField::from_blocks(3, {{0}, {1, 2}}), y = SigmaField::from_blocks(3, {{0, 1}, {2}});
  const auto v = validate_family(*s3, {SigmaField::trivial(3), x, y, SigmaField::discrete(3)});
  CHECK_FALSE(v.valid);
  CHECK(v.reason == "complement pair not independent");
  CHECK(v.witness.size() == 2);

  CHECK(validate_family(*s, {zero, x1, one}).reason == "element has no complement in the family");
  CHECK_FALSE(validate_family(*s, {x1, x2, one}).valid);
}

TEST_CASE("complements") {
  auto b = mk_parity_ntba<R>(2);
  CHECK(b.complement(0) == b.full());
  const AtomSet x3 = 0b100, y12 = 0b011;
  CHECK(b.complement(x3) == y12);
  const auto sx = b.realize(x3), sy = b.realize(y12);
  CHECK(meet(sx, sy).is_trivial());
  CHECK(join(sx, sy).is_discrete());
  CHECK(oracle::independent_all_events(probs_of(b.space()), sx.labels(), sy.labels()));
  for (AtomSet e = 0; e < b.element_count(); ++e) CHECK(b.complement(b.complement(e)) == e);
}

TEST_CASE("restrictions") {
  auto b = mk_coordinate_ntba(mk_dyadic<R>(2));
  auto r = restrict_to(b, 0b01);
  CHECK(r.algebra.atom_count() == 1);
  CHECK(r.algebra.space().size() == 2);
  CHECK(r.algebra.space().prob(0) == R(1, 2));

  auto full = restrict_to(b, b.full());
  CHECK(full.algebra.space().size() == 4);
  CHECK(full.algebra.atom_count() == 2);

  auto p = mk_parity_ntba<R>(2);
  auto rp = restrict_to(p, 0b011);
  CHECK(rp.algebra.atom_count() == 2);
  CHECK(rp.algebra.space().size() == 4);
  CHECK(rp.atom_indices == std::vector<std::size_t>{0, 1});

  CHECK_THROWS_AS(restrict_to(b, 0), PreconditionError);
  CHECK_THROWS_AS(restrict_to(b, 0b100), DomainError);
}

TEST_CASE("first chaos examples") {
  auto s = mk_uniform<R>(5);
  auto triv = mk_trivial_ntba(s);
  auto c0 = first_chaos(triv);
  CHECK(c0.h1.dim() == 4);
  check_against_oracle(triv, c0);

  auto b = mk_coordinate_ntba(mk_dyadic<R>(2));
  auto c = first_chaos(b);
  CHECK(c.h1.dim() == 2);
  CHECK(c.classical);
  CHECK_FALSE(c.black);
  CHECK(c.h1.contains(coordinate(b.space(), 1)));
  CHECK(c.h1.contains(coordinate(b.space(), 2)));
  check_against_oracle(b, c);

  auto p = mk_parity_ntba<R>(2);
  auto cp = first_chaos(p);
  CHECK(cp.h1.dim() == 3);
  CHECK(cp.classical);
  CHECK(cp.h1.contains(walsh(p.space(), 0b011)));
  CHECK(cp.h1.contains(walsh(p.space(), 0b110)));
  CHECK(cp.h1.contains(coordinate(p.space(), 3)));
  check_against_oracle(p, cp);
  CHECK(same_subspace(cp.h1, first_chaos_all_elements(p).h1));
}

TEST_CASE("first chaos of random algebras matches the projector oracle") {
  Rng rng(17, 2);
  for (int t = 0; t < 15; ++t) {
    auto b = random_ntba<R>(rng, 24);
    check_against_oracle(b, first_chaos(b));
  }
}

TEST_CASE("chaos membership examples") {
  auto b = mk_coordinate_ntba(mk_dyadic<R>(2));
  const auto in = chaos_membership(b, coordinate(b.space(), 1));
  CHECK(in.verdict);
  CHECK((in.cond_a && in.cond_b && in.cond_c));
  const auto out = chaos_membership(b, walsh(b.space(), 0b11));
  CHECK_FALSE(out.verdict);
  REQUIRE(out.witness.size() == 1);
  // the first failing element for condition (a) is sigma(xi_1)
  CHECK(b.realize(out.witness[0]) == sig(b.space(), coordinate(b.space(), 1)));
  CHECK(chaos_membership(b, RV<R>(RV<R>::Zero(4))).verdict);
  CHECK_FALSE(chaos_membership(b, constant(b.space())).verdict);
}

TEST_CASE("atomless split examples") {
  auto b = mk_coordinate_ntba(mk_dyadic<R>(2));
  const RV<R> f = coordinate(b.space(), 1) + coordinate(b.space(), 2);
  const auto ok = atomless_split(b, f, 1.0);
  CHECK(ok.found);
  CHECK(ok.elements == std::vector<AtomSet>{0b01, 0b10});
  CHECK(ok.best_max_norm == doctest::Approx(1.0));
  const auto bad = atomless_split(b, f, 0.5);
  CHECK_FALSE(bad.found);
  CHECK(bad.best_max_norm == doctest::Approx(1.0));
  const auto z = atomless_split(b, RV<R>(RV<R>::Zero(4)), 0.1);
  CHECK(z.found);
  CHECK(z.elements == std::vector<AtomSet>{b.full()});
  CHECK_THROWS_AS(atomless_split(b, constant(b.space()), 1.0), PreconditionError);
  CHECK_THROWS_AS(atomless_split(b, f, 0.0), PreconditionError);
}

TEST_CASE("up-down round trips") {
  auto b = mk_coordinate_ntba(mk_dyadic<R>(3));
  const auto c = first_chaos(b);
  CHECK(up_down_roundtrip(b, c, b.full()));
  CHECK(up_down_roundtrip(b, c, 0));
  CHECK(up_down_roundtrip(b, c, 0b101));
  CHECK(b.realize(0b101) == join(sig(b.space(), coordinate(b.space(), 1)), sig(b.space(), coordinate(b.space(), 3))));
}

TEST_CASE("float backend reproduces chaos dimensions") {
  for (int n = 1; n <= 4; ++n) {
    auto p = mk_parity_ntba<double>(n);
    CHECK(first_chaos(p).h1.dim() == n + 1);
  }
}
