#include "noise_lattice/cofinite.hpp"

#include <doctest.h>

using namespace noise_lattice::cofinite;

namespace {

CofElem P(const char* s) { return parse(s); }

}  // namespace

TEST_CASE("eventually periodic index sets") {
  const auto evens = NatSet::arithmetic(2, 0), odds = NatSet::arithmetic(2, 1);
  CHECK((evens | odds) == NatSet::all());
  CHECK((evens & odds).is_empty());
  CHECK(~evens == odds);
  CHECK(evens.contains(4));
  CHECK_FALSE(evens.contains(5));
  CHECK(NatSet::of({1, 2, 5}).members() == std::vector<long>{1, 2, 5});
  CHECK(NatSet::from(3).is_cofinite());
  CHECK(NatSet::from(3).tail_start() == 3);
  CHECK(NatSet::interval(2, 5).members() == std::vector<long>{2, 3, 4});
  // different descriptions of one set are equal
  CHECK(NatSet("", "01") == NatSet("0101", "0101"));
  CHECK(NatSet::arithmetic(3, 0).members_below(10) == std::vector<long>{3, 6, 9});
}

TEST_CASE("meet examples") {
  CHECK(cof_meet(P("x3"), P("x5")) == P("x5"));
  CHECK(cof_meet(P("Y(2k)"), P("Y(2k+1)")) == CofElem::zero());
  CHECK(cof_meet(P("x2"), P("y1")) == CofElem::zero());
}

TEST_CASE("join examples") {
  CHECK(cof_join(P("y2"), P("x3")) == P("x2"));
  const auto all = cof_join(P("Y(2k)"), P("Y(2k+1)"));
  CHECK(all == P("Y(N)"));
  CHECK(all != CofElem::one());
  CHECK(cof_join(P("x4|y1"), CofElem::zero()) == P("x4|y1"));
  CHECK(cof_join(P("y1"), P("x2")) == CofElem::one());
}

TEST_CASE("closure membership") {
  CHECK(closure_membership(P("x4")) == Membership::in_algebra);
  CHECK(closure_membership(P("Y(3k)")) == Membership::closure_only);
  CHECK(closure_membership(P("Y(1,2,5)")) == Membership::in_algebra);
  CHECK(membership_name(Membership::closure_only) == "in Cl(B)\\B");
}

TEST_CASE("monotone limits") {
  CHECK(monotone_limit(parse_sequence("prefix(Y(N))")) == P("Y(N)"));
  CHECK(monotone_limit(parse_sequence("tail(1)")) == CofElem::zero());
  CHECK(monotone_limit(parse_sequence("const(y1)")) == P("y1"));
  CHECK_THROWS_AS(parse_sequence("zigzag(3)"), UnsupportedSequence);
}

TEST_CASE("complements") {
  CHECK(has_complement(P("x3")) == P("y1|y2"));
  CHECK_FALSE(has_complement(P("Y(2k)")).has_value());
  CHECK(has_complement(CofElem::zero()) == CofElem::one());
  for (const char* s : {"x2", "y3", "x5|y1", "Y(1,4)"}) {
    const auto e = P(s);
    const auto c = has_complement(e);
    REQUIRE(c.has_value());
    CHECK(cof_meet(e, *c) == CofElem::zero());
    CHECK(cof_join(e, *c) == CofElem::one());
  }
}

TEST_CASE("condition (c)") {
  const auto all = condition_c_check(parse_sequence("prefix(Y(N))"));
  CHECK_FALSE(all.holds);
  CHECK(all.sup == P("Y(N)"));
  CHECK(all.inf_complements == CofElem::zero());
  CHECK(all.joined == P("Y(N)"));
  CHECK(condition_c_check(parse_sequence("const(y1)")).holds);
  const auto evens = condition_c_check(parse_sequence("prefix(Y(2k))"));
  CHECK_FALSE(evens.holds);
  CHECK(evens.sup == P("Y(2k)"));
  CHECK(evens.joined != CofElem::one());
}

TEST_CASE("double limits agree") {
  const auto a = double_limit_check(parse_sequence("prefix(Y(N))"));
  CHECK(a.equal);
  CHECK(a.lhs == P("Y(N)"));
  const auto c = double_limit_check(parse_sequence("const(y1)"));
  CHECK(c.equal);
  CHECK(c.lhs == CofElem::one());
  CHECK(double_limit_check(parse_sequence("prefix(Y(2k))")).equal);
}

TEST_CASE("ultrafilters") {
  const auto v = is_atomless();
  CHECK_FALSE(v.atomless);
  CHECK(v.witness.kind == Ultrafilter::Kind::principal);
  CHECK(v.witness.n == 1);
  CHECK(v.witness_infimum == P("y1"));
  const auto all = enumerate_ultrafilters(3);
  REQUIRE(all.size() == 4);
  CHECK(all.back().kind == Ultrafilter::Kind::frechet);
  CHECK(all.back().infimum() == CofElem::zero());
  CHECK(all.back().contains(P("x7")));
  CHECK_FALSE(all.back().contains(P("y2")));
  CHECK(all[1].contains(P("y2|y5")));
}

TEST_CASE("completion is the algebra itself") {
  const auto elems = bounded_enumeration(6, 3);
  CHECK(elems.size() == 200);
  for (const auto& e : elems) {
    const auto c = has_complement(e);
    CHECK(c.has_value() == (closure_membership(e) == Membership::in_algebra));
    if (!c) continue;
    int matches = 0;
    for (const auto& f : elems)
      matches += cof_meet(e, f) == CofElem::zero() && cof_join(e, f) == CofElem::one();
    CHECK(matches == 1);
  }
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(parse("x0"), noise_lattice::ParseError);
  CHECK_THROWS_AS(parse("y1 |"), noise_lattice::ParseError);
  CHECK_THROWS_AS(parse("Y{1;}"), noise_lattice::ParseError);
  CHECK(format(P("y1|x3")) == format(P("x3|y1")));
}
