#pragma once

#include "noise_lattice/scalar.hpp"

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

/// Exact lattice computations in the countable parity algebra: generators
/// y_k = sigma(xi_k xi_{k+1}) and tails x_m = sigma(xi_m, xi_{m+1}, ...),
/// with y_k v x_{k+1} = x_k. The y_k together with one tail are independent,
/// so an element is determined by its index set (which y_k it contains, with
/// y_k for every k >= m when it contains x_m) plus a flag telling whether the
/// tail sigma-field itself is included. Sets are eventually periodic.
namespace noise_lattice::cofinite {

struct UnsupportedSequence : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Eventually periodic subset of {1, 2, 3, ...}: a preperiod word followed by
/// a repeated period word, both over {'0','1'}. Always held in canonical
/// form (minimal period, then minimal preperiod), so equality is syntactic.
class NatSet {
 public:
  NatSet() : per_("0") {}
  NatSet(std::string preperiod, std::string period);

  static NatSet empty() { return {}; }
  static NatSet all() { return NatSet("", "1"); }
  static NatSet singleton(long k);
  /// [a, b)
  static NatSet interval(long a, long b);
  /// [a, infinity)
  static NatSet from(long a);
  static NatSet of(const std::vector<long>& members);
  /// {step * k + offset : k >= 0}, restricted to positive integers.
  static NatSet arithmetic(long step, long offset);

  bool contains(long k) const;
  bool is_empty() const { return per_ == "0" && pre_.find('1') == std::string::npos; }
  bool is_finite() const { return per_ == "0"; }
  bool is_cofinite() const { return per_ == "1"; }
  /// Least m with [m, infinity) inside the set; requires a cofinite set.
  long tail_start() const;
  /// Members below m (all members when finite and m is omitted).
  std::vector<long> members_below(long m) const;
  std::vector<long> members() const;

  const std::string& preperiod() const { return pre_; }
  const std::string& period() const { return per_; }

  friend NatSet operator|(const NatSet& a, const NatSet& b);
  friend NatSet operator&(const NatSet& a, const NatSet& b);
  NatSet operator~() const;
  friend NatSet operator-(const NatSet& a, const NatSet& b) { return a & ~b; }
  bool subset_of(const NatSet& other) const { return (*this - other).is_empty(); }

  friend bool operator==(const NatSet&, const NatSet&) = default;
  friend auto operator<=>(const NatSet&, const NatSet&) = default;

  /// "{pre;per}"
  std::string to_string() const;

 private:
  void canonicalize();
  std::string pre_;
  std::string per_;
};

/// Canonical element: optional tail x_m plus the y-generators below it.
/// With a tail m, yset is a finite subset of [1, m) not containing m - 1.
class CofElem {
 public:
  static CofElem from_index(const NatSet& index, bool tail);
  static CofElem zero() { return from_index(NatSet::empty(), false); }
  static CofElem one() { return from_index(NatSet::all(), true); }
  static CofElem x(long m);
  static CofElem y(long k);
  static CofElem Y(const NatSet& s) { return from_index(s, false); }

  const std::optional<long>& tail() const { return tail_; }
  const NatSet& yset() const { return yset_; }
  bool has_tail() const { return tail_.has_value(); }
  /// Every k with y_k below the element.
  NatSet index_set() const;

  friend bool operator==(const CofElem&, const CofElem&) = default;
  friend auto operator<=>(const CofElem&, const CofElem&) = default;

 private:
  CofElem() = default;
  std::optional<long> tail_;
  NatSet yset_;
};

CofElem cof_meet(const CofElem& a, const CofElem& b);
CofElem cof_join(const CofElem& a, const CofElem& b);
bool cof_le(const CofElem& a, const CofElem& b);

enum class Membership { in_algebra, closure_only };
Membership closure_membership(const CofElem& e);

/// The unique complement inside the closure, present exactly for elements of
/// the algebra itself.
std::optional<CofElem> has_complement(const CofElem& e);

std::string format(const CofElem& e);
std::string_view membership_name(Membership m);

/// Parses element expressions: `0`, `1`, `x3`, `y1|y4`, `Y(2k)`, `Y(2k+1)`,
/// `Y(N)`, `Y{pre;per}`, joined with `|`, met with `&`, complemented with
/// `~`, grouped with parentheses.
CofElem parse(std::string_view text);

// ---------------------------------------------------------------------------
// Monotone sequences

/// Sequence n -> element (n >= 1) from a closed descriptor family: an
/// explicit prefix, then the element whose index set is
/// (A n [1, n+shift)) u (Z n [n+shift, inf)), with the tail flag fixed.
class Sequence {
 public:
  /// n -> Y(I n [1, n]), increasing.
  static Sequence prefix_joins(const NatSet& indices);
  /// n -> x_{m+n}, decreasing.
  static Sequence tail_chain(long m);
  /// The listed elements, then the last one forever.
  static Sequence eventually_constant(std::vector<CofElem> elements);

  /// n -> complement of the n-th element; every element must lie in the algebra.
  Sequence complements() const;
  /// n -> c v (n-th element).
  Sequence joined_with(const CofElem& c) const;
  /// m -> lim_n (m-th element v other_n) for a decreasing `other`.
  Sequence join_with_limit_of(const Sequence& other) const;

  CofElem at(long n) const;

  enum class Direction { increasing, decreasing, constant };
  /// Throws UnsupportedSequence when the sequence is not monotone.
  Direction direction() const;

  const std::string& description() const { return description_; }

  friend CofElem monotone_limit(const Sequence& seq);

 private:
  Sequence() = default;
  long param_start() const { return static_cast<long>(prefix_.size()) + 1; }

  std::vector<CofElem> prefix_;
  NatSet settled_;  // A
  NatSet pending_;  // Z
  long shift_ = 1;
  bool tail_ = false;
  std::string description_;
};

/// Sup of an increasing, inf of a decreasing sequence.
CofElem monotone_limit(const Sequence& seq);

/// Descriptor syntax: `prefix(<set>)` where <set> is a Y-expression such as
/// `Y(2k)`, `tail(<m>)`, `const(<elem>, <elem>, ...)`, `comp(<descriptor>)`.
Sequence parse_sequence(std::string_view text);

struct ConditionC {
  bool holds = false;
  CofElem sup = CofElem::zero();
  CofElem inf_complements = CofElem::zero();
  CofElem joined = CofElem::zero();
};

/// (sup_n x_n) v (inf_n x_n') == 1 for an increasing sequence.
ConditionC condition_c_check(const Sequence& increasing);

struct DoubleLimit {
  bool equal = false;
  CofElem lhs = CofElem::zero();  ///< (lim x_n) v (lim x_n')
  CofElem rhs = CofElem::zero();  ///< lim_m lim_n (x_m v x_n')
};

DoubleLimit double_limit_check(const Sequence& increasing);

// ---------------------------------------------------------------------------
// Ultrafilters

struct Ultrafilter {
  enum class Kind { principal, frechet } kind = Kind::frechet;
  long n = 0;  ///< generator index for principal(n)

  bool contains(const CofElem& e) const;
  /// Infimum of all members.
  CofElem infimum() const;
  std::string name() const;
};

/// principal(1..bound) followed by the Frechet filter. Together with the
/// principal filters above `bound` this is every ultrafilter of the algebra.
std::vector<Ultrafilter> enumerate_ultrafilters(long principal_bound);

struct AtomlessVerdict {
  bool atomless = false;
  Ultrafilter witness;
  CofElem witness_infimum = CofElem::zero();
};

AtomlessVerdict is_atomless();

/// Elements of the algebra with y-support in [1, max_index] and tails up to
/// max_index + 1, plus closure-only Y(S) for eventually periodic S with
/// preperiod and period lengths bounded by `max_word`.
std::vector<CofElem> bounded_enumeration(long max_index, int max_word);

}  // namespace noise_lattice::cofinite
