#include "noise_lattice/cofinite.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

namespace noise_lattice::cofinite {

// ---------------------------------------------------------------------------
// NatSet

namespace {

bool is_bits(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

char bit_at(const std::string& pre, const std::string& per, long k) {
  const auto idx = static_cast<std::size_t>(k - 1);
  if (idx < pre.size()) return pre[idx];
  return per[(idx - pre.size()) % per.size()];
}

template <class Op>
NatSet combine(const NatSet& a, const NatSet& b, Op op) {
  const std::size_t p = std::max(a.preperiod().size(), b.preperiod().size());
  const std::size_t l = std::lcm(a.period().size(), b.period().size());
  std::string pre(p, '0'), per(l, '0');
  for (std::size_t i = 0; i < p + l; ++i) {
    const long k = static_cast<long>(i) + 1;
    const bool v = op(a.contains(k), b.contains(k));
    (i < p ? pre[i] : per[i - p]) = v ? '1' : '0';
  }
  return NatSet(std::move(pre), std::move(per));
}

}  // namespace

NatSet::NatSet(std::string preperiod, std::string period) : pre_(std::move(preperiod)), per_(std::move(period)) {
  if (per_.empty()) throw DomainError("period word must be nonempty");
  if (!is_bits(pre_) || !is_bits(per_)) throw ParseError("set words must consist of 0 and 1");
  canonicalize();
}

void NatSet::canonicalize() {
  const std::size_t l = per_.size();
  for (std::size_t d = 1; d <= l; ++d) {
    if (l % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < l && periodic; ++i) periodic = per_[i] == per_[i % d];
    if (periodic) {
      per_.resize(d);
      break;
    }
  }
  while (!pre_.empty() && pre_.back() == per_.back()) {
    per_ = pre_.back() + per_.substr(0, per_.size() - 1);
    pre_.pop_back();
  }
}

NatSet NatSet::singleton(long k) {
  if (k < 1) throw DomainError("indices start at 1");
  return NatSet(std::string(static_cast<std::size_t>(k - 1), '0') + "1", "0");
}

NatSet NatSet::interval(long a, long b) {
  a = std::max(a, 1L);
  if (b <= a) return empty();
  std::string pre(static_cast<std::size_t>(b - 1), '0');
  for (long k = a; k < b; ++k) pre[static_cast<std::size_t>(k - 1)] = '1';
  return NatSet(std::move(pre), "0");
}

NatSet NatSet::from(long a) {
  a = std::max(a, 1L);
  return NatSet(std::string(static_cast<std::size_t>(a - 1), '0'), "1");
}

NatSet NatSet::of(const std::vector<long>& members) {
  NatSet s;
  for (long k : members) s = s | singleton(k);
  return s;
}

NatSet NatSet::arithmetic(long step, long offset) {
  if (step < 1) throw DomainError("arithmetic progression needs a positive step");
  const long p = std::max(offset, 0L);
  std::string pre(static_cast<std::size_t>(p), '0'), per(static_cast<std::size_t>(step), '0');
  auto member = [&](long k) { return k >= offset && ((k - offset) % step + step) % step == 0; };
  for (long k = 1; k <= p + step; ++k)
    (k <= p ? pre[static_cast<std::size_t>(k - 1)] : per[static_cast<std::size_t>(k - p - 1)]) = member(k) ? '1' : '0';
  return NatSet(std::move(pre), std::move(per));
}

bool NatSet::contains(long k) const { return k >= 1 && bit_at(pre_, per_, k) == '1'; }

long NatSet::tail_start() const {
  if (!is_cofinite()) throw DomainError("set is not cofinite");
  return static_cast<long>(pre_.size()) + 1;
}

std::vector<long> NatSet::members_below(long m) const {
  std::vector<long> out;
  for (long k = 1; k < m; ++k)
    if (contains(k)) out.push_back(k);
  return out;
}

std::vector<long> NatSet::members() const {
  if (!is_finite()) throw DomainError("set is infinite");
  return members_below(static_cast<long>(pre_.size()) + 1);
}

NatSet operator|(const NatSet& a, const NatSet& b) { return combine(a, b, [](bool u, bool v) { return u || v; }); }
NatSet operator&(const NatSet& a, const NatSet& b) { return combine(a, b, [](bool u, bool v) { return u && v; }); }

NatSet NatSet::operator~() const {
  std::string pre = pre_, per = per_;
  for (auto* w : {&pre, &per})
    for (char& c : *w) c = c == '1' ? '0' : '1';
  return NatSet(std::move(pre), std::move(per));
}

std::string NatSet::to_string() const { return "{" + pre_ + ";" + per_ + "}"; }

// ---------------------------------------------------------------------------
// Elements

CofElem CofElem::from_index(const NatSet& index, bool tail) {
  CofElem e;
  if (tail) {
    if (!index.is_cofinite()) throw DomainError("an element with a tail has a cofinite index set");
    const long m = index.tail_start();
    e.tail_ = m;
    e.yset_ = index & NatSet::interval(1, m);
  } else {
    e.yset_ = index;
  }
  return e;
}

CofElem CofElem::x(long m) {
  if (m < 1) throw DomainError("tail index starts at 1");
  return from_index(NatSet::from(m), true);
}

CofElem CofElem::y(long k) { return from_index(NatSet::singleton(k), false); }

NatSet CofElem::index_set() const { return tail_ ? yset_ | NatSet::from(*tail_) : yset_; }

CofElem cof_meet(const CofElem& a, const CofElem& b) {
  return CofElem::from_index(a.index_set() & b.index_set(), a.has_tail() && b.has_tail());
}

CofElem cof_join(const CofElem& a, const CofElem& b) {
  return CofElem::from_index(a.index_set() | b.index_set(), a.has_tail() || b.has_tail());
}

bool cof_le(const CofElem& a, const CofElem& b) { return cof_meet(a, b) == a; }

Membership closure_membership(const CofElem& e) {
  return e.has_tail() || e.yset().is_finite() ? Membership::in_algebra : Membership::closure_only;
}

std::optional<CofElem> has_complement(const CofElem& e) {
  if (closure_membership(e) != Membership::in_algebra) return std::nullopt;
  return CofElem::from_index(~e.index_set(), !e.has_tail());
}

std::string_view membership_name(Membership m) {
  return m == Membership::in_algebra ? "in B" : "in Cl(B)\\B";
}

std::string format(const CofElem& e) {
  if (e == CofElem::zero()) return "0";
  if (e == CofElem::one()) return "1";
  std::string out;
  auto add = [&](const std::string& term) { out += (out.empty() ? "" : "|") + term; };
  if (e.yset().is_finite()) {
    for (long k : e.yset().members()) add("y" + std::to_string(k));
  } else {
    add("Y" + e.yset().to_string());
  }
  if (e.tail()) add("x" + std::to_string(*e.tail()));
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  CofElem parse_all() {
    CofElem e = parse_join();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at position " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  long number() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::stol(std::string(text_.substr(start, pos_ - start)));
  }
  std::string bits() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (text_[pos_] == '0' || text_[pos_] == '1')) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  CofElem parse_join() {
    CofElem acc = parse_meet();
    while (accept('|')) acc = cof_join(acc, parse_meet());
    return acc;
  }
  CofElem parse_meet() {
    CofElem acc = parse_unary();
    while (accept('&')) acc = cof_meet(acc, parse_unary());
    return acc;
  }
  CofElem parse_unary() {
    if (accept('~')) {
      const CofElem e = parse_unary();
      auto c = has_complement(e);
      if (!c) throw DomainError(format(e) + " has no complement");
      return *c;
    }
    return parse_primary();
  }
  CofElem parse_primary() {
    skip();
    if (accept('(')) {
      CofElem e = parse_join();
      expect(')');
      return e;
    }
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_++];
    switch (c) {
      case '0': return CofElem::zero();
      case '1': return CofElem::one();
      case 'x': {
        const long m = number();
        if (m < 1) fail("tail index starts at 1");
        return CofElem::x(m);
      }
      case 'y': {
        const long k = number();
        if (k < 1) fail("generator index starts at 1");
        return CofElem::y(k);
      }
      case 'Y': return CofElem::Y(parse_set());
      default: --pos_; fail(std::string("unexpected '") + c + "'");
    }
  }
  NatSet parse_set() {
    if (accept('{')) {
      std::string pre = bits();
      expect(';');
      std::string per = bits();
      expect('}');
      if (per.empty()) fail("period word must be nonempty");
      return NatSet(pre, per);
    }
    expect('(');
    skip();
    NatSet s;
    if (accept('N')) {
      s = NatSet::all();
    } else {
      long step = 1;
      skip();
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) step = number();
      if (!accept('k')) {
        // plain index list: Y(1,2,5)
        std::vector<long> members{step};
        while (accept(',')) members.push_back(number());
        expect(')');
        return NatSet::of(members);
      }
      long offset = 0;
      if (accept('+')) offset = number();
      else if (accept('-')) offset = -number();
      s = step == 0 ? NatSet::empty() : NatSet::arithmetic(step, offset);
    }
    expect(')');
    return s;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

CofElem parse(std::string_view text) { return Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Sequences

Sequence Sequence::prefix_joins(const NatSet& indices) {
  Sequence s;
  s.settled_ = indices;
  s.pending_ = NatSet::empty();
  s.shift_ = 1;
  s.tail_ = false;
  s.description_ = "prefix(Y" + indices.to_string() + ")";
  return s;
}

Sequence Sequence::tail_chain(long m) {
  if (m < 0) throw DomainError("tail chain offset must be nonnegative");
  Sequence s;
  s.settled_ = NatSet::empty();
  s.pending_ = NatSet::all();
  s.shift_ = m;
  s.tail_ = true;
  s.description_ = "tail(" + std::to_string(m) + ")";
  return s;
}

Sequence Sequence::eventually_constant(std::vector<CofElem> elements) {
  if (elements.empty()) throw UnsupportedSequence("eventually constant sequence needs at least one element");
  Sequence s;
  const CofElem last = elements.back();
  s.description_ = "const(";
  for (std::size_t i = 0; i < elements.size(); ++i) s.description_ += (i ? ", " : "") + format(elements[i]);
  s.description_ += ")";
  elements.pop_back();
  s.prefix_ = std::move(elements);
  s.settled_ = last.index_set();
  s.pending_ = last.index_set();
  s.shift_ = 1;
  s.tail_ = last.has_tail();
  return s;
}

Sequence Sequence::complements() const {
  Sequence s = *this;
  for (auto& e : s.prefix_) {
    auto c = has_complement(e);
    if (!c) throw UnsupportedSequence(format(e) + " has no complement; complement chain undefined");
    e = *c;
  }
  if (!tail_ && !pending_.is_finite())
    throw UnsupportedSequence("sequence leaves the algebra; complement chain undefined");
  s.settled_ = ~settled_;
  s.pending_ = ~pending_;
  s.tail_ = !tail_;
  s.description_ = "comp(" + description_ + ")";
  return s;
}

Sequence Sequence::joined_with(const CofElem& c) const {
  Sequence s = *this;
  for (auto& e : s.prefix_) e = cof_join(e, c);
  const NatSet ci = c.index_set();
  s.settled_ = settled_ | ci;
  s.pending_ = pending_ | ci;
  s.tail_ = tail_ || c.has_tail();
  s.description_ = "join(" + format(c) + ", " + description_ + ")";
  return s;
}

Sequence Sequence::join_with_limit_of(const Sequence& other) const {
  if (other.direction() == Direction::increasing)
    throw UnsupportedSequence("inner limit needs a decreasing sequence");
  Sequence s = *this;
  for (std::size_t i = 0; i < s.prefix_.size(); ++i)
    s.prefix_[i] = monotone_limit(other.joined_with(prefix_[i]));
  // m-th element v other_n, as n grows, keeps the index set
  // (this_m u B) and keeps its tail only when that set stays cofinite
  const NatSet& b = other.settled_;
  s.settled_ = settled_ | b;
  s.pending_ = pending_ | b;
  s.tail_ = (tail_ || other.tail_) && s.pending_.is_cofinite();
  s.description_ = "innerlim(" + description_ + ", " + other.description_ + ")";
  return s;
}

CofElem Sequence::at(long n) const {
  if (n < 1) throw DomainError("sequences are indexed from 1");
  if (n < param_start()) return prefix_[static_cast<std::size_t>(n - 1)];
  const long cut = n + shift_;
  return CofElem::from_index((settled_ & NatSet::interval(1, cut)) | (pending_ & NatSet::from(cut)), tail_);
}

Sequence::Direction Sequence::direction() const {
  bool up = true, down = true;
  for (long n = 1; n < param_start(); ++n) {
    const CofElem a = at(n), b = at(n + 1);
    up = up && cof_le(a, b);
    down = down && cof_le(b, a);
  }
  const NatSet moving = NatSet::from(param_start() + shift_);
  up = up && ((pending_ - settled_) & moving).is_empty();
  down = down && ((settled_ - pending_) & moving).is_empty();
  if (up && down) return Direction::constant;
  if (up) return Direction::increasing;
  if (down) return Direction::decreasing;
  throw UnsupportedSequence("sequence " + description_ + " is not monotone");
}

CofElem monotone_limit(const Sequence& seq) {
  const auto dir = seq.direction();
  const NatSet limit_index = seq.settled_;
  if (dir == Sequence::Direction::decreasing)
    // the tail survives only if it stops moving
    return CofElem::from_index(limit_index, seq.tail_ && limit_index.is_cofinite());
  return CofElem::from_index(limit_index, seq.tail_);
}

namespace {

std::vector<std::string> split_args(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if ((c == '(' || c == '{') && ++depth) {}
    if (c == ')' || c == '}') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Sequence parse_sequence(std::string_view text) {
  text = strip(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')')
    throw UnsupportedSequence("unsupported sequence descriptor '" + std::string(text) + "'");
  const std::string_view head = strip(text.substr(0, open));
  const std::string_view body = text.substr(open + 1, text.size() - open - 2);
  if (head == "prefix") {
    const CofElem e = parse(body);
    if (e.has_tail()) throw UnsupportedSequence("prefix() takes a set of y-indices without a tail");
    return Sequence::prefix_joins(e.yset());
  }
  if (head == "tail") return Sequence::tail_chain(std::stol(std::string(strip(body))));
  if (head == "const") {
    std::vector<CofElem> elems;
    for (const auto& arg : split_args(body)) elems.push_back(parse(arg));
    return Sequence::eventually_constant(std::move(elems));
  }
  if (head == "comp") return parse_sequence(body).complements();
  throw UnsupportedSequence("unsupported sequence descriptor '" + std::string(head) + "'");
}

ConditionC condition_c_check(const Sequence& increasing) {
  if (increasing.direction() == Sequence::Direction::decreasing)
    throw UnsupportedSequence("condition (c) needs an increasing sequence");
  ConditionC r;
  r.sup = monotone_limit(increasing);
  r.inf_complements = monotone_limit(increasing.complements());
  r.joined = cof_join(r.sup, r.inf_complements);
  r.holds = r.joined == CofElem::one();
  return r;
}

DoubleLimit double_limit_check(const Sequence& increasing) {
  if (increasing.direction() == Sequence::Direction::decreasing)
    throw UnsupportedSequence("double limit needs an increasing sequence");
  const Sequence comps = increasing.complements();
  DoubleLimit r;
  r.lhs = cof_join(monotone_limit(increasing), monotone_limit(comps));
  r.rhs = monotone_limit(increasing.join_with_limit_of(comps));
  r.equal = r.lhs == r.rhs;
  return r;
}

// ---------------------------------------------------------------------------
// Ultrafilters

bool Ultrafilter::contains(const CofElem& e) const {
  if (closure_membership(e) != Membership::in_algebra) return false;
  return kind == Kind::principal ? e.index_set().contains(n) : e.has_tail();
}

CofElem Ultrafilter::infimum() const {
  if (kind == Kind::principal) return CofElem::y(n);  // least member
  // x_1 >= x_2 >= ... lie in the filter and every member lies above one of them
  return monotone_limit(Sequence::tail_chain(0));
}

std::string Ultrafilter::name() const {
  return kind == Kind::principal ? "principal(" + std::to_string(n) + ")" : "frechet";
}

std::vector<Ultrafilter> enumerate_ultrafilters(long principal_bound) {
  std::vector<Ultrafilter> out;
  for (long k = 1; k <= principal_bound; ++k) out.push_back({Ultrafilter::Kind::principal, k});
  out.push_back({Ultrafilter::Kind::frechet, 0});
  return out;
}

AtomlessVerdict is_atomless() {
  for (const auto& u : enumerate_ultrafilters(1)) {
    const CofElem inf = u.infimum();
    if (inf != CofElem::zero()) return {false, u, inf};
  }
  return {true, {}, CofElem::zero()};
}

std::vector<CofElem> bounded_enumeration(long max_index, int max_word) {
  std::set<CofElem> out;
  const long subsets = 1L << max_index;
  for (long mask = 0; mask < subsets; ++mask) {
    std::vector<long> members;
    for (long k = 1; k <= max_index; ++k)
      if ((mask >> (k - 1)) & 1L) members.push_back(k);
    const NatSet f = NatSet::of(members);
    out.insert(CofElem::Y(f));
    for (long m = 1; m <= max_index + 1; ++m) out.insert(CofElem::from_index(f | NatSet::from(m), true));
  }
  auto words = [](int len) {
    std::vector<std::string> w;
    for (long code = 0; code < (1L << len); ++code) {
      std::string s(static_cast<std::size_t>(len), '0');
      for (int i = 0; i < len; ++i)
        if ((code >> i) & 1L) s[static_cast<std::size_t>(i)] = '1';
      w.push_back(s);
    }
    return w;
  };
  for (int lp = 0; lp <= max_word; ++lp)
    for (int lq = 1; lq <= max_word; ++lq)
      for (const auto& pre : words(lp))
        for (const auto& per : words(lq)) {
          const NatSet s(pre, per);
          if (!s.is_finite()) out.insert(CofElem::Y(s));
        }
  return {out.begin(), out.end()};
}

}  // namespace noise_lattice::cofinite
