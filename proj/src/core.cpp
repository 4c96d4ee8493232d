#include "galois/core.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace galois {

BudgetExceeded::BudgetExceeded(std::string enumeration, std::string count, std::string limit)
: std::runtime_error("budget exceeded: " + enumeration + " needs " + count +
                     " candidates (limit " + limit + ")"),
  enumeration_(std::move(enumeration)), count_(std::move(count))
{}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exp)
{
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && result > UINT64_MAX / base) {
      return std::nullopt;
    }
    result *= base;
  }
  return result;
}

std::string pow_string(std::uint64_t base, std::uint64_t exp)
{
  if (const auto v = checked_pow(base, exp)) {
    return std::to_string(*v);
  }
  return std::to_string(base) + "^" + std::to_string(exp);
}

std::uint64_t tuple_space(std::uint32_t domain_size, std::uint32_t arity)
{
  const auto v = checked_pow(domain_size, arity);
  if (!v) {
    throw RangeError("tuple space " + pow_string(domain_size, arity) + " does not fit in 64 bits");
  }
  return *v;
}

DomainSpec::DomainSpec(std::string name_, std::uint32_t size_)
: name(std::move(name_)), size(size_)
{
  if (size == 0) {
    throw RangeError("domain '" + name + "' must be non-empty");
  }
}

Rank rank_tuple(std::span<const Element> entries, std::uint32_t domain_size)
{
  Rank r = 0;
  for (const Element e : entries) {
    if (e >= domain_size) {
      throw RangeError("tuple entry " + std::to_string(e) + " outside domain of size " +
                       std::to_string(domain_size));
    }
    r = r * domain_size + e;
  }
  return r;
}

Tuple unrank_tuple(Rank rank, std::uint32_t domain_size, std::uint32_t arity)
{
  if (rank >= tuple_space(domain_size, arity)) {
    throw RangeError("rank " + std::to_string(rank) + " outside " +
                     pow_string(domain_size, arity) + " tuples");
  }
  Tuple t(arity);
  for (std::uint32_t i = arity; i-- > 0;) {
    t[i] = static_cast<Element>(rank % domain_size);
    rank /= domain_size;
  }
  return t;
}

// Bitset

Bitset::Bitset(std::size_t bits)
: bits_(bits), words_((bits + 63) / 64, 0)
{}

void Bitset::set_all()
{
  std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
  if (bits_ % 64 != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << (bits_ % 64)) - 1;
  }
}

std::size_t Bitset::count() const
{
  std::size_t n = 0;
  for (const auto w : words_) {
    n += static_cast<std::size_t>(std::popcount(w));
  }
  return n;
}

bool Bitset::none() const
{
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool Bitset::is_subset_of(const Bitset& other) const
{
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) {
      return false;
    }
  }
  return true;
}

Bitset& Bitset::operator|=(const Bitset& other)
{
  for (std::size_t i = 0; i < words_.size(); ++i) {
    words_[i] |= other.words_[i];
  }
  return *this;
}

Bitset& Bitset::operator&=(const Bitset& other)
{
  for (std::size_t i = 0; i < words_.size(); ++i) {
    words_[i] &= other.words_[i];
  }
  return *this;
}

std::strong_ordering operator<=>(const Bitset& a, const Bitset& b)
{
  if (a.bits_ != b.bits_) {
    return a.bits_ <=> b.bits_;
  }
  for (std::size_t i = a.words_.size(); i-- > 0;) {
    if (a.words_[i] != b.words_[i]) {
      return a.words_[i] <=> b.words_[i];
    }
  }
  return std::strong_ordering::equal;
}

// Relation

Relation::Relation(std::uint32_t domain_size, std::uint32_t arity)
: domain_size_(domain_size), arity_(arity)
{
  if (domain_size == 0) {
    throw RangeError("relation over an empty domain");
  }
  if (arity == 0) {
    throw RangeError("relation arity must be positive");
  }
  members_ = Bitset(tuple_space(domain_size, arity));
}

Relation Relation::full(std::uint32_t domain_size, std::uint32_t arity)
{
  Relation r(domain_size, arity);
  r.members_.set_all();
  return r;
}

Relation Relation::diagonal(std::uint32_t domain_size, std::uint32_t arity)
{
  Relation r(domain_size, arity);
  for (Element a = 0; a < domain_size; ++a) {
    r.insert(Tuple(arity, a));
  }
  return r;
}

Relation Relation::from_tuples(std::uint32_t domain_size, std::uint32_t arity,
                               const std::vector<Tuple>& tuples)
{
  Relation r(domain_size, arity);
  for (const auto& t : tuples) {
    r.insert(t);
  }
  return r;
}

Relation Relation::from_mask(std::uint32_t domain_size, std::uint32_t arity, std::uint64_t mask)
{
  Relation r(domain_size, arity);
  if (r.universe() > 64 || (r.universe() < 64 && (mask >> r.universe()) != 0)) {
    throw RangeError("relation mask does not fit the tuple space");
  }
  if (r.universe() > 0) {
    r.members_.words()[0] = mask;
  }
  return r;
}

bool Relation::contains(std::span<const Element> tuple) const
{
  if (tuple.size() != arity_) {
    throw MismatchError("tuple of length " + std::to_string(tuple.size()) + " against relation of arity " +
                        std::to_string(arity_));
  }
  return members_.test(rank_tuple(tuple, domain_size_));
}

void Relation::insert(Rank r)
{
  if (r >= universe()) {
    throw RangeError("tuple rank " + std::to_string(r) + " outside relation universe");
  }
  members_.set(r);
}

void Relation::insert(std::span<const Element> tuple)
{
  if (tuple.size() != arity_) {
    throw MismatchError("tuple of length " + std::to_string(tuple.size()) + " inserted into relation of arity " +
                        std::to_string(arity_));
  }
  members_.set(rank_tuple(tuple, domain_size_));
}

void Relation::erase(Rank r)
{
  if (r >= universe()) {
    throw RangeError("tuple rank " + std::to_string(r) + " outside relation universe");
  }
  members_.reset(r);
}

void Relation::check_shape(const Relation& other, const char* op) const
{
  if (domain_size_ != other.domain_size_ || arity_ != other.arity_) {
    throw MismatchError(std::string(op) + " on relations of different shape");
  }
}

bool Relation::is_subset_of(const Relation& other) const
{
  check_shape(other, "subset test");
  return members_.is_subset_of(other.members_);
}

Relation& Relation::operator|=(const Relation& other)
{
  check_shape(other, "union");
  members_ |= other.members_;
  return *this;
}

Relation& Relation::operator&=(const Relation& other)
{
  check_shape(other, "intersection");
  members_ &= other.members_;
  return *this;
}

std::vector<Rank> Relation::ranks() const
{
  std::vector<Rank> out;
  out.reserve(size());
  members_.for_each([&](std::size_t r) { out.push_back(r); });
  return out;
}

std::vector<Tuple> Relation::tuples() const
{
  std::vector<Tuple> out;
  members_.for_each([&](std::size_t r) { out.push_back(unrank_tuple(r, domain_size_, arity_)); });
  return out;
}

std::uint64_t Relation::mask() const
{
  if (universe() > 64) {
    throw RangeError("relation universe exceeds 64 tuples");
  }
  return universe() == 0 ? 0 : members_.words()[0];
}

std::strong_ordering operator<=>(const Relation& a, const Relation& b)
{
  if (auto c = a.domain_size_ <=> b.domain_size_; c != 0) {
    return c;
  }
  if (auto c = a.arity_ <=> b.arity_; c != 0) {
    return c;
  }
  return a.members_ <=> b.members_;
}

// Constraint

Constraint::Constraint(Relation antecedent, Relation consequent)
: antecedent_(std::move(antecedent)), consequent_(std::move(consequent))
{
  if (antecedent_.arity() != consequent_.arity()) {
    throw MismatchError("constraint antecedent has arity " + std::to_string(antecedent_.arity()) +
                        " but consequent has arity " + std::to_string(consequent_.arity()));
  }
}

std::strong_ordering operator<=>(const Constraint& a, const Constraint& b)
{
  if (auto c = a.arity() <=> b.arity(); c != 0) {
    return c;
  }
  if (auto c = a.antecedent_ <=> b.antecedent_; c != 0) {
    return c;
  }
  return a.consequent_ <=> b.consequent_;
}

Constraint canonical_constraint(CanonicalKind kind, std::uint32_t arity, std::uint32_t a_size,
                                std::uint32_t b_size)
{
  switch (kind) {
  case CanonicalKind::equality:
    return {Relation::diagonal(a_size, arity), Relation::diagonal(b_size, arity)};
  case CanonicalKind::empty:
    return {Relation(a_size, arity), Relation(b_size, arity)};
  case CanonicalKind::trivial:
    return {Relation::full(a_size, arity), Relation::full(b_size, arity)};
  }
  throw std::logic_error("unknown canonical constraint kind");
}

bool relaxation_of(const Constraint& c, const Constraint& c0)
{
  if (c.arity() != c0.arity() || c.a_size() != c0.a_size() || c.b_size() != c0.b_size()) {
    throw MismatchError("relaxation test between constraints of different shape");
  }
  return c.antecedent().is_subset_of(c0.antecedent()) && c0.consequent().is_subset_of(c.consequent());
}

// FunctionTable

FunctionTable::FunctionTable(std::uint32_t dom_size, std::uint32_t cod_size, std::uint32_t arity,
                             std::vector<Element> table)
: dom_size_(dom_size), cod_size_(cod_size), arity_(arity), table_(std::move(table))
{
  if (dom_size == 0 || cod_size == 0) {
    throw RangeError("function over an empty domain");
  }
  if (arity == 0) {
    throw RangeError("function arity must be positive");
  }
  const auto expected = tuple_space(dom_size, arity);
  if (table_.size() != expected) {
    throw MismatchError("expected " + std::to_string(expected) + " entries, got " +
                        std::to_string(table_.size()));
  }
  for (const Element v : table_) {
    if (v >= cod_size) {
      throw RangeError("table value " + std::to_string(v) + " outside codomain of size " +
                       std::to_string(cod_size));
    }
  }
}

FunctionTable FunctionTable::from_rank(std::uint32_t dom_size, std::uint32_t cod_size,
                                       std::uint32_t arity, Rank rank)
{
  const auto points = tuple_space(dom_size, arity);
  std::vector<Element> table(points);
  for (std::uint64_t i = points; i-- > 0;) {
    table[i] = static_cast<Element>(rank % cod_size);
    rank /= cod_size;
  }
  if (rank != 0) {
    throw RangeError("function rank outside B^(A^n)");
  }
  return {dom_size, cod_size, arity, std::move(table)};
}

Element FunctionTable::operator()(std::span<const Element> args) const
{
  if (args.size() != arity_) {
    throw MismatchError("function of arity " + std::to_string(arity_) + " applied to " +
                        std::to_string(args.size()) + " arguments");
  }
  return table_[rank_tuple(args, dom_size_)];
}

Rank FunctionTable::table_rank() const
{
  if (!function_count(dom_size_, cod_size_, arity_)) {
    throw RangeError("function space too large to rank");
  }
  Rank r = 0;
  for (const Element v : table_) {
    r = r * cod_size_ + v;
  }
  return r;
}

std::strong_ordering operator<=>(const FunctionTable& a, const FunctionTable& b)
{
  if (auto c = a.dom_size_ <=> b.dom_size_; c != 0) {
    return c;
  }
  if (auto c = a.cod_size_ <=> b.cod_size_; c != 0) {
    return c;
  }
  if (auto c = a.arity_ <=> b.arity_; c != 0) {
    return c;
  }
  return std::lexicographical_compare_three_way(a.table_.begin(), a.table_.end(), b.table_.begin(),
                                                b.table_.end());
}

FunctionTable projection(std::uint32_t n, std::uint32_t i, std::uint32_t domain_size)
{
  if (i < 1 || i > n) {
    throw RangeError("projection coordinate " + std::to_string(i) + " outside 1.." + std::to_string(n));
  }
  const auto points = tuple_space(domain_size, n);
  std::vector<Element> table(points);
  for (Rank r = 0; r < points; ++r) {
    table[r] = unrank_tuple(r, domain_size, n)[i - 1];
  }
  return {domain_size, domain_size, n, std::move(table)};
}

std::optional<std::uint64_t> function_count(std::uint32_t dom_size, std::uint32_t cod_size,
                                            std::uint32_t arity)
{
  const auto points = checked_pow(dom_size, arity);
  if (!points) {
    return std::nullopt;
  }
  return checked_pow(cod_size, *points);
}

// FunctionEnumerator

FunctionEnumerator::FunctionEnumerator(std::uint32_t dom_size, std::uint32_t cod_size,
                                       std::uint32_t arity, const Budget& budget)
: dom_size_(dom_size), cod_size_(cod_size), arity_(arity), count_(0)
{
  const auto count = function_count(dom_size, cod_size, arity);
  const auto name = "B^(A^" + std::to_string(arity) + ")";
  if (!count) {
    const auto points = checked_pow(dom_size, arity);
    throw BudgetExceeded(name,
                         points ? pow_string(cod_size, *points)
                                : std::to_string(cod_size) + "^(" + pow_string(dom_size, arity) + ")",
                         std::to_string(budget.max_functions));
  }
  if (*count > budget.max_functions) {
    throw BudgetExceeded(name, std::to_string(*count), std::to_string(budget.max_functions));
  }
  count_ = *count;
}

FunctionEnumerator::iterator FunctionEnumerator::begin() const
{
  iterator it;
  it.owner_ = this;
  it.done_ = false;
  it.digits_.assign(tuple_space(dom_size_, arity_), 0);
  it.current_ = FunctionTable(dom_size_, cod_size_, arity_, it.digits_);
  return it;
}

FunctionEnumerator::iterator& FunctionEnumerator::iterator::operator++()
{
  const auto base = owner_->cod_size_;
  std::size_t i = digits_.size();
  while (i > 0) {
    --i;
    if (++digits_[i] < base) {
      current_ = FunctionTable(owner_->dom_size_, base, owner_->arity_, digits_);
      return *this;
    }
    digits_[i] = 0;
  }
  done_ = true;
  return *this;
}

// FunctionClass

FunctionClass::FunctionClass(std::uint32_t dom_size, std::uint32_t cod_size,
                             std::optional<std::uint32_t> arity_cap)
: dom_size_(dom_size), cod_size_(cod_size), arity_cap_(arity_cap)
{
  if (dom_size == 0 || cod_size == 0) {
    throw RangeError("function class over an empty domain");
  }
  if (arity_cap && *arity_cap == 0) {
    throw RangeError("arity cap must be positive");
  }
}

void FunctionClass::insert(FunctionTable f)
{
  if (f.dom_size() != dom_size_ || f.cod_size() != cod_size_) {
    throw MismatchError("function domains do not match the class");
  }
  if (arity_cap_ && f.arity() > *arity_cap_) {
    throw RangeError("function arity " + std::to_string(f.arity()) + " exceeds class cap " +
                     std::to_string(*arity_cap_));
  }
  const auto n = f.arity();
  by_arity_[n].insert(std::move(f));
}

void FunctionClass::insert_all(const FunctionClass& other)
{
  for (const auto& [n, members] : other.by_arity_) {
    for (const auto& f : members) {
      insert(f);
    }
  }
}

bool FunctionClass::contains(const FunctionTable& f) const
{
  const auto it = by_arity_.find(f.arity());
  return it != by_arity_.end() && it->second.contains(f);
}

const FunctionClass::Members& FunctionClass::at_arity(std::uint32_t n) const
{
  static const Members none;
  const auto it = by_arity_.find(n);
  return it == by_arity_.end() ? none : it->second;
}

std::vector<std::uint32_t> FunctionClass::arities() const
{
  std::vector<std::uint32_t> out;
  for (const auto& [n, members] : by_arity_) {
    if (!members.empty()) {
      out.push_back(n);
    }
  }
  return out;
}

std::optional<std::uint32_t> FunctionClass::single_arity() const
{
  const auto a = arities();
  if (a.size() == 1) {
    return a.front();
  }
  return std::nullopt;
}

std::size_t FunctionClass::size() const
{
  std::size_t n = 0;
  for (const auto& [arity, members] : by_arity_) {
    n += members.size();
  }
  return n;
}

bool FunctionClass::is_subset_of(const FunctionClass& other) const
{
  for (const auto& [n, members] : by_arity_) {
    const auto& theirs = other.at_arity(n);
    for (const auto& f : members) {
      if (!theirs.contains(f)) {
        return false;
      }
    }
  }
  return true;
}

FunctionClass FunctionClass::restricted_to(std::uint32_t n) const
{
  FunctionClass out(dom_size_, cod_size_, arity_cap_);
  for (const auto& f : at_arity(n)) {
    out.insert(f);
  }
  return out;
}

std::vector<FunctionTable> FunctionClass::members() const
{
  std::vector<FunctionTable> out;
  for (const auto& [n, members] : by_arity_) {
    out.insert(out.end(), members.begin(), members.end());
  }
  return out;
}

bool operator==(const FunctionClass& a, const FunctionClass& b)
{
  return a.dom_size_ == b.dom_size_ && a.cod_size_ == b.cod_size_ && a.is_subset_of(b) &&
         b.is_subset_of(a);
}

// ConstraintSet

ConstraintSet::ConstraintSet(std::uint32_t a_size, std::uint32_t b_size,
                             std::optional<std::uint32_t> arity_cap)
: a_size_(a_size), b_size_(b_size), arity_cap_(arity_cap)
{
  if (a_size == 0 || b_size == 0) {
    throw RangeError("constraint set over an empty domain");
  }
  if (arity_cap && *arity_cap == 0) {
    throw RangeError("arity cap must be positive");
  }
}

void ConstraintSet::insert(Constraint c)
{
  if (c.a_size() != a_size_ || c.b_size() != b_size_) {
    throw MismatchError("constraint domains do not match the set");
  }
  if (arity_cap_ && c.arity() > *arity_cap_) {
    throw RangeError("constraint arity " + std::to_string(c.arity()) + " exceeds set cap " +
                     std::to_string(*arity_cap_));
  }
  const auto m = c.arity();
  by_arity_[m].insert(std::move(c));
}

void ConstraintSet::insert_all(const ConstraintSet& other)
{
  for (const auto& [m, members] : other.by_arity_) {
    for (const auto& c : members) {
      insert(c);
    }
  }
}

bool ConstraintSet::contains(const Constraint& c) const
{
  const auto it = by_arity_.find(c.arity());
  return it != by_arity_.end() && it->second.contains(c);
}

void ConstraintSet::erase(const Constraint& c)
{
  const auto it = by_arity_.find(c.arity());
  if (it != by_arity_.end()) {
    it->second.erase(c);
  }
}

const ConstraintSet::Members& ConstraintSet::at_arity(std::uint32_t m) const
{
  static const Members none;
  const auto it = by_arity_.find(m);
  return it == by_arity_.end() ? none : it->second;
}

std::vector<std::uint32_t> ConstraintSet::arities() const
{
  std::vector<std::uint32_t> out;
  for (const auto& [m, members] : by_arity_) {
    if (!members.empty()) {
      out.push_back(m);
    }
  }
  return out;
}

std::size_t ConstraintSet::size() const
{
  std::size_t n = 0;
  for (const auto& [m, members] : by_arity_) {
    n += members.size();
  }
  return n;
}

bool ConstraintSet::is_subset_of(const ConstraintSet& other) const
{
  for (const auto& [m, members] : by_arity_) {
    const auto& theirs = other.at_arity(m);
    for (const auto& c : members) {
      if (!theirs.contains(c)) {
        return false;
      }
    }
  }
  return true;
}

ConstraintSet ConstraintSet::restricted_to(std::uint32_t m) const
{
  ConstraintSet out(a_size_, b_size_, arity_cap_);
  for (const auto& c : at_arity(m)) {
    out.insert(c);
  }
  return out;
}

std::vector<Constraint> ConstraintSet::members() const
{
  std::vector<Constraint> out;
  for (const auto& [m, members] : by_arity_) {
    out.insert(out.end(), members.begin(), members.end());
  }
  return out;
}

bool operator==(const ConstraintSet& a, const ConstraintSet& b)
{
  return a.a_size_ == b.a_size_ && a.b_size_ == b.b_size_ && a.is_subset_of(b) && b.is_subset_of(a);
}

// ConstraintSpace

ConstraintSpace::ConstraintSpace(std::uint32_t a_size, std::uint32_t b_size, std::uint32_t arity,
                                 const Budget& budget)
: a_size_(a_size), b_size_(b_size), arity_(arity), a_points_(0), b_points_(0)
{
  const auto ap = checked_pow(a_size, arity);
  const auto bp = checked_pow(b_size, arity);
  const auto name = "Q_" + std::to_string(arity);
  const auto limit = std::to_string(budget.max_constraints);
  if (!ap || !bp || *ap + *bp > 62) {
    throw BudgetExceeded(name,
                         "2^(" + pow_string(a_size, arity) + "+" + pow_string(b_size, arity) + ")",
                         limit);
  }
  a_points_ = static_cast<std::uint32_t>(*ap);
  b_points_ = static_cast<std::uint32_t>(*bp);
  if (size() > budget.max_constraints) {
    throw BudgetExceeded(name, std::to_string(size()), limit);
  }
}

Rank ConstraintSpace::rank(const Constraint& c) const
{
  if (c.arity() != arity_ || c.a_size() != a_size_ || c.b_size() != b_size_) {
    throw MismatchError("constraint outside Q_" + std::to_string(arity_));
  }
  return rank(c.antecedent().mask(), c.consequent().mask());
}

Constraint ConstraintSpace::at(Rank r) const
{
  if (r >= size()) {
    throw RangeError("constraint rank outside Q_" + std::to_string(arity_));
  }
  return {Relation::from_mask(a_size_, arity_, antecedent_mask(r)),
          Relation::from_mask(b_size_, arity_, consequent_mask(r))};
}

ConstraintSet ConstraintSpace::all() const
{
  ConstraintSet out(a_size_, b_size_);
  for (Rank r = 0; r < size(); ++r) {
    out.insert(at(r));
  }
  return out;
}

} // namespace galois
