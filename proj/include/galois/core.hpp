#pragma once

// Value-level vocabulary: finite domains, tuples, relations, constraints,
// function tables and arity-indexed collections of them.
//
// Elements of a domain are dense indices 0..size-1. Tuples are ranked
// lexicographically with the first coordinate most significant; relations
// are bitsets over tuple ranks.

#include <compare>
#include <cstdint>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace galois {

using Element = std::uint32_t;
using Rank = std::uint64_t;
using Tuple = std::vector<Element>;

class RangeError : public std::out_of_range
{
public:
  using std::out_of_range::out_of_range;
};

/// Arity, domain or shape disagreement between operands.
class MismatchError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an enumeration would exceed its configured limit. Carries the
/// name of the enumeration and the computed size (as text, it may not fit in
/// 64 bits).
class BudgetExceeded : public std::runtime_error
{
public:
  BudgetExceeded(std::string enumeration, std::string count, std::string limit);

  const std::string& enumeration() const { return enumeration_; }
  const std::string& count() const { return count_; }

private:
  std::string enumeration_;
  std::string count_;
};

struct Budget
{
  std::uint64_t max_functions = std::uint64_t{1} << 20;   // |B|^(|A|^n)
  std::uint64_t max_constraints = std::uint64_t{1} << 24; // |Q_m|
  std::uint32_t max_indets = 2;                           // Skolem variables
};

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exp);

/// "b^e" rendered exactly when it fits in 64 bits, symbolically otherwise.
std::string pow_string(std::uint64_t base, std::uint64_t exp);

/// |D|^m; throws RangeError when the tuple space does not fit in 64 bits.
std::uint64_t tuple_space(std::uint32_t domain_size, std::uint32_t arity);

struct DomainSpec
{
  std::string name;
  std::uint32_t size = 1;

  DomainSpec() = default;
  DomainSpec(std::string name, std::uint32_t size);

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

Rank rank_tuple(std::span<const Element> entries, std::uint32_t domain_size);
Tuple unrank_tuple(Rank rank, std::uint32_t domain_size, std::uint32_t arity);

class Bitset
{
public:
  Bitset() = default;
  explicit Bitset(std::size_t bits);

  std::size_t size() const { return bits_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void set_all();

  std::size_t count() const;
  bool none() const;
  bool is_subset_of(const Bitset& other) const;

  Bitset& operator|=(const Bitset& other);
  Bitset& operator&=(const Bitset& other);

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  template<typename Fn>
  void for_each(Fn&& fn) const
  {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word) {
        const int bit = __builtin_ctzll(word);
        fn(w * 64 + static_cast<std::size_t>(bit));
        word &= word - 1;
      }
    }
  }

  /// Numeric order: the bitset read as an unsigned integer, bit 0 least
  /// significant.
  friend std::strong_ordering operator<=>(const Bitset& a, const Bitset& b);
  friend bool operator==(const Bitset& a, const Bitset& b) = default;

private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

/// An m-ary relation on a finite domain, stored as a bitset over tuple ranks.
class Relation
{
public:
  Relation() = default;
  Relation(std::uint32_t domain_size, std::uint32_t arity);

  static Relation full(std::uint32_t domain_size, std::uint32_t arity);
  static Relation diagonal(std::uint32_t domain_size, std::uint32_t arity);
  static Relation from_tuples(std::uint32_t domain_size, std::uint32_t arity,
                              const std::vector<Tuple>& tuples);
  static Relation from_mask(std::uint32_t domain_size, std::uint32_t arity, std::uint64_t mask);

  std::uint32_t domain_size() const { return domain_size_; }
  std::uint32_t arity() const { return arity_; }
  std::uint64_t universe() const { return members_.size(); }
  std::size_t size() const { return members_.count(); }
  bool empty() const { return members_.none(); }

  bool contains(Rank r) const { return r < universe() && members_.test(r); }
  bool contains(std::span<const Element> tuple) const;
  void insert(Rank r);
  void insert(std::span<const Element> tuple);
  void erase(Rank r);

  bool is_subset_of(const Relation& other) const;
  Relation& operator|=(const Relation& other);
  Relation& operator&=(const Relation& other);
  friend Relation operator|(Relation a, const Relation& b) { return a |= b; }
  friend Relation operator&(Relation a, const Relation& b) { return a &= b; }

  const Bitset& members() const { return members_; }
  std::vector<Rank> ranks() const;
  std::vector<Tuple> tuples() const;

  /// Member set as an integer; requires universe() <= 64.
  std::uint64_t mask() const;

  friend std::strong_ordering operator<=>(const Relation& a, const Relation& b);
  friend bool operator==(const Relation& a, const Relation& b) = default;

private:
  void check_shape(const Relation& other, const char* op) const;

  std::uint32_t domain_size_ = 1;
  std::uint32_t arity_ = 1;
  Bitset members_;
};

/// An A-to-B relational constraint (antecedent over A, consequent over B).
class Constraint
{
public:
  Constraint() = default;
  Constraint(Relation antecedent, Relation consequent);

  const Relation& antecedent() const { return antecedent_; }
  const Relation& consequent() const { return consequent_; }
  std::uint32_t arity() const { return antecedent_.arity(); }
  std::uint32_t a_size() const { return antecedent_.domain_size(); }
  std::uint32_t b_size() const { return consequent_.domain_size(); }

  friend std::strong_ordering operator<=>(const Constraint& a, const Constraint& b);
  friend bool operator==(const Constraint& a, const Constraint& b) = default;

private:
  Relation antecedent_;
  Relation consequent_;
};

enum class CanonicalKind { equality, empty, trivial };

Constraint canonical_constraint(CanonicalKind kind, std::uint32_t arity, std::uint32_t a_size,
                                std::uint32_t b_size);

/// True iff c is obtained from c0 by shrinking the antecedent and growing
/// the consequent.
bool relaxation_of(const Constraint& c, const Constraint& c0);

/// An n-ary B-valued function on A as a value table indexed by argument rank.
class FunctionTable
{
public:
  FunctionTable() = default;
  FunctionTable(std::uint32_t dom_size, std::uint32_t cod_size, std::uint32_t arity,
                std::vector<Element> table);

  static FunctionTable from_rank(std::uint32_t dom_size, std::uint32_t cod_size,
                                 std::uint32_t arity, Rank rank);

  std::uint32_t dom_size() const { return dom_size_; }
  std::uint32_t cod_size() const { return cod_size_; }
  std::uint32_t arity() const { return arity_; }
  std::span<const Element> table() const { return table_; }

  Element at(Rank argument_rank) const { return table_[argument_rank]; }
  Element operator()(std::span<const Element> args) const;

  /// Position in the enumeration order of B^(A^n): the table read as a
  /// base-|B| numeral, entry 0 most significant.
  Rank table_rank() const;

  friend std::strong_ordering operator<=>(const FunctionTable& a, const FunctionTable& b);
  friend bool operator==(const FunctionTable& a, const FunctionTable& b) = default;

private:
  std::uint32_t dom_size_ = 1;
  std::uint32_t cod_size_ = 1;
  std::uint32_t arity_ = 1;
  std::vector<Element> table_;
};

/// The n-ary projection onto coordinate i (1-based) on a domain of the given size.
FunctionTable projection(std::uint32_t n, std::uint32_t i, std::uint32_t domain_size);

/// |cod|^(|dom|^n), or nullopt if it does not fit in 64 bits.
std::optional<std::uint64_t> function_count(std::uint32_t dom_size, std::uint32_t cod_size,
                                            std::uint32_t arity);

/// Lazy, deterministic stream over B^(A^n) in table-rank order.
class FunctionEnumerator
{
public:
  FunctionEnumerator(std::uint32_t dom_size, std::uint32_t cod_size, std::uint32_t arity,
                     const Budget& budget = {});

  std::uint64_t count() const { return count_; }

  class iterator
  {
  public:
    using iterator_category = std::input_iterator_tag;
    using value_type = FunctionTable;
    using difference_type = std::ptrdiff_t;
    using pointer = const FunctionTable*;
    using reference = const FunctionTable&;

    iterator() = default;
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& a, const iterator& b) { return a.done_ == b.done_; }

  private:
    friend class FunctionEnumerator;
    FunctionTable current_;
    std::vector<Element> digits_;
    const FunctionEnumerator* owner_ = nullptr;
    bool done_ = true;
  };

  iterator begin() const;
  iterator end() const { return {}; }

private:
  std::uint32_t dom_size_, cod_size_, arity_;
  std::uint64_t count_;
};

/// Arity-indexed class of B-valued functions on A.
class FunctionClass
{
public:
  using Members = std::set<FunctionTable>;

  FunctionClass() = default;
  FunctionClass(std::uint32_t dom_size, std::uint32_t cod_size,
                std::optional<std::uint32_t> arity_cap = std::nullopt);

  std::uint32_t dom_size() const { return dom_size_; }
  std::uint32_t cod_size() const { return cod_size_; }
  std::optional<std::uint32_t> arity_cap() const { return arity_cap_; }

  void insert(FunctionTable f);
  void insert_all(const FunctionClass& other);
  bool contains(const FunctionTable& f) const;

  const Members& at_arity(std::uint32_t n) const;
  const std::map<std::uint32_t, Members>& by_arity() const { return by_arity_; }
  std::vector<std::uint32_t> arities() const;
  std::optional<std::uint32_t> single_arity() const;

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  bool is_subset_of(const FunctionClass& other) const;

  FunctionClass restricted_to(std::uint32_t n) const;
  std::vector<FunctionTable> members() const;

  /// Equality of members only; arity caps are metadata.
  friend bool operator==(const FunctionClass& a, const FunctionClass& b);

private:
  std::uint32_t dom_size_ = 1;
  std::uint32_t cod_size_ = 1;
  std::optional<std::uint32_t> arity_cap_;
  std::map<std::uint32_t, Members> by_arity_;
};

/// Arity-indexed set of A-to-B constraints.
class ConstraintSet
{
public:
  using Members = std::set<Constraint>;

  ConstraintSet() = default;
  ConstraintSet(std::uint32_t a_size, std::uint32_t b_size,
                std::optional<std::uint32_t> arity_cap = std::nullopt);

  std::uint32_t a_size() const { return a_size_; }
  std::uint32_t b_size() const { return b_size_; }
  std::optional<std::uint32_t> arity_cap() const { return arity_cap_; }

  void insert(Constraint c);
  void insert_all(const ConstraintSet& other);
  bool contains(const Constraint& c) const;
  void erase(const Constraint& c);

  const Members& at_arity(std::uint32_t m) const;
  const std::map<std::uint32_t, Members>& by_arity() const { return by_arity_; }
  std::vector<std::uint32_t> arities() const;

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  bool is_subset_of(const ConstraintSet& other) const;

  ConstraintSet restricted_to(std::uint32_t m) const;
  std::vector<Constraint> members() const;

  friend bool operator==(const ConstraintSet& a, const ConstraintSet& b);

private:
  std::uint32_t a_size_ = 1;
  std::uint32_t b_size_ = 1;
  std::optional<std::uint32_t> arity_cap_;
  std::map<std::uint32_t, Members> by_arity_;
};

/// Dense indexing of Q_m, the set of all m-ary A-to-B constraints. The rank
/// of (R, S) is mask(R) * 2^(|B|^m) + mask(S), which agrees with the
/// canonical constraint order.
class ConstraintSpace
{
public:
  ConstraintSpace(std::uint32_t a_size, std::uint32_t b_size, std::uint32_t arity,
                  const Budget& budget = {});

  std::uint32_t arity() const { return arity_; }
  std::uint32_t a_size() const { return a_size_; }
  std::uint32_t b_size() const { return b_size_; }
  std::uint32_t a_points() const { return a_points_; }
  std::uint32_t b_points() const { return b_points_; }
  std::uint64_t size() const { return std::uint64_t{1} << (a_points_ + b_points_); }
  std::uint64_t antecedent_count() const { return std::uint64_t{1} << a_points_; }
  std::uint64_t consequent_count() const { return std::uint64_t{1} << b_points_; }

  Rank rank(const Constraint& c) const;
  Rank rank(std::uint64_t antecedent_mask, std::uint64_t consequent_mask) const
  {
    return (antecedent_mask << b_points_) | consequent_mask;
  }
  Constraint at(Rank r) const;
  std::uint64_t antecedent_mask(Rank r) const { return r >> b_points_; }
  std::uint64_t consequent_mask(Rank r) const { return r & ((std::uint64_t{1} << b_points_) - 1); }

  ConstraintSet all() const;

private:
  std::uint32_t a_size_, b_size_, arity_;
  std::uint32_t a_points_, b_points_;
};

} // namespace galois
