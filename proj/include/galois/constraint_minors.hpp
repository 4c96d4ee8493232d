#pragma once

// Minor formation schemes and conjunctive minors of constraint families.
//
// A scheme with target m and v indeterminates is a family of maps h_j from
// source coordinates into {coord 1..m} u {indet 1..v}. A tuple a in D^m is
// in the tight minor of relations (R_j) iff some Skolem assignment s in D^v
// makes (a + s) o h_j a member of R_j for every j. The assignment is shared
// by the whole family.

#include "galois/core.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace galois {

struct SchemeEntry
{
  enum class Kind : std::uint8_t { coordinate, indeterminate };

  Kind kind = Kind::coordinate;
  std::uint32_t index = 0; // 0-based

  static SchemeEntry coord(std::uint32_t one_based) { return {Kind::coordinate, one_based - 1}; }
  static SchemeEntry indet(std::uint32_t one_based) { return {Kind::indeterminate, one_based - 1}; }

  friend auto operator<=>(const SchemeEntry&, const SchemeEntry&) = default;
};

using SchemeMap = std::vector<SchemeEntry>;

struct Scheme
{
  std::uint32_t target = 1;
  std::uint32_t indeterminates = 0;
  std::vector<SchemeMap> family;

  /// Throws RangeError on an empty family, an empty map or an entry out of range.
  void validate() const;

  /// Identity maps onto the target, `copies` times, with no indeterminates.
  static Scheme identity(std::uint32_t m, std::size_t copies = 1);

  friend bool operator==(const Scheme&, const Scheme&) = default;
};

/// Literal form, e.g. "target=2; V=1; h1=[c1,v1]; h2=[v1,c2]".
std::string to_string(const Scheme& scheme);

struct SkolemAssignment
{
  std::vector<Element> values;
};

enum class MinorMode { tight, restrictive, extensive, conjunctive };

struct MinorOptions
{
  std::uint32_t max_indets = 2;
};

/// Drops indeterminates that no map uses and renumbers the rest.
Scheme normalize_scheme(const Scheme& scheme);

/// A Skolem assignment witnessing `tuple` in the tight minor, if any.
std::optional<SkolemAssignment> find_skolem(std::span<const Relation> family, const Scheme& scheme,
                                            std::span<const Element> tuple);

Relation tight_minor_relation(std::span<const Relation> family, const Scheme& scheme,
                              const MinorOptions& options = {});

/// Antecedent and consequent each formed as tight minors via the same scheme.
Constraint tight_minor(std::span<const Constraint> family, const Scheme& scheme,
                       const MinorOptions& options = {});

/// tight: equal to the tight minor; restrictive: antecedent inside it;
/// extensive: consequent contains it; conjunctive: both, i.e. a relaxation
/// of the tight minor.
bool minor_check(const Constraint& candidate, std::span<const Constraint> family, const Scheme& scheme,
                 MinorMode mode, const MinorOptions& options = {});

struct SpecialMinor
{
  Constraint constraint;
  bool simple = false; // single-member family, tight
  bool weak = false;   // no indeterminates
};

SpecialMinor special_minor(const Constraint& c0, const Scheme& scheme, const MinorOptions& options = {});

/// Flattens a two-level scheme stack: inner_j produces the j-th source of
/// `outer`. The result, applied to the concatenated inner families, gives
/// the same tight minor as applying `outer` to the inner tight minors.
/// Inner indeterminates are renamed after the outer ones, in order.
Scheme compose_schemes(const Scheme& outer, std::span<const Scheme> inners);

} // namespace galois
