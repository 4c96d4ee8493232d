#pragma once

// Closure operators on function classes: simple variable substitution (VS,
// VS_n) and parametrized local closure (Lo_m). The unparametrized local
// closure is the identity on finite domains.

#include "galois/core.hpp"

#include <vector>

namespace galois {

/// g(x_1..x_t) = f(x_{s(1)}, ..., x_{s(n)}); the assignment is 1-based.
struct SubstitutionMap
{
  std::uint32_t source_arity = 1;
  std::uint32_t target_arity = 1;
  std::vector<std::uint32_t> assignment;

  SubstitutionMap() = default;
  SubstitutionMap(std::uint32_t target_arity, std::vector<std::uint32_t> assignment);

  static SubstitutionMap identity(std::uint32_t n);
};

FunctionTable substitute(const FunctionTable& f, const SubstitutionMap& s);

/// All t^n maps from n source coordinates to t target coordinates, in
/// lexicographic order of the assignment.
std::vector<SubstitutionMap> all_substitution_maps(std::uint32_t source_arity,
                                                   std::uint32_t target_arity);

/// Closure of a single-arity class under n-ary simple variable substitution.
FunctionClass vs_n_closure(const FunctionClass& k_n);

/// VS(K) = K O_A materialized at target arities 1..cap.
FunctionClass vs_closure(const FunctionClass& k, std::uint32_t cap);

/// Per arity n: every g agreeing with some member of K_n on each subset of
/// A^n of size min(m, |A|^n).
FunctionClass lo_m_closure(const FunctionClass& k, std::uint32_t m, const Budget& budget = {});

/// Local closure; the identity on finite domains. Computed as lo_m_closure
/// at m = max |A|^n and checked against K.
FunctionClass lo_closure(const FunctionClass& k, const Budget& budget = {});

} // namespace galois
