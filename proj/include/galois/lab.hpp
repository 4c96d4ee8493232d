#pragma once

// Verification harness: closure-law audits, Galois-axiom checks, and
// two-sided checks of the factorization identities. Left-hand sides go
// through the satisfaction module only; right-hand sides through the
// closure modules only.

#include "galois/constraint_closures.hpp"
#include "galois/core.hpp"

#include <chrono>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace galois {

using Witness = std::variant<FunctionTable, Constraint, std::string>;

enum class Verdict { equal, lhs_strict, rhs_strict, incomparable };

std::string to_string(Verdict v);

struct ReportParameters
{
  std::optional<std::uint32_t> n;
  std::optional<std::uint32_t> m;
  std::uint32_t a_size = 2;
  std::uint32_t b_size = 2;
};

struct ClosureReport
{
  std::string identity_name;
  ReportParameters parameters;
  std::size_t lhs_size = 0;
  std::size_t rhs_size = 0;
  std::vector<Witness> symmetric_difference; // at most LabOptions::max_witnesses
  std::size_t difference_count = 0;
  Verdict verdict = Verdict::equal;
  std::vector<std::string> notes;
  std::chrono::duration<double> runtime{};
};

struct LabOptions
{
  Budget budget;
  CmBounds bounds;
  std::size_t max_witnesses = 8;
};

/// Fills sizes, the bounded symmetric difference and the verdict.
void compare_into(ClosureReport& report, const FunctionClass& lhs, const FunctionClass& rhs,
                  std::size_t max_witnesses);
void compare_into(ClosureReport& report, const ConstraintSet& lhs, const ConstraintSet& rhs,
                  std::size_t max_witnesses);

template<typename Set>
struct ClosureOperator
{
  std::string name;
  std::function<Set(const Set&)> apply;
};

/// Each sample is a pair X <= Y. Checks X <= op(X), Y <= op(Y),
/// op(X) <= op(Y), op(op(X)) = op(X) and op(op(Y)) = op(Y). lhs_size
/// counts samples, rhs_size counts violations.
ClosureReport check_closure_laws(const ClosureOperator<FunctionClass>& op,
                                 std::span<const std::pair<FunctionClass, FunctionClass>> samples,
                                 std::size_t max_witnesses = 8);
ClosureReport check_closure_laws(const ClosureOperator<ConstraintSet>& op,
                                 std::span<const std::pair<ConstraintSet, ConstraintSet>> samples,
                                 std::size_t max_witnesses = 8);

/// Order reversal, extensivity of both composites and the two
/// triple-composition identities with FSC capped at n_cap and CSF at m_cap.
/// K must have arities <= n_cap and T arities <= m_cap.
ClosureReport check_galois_axioms(const FunctionClass& k, const ConstraintSet& t, std::uint32_t n_cap,
                                  std::uint32_t m_cap, const LabOptions& options = {});

enum class Identity { t15_i, t15_ii, t8_ii, t12_ii, t4_finite };

std::string to_string(Identity id);
std::optional<Identity> parse_identity(std::string_view name);

using Instance = std::variant<FunctionClass, ConstraintSet>;

/// Function-side identities take a class, constraint-side ones a set.
/// Where an identity quantifies over all arities the stabilization bound
/// is used: |A|^n on the function side, |A|^m on the constraint side.
///  t15_i      K_n (arity n):  FSC_n CSF_m K          vs Lo_m VS_n K
///  t15_ii     T_m (arity m):  CSF_m FSC_n T          vs LO_n CM_m T
///  t8_ii      T (arities<=m): CSF_<=m FSC_n T        vs LO_n CM_<=m T
///  t12_ii     T_m:            CSF_m FSC_(|A|^m) T    vs LO CM_m T
///  t4_finite  K (arities<=n): FSC_<=n CSF K          vs Lo VS_<=n K
ClosureReport verify_factorization(Identity id, const Instance& instance, std::uint32_t n, std::uint32_t m,
                                   const LabOptions& options = {});

enum class Definability { thm5, thm6, thm13, thm14, cor1, cor2 };

std::string to_string(Definability side);
std::optional<Definability> parse_definability(std::string_view name);

/// Evaluates the closure-condition predicate and the Galois fixed-point
/// condition on the instance; verdict equal iff they agree. lhs_size is the
/// instance size, rhs_size the size of its Galois closure.
///  thm5   K_n:          VS_n-closed                     <=> K = FSC_n CSF K
///  thm13  K_n, m:       VS_n- and Lo_m-closed           <=> K = FSC_n CSF_m K
///  cor1   unary K:      locally closed (always)         <=> K = FSC_1 CSF K
///  thm6   T (<=m), n:   CM_<=m- and LO_n-closed         <=> T = CSF_<=m FSC_n T
///  thm14  T_m, n:       CM_m- and LO_n-closed           <=> T = CSF_m FSC_n T
///  cor2   T_m:          has eq_m, empty_m, union- and CM_m-closed <=> T = CSF_m FSC_1 T
ClosureReport verify_definability(Definability side, const Instance& instance, std::uint32_t n,
                                  std::uint32_t m, const LabOptions& options = {});

// Fixed-seed samplers.

/// `count` distinct n-ary functions (capped at the arity's total).
FunctionClass random_function_class(std::uint32_t a, std::uint32_t b, std::uint32_t n, std::size_t count,
                                    std::mt19937_64& rng);

/// `count` distinct m-ary constraints (capped at |Q_m|).
ConstraintSet random_constraint_set(std::uint32_t a, std::uint32_t b, std::uint32_t m, std::size_t count,
                                    std::mt19937_64& rng);

/// X plus up to `extra` random members of the same arities.
FunctionClass random_superset(const FunctionClass& x, std::size_t extra, std::mt19937_64& rng);
ConstraintSet random_superset(const ConstraintSet& x, std::size_t extra, std::mt19937_64& rng);

/// Named Boolean 2-ary constraint sets: orders, equality, disequality,
/// graphs of the unary functions and combinations.
std::vector<std::pair<std::string, ConstraintSet>> structured_t2_battery();

} // namespace galois
