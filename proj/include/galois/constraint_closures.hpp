#pragma once

// Closure operators on constraint sets: closure under conjunctive minors
// (CM, CM_m), parametrized local closure (LO_n), and the union-closure test
// that characterizes 1-local closure of relaxation-closed sets.
//
// CM_m is computed as a fixpoint of small generator moves (single-tuple
// relaxations, intersections, and tight minors of families of at most
// `max_family` members with at most `max_indets` shared indeterminates).
// Each move yields a genuine conjunctive minor, so the fixpoint is always
// inside the true closure; cm_m_oracle computes the true closure through
// the satisfaction side and certified_cm_m compares the two.

#include "galois/constraint_minors.hpp"
#include "galois/core.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace galois {

struct CmBounds
{
  std::uint32_t max_family = 2;
  std::uint32_t max_indets = 2;
  std::uint32_t max_iterations = 64;
};

struct CmWitness
{
  enum class Kind { seed, relaxation, intersection, minor };

  Kind kind = Kind::seed;
  std::vector<Constraint> family; // parents; one for a relaxation
  std::optional<Scheme> scheme;   // minors and intersections
};

struct CmResult
{
  ConstraintSet members;
  bool converged = true;
  std::uint32_t iterations = 0;
  CmBounds bounds;
  std::map<Constraint, CmWitness> witnesses;
};

/// Fixpoint closure of T_m u {m-ary equality, m-ary empty} inside Q_m.
CmResult cm_m_closure(const ConstraintSet& t_m, std::uint32_t m, const CmBounds& bounds = {},
                      const Budget& budget = {});

/// Closure across arities 1..cap, seeded with T and the equality and empty
/// constraints at every materialized arity. Source families may mix arities.
CmResult cm_closure(const ConstraintSet& t, std::uint32_t cap, const CmBounds& bounds = {},
                    const Budget& budget = {});

/// Re-applies every generator move to the result with the generic minor
/// evaluator; returns a produced constraint missing from the set, if any.
/// Two-member families are checked on `pair_samples` fixed-seed draws.
std::optional<Constraint> audit_cm_fixpoint(const CmResult& result, std::size_t pair_samples = 4096);

/// Re-evaluates every retained witness; returns a member whose witness does
/// not reproduce it, if any.
std::optional<Constraint> certify_witnesses(const CmResult& result, const ConstraintSet& seeds);

/// CSF_m(FSC_n*(T_m)) with n* = |A|^m, which equals CM_m(T_m) on finite
/// domains.
ConstraintSet cm_m_oracle(const ConstraintSet& t_m, std::uint32_t m, const Budget& budget = {});

struct CertifiedCm
{
  CmResult result;
  ConstraintSet oracle;
  bool agrees = false;
  bool sound = true;                 // result is inside the oracle
  std::vector<CmBounds> escalations; // bounds tried after the first run
};

/// Runs cm_m_closure and compares with the oracle, raising max_indets (up to
/// `max_escalations` times) while the fixpoint is a strict subset.
CertifiedCm certified_cm_m(const ConstraintSet& t_m, std::uint32_t m, const CmBounds& bounds = {},
                           const Budget& budget = {}, std::uint32_t max_escalations = 2);

/// Adds, per present arity m, every (R, S) whose relaxations with
/// antecedent of size at most n all lie in T.
ConstraintSet lo_n_closure(const ConstraintSet& t, std::uint32_t n, const Budget& budget = {});

/// Local closure; the identity on finite domains. Computed as lo_n_closure
/// at n = max |A|^m and checked against T.
ConstraintSet lo_constraints_closure(const ConstraintSet& t, const Budget& budget = {});

struct UnionCheck
{
  bool closed = true;
  std::optional<std::pair<Constraint, Constraint>> witness;
};

/// Pairwise union closure per arity; on finite sets this is closure under
/// arbitrary non-empty unions.
UnionCheck union_closure_check(const ConstraintSet& t);

/// All relaxations of the members of T.
ConstraintSet relaxation_closure(const ConstraintSet& t, const Budget& budget = {});

} // namespace galois
