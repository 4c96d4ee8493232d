#pragma once

// The satisfaction relation between functions and constraints, and the two
// Galois maps it induces (FSC: functions satisfying constraints, CSF:
// constraints satisfied by functions), at fixed arities or up to a cap.

#include "galois/core.hpp"

#include <span>

namespace galois {

/// fR: the set of tuples f(a^1, ..., a^n) obtained by applying f
/// coordinatewise to every choice of n rows a^1..a^n of R.
Relation image(const FunctionTable& f, const Relation& r);

/// f satisfies (R, S) iff fR is contained in S.
bool satisfies(const FunctionTable& f, const Constraint& c);

/// f preserves R iff f satisfies (R, R); requires dom = cod.
bool preserves(const FunctionTable& f, const Relation& r);

/// Precomputed antecedent rows for repeated satisfaction tests against one
/// constraint.
class SatisfactionTest
{
public:
  explicit SatisfactionTest(const Constraint& c);

  bool operator()(const FunctionTable& f) const;
  const Constraint& constraint() const { return constraint_; }

private:
  Constraint constraint_;
  std::vector<Tuple> rows_;
};

/// The class composition IJ: all f(g_1, ..., g_n) with f n-ary in I and
/// g_1..g_n m-ary in J, for every m <= cap.
FunctionClass compose_classes(const FunctionClass& outer, const FunctionClass& inner,
                              std::uint32_t cap, const Budget& budget = {});

/// n-ary functions satisfying every member of T.
FunctionClass fsc_n(const ConstraintSet& t, std::uint32_t n, const Budget& budget = {});

/// Union of fsc_n over 1 <= n <= cap.
FunctionClass fsc(const ConstraintSet& t, std::uint32_t cap, const Budget& budget = {});

/// m-ary constraints satisfied by every member of K, drawn from all of Q_m.
ConstraintSet csf_m(const FunctionClass& k, std::uint32_t m, const Budget& budget = {});

/// Members of `candidates` satisfied by every member of K.
ConstraintSet csf_m(const FunctionClass& k, const ConstraintSet& candidates);

/// Union of csf_m over 1 <= m <= cap.
ConstraintSet csf(const FunctionClass& k, std::uint32_t cap, const Budget& budget = {});

/// The smallest consequent S such that every member of K satisfies (R, S),
/// namely the union of the images kR.
Relation induced_consequent(const FunctionClass& k, const Relation& antecedent);

/// The separating constraint built from n columns a^1..a^n in A^m:
/// antecedent {a^1, ..., a^n}, consequent {f(a^1 ... a^n) : f in K_n}.
Constraint trace_constraint(const FunctionClass& k_n, std::span<const Tuple> columns);

/// FSC_n(CSF_m(K)) computed without materializing Q_m: an n-ary g belongs
/// to it iff gR is inside the induced consequent of every antecedent R
/// spanned by n columns in A^m (sets of at most n m-tuples).
FunctionClass fsc_n_of_csf_m(const FunctionClass& k, std::uint32_t n, std::uint32_t m,
                             const Budget& budget = {});

struct GaloisQuery
{
  enum class Side { functions_from_constraints, constraints_from_functions };
  enum class Selector { single, cap };

  Side side = Side::functions_from_constraints;
  Selector selector = Selector::single;
  std::uint32_t arity = 1;
  Budget budget;
};

FunctionClass run_query(const GaloisQuery& query, const ConstraintSet& t);
ConstraintSet run_query(const GaloisQuery& query, const FunctionClass& k);

} // namespace galois
