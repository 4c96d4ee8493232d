#pragma once

#include "galois/core.hpp"

#include <initializer_list>
#include <vector>

namespace testing {

using namespace galois;

inline Relation rel(std::uint32_t d, std::uint32_t arity, std::vector<Tuple> tuples)
{
  return Relation::from_tuples(d, arity, tuples);
}

inline Relation bool2(std::vector<Tuple> tuples)
{
  return rel(2, 2, std::move(tuples));
}

inline Relation leq()
{
  return bool2({{0, 0}, {0, 1}, {1, 1}});
}

inline Relation geq()
{
  return bool2({{0, 0}, {1, 0}, {1, 1}});
}

inline Relation eq2()
{
  return bool2({{0, 0}, {1, 1}});
}

inline FunctionTable fn(std::uint32_t arity, std::vector<Element> table, std::uint32_t d = 2)
{
  return {d, d, arity, std::move(table)};
}

inline FunctionTable AND()
{
  return fn(2, {0, 0, 0, 1});
}

inline FunctionTable OR()
{
  return fn(2, {0, 1, 1, 1});
}

inline FunctionClass cls(std::initializer_list<FunctionTable> fs, std::uint32_t d = 2)
{
  FunctionClass k(d, d);
  for (const auto& f : fs) {
    k.insert(f);
  }
  return k;
}

inline ConstraintSet cset(std::initializer_list<Constraint> cs, std::uint32_t d = 2)
{
  ConstraintSet t(d, d);
  for (const auto& c : cs) {
    t.insert(c);
  }
  return t;
}

} // namespace testing
