#pragma once

// Instance documents (JSON surface syntax), canonical serialization, scheme
// literals and the text records printed by the command-line tool.
//
//   {
//     "domains":     {"A": {"size": 2, "labels": ["0", "1"]}, "B": {"size": 2}},
//     "functions":   {"and": [0, 0, 0, 1], "maj": {"arity": 3, "table": [...]}},
//     "relations":   {"leq": [[0, 0], [0, 1], [1, 1]], "none": {"arity": 2, "tuples": []}},
//     "constraints": {"mono": ["leq", "leq"]},
//     "classes":     {"K2": ["and"]},
//     "sets":        {"T2": ["mono"]},
//     "schemes":     {"swap": "target=2; V=0; h1=[c2,c1]"}
//   }
//
// Elements are integers or domain labels. Function tables list values in
// argument-rank order (first argument most significant). A relation is
// checked against A when used as an antecedent and against B as a
// consequent. B defaults to A; serialization always writes it.

#include "galois/constraint_minors.hpp"
#include "galois/core.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace galois {

inline constexpr const char* tool_version = "galois 0.1.0";

/// Syntax error at a 1-based line and column, or a semantic error naming
/// the offending binding (line and column 0).
class ParseError : public std::runtime_error
{
public:
  ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_, column_;
};

struct DomainBinding
{
  std::uint32_t size = 2;
  std::vector<std::string> labels; // empty or exactly `size` entries

  friend bool operator==(const DomainBinding&, const DomainBinding&) = default;
};

struct RelationBinding
{
  std::uint32_t arity = 1;
  std::vector<Tuple> tuples; // sorted, distinct

  friend bool operator==(const RelationBinding&, const RelationBinding&) = default;
};

struct ConstraintBinding
{
  std::string antecedent;
  std::string consequent;

  friend bool operator==(const ConstraintBinding&, const ConstraintBinding&) = default;
};

struct InstanceDocument
{
  DomainBinding a;
  DomainBinding b;
  std::map<std::string, FunctionTable> functions;
  std::map<std::string, RelationBinding> relations;
  std::map<std::string, ConstraintBinding> constraints;
  std::map<std::string, std::vector<std::string>> classes; // sorted, distinct
  std::map<std::string, std::vector<std::string>> sets;    // sorted, distinct
  std::map<std::string, Scheme> schemes;

  Relation relation(const std::string& name, bool over_b) const;
  Constraint constraint(const std::string& name) const;
  FunctionClass function_class(const std::string& name) const;
  ConstraintSet constraint_set(const std::string& name) const;
  const Scheme& scheme(const std::string& name) const;

  friend bool operator==(const InstanceDocument&, const InstanceDocument&) = default;
};

InstanceDocument parse_instance(const std::string& text);

/// Canonical JSON: sorted keys, two-space indent, trailing newline.
std::string serialize_instance(const InstanceDocument& doc);

/// "target=2; V=1; h1=[c1,v1]; h2=[v1,c2]"; V may be omitted (then the
/// largest indeterminate used).
Scheme parse_scheme(const std::string& text);

// Text records.
std::string format_tuple(std::span<const Element> t);
std::string format_relation(const Relation& r);
std::string format_function(const FunctionTable& f);
std::string format_constraint(const Constraint& c);

void write_listing(std::ostream& out, const FunctionClass& k);
void write_listing(std::ostream& out, const ConstraintSet& t);

} // namespace galois
