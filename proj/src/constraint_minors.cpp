#include "galois/constraint_minors.hpp"

#include <algorithm>
#include <sstream>

namespace galois {

void Scheme::validate() const
{
  if (target == 0) {
    throw RangeError("scheme target arity must be positive");
  }
  if (family.empty()) {
    throw RangeError("scheme family must be non-empty");
  }
  for (std::size_t j = 0; j < family.size(); ++j) {
    if (family[j].empty()) {
      throw RangeError("scheme map h" + std::to_string(j + 1) + " has no source coordinates");
    }
    for (const auto& e : family[j]) {
      const auto bound = e.kind == SchemeEntry::Kind::coordinate ? target : indeterminates;
      if (e.index >= bound) {
        throw RangeError("scheme map h" + std::to_string(j + 1) + " refers to " +
                         (e.kind == SchemeEntry::Kind::coordinate ? "coordinate c" : "indeterminate v") +
                         std::to_string(e.index + 1) + " out of range");
      }
    }
  }
}

Scheme Scheme::identity(std::uint32_t m, std::size_t copies)
{
  Scheme s;
  s.target = m;
  SchemeMap h;
  for (std::uint32_t i = 1; i <= m; ++i) {
    h.push_back(SchemeEntry::coord(i));
  }
  s.family.assign(copies, h);
  return s;
}

std::string to_string(const Scheme& scheme)
{
  std::ostringstream out;
  out << "target=" << scheme.target << "; V=" << scheme.indeterminates;
  for (std::size_t j = 0; j < scheme.family.size(); ++j) {
    out << "; h" << j + 1 << "=[";
    for (std::size_t i = 0; i < scheme.family[j].size(); ++i) {
      const auto& e = scheme.family[j][i];
      out << (i ? "," : "") << (e.kind == SchemeEntry::Kind::coordinate ? 'c' : 'v') << e.index + 1;
    }
    out << "]";
  }
  return out.str();
}

Scheme normalize_scheme(const Scheme& scheme)
{
  scheme.validate();
  std::vector<std::int64_t> rename(scheme.indeterminates, -1);
  std::uint32_t next = 0;
  for (const auto& h : scheme.family) {
    for (const auto& e : h) {
      if (e.kind == SchemeEntry::Kind::indeterminate && rename[e.index] < 0) {
        rename[e.index] = next++;
      }
    }
  }
  Scheme out = scheme;
  out.indeterminates = next;
  for (auto& h : out.family) {
    for (auto& e : h) {
      if (e.kind == SchemeEntry::Kind::indeterminate) {
        e.index = static_cast<std::uint32_t>(rename[e.index]);
      }
    }
  }
  return out;
}

namespace {

void check_family(std::span<const Relation> family, const Scheme& scheme)
{
  scheme.validate();
  if (family.size() != scheme.family.size()) {
    throw MismatchError("family of " + std::to_string(family.size()) + " relations for a scheme of " +
                        std::to_string(scheme.family.size()) + " maps");
  }
  for (std::size_t j = 0; j < family.size(); ++j) {
    if (family[j].arity() != scheme.family[j].size()) {
      throw MismatchError("map h" + std::to_string(j + 1) + " has " + std::to_string(scheme.family[j].size()) +
                          " sources but relation " + std::to_string(j + 1) + " has arity " +
                          std::to_string(family[j].arity()));
    }
    if (family[j].domain_size() != family.front().domain_size()) {
      throw MismatchError("family relations are over different domains");
    }
  }
}

// Removes duplicate (relation, map) pairs and unused indeterminates.
std::pair<std::vector<Relation>, Scheme> normalized(std::span<const Relation> family, const Scheme& scheme)
{
  std::vector<std::pair<Relation, SchemeMap>> pairs;
  for (std::size_t j = 0; j < family.size(); ++j) {
    std::pair<Relation, SchemeMap> p{family[j], scheme.family[j]};
    if (std::find(pairs.begin(), pairs.end(), p) == pairs.end()) {
      pairs.push_back(std::move(p));
    }
  }
  Scheme s;
  s.target = scheme.target;
  s.indeterminates = scheme.indeterminates;
  std::vector<Relation> rels;
  for (auto& [r, h] : pairs) {
    rels.push_back(std::move(r));
    s.family.push_back(std::move(h));
  }
  return {std::move(rels), normalize_scheme(s)};
}

bool skolem_search(std::span<const Relation> family, const Scheme& scheme, std::span<const Element> tuple,
                   std::vector<Element>& sigma)
{
  const auto d = family.front().domain_size();
  sigma.assign(scheme.indeterminates, 0);
  while (true) {
    bool ok = true;
    for (std::size_t j = 0; j < family.size() && ok; ++j) {
      Rank r = 0;
      for (const auto& e : scheme.family[j]) {
        r = r * d + (e.kind == SchemeEntry::Kind::coordinate ? tuple[e.index] : sigma[e.index]);
      }
      ok = family[j].contains(r);
    }
    if (ok) {
      return true;
    }
    std::size_t k = sigma.size();
    while (true) {
      if (k == 0) {
        return false;
      }
      --k;
      if (++sigma[k] < d) {
        break;
      }
      sigma[k] = 0;
    }
  }
}

} // namespace

std::optional<SkolemAssignment> find_skolem(std::span<const Relation> family, const Scheme& scheme,
                                            std::span<const Element> tuple)
{
  check_family(family, scheme);
  if (tuple.size() != scheme.target) {
    throw MismatchError("tuple length differs from scheme target");
  }
  std::vector<Element> sigma;
  if (skolem_search(family, scheme, tuple, sigma)) {
    return SkolemAssignment{std::move(sigma)};
  }
  return std::nullopt;
}

Relation tight_minor_relation(std::span<const Relation> family, const Scheme& scheme,
                              const MinorOptions& options)
{
  check_family(family, scheme);
  const auto [rels, s] = normalized(family, scheme);
  if (s.indeterminates > options.max_indets) {
    throw BudgetExceeded("Skolem assignments", std::to_string(s.indeterminates) + " indeterminates",
                         std::to_string(options.max_indets));
  }
  const auto d = rels.front().domain_size();
  Relation out(d, s.target);
  std::vector<Element> sigma;
  for (Rank r = 0; r < out.universe(); ++r) {
    const auto a = unrank_tuple(r, d, s.target);
    if (skolem_search(rels, s, a, sigma)) {
      out.insert(r);
    }
  }
  return out;
}

Constraint tight_minor(std::span<const Constraint> family, const Scheme& scheme, const MinorOptions& options)
{
  std::vector<Relation> ants, conss;
  for (const auto& c : family) {
    if (c.a_size() != family.front().a_size() || c.b_size() != family.front().b_size()) {
      throw MismatchError("family constraints are over different domains");
    }
    ants.push_back(c.antecedent());
    conss.push_back(c.consequent());
  }
  return {tight_minor_relation(ants, scheme, options), tight_minor_relation(conss, scheme, options)};
}

bool minor_check(const Constraint& candidate, std::span<const Constraint> family, const Scheme& scheme,
                 MinorMode mode, const MinorOptions& options)
{
  if (candidate.arity() != scheme.target) {
    throw MismatchError("candidate arity differs from scheme target");
  }
  const auto tight = tight_minor(family, scheme, options);
  if (candidate.a_size() != tight.a_size() || candidate.b_size() != tight.b_size()) {
    throw MismatchError("candidate and family are over different domains");
  }
  switch (mode) {
  case MinorMode::tight:
    return candidate == tight;
  case MinorMode::restrictive:
    return candidate.antecedent().is_subset_of(tight.antecedent());
  case MinorMode::extensive:
    return tight.consequent().is_subset_of(candidate.consequent());
  case MinorMode::conjunctive:
    return candidate.antecedent().is_subset_of(tight.antecedent()) &&
           tight.consequent().is_subset_of(candidate.consequent());
  }
  throw std::logic_error("unknown minor mode");
}

SpecialMinor special_minor(const Constraint& c0, const Scheme& scheme, const MinorOptions& options)
{
  if (scheme.family.size() != 1) {
    throw MismatchError("a simple minor needs a single-map scheme");
  }
  const Constraint family[] = {c0};
  SpecialMinor out;
  out.constraint = tight_minor(family, scheme, options);
  out.simple = true;
  out.weak = normalize_scheme(scheme).indeterminates == 0;
  return out;
}

Scheme compose_schemes(const Scheme& outer, std::span<const Scheme> inners)
{
  outer.validate();
  if (inners.size() != outer.family.size()) {
    throw MismatchError("outer scheme has " + std::to_string(outer.family.size()) + " maps but " +
                        std::to_string(inners.size()) + " inner schemes were given");
  }
  Scheme out;
  out.target = outer.target;
  out.indeterminates = outer.indeterminates;
  for (std::size_t j = 0; j < inners.size(); ++j) {
    const auto& inner = inners[j];
    inner.validate();
    const auto& hj = outer.family[j];
    if (inner.target != hj.size()) {
      throw MismatchError("inner scheme " + std::to_string(j + 1) + " has target " +
                          std::to_string(inner.target) + " but outer map h" + std::to_string(j + 1) + " has " +
                          std::to_string(hj.size()) + " sources");
    }
    const auto offset = out.indeterminates;
    for (const auto& h : inner.family) {
      SchemeMap flat;
      for (const auto& e : h) {
        if (e.kind == SchemeEntry::Kind::coordinate) {
          flat.push_back(hj[e.index]);
        } else {
          flat.push_back({SchemeEntry::Kind::indeterminate, offset + e.index});
        }
      }
      out.family.push_back(std::move(flat));
    }
    out.indeterminates += inner.indeterminates;
  }
  return out;
}

} // namespace galois
