#include "galois/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace galois {

using json = nlohmann::json;

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
: std::runtime_error(line ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message
                          : message),
  line_(line), column_(column)
{}

namespace {

[[noreturn]] void semantic(const std::string& message)
{
  throw ParseError(message);
}

std::uint32_t parse_count(const json& v, const std::string& where, std::uint32_t min)
{
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() < min || v.get<std::uint64_t>() > 0xffffffffu) {
    semantic(where + ": expected an integer >= " + std::to_string(min));
  }
  return v.get<std::uint32_t>();
}

DomainBinding parse_domain(const json& v, const std::string& where)
{
  DomainBinding d;
  if (v.is_number()) {
    d.size = parse_count(v, where, 1);
    return d;
  }
  if (!v.is_object() || !v.contains("size")) {
    semantic(where + ": expected a size or {\"size\": ..., \"labels\": [...]}");
  }
  for (const auto& [key, _] : v.items()) {
    if (key != "size" && key != "labels") {
      semantic(where + ": unknown field '" + key + "'");
    }
  }
  d.size = parse_count(v["size"], where + ".size", 1);
  if (v.contains("labels")) {
    const auto& labels = v["labels"];
    if (!labels.is_array() || labels.size() != d.size) {
      semantic(where + ".labels: expected " + std::to_string(d.size) + " strings");
    }
    for (const auto& l : labels) {
      if (!l.is_string()) {
        semantic(where + ".labels: expected strings");
      }
      if (std::find(d.labels.begin(), d.labels.end(), l.get<std::string>()) != d.labels.end()) {
        semantic(where + ".labels: duplicate label '" + l.get<std::string>() + "'");
      }
      d.labels.push_back(l.get<std::string>());
    }
  }
  return d;
}

// Integers are taken as they are; labels resolve in the first listed domain
// that has them. Range checks happen where the domain is known.
Element parse_element(const json& v, std::initializer_list<const DomainBinding*> domains, const std::string& where)
{
  if (v.is_number_unsigned()) {
    if (v.get<std::uint64_t>() > 0xffffffffu) {
      semantic(where + ": element out of range");
    }
    return v.get<Element>();
  }
  if (v.is_string()) {
    const auto label = v.get<std::string>();
    for (const auto* d : domains) {
      const auto it = std::find(d->labels.begin(), d->labels.end(), label);
      if (it != d->labels.end()) {
        return static_cast<Element>(it - d->labels.begin());
      }
    }
    semantic(where + ": unknown label '" + label + "'");
  }
  semantic(where + ": expected an element (integer or label)");
}

std::vector<std::string> parse_names(const json& v, const std::string& where)
{
  if (!v.is_array()) {
    semantic(where + ": expected a list of names");
  }
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) {
      semantic(where + ": expected a list of names");
    }
    out.push_back(x.get<std::string>());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const json& section(const json& root, const char* name)
{
  static const json empty = json::object();
  if (!root.contains(name)) {
    return empty;
  }
  const auto& s = root[name];
  if (!s.is_object()) {
    semantic(std::string("section '") + name + "' must be an object");
  }
  return s;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte)
{
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

void check_range(const Tuple& t, std::uint32_t size, const std::string& where)
{
  for (const auto x : t) {
    if (x >= size) {
      semantic(where + ": element " + std::to_string(x) + " outside a domain of size " + std::to_string(size));
    }
  }
}

} // namespace

InstanceDocument parse_instance(const std::string& text)
{
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    std::string what = e.what();
    const auto pos = what.find("syntax error");
    throw ParseError(pos == std::string::npos ? what : what.substr(pos), line, column);
  }
  if (!root.is_object()) {
    semantic("instance must be a JSON object");
  }
  static const char* const sections[] = {"domains", "functions", "relations", "constraints",
                                         "classes", "sets",      "schemes"};
  for (const auto& [key, _] : root.items()) {
    if (std::find_if(std::begin(sections), std::end(sections), [&](const char* s) { return key == s; }) ==
        std::end(sections)) {
      semantic("unknown section '" + key + "'");
    }
  }

  InstanceDocument doc;
  const auto& domains = section(root, "domains");
  if (!domains.contains("A")) {
    semantic("domains: 'A' is required");
  }
  for (const auto& [key, _] : domains.items()) {
    if (key != "A" && key != "B") {
      semantic("domains: unknown domain '" + key + "' (expected A and optionally B)");
    }
  }
  doc.a = parse_domain(domains["A"], "domain 'A'");
  doc.b = domains.contains("B") ? parse_domain(domains["B"], "domain 'B'") : doc.a;

  for (const auto& [name, v] : section(root, "functions").items()) {
    const auto where = "function '" + name + "'";
    const json* table = &v;
    std::optional<std::uint32_t> arity;
    if (v.is_object()) {
      for (const auto& [key, _] : v.items()) {
        if (key != "arity" && key != "table") {
          semantic(where + ": unknown field '" + key + "'");
        }
      }
      if (!v.contains("arity") || !v.contains("table")) {
        semantic(where + ": expected {\"arity\": n, \"table\": [...]}");
      }
      arity = parse_count(v["arity"], where + ".arity", 1);
      table = &v["table"];
    }
    if (!table->is_array()) {
      semantic(where + ": expected a value table");
    }
    if (!arity) {
      std::uint64_t points = doc.a.size;
      std::uint32_t n = 1;
      while (points < table->size() && doc.a.size > 1) {
        points *= doc.a.size;
        ++n;
      }
      if (points != table->size()) {
        semantic(where + ": table length " + std::to_string(table->size()) + " is not a power of |A| = " +
                 std::to_string(doc.a.size));
      }
      arity = n;
    }
    std::vector<Element> values;
    for (const auto& x : *table) {
      const auto e = parse_element(x, {&doc.b}, where);
      if (e >= doc.b.size) {
        semantic(where + ": value " + std::to_string(e) + " outside B of size " + std::to_string(doc.b.size));
      }
      values.push_back(e);
    }
    try {
      doc.functions.emplace(name, FunctionTable(doc.a.size, doc.b.size, *arity, std::move(values)));
    } catch (const std::exception& e) {
      semantic(where + ": " + e.what());
    }
  }

  for (const auto& [name, v] : section(root, "relations").items()) {
    const auto where = "relation '" + name + "'";
    const json* tuples = &v;
    RelationBinding r;
    bool have_arity = false;
    if (v.is_object()) {
      for (const auto& [key, _] : v.items()) {
        if (key != "arity" && key != "tuples") {
          semantic(where + ": unknown field '" + key + "'");
        }
      }
      if (!v.contains("arity") || !v.contains("tuples")) {
        semantic(where + ": expected {\"arity\": m, \"tuples\": [...]}");
      }
      r.arity = parse_count(v["arity"], where + ".arity", 1);
      have_arity = true;
      tuples = &v["tuples"];
    }
    if (!tuples->is_array()) {
      semantic(where + ": expected a list of tuples");
    }
    if (!have_arity) {
      if (tuples->empty()) {
        semantic(where + ": an empty relation needs an explicit arity");
      }
      r.arity = static_cast<std::uint32_t>((*tuples)[0].is_array() ? (*tuples)[0].size() : 0);
    }
    for (const auto& t : *tuples) {
      if (!t.is_array() || t.size() != r.arity) {
        semantic(where + ": every tuple must have " + std::to_string(r.arity) + " entries");
      }
      Tuple tuple;
      for (const auto& x : t) {
        tuple.push_back(parse_element(x, {&doc.a, &doc.b}, where));
      }
      check_range(tuple, std::max(doc.a.size, doc.b.size), where);
      r.tuples.push_back(std::move(tuple));
    }
    if (r.arity == 0) {
      semantic(where + ": arity must be positive");
    }
    std::sort(r.tuples.begin(), r.tuples.end());
    r.tuples.erase(std::unique(r.tuples.begin(), r.tuples.end()), r.tuples.end());
    doc.relations.emplace(name, std::move(r));
  }

  for (const auto& [name, v] : section(root, "constraints").items()) {
    const auto where = "constraint '" + name + "'";
    if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string()) {
      semantic(where + ": expected [antecedent, consequent] relation names");
    }
    doc.constraints.emplace(name, ConstraintBinding{v[0].get<std::string>(), v[1].get<std::string>()});
    doc.constraint(name); // resolves and validates
  }

  for (const auto& [name, v] : section(root, "classes").items()) {
    doc.classes.emplace(name, parse_names(v, "class '" + name + "'"));
    doc.function_class(name);
  }
  for (const auto& [name, v] : section(root, "sets").items()) {
    doc.sets.emplace(name, parse_names(v, "set '" + name + "'"));
    doc.constraint_set(name);
  }
  for (const auto& [name, v] : section(root, "schemes").items()) {
    if (!v.is_string()) {
      semantic("scheme '" + name + "': expected a scheme literal string");
    }
    try {
      doc.schemes.emplace(name, parse_scheme(v.get<std::string>()));
    } catch (const std::exception& e) {
      semantic("scheme '" + name + "': " + e.what());
    }
  }
  return doc;
}

Relation InstanceDocument::relation(const std::string& name, bool over_b) const
{
  const auto it = relations.find(name);
  if (it == relations.end()) {
    semantic("unknown relation '" + name + "'");
  }
  const auto size = over_b ? b.size : a.size;
  for (const auto& t : it->second.tuples) {
    check_range(t, size, std::string("relation '") + name + "' used over " + (over_b ? "B" : "A"));
  }
  return Relation::from_tuples(size, it->second.arity, it->second.tuples);
}

Constraint InstanceDocument::constraint(const std::string& name) const
{
  const auto it = constraints.find(name);
  if (it == constraints.end()) {
    semantic("unknown constraint '" + name + "'");
  }
  const auto where = "constraint '" + name + "'";
  if (!relations.contains(it->second.antecedent)) {
    semantic(where + ": antecedent '" + it->second.antecedent + "' is not a relation");
  }
  if (!relations.contains(it->second.consequent)) {
    semantic(where + ": consequent '" + it->second.consequent + "' is not a relation");
  }
  auto ant = relation(it->second.antecedent, false);
  auto cons = relation(it->second.consequent, true);
  if (ant.arity() != cons.arity()) {
    semantic(where + ": antecedent arity " + std::to_string(ant.arity()) + " differs from consequent arity " +
             std::to_string(cons.arity()));
  }
  return {std::move(ant), std::move(cons)};
}

FunctionClass InstanceDocument::function_class(const std::string& name) const
{
  const auto it = classes.find(name);
  if (it == classes.end()) {
    semantic("unknown class '" + name + "'");
  }
  FunctionClass out(a.size, b.size);
  for (const auto& f : it->second) {
    const auto fit = functions.find(f);
    if (fit == functions.end()) {
      semantic("class '" + name + "': '" + f + "' is not a function");
    }
    out.insert(fit->second);
  }
  return out;
}

ConstraintSet InstanceDocument::constraint_set(const std::string& name) const
{
  const auto it = sets.find(name);
  if (it == sets.end()) {
    semantic("unknown set '" + name + "'");
  }
  ConstraintSet out(a.size, b.size);
  for (const auto& c : it->second) {
    if (!constraints.contains(c)) {
      semantic("set '" + name + "': '" + c + "' is not a constraint");
    }
    out.insert(constraint(c));
  }
  return out;
}

const Scheme& InstanceDocument::scheme(const std::string& name) const
{
  const auto it = schemes.find(name);
  if (it == schemes.end()) {
    semantic("unknown scheme '" + name + "'");
  }
  return it->second;
}

std::string serialize_instance(const InstanceDocument& doc)
{
  auto domain = [](const DomainBinding& d) {
    json j = {{"size", d.size}};
    if (!d.labels.empty()) {
      j["labels"] = d.labels;
    }
    return j;
  };
  json root;
  root["domains"] = {{"A", domain(doc.a)}, {"B", domain(doc.b)}};
  auto put = [&](const char* key, json value) {
    if (!value.empty()) {
      root[key] = std::move(value);
    }
  };
  json functions = json::object();
  for (const auto& [name, f] : doc.functions) {
    functions[name] = {{"arity", f.arity()}, {"table", std::vector<Element>(f.table().begin(), f.table().end())}};
  }
  put("functions", functions);
  json relations = json::object();
  for (const auto& [name, r] : doc.relations) {
    relations[name] = {{"arity", r.arity}, {"tuples", r.tuples}};
  }
  put("relations", relations);
  json constraints = json::object();
  for (const auto& [name, c] : doc.constraints) {
    constraints[name] = {c.antecedent, c.consequent};
  }
  put("constraints", constraints);
  put("classes", json(doc.classes));
  put("sets", json(doc.sets));
  json schemes = json::object();
  for (const auto& [name, s] : doc.schemes) {
    schemes[name] = to_string(s);
  }
  put("schemes", schemes);
  return root.dump(2) + "\n";
}

Scheme parse_scheme(const std::string& text)
{
  std::size_t pos = 0;
  auto fail = [&](const std::string& message) -> void { throw ParseError(message, 1, pos + 1); };
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  };
  auto expect = [&](char c) {
    skip_space();
    if (pos >= text.size() || text[pos] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos;
  };
  auto number = [&]() -> std::uint32_t {
    skip_space();
    const auto start = pos;
    std::uint64_t value = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      value = value * 10 + static_cast<std::uint64_t>(text[pos] - '0');
      if (value > 0xffffu) {
        fail("number too large");
      }
      ++pos;
    }
    if (pos == start) {
      fail("expected a number");
    }
    return static_cast<std::uint32_t>(value);
  };
  auto word = [&]() {
    skip_space();
    const auto start = pos;
    while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    return text.substr(start, pos - start);
  };

  Scheme s;
  std::optional<std::uint32_t> target, indets;
  std::map<std::uint32_t, SchemeMap> maps;
  std::uint32_t max_indet = 0;
  while (true) {
    skip_space();
    if (pos >= text.size()) {
      break;
    }
    const auto key_pos = pos;
    const auto key = word();
    if (key == "target" || key == "V") {
      expect('=');
      auto& slot = key == "target" ? target : indets;
      if (slot) {
        pos = key_pos;
        fail("duplicate '" + key + "'");
      }
      slot = number();
    } else if (key == "h") {
      const auto j = number();
      if (j == 0 || maps.contains(j)) {
        pos = key_pos;
        fail("bad or duplicate map index h" + std::to_string(j));
      }
      expect('=');
      expect('[');
      SchemeMap h;
      while (true) {
        const auto entry_pos = pos;
        const auto kind = word();
        if (kind != "c" && kind != "v") {
          pos = entry_pos;
          fail("expected an entry cI or vI");
        }
        const auto i = number();
        if (i == 0) {
          pos = entry_pos;
          fail("entry indices are 1-based");
        }
        h.push_back(kind == "c" ? SchemeEntry::coord(i) : SchemeEntry::indet(i));
        if (kind == "v") {
          max_indet = std::max(max_indet, i);
        }
        skip_space();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        expect(']');
        break;
      }
      maps.emplace(j, std::move(h));
    } else {
      pos = key_pos;
      fail("expected 'target', 'V' or 'hJ'");
    }
    skip_space();
    if (pos < text.size()) {
      expect(';');
    }
  }
  if (!target) {
    fail("missing 'target'");
  }
  s.target = *target;
  s.indeterminates = indets.value_or(max_indet);
  std::uint32_t expected = 1;
  for (auto& [j, h] : maps) {
    if (j != expected++) {
      fail("maps must be numbered h1..hF without gaps");
    }
    s.family.push_back(std::move(h));
  }
  try {
    s.validate();
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
  return s;
}

std::string format_tuple(std::span<const Element> t)
{
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += (i ? "," : "") + std::to_string(t[i]);
  }
  return out + ")";
}

std::string format_relation(const Relation& r)
{
  std::string out = "{";
  bool first = true;
  for (const auto& t : r.tuples()) {
    out += (first ? "" : ",") + format_tuple(t);
    first = false;
  }
  return out + "}";
}

std::string format_function(const FunctionTable& f)
{
  std::string out = "arity=" + std::to_string(f.arity()) + " [";
  for (std::size_t i = 0; i < f.table().size(); ++i) {
    out += (i ? "," : "") + std::to_string(f.table()[i]);
  }
  return out + "]";
}

std::string format_constraint(const Constraint& c)
{
  return "arity=" + std::to_string(c.arity()) + " (" + format_relation(c.antecedent()) + ", " +
         format_relation(c.consequent()) + ")";
}

void write_listing(std::ostream& out, const FunctionClass& k)
{
  out << "# functions " << k.size() << "\n";
  for (const auto& f : k.members()) {
    out << format_function(f) << "\n";
  }
}

void write_listing(std::ostream& out, const ConstraintSet& t)
{
  out << "# constraints " << t.size() << "\n";
  for (const auto& c : t.members()) {
    out << format_constraint(c) << "\n";
  }
}

} // namespace galois
