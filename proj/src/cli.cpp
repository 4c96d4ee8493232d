#include "galois/cli.hpp"

#include "galois/cache.hpp"
#include "galois/constraint_closures.hpp"
#include "galois/function_closures.hpp"
#include "galois/io.hpp"
#include "galois/satisfaction.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

namespace galois {

namespace {

struct Options
{
  std::string op;
  std::string in;
  std::optional<std::string> cache_dir;
  bool no_cache = false;
  std::uint64_t max_functions = Budget{}.max_functions;
  std::uint64_t max_constraints = Budget{}.max_constraints;
  std::string cls;
  std::string set;
  std::optional<std::uint32_t> n, m, cap, arity;
  std::uint32_t max_indets = CmBounds{}.max_indets;
  std::uint32_t max_family = CmBounds{}.max_family;
  std::uint32_t max_iterations = CmBounds{}.max_iterations;
  std::uint32_t a = 2;
  std::uint32_t b = 2;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  bool witnesses = false;
};

class UsageError : public std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct Outcome
{
  std::string text;
  int code = exit_ok;
};

Budget budget_of(const Options& o)
{
  Budget b;
  b.max_functions = o.max_functions;
  b.max_constraints = o.max_constraints;
  b.max_indets = o.max_indets;
  return b;
}

CmBounds bounds_of(const Options& o)
{
  return {o.max_family, o.max_indets, o.max_iterations};
}

std::uint32_t need(const std::optional<std::uint32_t>& v, const char* flag)
{
  if (!v) {
    throw UsageError(std::string("missing required option ") + flag);
  }
  if (*v == 0) {
    throw UsageError(std::string(flag) + " must be positive");
  }
  return *v;
}

InstanceDocument load_document(const Options& o)
{
  if (o.in.empty()) {
    throw UsageError("missing required option --in");
  }
  std::ifstream file(o.in, std::ios::binary);
  if (!file) {
    throw UsageError("cannot read " + o.in);
  }
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_instance(buffer.str());
}

FunctionClass need_class(const Options& o, const InstanceDocument& doc)
{
  if (o.cls.empty()) {
    throw UsageError("missing required option --class");
  }
  return doc.function_class(o.cls);
}

ConstraintSet need_set(const Options& o, const InstanceDocument& doc)
{
  if (o.set.empty()) {
    throw UsageError("missing required option --set");
  }
  return doc.constraint_set(o.set);
}

template<typename Set>
std::string listing(const Set& s)
{
  std::ostringstream out;
  write_listing(out, s);
  return out.str();
}

std::string bounds_string(const Options& o)
{
  auto opt = [](const std::optional<std::uint32_t>& v) { return v ? std::to_string(*v) : std::string("-"); };
  std::ostringstream s;
  s << "n=" << opt(o.n) << ";m=" << opt(o.m) << ";cap=" << opt(o.cap) << ";arity=" << opt(o.arity)
    << ";max_indets=" << o.max_indets << ";max_family=" << o.max_family << ";max_iterations=" << o.max_iterations
    << ";max_functions=" << o.max_functions << ";max_constraints=" << o.max_constraints << ";a=" << o.a
    << ";b=" << o.b << ";samples=" << o.samples << ";seed=" << o.seed << ";witnesses=" << o.witnesses;
  return s.str();
}

std::string witness_line(const CmWitness& w)
{
  static const char* const kinds[] = {"seed", "relaxation", "intersection", "minor"};
  std::string out = std::string("  via ") + kinds[static_cast<int>(w.kind)];
  if (w.scheme) {
    out += " scheme \"" + to_string(*w.scheme) + "\"";
  }
  for (const auto& c : w.family) {
    out += " from " + format_constraint(c);
  }
  return out;
}

std::string cm_listing(const std::string& header, const CmResult& r, bool witnesses)
{
  std::ostringstream out;
  out << header << " converged=" << (r.converged ? "yes" : "no") << " iterations=" << r.iterations << "\n";
  out << "# constraints " << r.members.size() << "\n";
  for (const auto& c : r.members.members()) {
    out << format_constraint(c) << "\n";
    if (witnesses) {
      out << witness_line(r.witnesses.at(c)) << "\n";
    }
  }
  return out.str();
}

// Each command is split into a cache key and a computation so cached and
// fresh runs print the same bytes.
struct Plan
{
  std::string operation;
  std::string input;
  std::function<Outcome()> compute;
};

Plan plan_close(const Options& o)
{
  const auto doc = load_document(o);
  const auto budget = budget_of(o);
  const auto bounds = bounds_of(o);
  const auto header = "# close " + o.op;
  if (o.op == "vs" || o.op == "vsn" || o.op == "lom") {
    const auto k = need_class(o, doc);
    std::function<FunctionClass()> run;
    if (o.op == "vs") {
      const auto cap = need(o.cap, "--cap");
      run = [=] { return vs_closure(k, cap); };
    } else if (o.op == "vsn") {
      run = [=] { return vs_n_closure(k); };
    } else {
      const auto m = need(o.m, "--m");
      run = [=] { return lo_m_closure(k, m, budget); };
    }
    return {"close " + o.op, listing(k), [=] { return Outcome{header + "\n" + listing(run())}; }};
  }
  if (o.op == "lon" || o.op == "cmm" || o.op == "cm") {
    const auto t = need_set(o, doc);
    std::function<Outcome()> run;
    if (o.op == "lon") {
      const auto n = need(o.n, "--n");
      run = [=] { return Outcome{header + "\n" + listing(lo_n_closure(t, n, budget))}; };
    } else if (o.op == "cmm") {
      const auto arities = t.arities();
      const auto m = o.m ? need(o.m, "--m") : arities.size() == 1 ? arities.front() : need(o.m, "--m");
      run = [=, w = o.witnesses] { return Outcome{cm_listing(header, cm_m_closure(t, m, bounds, budget), w)}; };
    } else {
      const auto cap = need(o.cap, "--cap");
      run = [=, w = o.witnesses] { return Outcome{cm_listing(header, cm_closure(t, cap, bounds, budget), w)}; };
    }
    return {"close " + o.op, listing(t), run};
  }
  throw UsageError("unknown closure operator '" + o.op + "' (expected vs, vsn, lom, lon, cmm or cm)");
}

Plan plan_galois(const Options& o)
{
  const auto doc = load_document(o);
  const auto budget = budget_of(o);
  if (o.arity.has_value() == o.cap.has_value()) {
    throw UsageError("give exactly one of --arity and --cap");
  }
  const bool single = o.arity.has_value();
  const auto k = single ? need(o.arity, "--arity") : need(o.cap, "--cap");
  const auto header = "# galois " + o.op + (single ? " arity=" : " cap=") + std::to_string(k) + "\n";
  if (o.op == "fsc") {
    const auto t = need_set(o, doc);
    return {"galois fsc", listing(t),
            [=] { return Outcome{header + listing(single ? fsc_n(t, k, budget) : fsc(t, k, budget))}; }};
  }
  if (o.op == "csf") {
    const auto c = need_class(o, doc);
    return {"galois csf", listing(c),
            [=] { return Outcome{header + listing(single ? csf_m(c, k, budget) : csf(c, k, budget))}; }};
  }
  throw UsageError("unknown Galois map '" + o.op + "' (expected fsc or csf)");
}

Plan plan_verify(const Options& o)
{
  const auto doc = load_document(o);
  LabOptions lab;
  lab.budget = budget_of(o);
  lab.bounds = bounds_of(o);
  if (o.cls.empty() == o.set.empty()) {
    throw UsageError("give exactly one of --class and --set");
  }
  const Instance instance = o.cls.empty() ? Instance{doc.constraint_set(o.set)} : Instance{doc.function_class(o.cls)};
  const auto input = o.cls.empty() ? listing(std::get<ConstraintSet>(instance))
                                   : listing(std::get<FunctionClass>(instance));
  const auto n = o.n.value_or(1);
  const auto m = o.m.value_or(1);
  if (n == 0 || m == 0) {
    throw UsageError("--n and --m must be positive");
  }
  std::function<ClosureReport()> run;
  if (const auto id = parse_identity(o.op)) {
    run = [=] { return verify_factorization(*id, instance, n, m, lab); };
  } else if (const auto side = parse_definability(o.op)) {
    run = [=] { return verify_definability(*side, instance, n, m, lab); };
  } else {
    throw UsageError("unknown identity '" + o.op +
                     "' (expected t4, t8, t12, t15i, t15ii, thm5, thm6, thm13, thm14, cor1 or cor2)");
  }
  return {"verify " + o.op, input, [=] {
            const auto report = run();
            std::ostringstream out;
            write_report(out, report);
            return Outcome{out.str(), report.verdict == Verdict::equal ? exit_ok : exit_discrepancy};
          }};
}

Plan plan_enumerate(const Options& o)
{
  std::uint32_t a = o.a;
  std::uint32_t b = o.b;
  if (!o.in.empty()) {
    const auto doc = load_document(o);
    a = doc.a.size;
    b = doc.b.size;
  }
  if (a == 0 || b == 0) {
    throw UsageError("domain sizes must be positive");
  }
  const auto arity = need(o.arity, "--arity");
  const auto budget = budget_of(o);
  const auto input = "A=" + std::to_string(a) + ";B=" + std::to_string(b);
  if (o.op == "functions") {
    return {"enumerate functions", input, [=] {
              const FunctionEnumerator all(a, b, arity, budget);
              std::ostringstream out;
              out << "# functions " << *function_count(a, b, arity) << "\n";
              for (const auto& f : all) {
                out << format_function(f) << "\n";
              }
              return Outcome{out.str()};
            }};
  }
  if (o.op == "constraints") {
    return {"enumerate constraints", input, [=] {
              const ConstraintSpace space(a, b, arity, budget);
              std::ostringstream out;
              out << "# constraints " << space.size() << "\n";
              for (Rank r = 0; r < space.size(); ++r) {
                out << format_constraint(space.at(r)) << "\n";
              }
              return Outcome{out.str()};
            }};
  }
  throw UsageError("unknown enumeration '" + o.op + "' (expected functions or constraints)");
}

Plan plan_laws(const Options& o)
{
  if (o.a == 0 || o.b == 0 || o.samples == 0) {
    throw UsageError("--a, --b and --samples must be positive");
  }
  const auto budget = budget_of(o);
  const auto bounds = bounds_of(o);
  const auto opts = o;
  return {"laws " + o.op, "", [=] {
            std::mt19937_64 rng(opts.seed);
            auto size = [&] { return 1 + rng() % 4; };
            ClosureReport report;
            if (opts.op == "vs" || opts.op == "vsn" || opts.op == "lom") {
              const auto n = opts.n.value_or(2);
              const auto cap = opts.cap.value_or(2);
              std::vector<std::pair<FunctionClass, FunctionClass>> samples;
              for (std::size_t i = 0; i < opts.samples; ++i) {
                const auto arity = opts.op == "vs" ? static_cast<std::uint32_t>(1 + rng() % cap) : n;
                auto x = random_function_class(opts.a, opts.b, arity, size(), rng);
                auto y = random_superset(x, size(), rng);
                samples.emplace_back(std::move(x), std::move(y));
              }
              ClosureOperator<FunctionClass> op{opts.op, nullptr};
              if (opts.op == "vs") {
                op.apply = [=](const FunctionClass& k) { return vs_closure(k, cap); };
              } else if (opts.op == "vsn") {
                op.apply = [](const FunctionClass& k) { return vs_n_closure(k); };
              } else {
                const auto m = opts.m.value_or(1);
                op.apply = [=](const FunctionClass& k) { return lo_m_closure(k, m, budget); };
              }
              report = check_closure_laws(op, samples);
            } else if (opts.op == "lon" || opts.op == "cmm") {
              const auto m = opts.m.value_or(1);
              std::vector<std::pair<ConstraintSet, ConstraintSet>> samples;
              for (std::size_t i = 0; i < opts.samples; ++i) {
                auto x = random_constraint_set(opts.a, opts.b, m, size(), rng);
                auto y = random_superset(x, size(), rng);
                samples.emplace_back(std::move(x), std::move(y));
              }
              ClosureOperator<ConstraintSet> op{opts.op, nullptr};
              if (opts.op == "lon") {
                const auto n = opts.n.value_or(1);
                op.apply = [=](const ConstraintSet& t) { return lo_n_closure(t, n, budget); };
              } else {
                op.apply = [=](const ConstraintSet& t) { return cm_m_closure(t, m, bounds, budget).members; };
              }
              report = check_closure_laws(op, samples);
            } else {
              throw UsageError("unknown closure operator '" + opts.op + "' (expected vs, vsn, lom, lon or cmm)");
            }
            std::ostringstream out;
            out << "# laws " << opts.op << " samples=" << opts.samples << " seed=" << opts.seed << "\n";
            write_report(out, report);
            return Outcome{out.str(), report.verdict == Verdict::equal ? exit_ok : exit_discrepancy};
          }};
}

Outcome execute(const Plan& plan, const Options& o, std::ostream& err)
{
  const auto dir = o.no_cache ? std::nullopt : resolve_cache_dir(o.cache_dir);
  if (!dir) {
    return plan.compute();
  }
  const ResultCache cache(*dir);
  const auto key = ResultCache::make_key(plan.operation, plan.input, bounds_string(o));
  if (const auto hit = cache.load(key, err)) {
    err << "cache: hit " << key << "\n";
    return {hit->value, hit->exit_code};
  }
  auto outcome = plan.compute();
  try {
    cache.store({key, outcome.text, outcome.code, tool_version});
    err << "cache: stored " << key << "\n";
  } catch (const std::exception& e) {
    err << "warning: cache store failed: " << e.what() << "\n";
  }
  return outcome;
}

} // namespace

void write_report(std::ostream& out, const ClosureReport& report)
{
  const auto& p = report.parameters;
  out << "report " << report.identity_name << "\n";
  out << "parameters";
  if (p.n) {
    out << " n=" << *p.n;
  }
  if (p.m) {
    out << " m=" << *p.m;
  }
  out << " A=" << p.a_size << " B=" << p.b_size << "\n";
  out << "lhs_size " << report.lhs_size << "\n";
  out << "rhs_size " << report.rhs_size << "\n";
  out << "difference_count " << report.difference_count << "\n";
  out << "verdict " << to_string(report.verdict) << "\n";
  for (const auto& note : report.notes) {
    out << "note " << note << "\n";
  }
  for (const auto& w : report.symmetric_difference) {
    if (const auto* f = std::get_if<FunctionTable>(&w)) {
      out << "witness function " << format_function(*f) << "\n";
    } else if (const auto* c = std::get_if<Constraint>(&w)) {
      out << "witness constraint " << format_constraint(*c) << "\n";
    } else {
      out << "witness note " << std::get<std::string>(w) << "\n";
    }
  }
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  Options o;
  CLI::App app{"Galois connection toolkit for functions and relational constraints", "galois"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--in", o.in, "instance document (JSON)");
    sub->add_option("--cache-dir", o.cache_dir, std::string("result cache directory (overrides ") +
                                                    cache_dir_variable + ")");
    sub->add_flag("--no-cache", o.no_cache, "disable the result cache");
    sub->add_option("--max-functions", o.max_functions, "function enumeration budget");
    sub->add_option("--max-constraints", o.max_constraints, "constraint enumeration budget");
    sub->add_option("--max-indets", o.max_indets, "indeterminates per minor step");
  };

  auto* close = app.add_subcommand("close", "apply a closure operator");
  close->add_option("op", o.op, "vs | vsn | lom | lon | cmm | cm")->required();
  close->add_option("--class", o.cls, "function class name");
  close->add_option("--set", o.set, "constraint set name");
  close->add_option("--n", o.n);
  close->add_option("--m", o.m);
  close->add_option("--cap", o.cap);
  close->add_option("--max-family", o.max_family, "family size per minor step");
  close->add_option("--max-iterations", o.max_iterations, "fixpoint round limit");
  close->add_flag("--witnesses", o.witnesses, "print a witness under each cm member");
  common(close);

  auto* galois = app.add_subcommand("galois", "apply FSC or CSF");
  galois->add_option("op", o.op, "fsc | csf")->required();
  galois->add_option("--class", o.cls);
  galois->add_option("--set", o.set);
  galois->add_option("--arity", o.arity);
  galois->add_option("--cap", o.cap);
  common(galois);

  auto* verify = app.add_subcommand("verify", "check an identity or a definability criterion");
  verify->add_option("identity", o.op, "t4 | t8 | t12 | t15i | t15ii | thm5 | thm6 | thm13 | thm14 | cor1 | cor2")
    ->required();
  verify->add_option("--class", o.cls);
  verify->add_option("--set", o.set);
  verify->add_option("--n", o.n);
  verify->add_option("--m", o.m);
  verify->add_option("--max-family", o.max_family);
  verify->add_option("--max-iterations", o.max_iterations);
  common(verify);

  auto* enumerate = app.add_subcommand("enumerate", "list all functions or constraints of one arity");
  enumerate->add_option("kind", o.op, "functions | constraints")->required();
  enumerate->add_option("--arity", o.arity);
  enumerate->add_option("--a", o.a, "|A| when no --in is given (default 2)");
  enumerate->add_option("--b", o.b, "|B| when no --in is given (default 2)");
  common(enumerate);

  auto* laws = app.add_subcommand("laws", "closure-law audit on fixed-seed samples");
  laws->add_option("op", o.op, "vs | vsn | lom | lon | cmm")->required();
  laws->add_option("--samples", o.samples);
  laws->add_option("--seed", o.seed);
  laws->add_option("--n", o.n);
  laws->add_option("--m", o.m);
  laws->add_option("--cap", o.cap);
  laws->add_option("--a", o.a);
  laws->add_option("--b", o.b);
  laws->add_option("--max-family", o.max_family);
  laws->add_option("--max-iterations", o.max_iterations);
  common(laws);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::CallForVersion& e) {
    out << tool_version << "\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    Plan plan;
    if (close->parsed()) {
      plan = plan_close(o);
    } else if (galois->parsed()) {
      plan = plan_galois(o);
    } else if (verify->parsed()) {
      plan = plan_verify(o);
    } else if (enumerate->parsed()) {
      plan = plan_enumerate(o);
    } else {
      plan = plan_laws(o);
    }
    const auto outcome = execute(plan, o, err);
    out << outcome.text;
    out.flush();
    err << "runtime " << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
        << " s\n";
    return outcome.code;
  } catch (const BudgetExceeded& e) {
    err << "refused: " << e.what() << "\n";
    return exit_budget;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_usage;
  }
}

} // namespace galois
