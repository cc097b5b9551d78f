// gdens: evaluate extremal densities, run property suites, analyze
// partitions, and search for explicit witnesses on small groups.
//
// Exit codes: 0 success, 2 a checked property failed (report carries the
// counterexample), 1 usage / parse / capability errors.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "groupdens/dsl.hpp"
#include "groupdens/report.hpp"
#include "groupdens/suites.hpp"
#include "groupdens/version.hpp"

using namespace groupdens;

namespace {

struct Common {
  std::string format = "json";
  bool timing = false;
  long long seed = 0;
  int threads = 0;
};

long long ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

void emit(const Report& rep, const Common& c) {
  std::cout << (c.format == "tsv" ? rep.tsv_text() : rep.json_text());
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

ExtremalPattern parse_pattern(const std::string& q) {
  // pattern:<letters>:<slot,slot,...>, e.g. pattern:iu:2,1
  auto rest = q.substr(8);
  auto colon = rest.find(':');
  if (colon == std::string::npos)
    throw Error("pattern selector is pattern:<letters>:<perm-csv>");
  ExtremalPattern pat;
  pat.e = rest.substr(0, colon);
  for (const auto& tok : split_on(rest.substr(colon + 1), ','))
    pat.perm.push_back(std::stoi(tok));
  return pat;
}

DensityResult eval_density(const Group& g, const SetPtr& a, const std::string& q,
                           const Window* sup, const DensityConfig& cfg) {
  if (q == "is12") return is12(g, a, sup, cfg);
  if (q == "si21") return si21(g, a, cfg);
  if (q == "us12") return us12(g, a, sup, cfg);
  if (q == "iss213") return iss213(g, a, sup, cfg);
  if (q == "uss213") return uss213_search(g, a, sup, cfg);
  if (q == "sis123") return sis123(g, a, cfg);
  if (q == "his12") return his12(g, a, cfg);
  if (q == "dstar") return dstar_window(g, a, cfg);
  if (q.rfind("pattern:", 0) == 0) return eval_extremal(g, a, parse_pattern(q), cfg);
  throw Error("unknown quantity: " + q);
}

struct EvalArgs {
  std::string group, set, quantity;
  int radius = -1;
  int kmax = -1;
  int grid_denominator = 4;
  int exact_limit = 12;
  int ladder_levels = 8;
  int cap = -1;
  std::string mode = "bounds";
};

int do_eval(const Common& c, const EvalArgs& a) {
  Group g(dsl::parse_group(a.group));
  auto s = dsl::parse_set(a.set, g);
  std::optional<Window> w;
  if (!g.finite() && a.radius >= 0) w = g.ball(a.radius);
  const Window* sup = w ? &*w : nullptr;

  DensityConfig cfg;
  cfg.kmax = a.kmax;
  cfg.grid_denominator = a.grid_denominator;
  cfg.exact_limit = a.exact_limit;
  cfg.ladder_levels = a.ladder_levels;

  Json options;
  options["group"] = a.group;
  options["set"] = a.set;
  options["quantity"] = a.quantity;
  options["radius"] = a.radius;
  options["kmax"] = a.kmax;
  options["grid-denominator"] = a.grid_denominator;
  options["exact-limit"] = a.exact_limit;
  options["ladder-levels"] = a.ladder_levels;
  options["cap"] = a.cap;
  options["mode"] = a.mode;
  options["seed"] = c.seed;
  options["threads"] = c.threads;
  Report rep("eval", options);

  Json row;
  row["quantity"] = a.quantity;
  row["group"] = g.name();
  row["set"] = dsl::canonical_print(g, s);

  auto t0 = std::chrono::steady_clock::now();
  bool exact = true;
  if (a.quantity == "pack") {
    auto p = packing_index(g, s, a.cap > 0 ? a.cap : 12, sup);
    exact = !p.at_least;
    row.update(json_of(g, p));
  } else if (a.quantity == "cov") {
    auto cv = covering_number(g, s, a.cap > 0 ? a.cap : 20);
    exact = cv.kind != CovResult::Kind::AtMost;
    row.update(json_of(g, cv));
  } else {
    auto r = eval_density(g, s, a.quantity, sup, cfg);
    exact = r.kind == DensityResult::Kind::Exact;
    row.update(json_of(g, r));
  }
  if (c.timing) row["runtime_ms"] = ms_since(t0);
  rep.add(std::move(row));
  emit(rep, c);
  if (a.mode == "exact" && !exact) {
    std::cerr << "error: exactness mode: the result is a bound, not exact\n";
    return 1;
  }
  return 0;
}

int do_check(const Common& c, const std::string& suite, std::string gtext) {
  if (gtext.empty())
    for (const auto& s : suite_table())
      if (s.token == suite || (suite == "conj-cover" && s.token == "t92"))
        gtext = s.default_group;
  std::optional<Group> g;
  if (!gtext.empty()) g.emplace(dsl::parse_group(gtext));

  Json options;
  options["suite"] = suite;
  options["group"] = gtext;
  options["seed"] = c.seed;
  options["threads"] = c.threads;
  Report rep("check", options);

  auto t0 = std::chrono::steady_clock::now();
  auto o = run_suite(suite, g ? &*g : nullptr);
  Json row;
  row["suite"] = o.name;
  if (g) row["group"] = g->name();
  row["pass"] = o.pass;
  row["cases"] = o.cases;
  row["failures"] = o.failures;
  if (!o.info.empty()) row["info"] = o.info;
  if (c.timing) row["runtime_ms"] = ms_since(t0);
  rep.add(std::move(row));
  emit(rep, c);
  return o.pass ? 0 : 2;
}

int do_partition(const Common& c, const std::string& gtext,
                 const std::string& cells_text) {
  Group g(dsl::parse_group(gtext));
  std::vector<SetPtr> cells;
  for (const auto& t : split_on(cells_text, ';'))
    cells.push_back(dsl::parse_set(t, g));

  Json options;
  options["group"] = gtext;
  options["cells"] = cells_text;
  options["seed"] = c.seed;
  options["threads"] = c.threads;
  Report rep("partition", options);

  auto t0 = std::chrono::steady_clock::now();
  auto r = partition_analyze(g, cells);
  Json row;
  row["group"] = g.name();
  Json cs = Json::array();
  for (const auto& s : cells) cs.push_back(dsl::canonical_print(g, s));
  row["cells"] = std::move(cs);
  row.update(json_of(g, r));
  if (c.timing) row["runtime_ms"] = ms_since(t0);
  rep.add(std::move(row));
  emit(rep, c);
  return (r.small_cov && r.cover_within_bound) ? 0 : 2;
}

struct WitnessArgs {
  std::string group, set, points, target;
  int cap = 12;
  int radius = -1;
  int degree_cap = 2;
};

int do_witness(const Common& c, const std::string& kind, const WitnessArgs& a) {
  Group g(dsl::parse_group(a.group));
  auto s = dsl::parse_set(a.set, g);
  std::optional<Window> w;
  if (!g.finite() && a.radius >= 0) w = g.ball(a.radius);

  Json options;
  options["kind"] = kind;
  options["group"] = a.group;
  options["set"] = a.set;
  if (kind == "homothety") {
    options["points"] = a.points;
    options["degree-cap"] = a.degree_cap;
  }
  if (kind == "representable") options["target"] = a.target;
  if (kind == "packing") options["cap"] = a.cap;
  if (kind != "homothety") options["radius"] = a.radius;
  options["seed"] = c.seed;
  options["threads"] = c.threads;
  Report rep("witness " + kind, options);

  Json row;
  row["group"] = g.name();
  row["set"] = dsl::canonical_print(g, s);
  auto t0 = std::chrono::steady_clock::now();
  if (kind == "packing") {
    auto p = packing_index(g, s, a.cap, w ? &*w : nullptr);
    row.update(json_of(g, p));
  } else if (kind == "homothety") {
    auto f = enumerate_set(g, dsl::parse_set(a.points, g));
    auto h = homothety_witness(g, s, f, a.degree_cap);
    row["found"] = h.has_value();
    if (h) row.update(json_of(g, *h));
  } else {  // representable
    auto b = dsl::parse_set(a.target, g);
    Window search = w ? *w : g.full_window();
    auto x = finitely_representable(g, s, b, search);
    row["target"] = dsl::canonical_print(g, b);
    row["found"] = x.has_value();
    if (x) row["shift"] = g.print_elem(*x);
  }
  if (c.timing) row["runtime_ms"] = ms_since(t0);
  rep.add(std::move(row));
  emit(rep, c);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact extremal densities, packing and covering on small groups"};
  app.set_version_flag("--version", GROUPDENS_VERSION);
  app.fallthrough();
  app.require_subcommand(1);

  Common common;
  app.add_option("--format", common.format, "report format")
      ->check(CLI::IsMember({"json", "tsv"}));
  app.add_flag("--timing", common.timing, "add runtime_ms to result rows");
  app.add_option("--seed", common.seed, "search seed (reports echo it)");
  app.add_option("--threads", common.threads, "worker pool size, 0 = env/default");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "evaluate one quantity on one set");
  eval->add_option("--group", ea.group, "group expression")->required();
  eval->add_option("--set", ea.set, "set expression")->required();
  eval->add_option("--quantity", ea.quantity,
                   "is12 | si21 | us12 | iss213 | uss213 | sis123 | his12 | "
                   "dstar | pack | cov | pattern:<letters>:<perm-csv>")
      ->required();
  eval->add_option("--radius", ea.radius, "window radius on infinite groups");
  eval->add_option("--kmax", ea.kmax, "support size bound, -1 = auto");
  eval->add_option("--grid-denominator", ea.grid_denominator,
                   "sup-inf-sup candidate grid");
  eval->add_option("--exact-limit", ea.exact_limit,
                   "carrier bound for full C-enumeration");
  eval->add_option("--ladder-levels", ea.ladder_levels, "box ladder length");
  eval->add_option("--cap", ea.cap, "pack/cov search cap");
  eval->add_option("--mode", ea.mode, "bounds | exact")
      ->check(CLI::IsMember({"bounds", "exact"}));

  std::string suite, check_group;
  auto* check = app.add_subcommand("check", "run a named property suite");
  check
      ->add_option("suite", suite,
                   "kelley-duality | finite-collapse | pack-cov | ergo-sum | "
                   "partition | chain | hierarchy | t92 | folner")
      ->required();
  check->add_option("--group", check_group, "carrier, default depends on suite");

  std::string part_group, part_cells;
  auto* part = app.add_subcommand("partition", "analyze an explicit partition");
  part->add_option("--group", part_group, "group expression")->required();
  part->add_option("--cells", part_cells, "semicolon-separated set expressions")
      ->required();

  WitnessArgs wa;
  auto* wit = app.add_subcommand("witness", "search for explicit witnesses");
  wit->fallthrough();
  wit->require_subcommand(1);
  auto* wpack = wit->add_subcommand("packing", "disjoint translate family");
  wpack->add_option("--group", wa.group)->required();
  wpack->add_option("--set", wa.set)->required();
  wpack->add_option("--cap", wa.cap, "stop after this many translates");
  wpack->add_option("--radius", wa.radius, "search ball on infinite groups");
  auto* whom = wit->add_subcommand("homothety", "x -> a0 x a1 ... x an into the set");
  whom->add_option("--group", wa.group)->required();
  whom->add_option("--set", wa.set)->required();
  whom->add_option("--points", wa.points, "finite source set expression")->required();
  whom->add_option("--degree-cap", wa.degree_cap, "maximal degree searched");
  auto* wrep = wit->add_subcommand("representable", "translate carrying the set into the target");
  wrep->add_option("--group", wa.group)->required();
  wrep->add_option("--set", wa.set)->required();
  wrep->add_option("--target", wa.target, "target set expression")->required();
  wrep->add_option("--radius", wa.radius, "search ball on infinite groups");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (common.threads > 0)
    setenv("GROUPDENS_THREADS", std::to_string(common.threads).c_str(), 1);

  try {
    if (eval->parsed()) return do_eval(common, ea);
    if (check->parsed()) return do_check(common, suite, check_group);
    if (part->parsed()) return do_partition(common, part_group, part_cells);
    if (wit->parsed()) {
      if (wpack->parsed()) return do_witness(common, "packing", wa);
      if (whom->parsed()) return do_witness(common, "homothety", wa);
      if (wrep->parsed()) return do_witness(common, "representable", wa);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
