#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "solmine/archive.hpp"
#include "solmine/catalog.hpp"
#include "solmine/dsl/evaluator.hpp"
#include "solmine/dsl/gap_emitter.hpp"
#include "solmine/dsl/parser.hpp"
#include "solmine/llm/run_config.hpp"
#include "solmine/reproduce.hpp"
#include "solmine/similarity.hpp"
#include "solmine/solubilizer.hpp"

namespace fs = std::filesystem;
using namespace solmine;

namespace {

// Exit codes for `check` are a function of the outcome kind only; every
// other error also maps to 2.
constexpr int kExitOk = 0, kExitFailed = 1, kExitError = 2;

struct CatalogOpts {
  std::string groups;
  std::size_t max_order = 1000;

  std::vector<CatalogEntry> load() const {
    if (groups.empty()) return builtin_catalog(max_order);
    return up_to_order(load_groups(groups), max_order);
  }
};

void add_catalog_opts(CLI::App* cmd, CatalogOpts& c) {
  cmd->add_option("--groups", c.groups, "Group file to use instead of the built-in catalog")->check(CLI::ExistingFile);
  cmd->add_option("--max-order", c.max_order, "Largest group order considered")->capture_default_str();
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string list(const std::vector<std::size_t>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + std::to_string(xs[i]);
  return s + "]";
}

std::string format_stats(const sim::Stats& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-8s %-8s %-8s %-8s\n%-8.4f %-8.4f %-8.4f %-8.4f\n", "Max", "Min", "Mean",
                "Median", s.max, s.min, s.mean, s.median);
  return buf;
}

int cmd_sol(const CatalogOpts& cat, const std::string& group, const std::string& element) {
  auto catalog = cat.load();
  const CatalogEntry* e = find_entry(catalog, group);
  if (!e) {
    std::cerr << "error: unknown group `" << group << "` (see `solmine catalog list`)\n";
    return kExitError;
  }
  auto g = e->group();
  Permutation x = Permutation::parse(element, g.degree());
  if (!g.contains(x)) {
    std::cerr << "error: " << x.to_cycles() << " is not an element of " << e->display_name() << "\n";
    return kExitError;
  }
  auto r = solubilizer(g, x);
  auto st = subset_stats(r.subset);
  std::cout << "Group: " << e->display_name() << " (order " << g.order() << ")\n";
  std::cout << "Element: " << x.to_cycles() << " of order " << x.order() << "\n";
  std::cout << "|Sol_G(x)|: " << st.cardinality << "\n";
  std::cout << "Prime divisors of |Sol_G(x)|: " << list(st.prime_divisors) << "\n";
  std::cout << "Probability(Sol_G(x)): " << st.fraction.str() << "\n";
  std::cout << "Sol_G(x) is a subgroup: " << (r.is_subgroup ? "true" : "false") << "\n";
  return kExitOk;
}

struct CheckOpts {
  std::string file;
  bool reduce = false, parallel = false, all = false, verbose = false;
  std::size_t max_checks = 0;
  double timeout_s = 0;
};

int cmd_check(const CatalogOpts& cat, const CheckOpts& o) {
  std::string text;
  try {
    text = read_text(o.file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  auto parsed = dsl::parse(text);
  if (!parsed) {
    std::cout << "Couldn't Execute Code\n";
    std::cerr << o.file << ": " << parsed.error->describe() << "\n";
    return kExitError;
  }
  dsl::EvalBudget budget;
  budget.max_group_order = cat.max_order;
  if (o.max_checks) budget.max_solvability_checks = o.max_checks;
  if (o.timeout_s > 0) budget.wall_timeout = std::chrono::milliseconds(static_cast<long long>(o.timeout_s * 1000));
  dsl::EvalOptions opts;
  opts.conjugacy_reduction = o.reduce;
  opts.parallel = o.parallel;
  opts.all_witnesses = o.all;
  auto out = dsl::evaluate(*parsed.ast, cat.load(), budget, opts);
  switch (out.kind) {
    case dsl::OutcomeKind::NoCounterexamples:
      std::cout << "No Counter-examples!\n";
      if (o.verbose) std::cout << out.groups_checked << " groups checked, " << out.groups_skipped << " skipped\n";
      return kExitOk;
    case dsl::OutcomeKind::Unverifiable:
      std::cout << "Couldn't Execute Code\n";
      std::cerr << out.reason << (out.error_code.empty() ? "" : " [" + out.error_code + "]") << "\n";
      return kExitError;
    case dsl::OutcomeKind::CounterexampleFound: break;
  }
  auto print = [&](const dsl::Witness& w) {
    std::cout << "Conjecture failed for group: " << w.group_display << "\n";
    for (const auto& b : w.bindings) std::cout << b.var << " = " << b.text << "\n";
    // Two diagnostic lines unless asked for everything; values say more
    // than truth values, so sets and integers go first.
    auto rank = [](dsl::Type t) {
      switch (t) {
        case dsl::Type::set: return 0;
        case dsl::Type::integer: return 1;
        case dsl::Type::element: return 2;
        case dsl::Type::boolean: return 3;
      }
      return 3;
    };
    auto diags = w.diagnostics;
    if (!o.verbose)
      std::stable_sort(diags.begin(), diags.end(), [&](const auto& a, const auto& b) { return rank(a.type) < rank(b.type); });
    std::size_t shown = 0;
    for (const auto& d : diags) {
      if (!o.verbose && shown == 2) break;
      std::cout << d.term << ": " << d.text << "\n";
      ++shown;
    }
  };
  if (o.all)
    for (const auto& w : out.all_witnesses) print(w);
  else
    print(*out.witness);
  return kExitFailed;
}

int cmd_emit_gap(const CatalogOpts& cat, const std::string& file, const std::string& output) {
  auto c = dsl::parse_or_throw(read_text(file));
  auto script = dsl::emit_gap_script(c, cat.load());
  if (output.empty() || output == "-") {
    std::cout << script;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!(out << script)) throw std::runtime_error("cannot write " + output);
  }
  return kExitOk;
}

int cmd_mine(const std::string& config_path, const std::string& output, bool quiet) {
  auto cfg = llm::load_run_config(config_path);
  if (!output.empty()) cfg.output_dir = output;
  else if (cfg.output_dir.is_relative() && !cfg.output_dir.empty()) cfg.output_dir = cfg.base_dir / cfg.output_dir;
  if (cfg.output_dir.empty()) throw llm::ConfigError("no output directory: set output_dir or pass --output");
  // Everything that can be checked is checked before the first provider call.
  auto settings = llm::make_settings(cfg);
  auto state = llm::make_prompt_state(cfg);
  for (const auto* p : {&settings.conjecture, &settings.code})
    if (!p->is_mock() && !p->api_key_env.empty() && !std::getenv(p->api_key_env.c_str()))
      throw llm::ConfigError("no API key: set the environment variable " + p->api_key_env);

  archive::RunWriter writer(cfg.output_dir, cfg.source);
  llm::TransportPool pool(cfg.base_dir);
  std::unique_ptr<llm::Clock> clock;
  if (cfg.wall_clock) clock = std::make_unique<llm::WallClock>();
  else clock = std::make_unique<llm::LogicalClock>();

  llm::mine_run(state, settings, cfg.iterations, pool, *clock, [&](const llm::MineRecord& r, const llm::PromptState& s) {
    writer.append(r, s);
    if (!quiet)
      std::cerr << "[" << r.id << "/" << cfg.iterations << "] " << dsl::kind_name(r.outcome.kind)
                << (r.duplicate_of ? " (duplicate of #" + std::to_string(*r.duplicate_of) + ")" : "") << "\n";
  });
  writer.finish();
  auto b = llm::tally(writer.records());
  std::cout << "Unique Conjectures: " << b.unique << "\n"
            << "Total Output: " << b.total << "\n"
            << "No Counter-Examples: " << b.no_counterexamples << "\n"
            << "Couldn't Execute Code: " << b.unverifiable << "\n"
            << "Conjecture Failed: " << b.failed << "\n"
            << "archive: " << writer.dir().string() << "\n";
  return kExitOk;
}

int cmd_reproduce(const CatalogOpts& cat, std::vector<std::string> names, bool reduce) {
  if (names.empty())
    for (const auto& c : repro::cases()) names.push_back(c.name);
  for (const auto& n : names) {
    auto it = std::find_if(repro::cases().begin(), repro::cases().end(), [&](const auto& c) { return c.name == n; });
    if (it == repro::cases().end()) {
      std::cerr << "error: unknown case `" << n << "`; known cases:";
      for (const auto& c : repro::cases()) std::cerr << " " << c.name;
      std::cerr << "\n";
      return kExitError;
    }
  }
  auto catalog = cat.load();
  dsl::EvalOptions opts;
  opts.conjugacy_reduction = reduce;
  bool ok = true;
  for (const auto& n : names) {
    auto r = repro::run(n, catalog, opts);
    std::cout << repro::format(r);
    ok = ok && r.passed();
  }
  return ok ? kExitOk : kExitFailed;
}

std::vector<std::string> read_paragraphs(const std::string& path) {
  // Blank-line separated documents; `#` lines are comments.
  std::istringstream in(read_text(path));
  std::vector<std::string> docs;
  std::string line, cur;
  auto flush = [&] {
    if (!cur.empty()) docs.push_back(cur);
    cur.clear();
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.starts_with("#")) continue;
    if (line.find_first_not_of(" \t") == std::string::npos) {
      flush();
      continue;
    }
    cur += (cur.empty() ? "" : " ") + line;
  }
  flush();
  return docs;
}

int cmd_similarity(const std::string& ledger, const std::string& out_dir, const std::string& against, bool svg) {
  auto records = archive::read_ledger(ledger);
  std::vector<std::string> texts, labels;
  for (const auto& r : records) {
    texts.push_back(r.conjecture);
    labels.push_back("#" + std::to_string(r.id));
  }
  fs::create_directories(out_dir);
  auto m = sim::self_matrix(texts, labels);
  sim::export_heatmap(m, fs::path(out_dir) / "similarity.csv", svg);
  std::cout << "self-similarity over " << texts.size() << " conjectures: " << (fs::path(out_dir) / "similarity.csv").string()
            << "\n";
  int rc = kExitOk;
  try {
    std::cout << format_stats(sim::similarity_stats(m, true));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = kExitError;
  }
  if (!against.empty()) {
    auto docs = read_paragraphs(against);
    std::vector<std::string> doc_labels;
    for (std::size_t i = 0; i < docs.size(); ++i) doc_labels.push_back("L" + std::to_string(i + 1));
    auto cross = sim::cosine_matrix(texts, docs, labels, doc_labels);
    sim::export_heatmap(cross, fs::path(out_dir) / "similarity_against.csv", svg);
    std::cout << "against " << docs.size() << " documents from " << against << ":\n";
    try {
      std::cout << format_stats(sim::similarity_stats(cross, false));
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      rc = kExitError;
    }
  }
  return rc;
}

int cmd_catalog_list(const CatalogOpts& cat) {
  for (const auto& e : cat.load()) {
    std::string aliases;
    for (const auto& a : e.aliases) aliases += (aliases.empty() ? "" : ", ") + a;
    std::printf("%-14s %6zu  degree %-3zu %s\n", e.name.c_str(), e.expected_order, e.degree,
                aliases.empty() ? "" : ("aka " + aliases).c_str());
  }
  return kExitOk;
}

int cmd_catalog_show(const CatalogOpts& cat, const std::string& name) {
  auto catalog = cat.load();
  const CatalogEntry* e = find_entry(catalog, name);
  if (!e) {
    std::cerr << "error: unknown group `" << name << "`\n";
    return kExitError;
  }
  auto g = e->group();
  std::cout << "name = " << e->name << "\n";
  if (!e->aliases.empty()) {
    std::cout << "alias = ";
    for (std::size_t i = 0; i < e->aliases.size(); ++i) std::cout << (i ? ", " : "") << e->aliases[i];
    std::cout << "\n";
  }
  std::cout << "degree = " << e->degree << "\norder = " << g.order() << "\ngens = ";
  for (std::size_t i = 0; i < e->generators.size(); ++i) std::cout << (i ? " ; " : "") << e->generators[i];
  std::cout << "\n";
  if (!e->tags.empty()) {
    std::cout << "tags = ";
    for (std::size_t i = 0; i < e->tags.size(); ++i) std::cout << (i ? ", " : "") << e->tags[i];
    std::cout << "\n";
  }
  std::cout << "# conjugacy classes: " << class_representatives(g).size()
            << "\n# radical order: " << cached_radical(g).order() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search for counterexamples to solubilizer conjectures in small nonsolvable groups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "solmine 0.1.0");

  CatalogOpts cat;

  std::string group, element;
  auto* sol = app.add_subcommand("sol", "Print Sol_G(x) for one element");
  sol->add_option("group", group, "Catalog name or alias, e.g. A5 or PSL(3,2)")->required();
  sol->add_option("element", element, "Element in cycle notation, e.g. \"(1,2,3)\"")->required();
  add_catalog_opts(sol, cat);

  CheckOpts check;
  auto* chk = app.add_subcommand("check", "Evaluate a conjecture file over the catalog (exit 0/1/2)");
  chk->add_option("file", check.file, "Conjecture in the DSL, or - for stdin")->required();
  add_catalog_opts(chk, cat);
  chk->add_flag("--conjugacy-reduction", check.reduce, "Walk class representatives for the first element quantifier");
  chk->add_flag("--parallel", check.parallel, "Evaluate groups concurrently");
  chk->add_flag("--all-witnesses", check.all, "Report every counterexample, not only the first");
  chk->add_flag("-v,--verbose", check.verbose, "Print every diagnostic line");
  chk->add_option("--max-checks", check.max_checks, "Solvability checks allowed per group");
  chk->add_option("--timeout", check.timeout_s, "Wall-clock limit in seconds");

  std::string gap_file, gap_out;
  auto* gap = app.add_subcommand("emit-gap", "Translate a conjecture into a standalone GAP script");
  gap->add_option("file", gap_file, "Conjecture in the DSL, or - for stdin")->required();
  gap->add_option("-o,--output", gap_out, "Output path (default stdout)");
  add_catalog_opts(gap, cat);

  std::string config_path, mine_out;
  bool quiet = false;
  auto* mine = app.add_subcommand("mine", "Run the conjecture/encode/check loop and write a run archive");
  mine->add_option("config", config_path, "Run configuration file")->check(CLI::ExistingFile);
  mine->add_option("-o,--output", mine_out, "Run directory (overrides output_dir)");
  mine->add_flag("-q,--quiet", quiet, "No per-step progress on stderr");
  bool config_help = false;
  mine->add_flag("--config-help", config_help, "Describe the configuration keys and exit");

  std::vector<std::string> cases;
  bool repro_reduce = false;
  auto* rep = app.add_subcommand("reproduce", "Re-run the recorded counterexamples (all cases by default)");
  rep->add_option("case", cases, "gemini-two-primes, gemini-probability, gpt-conjugacy, claude-derived-fitting, frattini-containment");
  rep->add_flag("--conjugacy-reduction", repro_reduce, "Walk class representatives for the first element quantifier");
  add_catalog_opts(rep, cat);

  std::string ledger, sim_out = ".", against;
  bool svg = false;
  auto* simc = app.add_subcommand("similarity", "Cosine self-similarity of a run's conjectures");
  simc->add_option("ledger", ledger, "ledger.jsonl of a run")->required()->check(CLI::ExistingFile);
  simc->add_option("out_dir", sim_out, "Directory for the CSV (default .)");
  simc->add_option("--against", against, "Also compare with the paragraphs of this text file")->check(CLI::ExistingFile);
  simc->add_flag("--svg", svg, "Write SVG heatmaps next to the CSVs");

  auto* catc = app.add_subcommand("catalog", "Inspect the group catalog");
  catc->require_subcommand(1);
  auto* cat_list = catc->add_subcommand("list", "One line per group");
  add_catalog_opts(cat_list, cat);
  std::string show_name;
  auto* cat_show = catc->add_subcommand("show", "Generators and basic data of one group");
  cat_show->add_option("group", show_name)->required();
  add_catalog_opts(cat_show, cat);

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Rebuild a run's report and similarity CSV from its ledger");
  report->add_option("run_dir", report_dir)->required()->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (*sol) return cmd_sol(cat, group, element);
    if (*chk) return cmd_check(cat, check);
    if (*gap) return cmd_emit_gap(cat, gap_file, gap_out);
    if (*mine) {
      if (config_help) {
        std::cout << llm::config_reference();
        return kExitOk;
      }
      if (config_path.empty()) throw std::runtime_error("mine: a configuration file is required");
      return cmd_mine(config_path, mine_out, quiet);
    }
    if (*rep) return cmd_reproduce(cat, cases, repro_reduce);
    if (*simc) return cmd_similarity(ledger, sim_out, against, svg);
    if (*cat_list) return cmd_catalog_list(cat);
    if (*cat_show) return cmd_catalog_show(cat, show_name);
    if (*report) {
      archive::regenerate(report_dir);
      std::cout << read_text((fs::path(report_dir) / archive::kReportFile).string());
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
