#include "solmine/llm/pipeline.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>

#include "json.hpp"
#include "solmine/dsl/parser.hpp"
#include "solmine/similarity.hpp"

namespace solmine::llm {

using nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::string fold(const std::string& s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

dsl::OutcomeKind kind_from(const std::string& s) {
  if (s == "CounterexampleFound") return dsl::OutcomeKind::CounterexampleFound;
  if (s == "NoCounterexamples") return dsl::OutcomeKind::NoCounterexamples;
  if (s == "Unverifiable") return dsl::OutcomeKind::Unverifiable;
  throw std::runtime_error("unknown outcome kind `" + s + "`");
}

OutcomeSummary unverifiable(std::string reason, std::string code = {}) {
  OutcomeSummary o;
  o.kind = dsl::OutcomeKind::Unverifiable;
  o.reason = std::move(reason);
  o.error_code = std::move(code);
  return o;
}

}  // namespace

OutcomeSummary OutcomeSummary::from(const dsl::Outcome& o) {
  OutcomeSummary s;
  s.kind = o.kind;
  s.reason = o.reason;
  s.error_code = o.error_code;
  s.groups_checked = o.groups_checked;
  s.groups_skipped = o.groups_skipped;
  if (o.witness) {
    s.group = o.witness->group;
    s.group_display = o.witness->group_display;
    for (const auto& b : o.witness->bindings) s.bindings.push_back(b.var + " = " + b.text);
    for (const auto& d : o.witness->diagnostics) s.diagnostics.push_back(d.term + ": " + d.text);
  }
  return s;
}

std::string to_json_line(const MineRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["conjecture"] = r.conjecture;
  j["dsl"] = r.dsl;
  j["repairs"] = r.repairs;
  j["parse_errors"] = r.parse_errors;
  ordered_json o;
  o["kind"] = std::string(dsl::kind_name(r.outcome.kind));
  o["reason"] = r.outcome.reason;
  o["error_code"] = r.outcome.error_code;
  o["group"] = r.outcome.group;
  o["group_display"] = r.outcome.group_display;
  o["bindings"] = r.outcome.bindings;
  o["diagnostics"] = r.outcome.diagnostics;
  o["groups_checked"] = r.outcome.groups_checked;
  o["groups_skipped"] = r.outcome.groups_skipped;
  j["outcome"] = std::move(o);
  j["provider"] = r.provider;
  j["model"] = r.model;
  j["started"] = r.started;
  j["finished"] = r.finished;
  j["duplicate_of"] = r.duplicate_of ? ordered_json(*r.duplicate_of) : ordered_json(nullptr);
  j["exact_duplicate_of"] = r.exact_duplicate_of ? ordered_json(*r.exact_duplicate_of) : ordered_json(nullptr);
  j["max_similarity"] = r.max_similarity;
  return j.dump();
}

MineRecord record_from_json(const std::string& line) {
  auto j = ordered_json::parse(line);
  MineRecord r;
  r.id = j.at("id").get<std::size_t>();
  r.conjecture = j.at("conjecture").get<std::string>();
  r.dsl = j.at("dsl").get<std::string>();
  r.repairs = j.at("repairs").get<int>();
  r.parse_errors = j.at("parse_errors").get<std::vector<std::string>>();
  const auto& o = j.at("outcome");
  r.outcome.kind = kind_from(o.at("kind").get<std::string>());
  r.outcome.reason = o.at("reason").get<std::string>();
  r.outcome.error_code = o.at("error_code").get<std::string>();
  r.outcome.group = o.at("group").get<std::string>();
  r.outcome.group_display = o.at("group_display").get<std::string>();
  r.outcome.bindings = o.at("bindings").get<std::vector<std::string>>();
  r.outcome.diagnostics = o.at("diagnostics").get<std::vector<std::string>>();
  r.outcome.groups_checked = o.at("groups_checked").get<std::size_t>();
  r.outcome.groups_skipped = o.at("groups_skipped").get<std::size_t>();
  r.provider = j.at("provider").get<std::string>();
  r.model = j.at("model").get<std::string>();
  r.started = j.at("started").get<std::string>();
  r.finished = j.at("finished").get<std::string>();
  if (!j.at("duplicate_of").is_null()) r.duplicate_of = j["duplicate_of"].get<std::size_t>();
  if (!j.at("exact_duplicate_of").is_null()) r.exact_duplicate_of = j["exact_duplicate_of"].get<std::size_t>();
  r.max_similarity = j.at("max_similarity").get<double>();
  return r;
}

std::string LogicalClock::now() {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%06zu", ++tick_);
  return buf;
}

std::string WallClock::now() {
  using namespace std::chrono;
  auto t = system_clock::now();
  auto ms = duration_cast<milliseconds>(t.time_since_epoch()).count() % 1000;
  std::time_t secs = system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03lldZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<long long>(ms));
  return buf;
}

StepResult mine_step(const PromptState& state, const MineSettings& settings, Transport& conj,
                     Transport& code, Clock& clock, std::size_t id) {
  StepResult out{{}, state};
  MineRecord& r = out.record;
  r.id = id;
  r.provider = settings.conjecture.name;
  r.model = settings.conjecture.model;
  r.started = clock.now();
  auto finish = [&](OutcomeSummary o) {
    r.outcome = std::move(o);
    r.finished = clock.now();
    return out;
  };

  const std::string system = state.system_prompt();
  try {
    r.conjecture = trim(complete(settings.conjecture, {{Role::system, system}, {Role::user, state.conjecture_request}},
                                 conj, settings.sleep)
                            .text);
  } catch (const ProviderError& e) {
    return finish(unverifiable(std::string("provider: ") + e.what()));
  }
  if (r.conjecture.empty()) return finish(unverifiable("provider: empty conjecture"));

  Transcript t{{Role::system, system}, {Role::user, state.encoding_message(r.conjecture)}};
  std::optional<dsl::Conjecture> ast;
  for (;;) {
    std::string reply;
    try {
      reply = complete(settings.code, t, code, settings.sleep).text;
    } catch (const ProviderError& e) {
      return finish(unverifiable(std::string("provider: ") + e.what()));
    }
    r.dsl = extract_dsl(reply);
    auto parsed = dsl::parse(r.dsl);
    if (parsed) {
      ast = std::move(parsed.ast);
      break;
    }
    std::string error = parsed.error->describe();
    r.parse_errors.push_back(error);
    if (r.repairs == kMaxRepairs)
      return finish(unverifiable("parse: " + error, std::string(dsl::code_name(parsed.error->code))));
    t.push_back({Role::assistant, reply});
    t.push_back({Role::user, state.repair_message(r.dsl, error)});
    ++r.repairs;
  }

  auto outcome = dsl::evaluate(*ast, settings.catalog, settings.budget, settings.options);
  if (outcome.kind == dsl::OutcomeKind::CounterexampleFound) out.state.falsified.push_back(r.conjecture);
  return finish(OutcomeSummary::from(outcome));
}

DuplicateCheck check_duplicate(const std::vector<std::string>& texts, std::size_t i) {
  DuplicateCheck d;
  if (i == 0) return d;
  std::vector<std::string> prefix(texts.begin(), texts.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  sim::Vectorizer v;
  v.fit(prefix);
  auto me = v.transform(prefix[i]);
  for (std::size_t j = 0; j < i; ++j) {
    double c = sim::cosine(me, v.transform(prefix[j]));
    if (!d.similar_to || c > d.similarity) {
      d.similar_to = j;
      d.similarity = c;
    }
  }
  const std::string mine = fold(texts[i]);
  if (!mine.empty())
    for (std::size_t j = 0; j < i && !d.exact_of; ++j)
      if (fold(texts[j]) == mine) d.exact_of = j;
  return d;
}

std::vector<MineRecord> mine_run(PromptState& state, const MineSettings& settings, std::size_t iterations,
                                 TransportPool& transports, Clock& clock, const RecordSink& sink) {
  if (iterations == 0) throw std::invalid_argument("iterations must be at least 1");
  Transport& conj = transports.get(settings.conjecture);
  Transport& code = transports.get(settings.code);
  std::vector<MineRecord> records;
  std::vector<std::string> texts;
  for (std::size_t k = 0; k < iterations; ++k) {
    auto step = mine_step(state, settings, conj, code, clock, k + 1);
    MineRecord& r = step.record;
    texts.push_back(r.conjecture);
    auto d = check_duplicate(texts, k);
    r.max_similarity = d.similarity;
    if (d.exact_of) r.exact_duplicate_of = records[*d.exact_of].id;
    if (settings.dedup_mode == DedupMode::exact) {
      r.duplicate_of = r.exact_duplicate_of;
    } else if (d.similar_to && d.similarity >= settings.dedup_threshold) {
      r.duplicate_of = records[*d.similar_to].id;
    }
    state = std::move(step.state);
    records.push_back(std::move(r));
    if (sink) sink(records.back(), state);
  }
  return records;
}

Buckets tally(std::span<const MineRecord> records) {
  Buckets b;
  for (const auto& r : records) {
    ++b.total;
    if (!r.exact_duplicate_of) ++b.exact_unique;
    if (r.duplicate_of) {
      ++b.duplicates;
      continue;
    }
    ++b.unique;
    switch (r.outcome.kind) {
      case dsl::OutcomeKind::CounterexampleFound: ++b.failed; break;
      case dsl::OutcomeKind::NoCounterexamples: ++b.no_counterexamples; break;
      case dsl::OutcomeKind::Unverifiable: ++b.unverifiable; break;
    }
  }
  return b;
}

}  // namespace solmine::llm
