#include "solmine/llm/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace solmine::llm {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, s.find_last_not_of(" \t\r") - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Value {
  std::string text;
  std::size_t line = 0;
};

template <class T>
T number(const Value& v, const std::string& key) {
  T out{};
  auto [p, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
  if (ec != std::errc() || p != v.text.data() + v.text.size())
    throw ConfigError("`" + key + "` expects a number, got `" + v.text + "`", v.line);
  return out;
}

double real(const Value& v, const std::string& key) {
  try {
    std::size_t used = 0;
    double d = std::stod(v.text, &used);
    if (used == v.text.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("`" + key + "` expects a number, got `" + v.text + "`", v.line);
}

bool boolean(const Value& v, const std::string& key) {
  auto t = lower(v.text);
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw ConfigError("`" + key + "` expects true or false, got `" + v.text + "`", v.line);
}

bool secret_like(const std::string& key) {
  auto last = key.substr(key.rfind('.') + 1);
  last = lower(last);
  return last == "api_key" || last == "apikey" || last == "key" || last == "secret" || last == "password" ||
         last == "token";
}

bool auth_header(const std::string& name) {
  auto n = lower(name);
  return n == "authorization" || n == "x-api-key" || n == "x-goog-api-key";
}

std::string* wire_field(WireFormat& w, const std::string& name) {
  static const std::map<std::string, std::string WireFormat::*> fields = {
      {"model_path", &WireFormat::model_path},
      {"messages_path", &WireFormat::messages_path},
      {"role_key", &WireFormat::role_key},
      {"text_path", &WireFormat::text_path},
      {"assistant_role", &WireFormat::assistant_role},
      {"user_role", &WireFormat::user_role},
      {"system_path", &WireFormat::system_path},
      {"temperature_path", &WireFormat::temperature_path},
      {"top_k_path", &WireFormat::top_k_path},
      {"top_p_path", &WireFormat::top_p_path},
      {"max_tokens_path", &WireFormat::max_tokens_path},
      {"response_path", &WireFormat::response_path},
      {"error_path", &WireFormat::error_path},
      {"auth_header", &WireFormat::auth_header},
      {"auth_prefix", &WireFormat::auth_prefix},
  };
  auto it = fields.find(name);
  return it == fields.end() ? nullptr : &(w.*(it->second));
}

// Applies `<section>.<field>` keys to a provider config. Returns false for
// keys it does not know.
bool apply_provider(ProviderConfig& p, const std::string& field, const Value& v, const std::string& key) {
  if (field == "endpoint") p.endpoint = v.text;
  else if (field == "model") p.model = v.text;
  else if (field == "temperature") p.temperature = real(v, key);
  else if (field == "top_k") p.top_k = number<int>(v, key);
  else if (field == "top_p") p.top_p = real(v, key);
  else if (field == "max_tokens") p.max_tokens = number<int>(v, key);
  else if (field == "api_key_env") p.api_key_env = v.text;
  else if (field == "timeout_s") p.timeout = std::chrono::milliseconds(static_cast<long long>(real(v, key) * 1000));
  else if (field == "max_retries") p.max_retries = number<int>(v, key);
  else if (field == "backoff_ms") p.backoff = std::chrono::milliseconds(number<long long>(v, key));
  else if (field.rfind("wire.header.", 0) == 0) {
    auto name = field.substr(12);
    if (auth_header(name))
      throw ConfigError("`" + key + "` would put a credential in the config; API keys are read from the "
                        "environment variable named by api_key_env",
                        v.line);
    p.wire.extra_headers[name] = v.text;
  } else if (field.rfind("wire.", 0) == 0) {
    std::string* f = wire_field(p.wire, field.substr(5));
    if (!f) return false;
    *f = v.text;
  } else {
    return false;
  }
  return true;
}

}  // namespace

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  cfg.base_dir = base_dir;
  cfg.source = std::string(text);

  std::map<std::string, Value> keys;
  std::istringstream in{std::string(text)};
  std::size_t n = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++n;
    std::string line = raw;
    if (auto hash = line.find(" #"); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected `key = value`", n);
    std::string key = lower(trim(line.substr(0, eq)));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before `=`", n);
    if (secret_like(key))
      throw ConfigError("`" + key + "` is not allowed: API keys are read only from environment variables; "
                        "set api_key_env to the variable's name",
                        n);
    if (keys.count(key)) throw ConfigError("`" + key + "` is set twice", n);
    keys[key] = {value, n};
  }

  // Presets first, so explicit wire.* keys override them.
  ProviderConfig base;
  std::string base_preset = "openai";
  if (auto it = keys.find("provider.preset"); it != keys.end()) base_preset = it->second.text;
  auto preset_for = [&](const std::string& section) {
    auto it = keys.find(section + ".preset");
    std::string name = it != keys.end() ? it->second.text : base_preset;
    std::size_t line = it != keys.end() ? it->second.line : 0;
    try {
      return std::pair{name, WireFormat::preset(name)};
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line);
    }
  };
  auto [conj_name, conj_wire] = preset_for("conjecture");
  auto [code_name, code_wire] = preset_for("code");
  cfg.conjecture.name = conj_name;
  cfg.conjecture.wire = conj_wire;
  cfg.code.name = code_name;
  cfg.code.wire = code_wire;
  cfg.conjecture.temperature = 1.0;
  cfg.code.temperature = 0.1;

  bool iterations_set = false;
  // Shared provider.* keys apply to both roles; role keys override.
  for (const char* pass : {"provider.", "role"}) {
    for (const auto& [key, v] : keys) {
      bool shared = key.rfind("provider.", 0) == 0;
      if ((std::string(pass) == "provider.") != shared) continue;
      if (shared) {
        auto field = key.substr(9);
        if (field == "preset") continue;
        if (field == "temperature")
          throw ConfigError("set conjecture.temperature and code.temperature separately", v.line);
        bool a = apply_provider(cfg.conjecture, field, v, key);
        apply_provider(cfg.code, field, v, key);
        if (!a) throw ConfigError("unknown key `" + key + "`", v.line);
        continue;
      }
      if (key.rfind("conjecture.", 0) == 0 || key.rfind("code.", 0) == 0) {
        bool conj = key.rfind("conjecture.", 0) == 0;
        auto field = key.substr(key.find('.') + 1);
        if (field == "preset") continue;
        if (!apply_provider(conj ? cfg.conjecture : cfg.code, field, v, key))
          throw ConfigError("unknown key `" + key + "`", v.line);
        continue;
      }
      if (key == "iterations") {
        cfg.iterations = number<std::size_t>(v, key);
        iterations_set = true;
        if (cfg.iterations == 0) throw ConfigError("iterations must be at least 1", v.line);
      } else if (key == "catalog") cfg.catalog = v.text;
      else if (key == "max_order") cfg.max_order = number<std::size_t>(v, key);
      else if (key == "facts") cfg.facts = v.text;
      else if (key == "dedup_threshold") cfg.dedup_threshold = real(v, key);
      else if (key == "dedup_mode") {
        auto m = lower(v.text);
        if (m == "cosine") cfg.dedup_mode = DedupMode::cosine;
        else if (m == "exact") cfg.dedup_mode = DedupMode::exact;
        else throw ConfigError("dedup_mode must be cosine or exact", v.line);
      } else if (key == "timestamps") {
        auto m = lower(v.text);
        if (m != "logical" && m != "wall") throw ConfigError("timestamps must be logical or wall", v.line);
        cfg.wall_clock = m == "wall";
      } else if (key == "output_dir") cfg.output_dir = v.text;
      else if (key == "budget.max_group_order") cfg.budget.max_group_order = number<std::size_t>(v, key);
      else if (key == "budget.max_solvability_checks")
        cfg.budget.max_solvability_checks = number<std::size_t>(v, key);
      else if (key == "budget.wall_timeout_s")
        cfg.budget.wall_timeout = std::chrono::milliseconds(static_cast<long long>(real(v, key) * 1000));
      else if (key == "eval.conjugacy_reduction") cfg.options.conjugacy_reduction = boolean(v, key);
      else if (key == "eval.parallel") cfg.options.parallel = boolean(v, key);
      else if (key == "limits.lattice_cap") cfg.options.limits.lattice_cap = number<std::size_t>(v, key);
      else if (key == "limits.max_enumeration") cfg.options.limits.max_enumeration = number<std::size_t>(v, key);
      else if (key == "limits.catalog_cap") cfg.options.limits.catalog_cap = number<std::size_t>(v, key);
      else throw ConfigError("unknown key `" + key + "`", v.line);
    }
  }

  if (!iterations_set) throw ConfigError("`iterations` is required");
  if (!(cfg.dedup_threshold >= 0)) throw ConfigError("dedup_threshold must be >= 0");
  if (cfg.max_order == 0) throw ConfigError("max_order must be positive");
  for (auto* p : {&cfg.conjecture, &cfg.code}) {
    try {
      p->validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string(p == &cfg.conjecture ? "conjecture" : "code") + " provider: " + e.what());
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.parent_path());
}

namespace {

std::filesystem::path resolve(const RunConfig& cfg, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !cfg.base_dir.empty() ? cfg.base_dir / path : path;
}

}  // namespace

MineSettings make_settings(const RunConfig& cfg) {
  MineSettings s;
  s.conjecture = cfg.conjecture;
  s.code = cfg.code;
  s.budget = cfg.budget;
  s.options = cfg.options;
  s.dedup_threshold = cfg.dedup_threshold;
  s.dedup_mode = cfg.dedup_mode;
  try {
    if (cfg.catalog == "builtin") {
      s.catalog = builtin_catalog(cfg.max_order);
    } else {
      s.catalog = up_to_order(load_groups(resolve(cfg, cfg.catalog), cfg.options.limits), cfg.max_order);
    }
  } catch (const CatalogError& e) {
    throw ConfigError(std::string("catalog: ") + e.what());
  }
  if (s.catalog.empty()) throw ConfigError("the catalog has no groups of order <= " + std::to_string(cfg.max_order));
  for (auto* p : {&cfg.conjecture, &cfg.code}) {
    if (p->is_mock()) {
      auto script = resolve(cfg, p->endpoint.substr(5));
      if (!std::filesystem::exists(script)) throw ConfigError("mock script not found: " + script.string());
    }
  }
  return s;
}

PromptState make_prompt_state(const RunConfig& cfg) {
  PromptState st = PromptState::defaults();
  if (cfg.facts != "builtin") {
    auto path = resolve(cfg, cfg.facts);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read facts file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    st.facts = parse_facts(buf.str());
  }
  return st;
}

std::string config_reference() {
  return R"(Run configuration: one `key = value` per line, `#` starts a comment.

  iterations = N                 required, at least 1
  catalog = builtin | <file>     group file in the catalog format
  max_order = 1000               groups above this order are left out
  facts = builtin | <file>       literature facts, one paragraph each
  dedup_threshold = 0.95         cosine similarity marking a duplicate
  dedup_mode = cosine | exact
  timestamps = logical | wall    logical makes runs replayable
  output_dir = <dir>             where `mine` writes the run archive
  budget.max_group_order, budget.max_solvability_checks, budget.wall_timeout_s
  eval.conjugacy_reduction, eval.parallel = true | false
  limits.lattice_cap, limits.max_enumeration, limits.catalog_cap

Provider keys, under `conjecture.`, `code.`, or `provider.` for both:
  preset = openai | anthropic | gemini
  endpoint = https://... | mock:<script>   ({model} is replaced in URLs)
  model, temperature, top_k, top_p, max_tokens
  api_key_env = NAME             the API key is read from this variable
  timeout_s, max_retries, backoff_ms
  wire.<field> = ...             request/response field paths, e.g.
                                 wire.response_path = choices.0.message.content
  wire.header.<Name> = value     extra request headers

Temperatures default to 1.0 for conjectures and 0.1 for encodings.
API keys are never accepted in this file.
)";
}

}  // namespace solmine::llm
