#include "solmine/llm/provider.hpp"

#include <cstdlib>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace solmine::llm {

using nlohmann::json;

std::string_view role_name(Role r) {
  switch (r) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

WireFormat WireFormat::preset(std::string_view name) {
  WireFormat w;
  if (name == "openai" || name.empty()) return w;
  if (name == "anthropic") {
    w.system_path = "system";
    w.max_tokens_path = "max_tokens";
    w.response_path = "content.0.text";
    w.auth_header = "x-api-key";
    w.auth_prefix = "";
    w.extra_headers["anthropic-version"] = "2023-06-01";
    return w;
  }
  if (name == "gemini") {
    w.model_path = "";  // the model is part of the endpoint URL
    w.messages_path = "contents";
    w.text_path = "parts.0.text";
    w.assistant_role = "model";
    w.system_path = "system_instruction.parts.0.text";
    w.temperature_path = "generationConfig.temperature";
    w.top_k_path = "generationConfig.topK";
    w.top_p_path = "generationConfig.topP";
    w.max_tokens_path = "generationConfig.maxOutputTokens";
    w.response_path = "candidates.0.content.parts.0.text";
    w.auth_header = "x-goog-api-key";
    w.auth_prefix = "";
    return w;
  }
  throw std::invalid_argument("unknown provider preset `" + std::string(name) +
                              "` (known: openai, anthropic, gemini)");
}

void ProviderConfig::validate() const {
  if (endpoint.empty()) throw std::invalid_argument("endpoint is required");
  if (!is_mock() && endpoint.rfind("http://", 0) != 0 && endpoint.rfind("https://", 0) != 0)
    throw std::invalid_argument("endpoint must start with http://, https:// or mock:");
  if (!(temperature >= 0)) throw std::invalid_argument("temperature must be >= 0");
  if (top_p && !(*top_p > 0 && *top_p <= 1)) throw std::invalid_argument("top_p must lie in (0, 1]");
  if (top_k && *top_k < 1) throw std::invalid_argument("top_k must be positive");
  if (max_tokens && *max_tokens < 1) throw std::invalid_argument("max_tokens must be positive");
  if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (timeout.count() <= 0) throw std::invalid_argument("timeout must be positive");
  if (wire.response_path.empty()) throw std::invalid_argument("wire.response_path is required");
  if (!is_mock() && api_key_env.empty())
    throw std::invalid_argument("api_key_env must name the environment variable holding the API key");
}

namespace {

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    auto dot = path.find('.', start);
    if (dot == std::string_view::npos) dot = path.size();
    parts.emplace_back(path.substr(start, dot - start));
    start = dot + 1;
  }
  return parts;
}

bool is_index(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

void set_path(json& root, std::string_view path, json value) {
  json* cur = &root;
  for (const auto& part : split_path(path)) {
    if (is_index(part)) {
      std::size_t k = std::stoul(part);
      if (!cur->is_array()) *cur = json::array();
      while (cur->size() <= k) cur->push_back(json::object());
      cur = &(*cur)[k];
    } else {
      if (!cur->is_object()) *cur = json::object();
      cur = &(*cur)[part];
    }
  }
  *cur = std::move(value);
}

const json* get_path(const json& root, std::string_view path) {
  const json* cur = &root;
  for (const auto& part : split_path(path)) {
    if (is_index(part)) {
      std::size_t k = std::stoul(part);
      if (!cur->is_array() || cur->size() <= k) return nullptr;
      cur = &(*cur)[k];
    } else {
      if (!cur->is_object() || !cur->contains(part)) return nullptr;
      cur = &(*cur)[part];
    }
  }
  return cur;
}

std::string substitute_model(std::string url, const std::string& model) {
  auto at = url.find("{model}");
  if (at != std::string::npos) url.replace(at, 7, model);
  return url;
}

std::string clip(const std::string& s, std::size_t n = 300) {
  return s.size() <= n ? s : s.substr(0, n) + "...";
}

}  // namespace

std::string build_request_body(const ProviderConfig& cfg, const Transcript& transcript) {
  const WireFormat& w = cfg.wire;
  json body = json::object();
  if (!w.model_path.empty()) set_path(body, w.model_path, cfg.model);
  set_path(body, w.temperature_path, cfg.temperature);
  if (cfg.top_k && !w.top_k_path.empty()) set_path(body, w.top_k_path, *cfg.top_k);
  if (cfg.top_p && !w.top_p_path.empty()) set_path(body, w.top_p_path, *cfg.top_p);
  if (!w.max_tokens_path.empty()) set_path(body, w.max_tokens_path, cfg.max_tokens.value_or(1024));

  std::string system;
  json messages = json::array();
  for (const auto& m : transcript) {
    if (m.role == Role::system && !w.system_path.empty()) {
      system += (system.empty() ? "" : "\n\n") + m.text;
      continue;
    }
    json msg = json::object();
    std::string role = m.role == Role::assistant ? w.assistant_role
                       : m.role == Role::user    ? w.user_role
                                                 : std::string("system");
    msg[w.role_key] = role;
    set_path(msg, w.text_path, m.text);
    messages.push_back(std::move(msg));
  }
  if (!system.empty()) set_path(body, w.system_path, system);
  set_path(body, w.messages_path, std::move(messages));
  return body.dump();
}

std::string extract_text(const ProviderConfig& cfg, const std::string& body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded())
    throw ProviderError(ProviderErrorKind::malformed, "malformed response: not JSON: " + clip(body));
  const json* text = get_path(doc, cfg.wire.response_path);
  if (!text || !text->is_string())
    throw ProviderError(ProviderErrorKind::malformed, "malformed response: no string at `" +
                                                          cfg.wire.response_path + "`: " + clip(body));
  return text->get<std::string>();
}

HttpResponse HttpTransport::post(const HttpRequest& request) {
  auto scheme_end = request.url.find("://");
  if (scheme_end == std::string::npos) throw TransportError("bad URL " + request.url);
  auto path_start = request.url.find('/', scheme_end + 3);
  std::string origin = request.url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : request.url.substr(path_start);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (request.url.rfind("https://", 0) == 0)
    throw TransportError("https endpoints need a build with SOLMINE_WITH_TLS=ON");
#endif
  httplib::Client client(origin);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  for (const auto& [k, v] : request.headers) headers.emplace(k, v);
  auto res = client.Post(path, headers, request.body, "application/json");
  if (!res) throw TransportError(httplib::to_string(res.error()));
  return {res->status, res->body};
}

MockTransport::MockTransport(std::vector<std::string> lines, WireFormat wire)
    : lines_(std::move(lines)), wire_(std::move(wire)) {
  std::erase_if(lines_, [](const std::string& l) { return l.find_first_not_of(" \t\r") == std::string::npos; });
}

std::shared_ptr<MockTransport> MockTransport::from_file(const std::filesystem::path& path, WireFormat wire) {
  std::ifstream in(path);
  if (!in) throw ProviderError(ProviderErrorKind::config, "cannot read mock script " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return std::make_shared<MockTransport>(std::move(lines), std::move(wire));
}

HttpResponse MockTransport::post(const HttpRequest& request) {
  std::lock_guard lock(mu_);
  requests_.push_back(request);
  if (next_ >= lines_.size()) throw TransportError("mock script exhausted");
  const std::string& line = lines_[next_++];

  auto ok = [&](const std::string& text) {
    json body = json::object();
    set_path(body, wire_.response_path, text);
    return HttpResponse{200, body.dump()};
  };
  json doc = json::parse(line, nullptr, false);
  if (doc.is_discarded()) return ok(line);
  if (doc.is_string()) return ok(doc.get<std::string>());
  if (doc.is_object()) {
    if (doc.contains("transport_error")) throw TransportError(doc["transport_error"].dump());
    if (doc.contains("raw")) return {200, doc["raw"].get<std::string>()};
    if (doc.contains("status"))
      return {doc["status"].get<int>(), doc.contains("body") ? doc["body"].get<std::string>() : ""};
    if (doc.contains("text")) return ok(doc["text"].get<std::string>());
  }
  return ok(line);
}

Completion complete(const ProviderConfig& cfg, const Transcript& transcript, Transport& transport,
                    const Sleeper& sleep) {
  if (transcript.empty()) throw std::invalid_argument("complete: empty transcript");
  HttpRequest req;
  req.url = substitute_model(cfg.endpoint, cfg.model);
  req.timeout = cfg.timeout;
  req.body = build_request_body(cfg, transcript);
  req.headers.emplace_back("Content-Type", "application/json");
  for (const auto& [k, v] : cfg.wire.extra_headers) req.headers.emplace_back(k, v);
  if (!cfg.api_key_env.empty()) {
    const char* key = std::getenv(cfg.api_key_env.c_str());
    if (key && *key) {
      req.headers.emplace_back(cfg.wire.auth_header, cfg.wire.auth_prefix + key);
    } else if (!cfg.is_mock()) {
      throw ProviderError(ProviderErrorKind::auth,
                          "no API key: set the environment variable " + cfg.api_key_env);
    }
  }

  int retries = 0;
  for (;;) {
    bool retry = false;
    std::string why;
    try {
      HttpResponse res = transport.post(req);
      if (res.status >= 200 && res.status < 300) return {extract_text(cfg, res.body), retries};
      std::string detail = clip(res.body);
      if (json doc = json::parse(res.body, nullptr, false); !doc.is_discarded())
        if (const json* m = get_path(doc, cfg.wire.error_path); m && m->is_string()) detail = m->get<std::string>();
      if (res.status == 401 || res.status == 403) {
        std::string env = cfg.api_key_env.empty() ? "the API key variable named by api_key_env"
                                                  : "the environment variable " + cfg.api_key_env;
        throw ProviderError(ProviderErrorKind::auth,
                            "HTTP " + std::to_string(res.status) + " (" + detail + "): check " + env,
                            res.status, retries);
      }
      if (res.status != 429 && res.status < 500)
        throw ProviderError(ProviderErrorKind::http, "HTTP " + std::to_string(res.status) + ": " + detail,
                            res.status, retries);
      retry = true;
      why = "HTTP " + std::to_string(res.status) + ": " + detail;
      if (retries >= cfg.max_retries)
        throw ProviderError(ProviderErrorKind::http,
                            why + " (after " + std::to_string(retries) + " retries)", res.status, retries);
    } catch (const TransportError& e) {
      if (retries >= cfg.max_retries)
        throw ProviderError(ProviderErrorKind::transport,
                            std::string("transport failure: ") + e.what() + " (after " +
                                std::to_string(retries) + " retries)",
                            0, retries);
      retry = true;
    }
    if (retry) {
      auto wait = cfg.backoff * (1LL << std::min(retries, 16));
      if (sleep) sleep(wait);
      else if (wait.count() > 0) std::this_thread::sleep_for(wait);
      ++retries;
    }
  }
}

std::shared_ptr<MockTransport> TransportPool::mock(const std::filesystem::path& script) const {
  auto it = mocks_.find(script.lexically_normal().string());
  return it == mocks_.end() ? nullptr : it->second;
}

Transport& TransportPool::get(const ProviderConfig& cfg) {
  if (!cfg.is_mock()) return http_;
  std::filesystem::path p = cfg.endpoint.substr(5);
  if (p.is_relative() && !base_.empty()) p = base_ / p;
  auto key = p.lexically_normal().string();
  auto& slot = mocks_[key];
  if (!slot) slot = MockTransport::from_file(p, cfg.wire);
  return *slot;
}

}  // namespace solmine::llm
