#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace solmine::llm {

enum class Role { system, user, assistant };
std::string_view role_name(Role r);

struct Message {
  Role role = Role::user;
  std::string text;
};
using Transcript = std::vector<Message>;

// Where each piece goes in the request and response JSON. Paths are dotted,
// numeric parts index arrays: "choices.0.message.content".
struct WireFormat {
  std::string model_path = "model";
  std::string messages_path = "messages";
  std::string role_key = "role";
  std::string text_path = "content";      // inside one message
  std::string assistant_role = "assistant";
  std::string user_role = "user";
  std::string system_path;                // empty: system text is a message
  std::string temperature_path = "temperature";
  std::string top_k_path = "top_k";
  std::string top_p_path = "top_p";
  std::string max_tokens_path;            // empty: not sent
  std::string response_path = "choices.0.message.content";
  std::string error_path = "error.message";
  std::string auth_header = "Authorization";
  std::string auth_prefix = "Bearer ";
  std::map<std::string, std::string> extra_headers;

  // "openai" (also the default), "anthropic", "gemini".
  static WireFormat preset(std::string_view name);
};

struct ProviderConfig {
  std::string name = "openai";  // preset label, recorded in the ledger
  std::string endpoint;         // http(s)://host/path, or mock:<script>
  std::string model;
  double temperature = 1.0;
  std::optional<int> top_k;
  std::optional<double> top_p;
  std::optional<int> max_tokens;
  std::string api_key_env;  // the key itself never appears in a config
  std::chrono::milliseconds timeout{60'000};
  int max_retries = 3;
  std::chrono::milliseconds backoff{500};  // doubled after every retry
  WireFormat wire;

  // Throws std::invalid_argument naming the bad field.
  void validate() const;
  bool is_mock() const { return endpoint.rfind("mock:", 0) == 0; }
};

struct HttpRequest {
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::chrono::milliseconds timeout{60'000};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Connection-level failure; always retried.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

class HttpTransport : public Transport {
 public:
  HttpResponse post(const HttpRequest& request) override;
};

// Replays a script, one response per line, shared by every config that
// names the same file. A line is one of
//   "plain JSON string"           -> a successful completion with that text
//   {"text": "..."}               -> the same
//   {"status": 503, "body": "..."} -> an HTTP error
//   {"transport_error": "reset"}  -> a connection failure
//   {"raw": "..."}                -> a 200 whose body is taken verbatim
// Lines that are not JSON are completion texts; blank lines are skipped.
// An exhausted script answers with a transport error.
class MockTransport : public Transport {
 public:
  MockTransport(std::vector<std::string> lines, WireFormat wire);
  static std::shared_ptr<MockTransport> from_file(const std::filesystem::path& path, WireFormat wire);

  HttpResponse post(const HttpRequest& request) override;

  const std::vector<HttpRequest>& requests() const { return requests_; }
  std::size_t remaining() const { return lines_.size() - next_; }

 private:
  std::vector<std::string> lines_;
  WireFormat wire_;
  std::size_t next_ = 0;
  std::vector<HttpRequest> requests_;
  std::mutex mu_;
};

enum class ProviderErrorKind { config, auth, http, transport, malformed };

class ProviderError : public std::runtime_error {
 public:
  ProviderError(ProviderErrorKind kind, const std::string& what, int status = 0, int retries = 0)
      : std::runtime_error(what), kind_(kind), status_(status), retries_(retries) {}
  ProviderErrorKind kind() const { return kind_; }
  int status() const { return status_; }
  int retries() const { return retries_; }

 private:
  ProviderErrorKind kind_;
  int status_;
  int retries_;
};

struct Completion {
  std::string text;
  int retries = 0;
};

// Builds the request JSON for a transcript.
std::string build_request_body(const ProviderConfig& cfg, const Transcript& transcript);
// Pulls the assistant text out of a response body; throws ProviderError.
std::string extract_text(const ProviderConfig& cfg, const std::string& body);

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// Sends the transcript and returns the assistant's reply. Transport errors,
// 429 and 5xx are retried with exponential backoff up to cfg.max_retries;
// other failures are thrown at once. The API key is read from the
// environment variable cfg.api_key_env when one is named.
Completion complete(const ProviderConfig& cfg, const Transcript& transcript, Transport& transport,
                    const Sleeper& sleep = {});

// The transport for a config: a shared MockTransport for mock: endpoints
// (keyed by path, relative paths resolved against `base`), otherwise HTTP.
class TransportPool {
 public:
  explicit TransportPool(std::filesystem::path base = {}) : base_(std::move(base)) {}
  Transport& get(const ProviderConfig& cfg);
  std::shared_ptr<MockTransport> mock(const std::filesystem::path& script) const;

 private:
  std::filesystem::path base_;
  std::map<std::string, std::shared_ptr<MockTransport>> mocks_;
  HttpTransport http_;
};

}  // namespace solmine::llm
