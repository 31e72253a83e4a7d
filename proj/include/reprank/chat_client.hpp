#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <string>

namespace reprank {

/// Settings for a chat-completion-compatible endpoint. The credential itself
/// is never stored here, only the name of the environment variable holding it.
struct EndpointConfig {
  /// e.g. "https://api.openai.com/v1"; requests go to <base_url>/chat/completions.
  std::string base_url;
  std::string model;
  /// Empty means no Authorization header is sent.
  std::string api_key_env = "OPENAI_API_KEY";
  std::size_t max_parallel = 4;
  std::size_t max_attempts = 3;
  std::chrono::milliseconds initial_backoff{2000};
  double temperature = 0.0;
  int max_tokens = 1024;
  std::chrono::seconds timeout{300};

  /// Throws ConfigError describing the first invalid field.
  void validate() const;
};

struct ChatRequest {
  std::string model;
  std::string system_message;
  std::string user_message;
  double temperature = 0.0;
  int max_tokens = 1024;
};

struct ChatResult {
  enum class Status { kOk, kTransportError, kHttpError, kInvalidResponse };

  Status status = Status::kOk;
  int http_status = 0;
  std::string text;
  std::string finish_reason;
  std::string error;

  bool ok() const { return status == Status::kOk; }
  /// Transport errors and HTTP 5xx are worth another attempt; 4xx and
  /// undecodable bodies are not.
  bool retryable() const;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResult complete(const ChatRequest& request) = 0;
};

/// HTTP(S) backend speaking the chat-completions JSON protocol.
class HttpChatBackend : public ChatBackend {
 public:
  /// Validates the config and resolves the credential; throws ConfigError.
  explicit HttpChatBackend(EndpointConfig config);

  ChatResult complete(const ChatRequest& request) override;

 private:
  EndpointConfig config_;
  std::string origin_;
  std::string path_;
  std::string api_key_;
};

struct RetryPolicy {
  std::size_t max_attempts = 3;
  std::chrono::milliseconds initial_backoff{2000};
  double multiplier = 2.0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;
using LogSink = std::function<void(const std::string&)>;

void sleep_for(std::chrono::milliseconds delay);

struct RetriedResult {
  ChatResult result;
  std::size_t attempts = 0;
};

/// Calls backend.complete until success, a non-retryable failure, or
/// max_attempts. Waits initial_backoff * multiplier^k before retry k+1.
RetriedResult complete_with_retry(ChatBackend& backend, const ChatRequest& request,
                                  const RetryPolicy& policy, const Sleeper& sleeper,
                                  const LogSink& log = {});

struct GeneratedResponse {
  std::string text;
  /// The model stopped on its own rather than hitting the token limit.
  bool complete = false;
};

/// Single response-generation call (temperature 0, 2,048 tokens by default).
/// Throws std::runtime_error when the backend fails after retries.
GeneratedResponse generate_response(ChatBackend& backend, const std::string& model,
                                    const std::string& prompt, const RetryPolicy& policy,
                                    const Sleeper& sleeper, int max_tokens = 2048);

}  // namespace reprank
