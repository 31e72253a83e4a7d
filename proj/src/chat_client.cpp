#include "reprank/chat_client.hpp"

#include <cstdlib>
#include <regex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "reprank/errors.hpp"

namespace reprank {

using nlohmann::json;

void EndpointConfig::validate() const {
  static const std::regex kUrl(R"(^https?://[^/\s:]+(:[0-9]{1,5})?(/[^\s]*)?$)");
  if (base_url.empty()) {
    throw ConfigError("endpoint url is not set");
  }
  if (!std::regex_match(base_url, kUrl)) {
    throw ConfigError("endpoint url '" + base_url + "' is not an http(s) URL");
  }
  if (model.empty()) {
    throw ConfigError("evaluator model name is not set");
  }
  if (max_parallel < 1) {
    throw ConfigError("max_parallel must be at least 1");
  }
  if (max_attempts < 1) {
    throw ConfigError("max_attempts must be at least 1");
  }
  if (initial_backoff.count() < 0) {
    throw ConfigError("backoff must be non-negative");
  }
  if (max_tokens < 1) {
    throw ConfigError("max_tokens must be positive");
  }
  if (temperature < 0.0) {
    throw ConfigError("temperature must be non-negative");
  }
}

bool ChatResult::retryable() const {
  switch (status) {
    case Status::kOk:
    case Status::kInvalidResponse:
      return false;
    case Status::kTransportError:
      return true;
    case Status::kHttpError:
      return http_status >= 500;
  }
  return false;
}

HttpChatBackend::HttpChatBackend(EndpointConfig config) : config_(std::move(config)) {
  config_.validate();
  const auto scheme_end = config_.base_url.find("://");
  const auto path_start = config_.base_url.find('/', scheme_end + 3);
  origin_ = config_.base_url.substr(0, path_start);
  path_ = path_start == std::string::npos ? std::string{} : config_.base_url.substr(path_start);
  while (!path_.empty() && path_.back() == '/') {
    path_.pop_back();
  }
  path_ += "/chat/completions";
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw ConfigError("environment variable " + config_.api_key_env +
                        " holding the API key is not set");
    }
    api_key_ = key;
  }
}

ChatResult HttpChatBackend::complete(const ChatRequest& request) {
  json messages = json::array();
  if (!request.system_message.empty()) {
    messages.push_back({{"role", "system"}, {"content", request.system_message}});
  }
  messages.push_back({{"role", "user"}, {"content", request.user_message}});
  json body = {
      {"model", request.model},
      {"messages", std::move(messages)},
      {"temperature", request.temperature},
      {"max_tokens", request.max_tokens},
  };

  httplib::Client client(origin_);
  client.set_connection_timeout(std::chrono::seconds(30));
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  httplib::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key_);
  }

  ChatResult result;
  auto response = client.Post(path_, headers, body.dump(), "application/json");
  if (!response) {
    result.status = ChatResult::Status::kTransportError;
    result.error = "transport error: " + httplib::to_string(response.error());
    return result;
  }
  result.http_status = response->status;
  if (response->status < 200 || response->status >= 300) {
    result.status = ChatResult::Status::kHttpError;
    result.error = "HTTP " + std::to_string(response->status) + ": " + response->body.substr(0, 512);
    return result;
  }
  try {
    const auto parsed = json::parse(response->body);
    const auto& choice = parsed.at("choices").at(0);
    result.text = choice.at("message").at("content").get<std::string>();
    if (choice.contains("finish_reason") && choice["finish_reason"].is_string()) {
      result.finish_reason = choice["finish_reason"].get<std::string>();
    }
  } catch (const json::exception& e) {
    result.status = ChatResult::Status::kInvalidResponse;
    result.error = std::string("undecodable completion body: ") + e.what();
  }
  return result;
}

void sleep_for(std::chrono::milliseconds delay) { std::this_thread::sleep_for(delay); }

RetriedResult complete_with_retry(ChatBackend& backend, const ChatRequest& request,
                                  const RetryPolicy& policy, const Sleeper& sleeper,
                                  const LogSink& log) {
  RetriedResult out;
  double delay_ms = static_cast<double>(policy.initial_backoff.count());
  const std::size_t attempts = std::max<std::size_t>(policy.max_attempts, 1);
  for (std::size_t attempt = 1; attempt <= attempts; ++attempt) {
    out.attempts = attempt;
    out.result = backend.complete(request);
    if (out.result.ok() || !out.result.retryable() || attempt == attempts) {
      break;
    }
    const auto delay = std::chrono::milliseconds(static_cast<long long>(delay_ms));
    if (log) {
      log("retry " + std::to_string(attempt) + "/" + std::to_string(attempts - 1) + " after " +
          std::to_string(delay.count()) + " ms: " + out.result.error);
    }
    if (sleeper) {
      sleeper(delay);
    }
    delay_ms *= policy.multiplier;
  }
  return out;
}

GeneratedResponse generate_response(ChatBackend& backend, const std::string& model,
                                    const std::string& prompt, const RetryPolicy& policy,
                                    const Sleeper& sleeper, int max_tokens) {
  ChatRequest request{model, "", prompt, 0.0, max_tokens};
  auto [result, attempts] = complete_with_retry(backend, request, policy, sleeper);
  if (!result.ok()) {
    throw std::runtime_error("generation failed after " + std::to_string(attempts) +
                             " attempt(s): " + result.error);
  }
  return {result.text, result.finish_reason == "stop"};
}

}  // namespace reprank
