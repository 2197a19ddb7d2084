#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace bcr::llm {

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;
  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  std::optional<int> max_tokens;
};

struct Usage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
  int total_tokens = 0;
};

struct ChatResponse {
  std::string text;
  std::optional<Usage> usage;
  std::chrono::milliseconds latency{0};
  int retries = 0;
};

enum class TransportKind { kNetwork, kTimeout, kHttp, kMalformedResponse, kAuth };

const char* to_string(TransportKind kind);

class TransportError : public Error {
 public:
  TransportError(TransportKind kind, int status, const std::string& message);
  TransportKind kind() const { return kind_; }
  int status() const { return status_; }

 private:
  TransportKind kind_;
  int status_;
};

/// Serialized request body; field order is fixed so equal requests give
/// byte-identical bodies. Throws Validation on empty messages or bad roles.
std::string to_wire(const ChatRequest& request);
/// First choice content plus usage. Throws TransportError(malformed_response).
ChatResponse from_wire(const std::string& body);

struct HttpReply {
  int status = 0;  // 0 when the request never completed
  std::string body;
  std::optional<TransportKind> failure;  // network or timeout
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpReply post(const std::string& body) = 0;
};

/// POSTs to an http(s) chat-completions URL with a bearer token.
class HttpTransport final : public Transport {
 public:
  HttpTransport(std::string endpoint, std::string api_key,
                std::chrono::seconds timeout = std::chrono::seconds(60));
  HttpReply post(const std::string& body) override;

 private:
  std::string origin_;
  std::string path_;
  std::string api_key_;
  std::chrono::seconds timeout_;
};

/// Replays scripted replies in order and records every request body.
/// Once the script runs out the last reply repeats.
class MockTransport final : public Transport {
 public:
  explicit MockTransport(std::vector<HttpReply> script);
  HttpReply post(const std::string& body) override;

  std::vector<std::string> requests() const;
  size_t calls() const;

  /// A 200 reply whose first choice carries `content`.
  static HttpReply reply(const std::string& content);

 private:
  mutable std::mutex mu_;
  std::vector<HttpReply> script_;
  std::vector<std::string> requests_;
};

struct ClientConfig {
  int max_retries = 4;
  std::chrono::milliseconds base_delay{250};
  std::chrono::milliseconds max_delay{8000};
  uint64_t seed = 0;
  std::string secret;  // redacted from anything handed to `log`
  std::function<void(const std::string&)> log;
  std::function<void(std::chrono::milliseconds)> sleep;  // default: real sleep
};

/// Backoff before retry number `attempt` (1-based).
std::chrono::milliseconds backoff_delay(const ClientConfig& config, int attempt);

class ChatClient {
 public:
  ChatClient(std::shared_ptr<Transport> transport, ClientConfig config = {});

  /// Retries 429, 5xx, network failures and timeouts; 401/403 and other
  /// 4xx fail at once.
  ChatResponse chat(const ChatRequest& request) const;

 private:
  void log(const std::string& line) const;

  std::shared_ptr<Transport> transport_;
  ClientConfig config_;
};

}  // namespace bcr::llm
