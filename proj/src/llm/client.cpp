#include "llm/client.hpp"

#include <algorithm>
#include <random>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace bcr::llm {

using ordered_json = nlohmann::ordered_json;

const char* to_string(TransportKind kind) {
  switch (kind) {
    case TransportKind::kNetwork: return "network";
    case TransportKind::kTimeout: return "timeout";
    case TransportKind::kHttp: return "http";
    case TransportKind::kMalformedResponse: return "malformed_response";
    case TransportKind::kAuth: return "auth";
  }
  return "network";
}

TransportError::TransportError(TransportKind kind, int status,
                               const std::string& message)
    : Error(ErrorCode::kTransport,
            std::string(to_string(kind)) + (status ? " " + std::to_string(status) : "") +
                ": " + message),
      kind_(kind),
      status_(status) {}

std::string to_wire(const ChatRequest& request) {
  if (request.messages.empty())
    throw Error(ErrorCode::kValidation, "chat request has no messages");
  ordered_json j;
  j["model"] = request.model;
  j["messages"] = ordered_json::array();
  for (const auto& m : request.messages) {
    if (m.role != "system" && m.role != "user" && m.role != "assistant")
      throw Error(ErrorCode::kValidation, "bad message role " + m.role);
    ordered_json msg;
    msg["role"] = m.role;
    msg["content"] = m.content;
    j["messages"].push_back(std::move(msg));
  }
  if (request.temperature < 0)
    throw Error(ErrorCode::kValidation, "temperature must be >= 0");
  j["temperature"] = request.temperature;
  if (request.max_tokens) j["max_tokens"] = *request.max_tokens;
  return j.dump();
}

ChatResponse from_wire(const std::string& body) {
  ChatResponse r;
  try {
    auto j = nlohmann::json::parse(body);
    r.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
    if (j.contains("usage") && j["usage"].is_object()) {
      const auto& u = j["usage"];
      r.usage = Usage{u.value("prompt_tokens", 0), u.value("completion_tokens", 0),
                      u.value("total_tokens", 0)};
    }
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(TransportKind::kMalformedResponse, 0, e.what());
  }
  return r;
}

HttpTransport::HttpTransport(std::string endpoint, std::string api_key,
                             std::chrono::seconds timeout)
    : api_key_(std::move(api_key)), timeout_(timeout) {
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos)
    throw Error(ErrorCode::kConfig, "endpoint must be an http(s) URL: " + endpoint);
  const auto path_start = endpoint.find('/', scheme_end + 3);
  origin_ = endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : endpoint.substr(path_start);
}

HttpReply HttpTransport::post(const std::string& body) {
  httplib::Client client(origin_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
  auto res = client.Post(path_, headers, body, "application/json");
  if (!res) {
    const bool timeout = res.error() == httplib::Error::Read ||
                         res.error() == httplib::Error::Write ||
                         res.error() == httplib::Error::ConnectionTimeout;
    return {0, httplib::to_string(res.error()),
            timeout ? TransportKind::kTimeout : TransportKind::kNetwork};
  }
  return {res->status, res->body, std::nullopt};
}

MockTransport::MockTransport(std::vector<HttpReply> script) : script_(std::move(script)) {}

HttpReply MockTransport::post(const std::string& body) {
  std::lock_guard lock(mu_);
  requests_.push_back(body);
  if (script_.empty()) return {500, "empty script", std::nullopt};
  return script_[std::min(requests_.size(), script_.size()) - 1];
}

std::vector<std::string> MockTransport::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

size_t MockTransport::calls() const {
  std::lock_guard lock(mu_);
  return requests_.size();
}

HttpReply MockTransport::reply(const std::string& content) {
  ordered_json j;
  j["choices"] = ordered_json::array({{{"index", 0},
                                       {"message", {{"role", "assistant"}, {"content", content}}}}});
  return {200, j.dump(), std::nullopt};
}

std::chrono::milliseconds backoff_delay(const ClientConfig& config, int attempt) {
  const int64_t base = config.base_delay.count();
  const int64_t exp = base << std::min(attempt - 1, 20);
  std::mt19937_64 rng(config.seed * 1000003ULL + static_cast<uint64_t>(attempt));
  const int64_t jitter = base > 0 ? static_cast<int64_t>(rng() % static_cast<uint64_t>(base)) : 0;
  return std::chrono::milliseconds(std::min(exp + jitter, config.max_delay.count()));
}

ChatClient::ChatClient(std::shared_ptr<Transport> transport, ClientConfig config)
    : transport_(std::move(transport)), config_(std::move(config)) {}

void ChatClient::log(const std::string& line) const {
  if (!config_.log) return;
  std::string out = line;
  if (!config_.secret.empty())
    for (size_t pos; (pos = out.find(config_.secret)) != std::string::npos;)
      out.replace(pos, config_.secret.size(), "[redacted]");
  config_.log(out);
}

ChatResponse ChatClient::chat(const ChatRequest& request) const {
  const std::string body = to_wire(request);
  const auto start = std::chrono::steady_clock::now();
  for (int attempt = 0;; ++attempt) {
    HttpReply reply = transport_->post(body);
    log("chat attempt " + std::to_string(attempt + 1) + " status " +
        std::to_string(reply.status));
    std::optional<TransportError> failure;
    bool retryable = false;
    if (reply.failure) {
      failure.emplace(*reply.failure, 0, reply.body);
      retryable = true;
    } else if (reply.status == 401 || reply.status == 403) {
      failure.emplace(TransportKind::kAuth, reply.status, "credentials rejected");
    } else if (reply.status == 429 || reply.status >= 500) {
      failure.emplace(TransportKind::kHttp, reply.status, "server busy or failing");
      retryable = true;
    } else if (reply.status < 200 || reply.status >= 300) {
      failure.emplace(TransportKind::kHttp, reply.status, "request rejected");
    }
    if (!failure) {
      ChatResponse r = from_wire(reply.body);
      r.retries = attempt;
      r.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - start);
      return r;
    }
    if (!retryable || attempt >= config_.max_retries) {
      log(std::string("chat failed: ") + failure->what());
      throw *failure;
    }
    const auto delay = backoff_delay(config_, attempt + 1);
    if (config_.sleep)
      config_.sleep(delay);
    else
      std::this_thread::sleep_for(delay);
  }
}

}  // namespace bcr::llm
