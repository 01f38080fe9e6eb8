#include "perturbench/harness/provider.hpp"

#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "perturbench/harness/stop_tokens.hpp"

namespace perturbench {

void ProviderConfig::validate() const {
  if (sampling.n < 1) throw ConfigError("samples per task must be >= 1");
  if (timeout_secs <= 0) throw ConfigError("provider timeout must be positive");
  if (retry_budget < 0) throw ConfigError("retry budget must be >= 0");
}

nlohmann::ordered_json provider_config_to_json(const ProviderConfig& c) {
  nlohmann::ordered_json j;
  j["endpoint"] = c.endpoint;
  j["model"] = c.model;
  j["temperature"] = c.sampling.temperature;
  j["max_tokens"] = c.sampling.max_tokens;
  j["n"] = c.sampling.n;
  j["timeout_secs"] = c.timeout_secs;
  j["retry_budget"] = c.retry_budget;
  return j;
}

HttpCompletionProvider::HttpCompletionProvider(ProviderConfig config)
    : config_(std::move(config)) {
  config_.validate();
  const std::string& url = config_.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.substr(0, scheme_end) != "http") {
    throw ConfigError("provider URL must start with http:// (got \"" + url + "\")");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (scheme_host_port_.size() <= scheme_end + 3) {
    throw ConfigError("provider URL has no host: \"" + url + "\"");
  }
}

std::string HttpCompletionProvider::describe() const {
  return "http " + config_.endpoint;
}

nlohmann::ordered_json HttpCompletionProvider::request_body(
    const CompletionRequest& request) {
  nlohmann::ordered_json body;
  body["model"] = request.model;
  body["prompt"] = request.prompt;
  body["max_tokens"] = request.sampling.max_tokens;
  body["temperature"] = request.sampling.temperature;
  body["n"] = request.sampling.n;
  body["stop"] = request.stop;
  return body;
}

std::vector<std::string> HttpCompletionProvider::parse_response(
    std::string_view body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    throw CompletionError(CompletionError::Kind::kModel,
                          "response is not JSON", "bad-response");
  }
  if (doc.contains("error")) {
    throw CompletionError(CompletionError::Kind::kModel,
                          "model error: " + doc["error"].dump(), "model-error");
  }
  std::vector<std::string> texts;
  try {
    if (doc.contains("choices")) {
      for (const auto& choice : doc.at("choices")) {
        texts.push_back(choice.at("text").get<std::string>());
      }
      return texts;
    }
    if (doc.contains("completions")) {
      return doc.at("completions").get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw CompletionError(CompletionError::Kind::kModel,
                          std::string("malformed completion list: ") + e.what(),
                          "bad-response");
  }
  throw CompletionError(CompletionError::Kind::kModel,
                        "response carries no completions", "bad-response");
}

std::vector<std::string> HttpCompletionProvider::fetch(
    const CompletionRequest& request) {
  httplib::Client client(scheme_host_port_);
  const auto seconds = static_cast<time_t>(config_.timeout_secs);
  const auto micros = static_cast<time_t>((config_.timeout_secs - seconds) * 1e6);
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);

  const auto body = request_body(request).dump();
  auto response = client.Post(path_, body, "application/json");
  if (!response) {
    throw CompletionError(CompletionError::Kind::kTransport,
                          "transport error: " + httplib::to_string(response.error()),
                          httplib::to_string(response.error()));
  }
  const int status = response->status;
  if (status == 429 || status >= 500) {
    throw CompletionError(CompletionError::Kind::kTransport,
                          "server returned HTTP " + std::to_string(status),
                          std::to_string(status));
  }
  if (status < 200 || status >= 300) {
    throw CompletionError(CompletionError::Kind::kModel,
                          "server rejected request with HTTP " +
                              std::to_string(status) + ": " + response->body,
                          std::to_string(status));
  }
  return parse_response(response->body);
}

ReplayProvider::ReplayProvider(std::map<std::string, std::vector<std::string>> recorded)
    : recorded_(std::move(recorded)) {}

ReplayProvider ReplayProvider::from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    std::map<std::string, std::vector<std::string>> recorded;
    for (const auto& [name, samples] : doc.items()) {
      recorded[name] = samples.is_string()
                           ? std::vector<std::string>{samples.get<std::string>()}
                           : samples.get<std::vector<std::string>>();
    }
    return ReplayProvider(std::move(recorded));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed replay file: ") + e.what());
  }
}

ReplayProvider ReplayProvider::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open replay file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

std::vector<std::string> ReplayProvider::fetch(const CompletionRequest& request) {
  const auto it = recorded_.find(request.task_name);
  if (it == recorded_.end() ||
      it->second.size() < static_cast<std::size_t>(request.sampling.n)) {
    throw CompletionError(CompletionError::Kind::kModel,
                          "no recorded completion for " + request.task_name,
                          "replay-miss");
  }
  return {it->second.begin(), it->second.begin() + request.sampling.n};
}

std::vector<std::string> EchoProvider::fetch(const CompletionRequest& request) {
  return std::vector<std::string>(static_cast<std::size_t>(request.sampling.n), text_);
}

CompletionOutcome complete(CompletionProvider& provider,
                           const CompletionRequest& request, int retry_budget,
                           std::chrono::milliseconds backoff) {
  CompletionOutcome outcome;
  for (;;) {
    ++outcome.attempts;
    try {
      for (const auto& raw : provider.fetch(request)) {
        outcome.completions.push_back(truncate_at_stop(raw, request.stop));
      }
      return outcome;
    } catch (const CompletionError& e) {
      if (!e.retryable() || outcome.attempts > retry_budget) {
        outcome.error = e.what();
        return outcome;
      }
    } catch (const std::exception& e) {
      outcome.error = e.what();
      return outcome;
    }
    if (backoff.count() > 0) std::this_thread::sleep_for(backoff * outcome.attempts);
  }
}

}  // namespace perturbench
