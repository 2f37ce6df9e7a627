#pragma once

#include <Eigen/Core>

#include <atomic>
#include <chrono>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "defalign/ingest.hpp"

namespace defalign {

enum class PromptType { Type1 = 1, Type2 = 2 };

// Type1: "What is the meaning of this word? {word}"
// Type2: "Define this word. {word}"
std::string render_prompt(PromptType type, const std::string& word);

struct ClientConfig {
  std::string base_url;  // e.g. "https://api.openai.com/v1"
  std::string model_name;
  std::string api_key_env = "DEFALIGN_API_KEY";
  PromptType prompt_type = PromptType::Type1;
  int requests_per_minute = 60;
  int max_retries = 3;
  std::filesystem::path cache_dir;
  int max_batch = 64;  // embedding texts per wire request
  int backoff_initial_ms = 500;
  int backoff_max_ms = 30000;
  int timeout_sec = 30;
  bool offline = false;  // refuse any network call; cache hits still served
};

// Injectable time source so rate limiting and backoff are testable under a
// simulated clock.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::chrono::steady_clock::time_point now() = 0;
  virtual void sleep_until(std::chrono::steady_clock::time_point t) = 0;
  void sleep_for(std::chrono::milliseconds d) { sleep_until(now() + d); }
  static Clock& system();
};

// Sliding-window limiter: grants never exceed requests_per_minute in any
// 60 s window; callers block until a slot frees.
class RateLimiter {
 public:
  explicit RateLimiter(int requests_per_minute, Clock* clock = nullptr);
  void acquire();

 private:
  int limit_;
  std::chrono::steady_clock::duration window_;
  Clock* clock_;
  std::mutex mutex_;
  std::deque<std::chrono::steady_clock::time_point> grants_;
};

struct EmbedRequest {
  std::vector<std::string> texts;  // no empty strings
  std::string space_name;
};

// Chat-completions + embeddings client with a file cache under cache_dir
// (one JSON file per key, written temp-then-rename) and exponential backoff
// on 429/5xx up to max_retries.
class NetClient {
 public:
  explicit NetClient(ClientConfig config, Clock* clock = nullptr);

  // Cache key (model_name, prompt_type, word). Refusals are stored verbatim;
  // they are data.
  DefinitionRecord fetch_definition(const std::string& word);

  // One vector per text, order preserved, uniform dimension; vectors cached
  // by content. Texts are deduplicated before batching.
  std::vector<Eigen::VectorXd> embed_texts(const EmbedRequest& req);

  const ClientConfig& config() const { return config_; }
  std::size_t network_hits() const { return hits_.load(); }

 private:
  struct HttpResponse {
    int status = 0;  // 0 = no response (connect/read failure)
    std::string body;
    std::string error;
  };

  HttpResponse post_json_once(const std::string& path, const std::string& body);
  std::string post_with_retries(const std::string& path, const std::string& body);
  std::string api_key() const;
  std::filesystem::path cache_path(const std::string& kind, const std::string& key) const;
  void cache_put(const std::filesystem::path& file, const std::string& content) const;

  ClientConfig config_;
  Clock* clock_;
  RateLimiter gate_;
  std::atomic<std::size_t> hits_{0};
  std::string origin_;       // scheme://host[:port]
  std::string path_prefix_;  // remainder of base_url, no trailing slash
};

}  // namespace defalign
