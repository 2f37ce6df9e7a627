#include "defalign/netclient.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <thread>
#include <unordered_map>

#include "defalign/errors.hpp"
#include "defalign/hash.hpp"

namespace defalign {

namespace {

using nlohmann::json;

constexpr char kKeySep = '\x1f';

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string iso_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end && *end == '\0') t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class SystemClock final : public Clock {
 public:
  std::chrono::steady_clock::time_point now() override {
    return std::chrono::steady_clock::now();
  }
  void sleep_until(std::chrono::steady_clock::time_point t) override {
    std::this_thread::sleep_until(t);
  }
};

std::string body_snippet(const std::string& body) {
  if (body.size() <= 160) return body;
  return body.substr(0, 160) + "...";
}

}  // namespace

std::string render_prompt(PromptType type, const std::string& word) {
  if (type == PromptType::Type1) return "What is the meaning of this word? " + word;
  return "Define this word. " + word;
}

Clock& Clock::system() {
  static SystemClock clock;
  return clock;
}

RateLimiter::RateLimiter(int requests_per_minute, Clock* clock)
    : limit_(requests_per_minute),
      window_(std::chrono::seconds(60)),
      clock_(clock ? clock : &Clock::system()) {
  if (limit_ < 1) {
    throw ConfigError("requests_per_minute must be at least 1, got " + std::to_string(limit_));
  }
}

void RateLimiter::acquire() {
  std::unique_lock<std::mutex> lock(mutex_);
  for (;;) {
    const auto now = clock_->now();
    while (!grants_.empty() && grants_.front() <= now - window_) grants_.pop_front();
    if (grants_.size() < static_cast<std::size_t>(limit_)) {
      grants_.push_back(now);
      return;
    }
    const auto wakeup = grants_.front() + window_;
    lock.unlock();
    clock_->sleep_until(wakeup);
    lock.lock();
  }
}

NetClient::NetClient(ClientConfig config, Clock* clock)
    : config_(std::move(config)),
      clock_(clock ? clock : &Clock::system()),
      gate_(config_.requests_per_minute, clock_) {
  if (config_.model_name.empty()) throw ConfigError("model name must not be empty");
  if (config_.max_retries < 0) throw ConfigError("max_retries must be nonnegative");
  if (config_.max_batch < 1) throw ConfigError("max_batch must be at least 1");
  if (config_.backoff_initial_ms < 0 || config_.backoff_max_ms < config_.backoff_initial_ms) {
    throw ConfigError("backoff window is reversed");
  }
  if (config_.timeout_sec < 1) throw ConfigError("timeout must be at least 1 s");
  if (config_.cache_dir.empty()) throw ConfigError("cache directory must be set");
  std::error_code ec;
  std::filesystem::create_directories(config_.cache_dir, ec);
  if (ec) throw IoError(config_.cache_dir.string(), "cannot create cache directory");

  if (!config_.offline) {
    const std::string& url = config_.base_url;
    const std::size_t scheme_end = url.find("://");
    if ((url.rfind("http://", 0) != 0 && url.rfind("https://", 0) != 0) ||
        scheme_end == std::string::npos || scheme_end + 3 >= url.size()) {
      throw ConfigError("base URL must start with http:// or https://, got '" + url + "'");
    }
    const std::size_t path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
      origin_ = url;
      path_prefix_.clear();
    } else {
      origin_ = url.substr(0, path_start);
      path_prefix_ = url.substr(path_start);
      while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
    }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (url.rfind("https://", 0) == 0) {
      throw ConfigError("this build lacks TLS support; use an http:// endpoint");
    }
#endif
  }
}

std::string NetClient::api_key() const {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (!key || *key == '\0') {
    throw ConfigError("API key environment variable " + config_.api_key_env + " is not set");
  }
  return key;
}

std::filesystem::path NetClient::cache_path(const std::string& kind,
                                            const std::string& key) const {
  return config_.cache_dir / (kind + "-" + fnv1a64_hex(key) + ".json");
}

void NetClient::cache_put(const std::filesystem::path& file, const std::string& content) const {
  static std::atomic<unsigned> counter{0};
  const std::filesystem::path tmp =
      file.string() + ".tmp" + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError(tmp.string(), "cannot open cache file for writing");
    out << content;
    out.flush();
    if (!out) throw IoError(tmp.string(), "cache write failure");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw IoError(file.string(), "cache rename failure: " + ec.message());
}

NetClient::HttpResponse NetClient::post_json_once(const std::string& path,
                                                  const std::string& body) {
  // Resolve the key first: a missing key is a config error, not an attempt.
  httplib::Headers headers{{"Authorization", "Bearer " + api_key()}};
  gate_.acquire();
  hits_.fetch_add(1);

  httplib::Client client(origin_);
  client.set_connection_timeout(config_.timeout_sec, 0);
  client.set_read_timeout(config_.timeout_sec, 0);
  client.set_write_timeout(config_.timeout_sec, 0);

  const auto res = client.Post(path_prefix_ + path, headers, body, "application/json");
  HttpResponse out;
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.status = res->status;
  out.body = res->body;
  return out;
}

std::string NetClient::post_with_retries(const std::string& path, const std::string& body) {
  if (config_.offline) {
    throw ConfigError("offline mode: network request to '" + path + "' refused");
  }
  int backoff_ms = config_.backoff_initial_ms;
  for (int attempt = 1;; ++attempt) {
    const HttpResponse res = post_json_once(path, body);
    if (res.status == 200) return res.body;

    const bool retryable = res.status == 0 || res.status == 429 || res.status >= 500;
    if (!retryable) {
      throw TransportError("endpoint " + path + " returned HTTP " + std::to_string(res.status) +
                               ": " + body_snippet(res.body),
                           res.status, attempt);
    }
    if (attempt > config_.max_retries) {
      const std::string detail =
          res.status == 0 ? "no response (" + res.error + ")" : "HTTP " + std::to_string(res.status);
      throw TransportError("endpoint " + path + " failed after " + std::to_string(attempt) +
                               " attempts: " + detail,
                           res.status, attempt);
    }
    clock_->sleep_for(std::chrono::milliseconds(backoff_ms));
    backoff_ms = std::min(config_.backoff_max_ms, backoff_ms > 0 ? backoff_ms * 2 : 1);
  }
}

DefinitionRecord NetClient::fetch_definition(const std::string& word) {
  if (word.empty()) throw ValidationError("fetch_definition: empty word");

  const int prompt_no = static_cast<int>(config_.prompt_type);
  SourceId source;
  source.name = config_.model_name + "-" + std::to_string(prompt_no);
  source.kind = SourceKind::GeneratedModel;
  source.prompt_type = prompt_no;

  auto make_record = [&](const std::string& text) {
    DefinitionRecord rec;
    rec.word = lowercase(word);
    rec.source = source;
    rec.text = text;
    rec.norm_text = normalize_definition(text);
    rec.char_len = rec.norm_text.size();
    rec.token_len = token_count(rec.norm_text);
    return rec;
  };

  const std::string key =
      config_.model_name + kKeySep + std::to_string(prompt_no) + kKeySep + word;
  const std::filesystem::path file = cache_path("def", key);
  if (std::filesystem::exists(file)) {
    std::ifstream in(file);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ParseError(file.string() + ": corrupt cache entry: " + e.what());
    }
    if (!doc.contains("text") || !doc["text"].is_string()) {
      throw ParseError(file.string() + ": cache entry lacks a 'text' field");
    }
    return make_record(doc["text"].get<std::string>());
  }
  if (config_.offline) {
    throw ConfigError("offline mode: no cached definition for '" + word + "' (" + source.name +
                      ")");
  }

  const std::string prompt = render_prompt(config_.prompt_type, word);
  const json request{{"model", config_.model_name},
                     {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})}};
  const std::string response = post_with_retries("/chat/completions", request.dump());

  json doc;
  try {
    doc = json::parse(response);
  } catch (const json::exception& e) {
    throw ParseError("chat endpoint returned invalid JSON: " + std::string(e.what()) + ": " +
                     body_snippet(response));
  }
  std::string text;
  try {
    text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw ParseError("chat endpoint response lacks choices[0].message.content: " +
                     body_snippet(response));
  }

  const json entry{{"kind", "definition"},   {"model", config_.model_name},
                   {"prompt_type", prompt_no}, {"word", word},
                   {"request", request},       {"response", doc},
                   {"text", text},             {"timestamp", iso_timestamp()}};
  cache_put(file, entry.dump(2) + "\n");
  return make_record(text);
}

std::vector<Eigen::VectorXd> NetClient::embed_texts(const EmbedRequest& req) {
  for (const std::string& text : req.texts) {
    if (text.empty()) throw ValidationError("embed_texts: empty string in batch");
  }

  // Unique texts in first-appearance order; repeats reuse one vector.
  std::vector<std::string> unique;
  std::unordered_map<std::string, std::size_t> position;
  for (const std::string& text : req.texts) {
    if (position.emplace(text, unique.size()).second) unique.push_back(text);
  }

  std::vector<Eigen::VectorXd> vectors(unique.size());
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    const std::filesystem::path file =
        cache_path("emb", config_.model_name + kKeySep + unique[i]);
    if (!std::filesystem::exists(file)) {
      missing.push_back(i);
      continue;
    }
    std::ifstream in(file);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ParseError(file.string() + ": corrupt cache entry: " + e.what());
    }
    if (!doc.contains("vector") || !doc["vector"].is_array()) {
      throw ParseError(file.string() + ": cache entry lacks a 'vector' array");
    }
    const auto& arr = doc["vector"];
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t k = 0; k < arr.size(); ++k) {
      v(static_cast<Eigen::Index>(k)) = arr[k].get<double>();
    }
    vectors[i] = std::move(v);
  }

  if (!missing.empty() && config_.offline) {
    throw ConfigError("offline mode: " + std::to_string(missing.size()) +
                      " texts lack cached embeddings (model " + config_.model_name + ")");
  }

  const std::size_t batch = static_cast<std::size_t>(config_.max_batch);
  for (std::size_t start = 0; start < missing.size(); start += batch) {
    const std::size_t end = std::min(missing.size(), start + batch);
    json input = json::array();
    for (std::size_t k = start; k < end; ++k) input.push_back(unique[missing[k]]);
    const json request{{"model", config_.model_name}, {"input", input}};
    const std::string response = post_with_retries("/embeddings", request.dump());

    json doc;
    try {
      doc = json::parse(response);
    } catch (const json::exception& e) {
      throw ParseError("embeddings endpoint returned invalid JSON: " + std::string(e.what()) +
                       ": " + body_snippet(response));
    }
    if (!doc.contains("data") || !doc["data"].is_array() ||
        doc["data"].size() != end - start) {
      throw ParseError("embeddings endpoint returned " +
                       std::to_string(doc.contains("data") ? doc["data"].size() : 0) +
                       " vectors for a batch of " + std::to_string(end - start));
    }
    for (std::size_t k = 0; k < end - start; ++k) {
      const auto& item = doc["data"][k];
      std::size_t index = k;
      if (item.contains("index") && item["index"].is_number_unsigned()) {
        index = item["index"].get<std::size_t>();
      }
      if (index >= end - start || !item.contains("embedding") ||
          !item["embedding"].is_array() || item["embedding"].empty()) {
        throw ParseError("embeddings endpoint returned a malformed data item");
      }
      const auto& arr = item["embedding"];
      Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
      for (std::size_t c = 0; c < arr.size(); ++c) {
        v(static_cast<Eigen::Index>(c)) = arr[c].get<double>();
      }
      const std::size_t slot = missing[start + index];
      const json entry{{"kind", "embedding"},
                       {"model", config_.model_name},
                       {"text", unique[slot]},
                       {"vector", arr},
                       {"timestamp", iso_timestamp()}};
      cache_put(cache_path("emb", config_.model_name + kKeySep + unique[slot]),
                entry.dump(2) + "\n");
      vectors[slot] = std::move(v);
    }
  }

  Eigen::Index dim = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() == 0) {
      throw ParseError("embeddings endpoint returned no vector for a batch item");
    }
    if (dim == 0) {
      dim = vectors[i].size();
    } else if (vectors[i].size() != dim) {
      throw ParseError("embedding dimension disagreement: " + std::to_string(dim) + " vs " +
                       std::to_string(vectors[i].size()) + " (model " + config_.model_name +
                       ")");
    }
  }

  std::vector<Eigen::VectorXd> out;
  out.reserve(req.texts.size());
  for (const std::string& text : req.texts) out.push_back(vectors[position.at(text)]);
  return out;
}

}  // namespace defalign
