#include "advclaim/gateway.hpp"

#include <httplib.h>
#include <openssl/evp.h>

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "advclaim/error.hpp"

namespace advclaim {

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

std::string_view to_string(BackendMode mode) noexcept {
  switch (mode) {
    case BackendMode::Live: return "live";
    case BackendMode::Record: return "record";
    case BackendMode::Replay: return "replay";
  }
  return "live";
}

BackendMode backend_mode_from_string(std::string_view s) {
  if (s == "live") return BackendMode::Live;
  if (s == "record") return BackendMode::Record;
  if (s == "replay") return BackendMode::Replay;
  throw Error(ErrorKind::ConfigError, "unknown backend mode '" + std::string(s) + "'");
}

void validate_messages(std::span<const ChatMessage> messages) {
  for (const auto& m : messages) {
    if (m.role != Role::System && m.content.empty()) {
      throw Error(ErrorKind::InvalidArgument, "user/assistant message content must be non-empty");
    }
  }
}

Json build_chat_request(std::string_view model, double temperature,
                        std::span<const ChatMessage> messages) {
  Json request;
  request["model"] = std::string(model);
  request["temperature"] = temperature;
  Json list = Json::array();
  for (const auto& m : messages) {
    Json entry;
    entry["role"] = std::string(to_string(m.role));
    entry["content"] = m.content;
    list.push_back(std::move(entry));
  }
  request["messages"] = std::move(list);
  return request;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::IoError, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0x0F];
  }
  return out;
}

std::string request_digest(const Json& request) { return sha256_hex(request.dump()); }

// ---------------------------------------------------------------------------
// HTTP transport

HttpChatTransport::HttpChatTransport(std::string endpoint, std::string api_key,
                                     std::chrono::milliseconds timeout)
    : api_key_(std::move(api_key)), timeout_(timeout) {
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::ConfigError, "endpoint '" + endpoint + "' lacks a scheme");
  }
  auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_port_ = endpoint;
    path_ = "/";
  } else {
    scheme_host_port_ = endpoint.substr(0, path_start);
    path_ = endpoint.substr(path_start);
  }
}

std::string HttpChatTransport::complete(const Json& request) {
  httplib::Client client(scheme_host_port_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto res = client.Post(path_, headers, request.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
      throw Error(ErrorKind::Timeout, "request to " + scheme_host_port_ + " timed out");
    }
    throw Error(ErrorKind::BackendUnavailable, scheme_host_port_ + ": " + httplib::to_string(err));
  }
  if (res->status == 408 || res->status == 504) {
    throw Error(ErrorKind::Timeout, "HTTP " + std::to_string(res->status));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorKind::BackendUnavailable, "HTTP " + std::to_string(res->status));
  }
  try {
    auto body = Json::parse(res->body);
    return body.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::BackendUnavailable, std::string("malformed completion body: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Scripted transport

ScriptedTransport::ScriptedTransport(const Json& script) {
  try {
    for (const auto& r : script.value("rules", Json::array())) {
      Rule rule;
      const auto& contains = r.at("contains");
      if (contains.is_string()) {
        rule.contains.push_back(contains.get<std::string>());
      } else {
        rule.contains = contains.get<std::vector<std::string>>();
      }
      rule.replies = r.at("replies").get<std::vector<std::string>>();
      if (rule.replies.empty()) {
        throw Error(ErrorKind::ConfigError, "script rule without replies");
      }
      rules_.push_back(std::move(rule));
    }
    if (auto it = script.find("default"); it != script.end() && it->is_string()) {
      fallback_ = it->get<std::string>();
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed script: ") + e.what());
  }
}

std::shared_ptr<ScriptedTransport> ScriptedTransport::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open script " + path.string());
  try {
    return std::make_shared<ScriptedTransport>(Json::parse(in));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ConfigError, path.string() + ": " + e.what());
  }
}

std::string ScriptedTransport::complete(const Json& request) {
  const auto& messages = request.at("messages");
  std::size_t user_turns = 0;
  std::string last_user;
  for (const auto& m : messages) {
    if (m.at("role") == "user") {
      ++user_turns;
      last_user = m.at("content").get<std::string>();
    }
  }
  const std::size_t turn = user_turns == 0 ? 0 : user_turns - 1;
  for (const auto& rule : rules_) {
    bool all = true;
    for (const auto& needle : rule.contains) {
      if (last_user.find(needle) == std::string::npos) {
        all = false;
        break;
      }
    }
    if (all) return rule.replies[std::min(turn, rule.replies.size() - 1)];
  }
  if (fallback_) return *fallback_;
  throw Error(ErrorKind::BackendUnavailable, "script has no reply for this request");
}

std::shared_ptr<ChatTransport> make_transport(const BackendConfig& config) {
  constexpr std::string_view kScript = "script:";
  if (config.endpoint.rfind(kScript, 0) == 0) {
    return ScriptedTransport::from_file(config.endpoint.substr(kScript.size()));
  }
  if (config.endpoint.empty()) {
    throw Error(ErrorKind::ConfigError, "backend endpoint is empty");
  }
  std::string key;
  if (!config.api_key_env.empty()) {
    if (const char* v = std::getenv(config.api_key_env.c_str())) key = v;
  }
  return std::make_shared<HttpChatTransport>(config.endpoint, std::move(key), config.timeout);
}

// ---------------------------------------------------------------------------
// Cassette

namespace {

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::shared_ptr<Cassette> Cassette::open(const std::filesystem::path& path, bool writable) {
  std::shared_ptr<Cassette> cassette(new Cassette());
  cassette->path_ = path;
  cassette->writable_ = writable;
  std::ifstream in(path);
  if (!in) {
    if (!writable) throw Error(ErrorKind::IoError, "cannot open cassette " + path.string());
    return cassette;
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto entry = Json::parse(line);
      cassette->entries_.emplace(entry.at("digest").get<std::string>(),
                                 entry.at("response").get<std::string>());
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::MalformedRecord,
                  path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cassette;
}

std::shared_ptr<Cassette> Cassette::in_memory() {
  std::shared_ptr<Cassette> cassette(new Cassette());
  cassette->writable_ = true;
  return cassette;
}

std::optional<std::string> Cassette::lookup(const std::string& digest) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(digest);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Cassette::record(const std::string& digest, const Json& request, const std::string& response) {
  std::lock_guard lock(mutex_);
  if (!writable_) throw Error(ErrorKind::IoError, "cassette is read-only");
  if (!entries_.emplace(digest, response).second) return;
  if (path_.empty()) return;
  Json entry;
  entry["digest"] = digest;
  entry["request"] = request;
  entry["response"] = response;
  entry["timestamp"] = utc_timestamp();
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error(ErrorKind::IoError, "cannot append to cassette " + path_.string());
  out << entry.dump() << '\n';
}

std::size_t Cassette::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

// ---------------------------------------------------------------------------
// Gateway

Gateway::Gateway(BackendConfig config, std::shared_ptr<Cassette> cassette,
                 std::shared_ptr<ChatTransport> transport)
    : config_(std::move(config)), cassette_(std::move(cassette)), transport_(std::move(transport)) {
  if (config_.max_attempts < 1) config_.max_attempts = 1;
  if (config_.mode != BackendMode::Live && !cassette_) {
    if (config_.cassette_path.empty()) {
      throw Error(ErrorKind::ConfigError, "record/replay mode requires a cassette path");
    }
    cassette_ = Cassette::open(config_.cassette_path, config_.mode == BackendMode::Record);
  }
  if (config_.mode != BackendMode::Replay && !transport_) {
    transport_ = make_transport(config_);
  }
}

SessionHandle Gateway::open_session(std::string system_prompt) {
  SessionHandle handle;
  handle.session_id = "session-" + std::to_string(++sessions_);
  handle.system_prompt = system_prompt;
  handle.transcript.push_back({Role::System, std::move(system_prompt)});
  return handle;
}

std::string Gateway::send(SessionHandle& session, std::string message) {
  if (message.empty()) throw Error(ErrorKind::InvalidArgument, "message must be non-empty");
  std::vector<ChatMessage> outbound = session.transcript;
  outbound.push_back({Role::User, message});
  std::string reply = dispatch(outbound);
  session.transcript.push_back({Role::User, std::move(message)});
  // An empty assistant turn would break the transcript invariant.
  session.transcript.push_back({Role::Assistant, reply.empty() ? std::string(" ") : reply});
  return reply;
}

std::string Gateway::complete_stateless(std::span<const ChatMessage> messages) {
  if (messages.empty()) throw Error(ErrorKind::EmptyMessages, "message list is empty");
  return dispatch(messages);
}

std::string Gateway::dispatch(std::span<const ChatMessage> messages) {
  validate_messages(messages);
  Json request = build_chat_request(config_.model, config_.temperature, messages);
  ++requests_;
  if (config_.mode == BackendMode::Replay) {
    const std::string digest = request_digest(request);
    if (auto hit = cassette_->lookup(digest)) return *hit;
    throw Error(ErrorKind::CassetteMiss, "no cassette entry for digest " + digest);
  }
  std::string reply = call_with_retries(request);
  if (config_.mode == BackendMode::Record) {
    cassette_->record(request_digest(request), request, reply);
  }
  return reply;
}

std::string Gateway::call_with_retries(const Json& request) {
  for (int attempt = 1;; ++attempt) {
    try {
      return transport_->complete(request);
    } catch (const Error& e) {
      const bool retryable = e.kind() == ErrorKind::BackendUnavailable || e.kind() == ErrorKind::Timeout;
      if (!retryable || attempt >= config_.max_attempts) throw;
      std::this_thread::sleep_for(config_.backoff_base * (1 << (attempt - 1)));
    }
  }
}

}  // namespace advclaim
