#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "advclaim/json.hpp"

namespace advclaim {

enum class Role { System, User, Assistant };
std::string_view to_string(Role role) noexcept;

struct ChatMessage {
  Role role = Role::User;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

/// Throws InvalidArgument when a User/Assistant message has empty content.
void validate_messages(std::span<const ChatMessage> messages);

enum class BackendMode { Live, Record, Replay };
std::string_view to_string(BackendMode mode) noexcept;
BackendMode backend_mode_from_string(std::string_view s);

struct BackendConfig {
  /// `http(s)://host[:port]/path` for a chat-completion endpoint, or
  /// `script:<path>` for the offline scripted backend.
  std::string endpoint;
  std::string model = "gpt-4o";
  std::chrono::milliseconds timeout{60000};
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{250};
  double temperature = 0.0;
  BackendMode mode = BackendMode::Live;
  std::filesystem::path cassette_path;
  std::string api_key_env = "OPENAI_API_KEY";
};

/// Canonical request body: {"model", "temperature", "messages": [{"role", "content"}]}.
Json build_chat_request(std::string_view model, double temperature,
                        std::span<const ChatMessage> messages);

/// Lowercase hex SHA-256 of the compact dump of `request`.
std::string request_digest(const Json& request);
std::string sha256_hex(std::string_view data);

/// Something that turns a chat request into assistant text.
/// Implementations must be safe to call concurrently.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  /// Throws Error{BackendUnavailable | Timeout}.
  virtual std::string complete(const Json& request) = 0;
};

class HttpChatTransport final : public ChatTransport {
 public:
  HttpChatTransport(std::string endpoint, std::string api_key, std::chrono::milliseconds timeout);
  std::string complete(const Json& request) override;

 private:
  std::string scheme_host_port_;
  std::string path_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
};

/// Offline backend driven by a JSON script:
///   {"rules": [{"contains": ["..."], "replies": ["turn 0", "turn 1", ...]}],
///    "default": "..."}
/// The first rule whose substrings all occur in the last User message wins.
/// The reply index is the number of User messages minus one, clamped to the
/// last reply, so a session walks through the list turn by turn.
class ScriptedTransport final : public ChatTransport {
 public:
  explicit ScriptedTransport(const Json& script);
  static std::shared_ptr<ScriptedTransport> from_file(const std::filesystem::path& path);
  std::string complete(const Json& request) override;

 private:
  struct Rule {
    std::vector<std::string> contains;
    std::vector<std::string> replies;
  };
  std::vector<Rule> rules_;
  std::optional<std::string> fallback_;
};

std::shared_ptr<ChatTransport> make_transport(const BackendConfig& config);

/// Content-keyed store of request/response pairs, persisted as JSON Lines of
/// {digest, request, response, timestamp}. Lookups and writes share one
/// mutex; the file is only ever appended to.
class Cassette {
 public:
  /// Loads `path` if it exists. `writable` allows record() to append to it.
  static std::shared_ptr<Cassette> open(const std::filesystem::path& path, bool writable);
  static std::shared_ptr<Cassette> in_memory();

  [[nodiscard]] std::optional<std::string> lookup(const std::string& digest) const;
  /// No-op when the digest is already present.
  void record(const std::string& digest, const Json& request, const std::string& response);
  [[nodiscard]] std::size_t size() const;

 private:
  Cassette() = default;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::string> entries_;
  std::filesystem::path path_;
  bool writable_ = false;
};

struct SessionHandle {
  std::string session_id;
  std::string system_prompt;
  std::vector<ChatMessage> transcript;
};

/// Access point for one backend role (generator, victim, judge).
///
/// Sessions carry their full transcript in every request; stateless calls
/// send exactly the messages given. In Replay mode the transport is never
/// constructed and a missing digest raises CassetteMiss.
class Gateway {
 public:
  explicit Gateway(BackendConfig config, std::shared_ptr<Cassette> cassette = nullptr,
                   std::shared_ptr<ChatTransport> transport = nullptr);

  SessionHandle open_session(std::string system_prompt);
  std::string send(SessionHandle& session, std::string message);
  std::string complete_stateless(std::span<const ChatMessage> messages);

  [[nodiscard]] std::uint64_t request_count() const noexcept { return requests_.load(); }
  [[nodiscard]] const BackendConfig& config() const noexcept { return config_; }

 private:
  std::string dispatch(std::span<const ChatMessage> messages);
  std::string call_with_retries(const Json& request);

  BackendConfig config_;
  std::shared_ptr<Cassette> cassette_;
  std::shared_ptr<ChatTransport> transport_;
  std::atomic<std::uint64_t> requests_{0};
  std::atomic<std::uint64_t> sessions_{0};
};

}  // namespace advclaim
