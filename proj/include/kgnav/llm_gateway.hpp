#pragma once
// Chat-completions-style tool-calling protocol: message types, a live HTTP
// client, and a deterministic scripted client for offline runs.

#include "kgnav/core_types.hpp"

#include <json.hpp>

#include <chrono>
#include <memory>

namespace kgnav {

class TransportError final : public Error {
public:
    using Error::Error;
};

class ProviderError final : public Error {
public:
    ProviderError(int status, const std::string& message) : Error(message), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

class ResponseShapeError final : public Error {
public:
    using Error::Error;
};

class ScriptExhausted final : public Error {
public:
    using Error::Error;
};

enum class Role { System, User, Assistant, Tool };

const char* to_string(Role role);
std::optional<Role> role_from_string(std::string_view text);

// One structured function invocation emitted by the model. Arguments stay as
// the raw text the model produced; parsing them (and answering malformed
// ones) is the dispatcher's job.
struct ToolCall {
    std::string id;
    std::string name;
    std::string arguments;

    bool operator==(const ToolCall&) const = default;
};

struct ChatMessage {
    Role role = Role::User;
    std::optional<std::string> content;
    std::vector<ToolCall> tool_calls;          // assistant only
    std::optional<std::string> tool_call_id;   // tool only
    std::optional<std::string> reasoning;      // reasoning-channel text, when the provider returns it

    static ChatMessage system(std::string text);
    static ChatMessage user(std::string text);
    static ChatMessage assistant(std::optional<std::string> text,
                                 std::vector<ToolCall> calls = {});
    static ChatMessage tool(std::string call_id, std::string body);

    bool operator==(const ChatMessage&) const = default;
};

// Provider-wire serialization (also used for transcript persistence).
nlohmann::json message_to_json(const ChatMessage& message);
ChatMessage message_from_json(const nlohmann::json& doc);

struct ModelParams {
    std::optional<double> temperature;
    std::optional<double> top_p;
    std::optional<int> top_k;
    std::optional<double> min_p;
    std::optional<int> max_output_tokens;

    // Recommended sampling settings for the supported open models. Live
    // proprietary endpoints run on provider defaults (all fields absent).
    static ModelParams open_model_defaults() {
        return ModelParams{0.6, 0.95, 20, 0.0, std::nullopt};
    }
};

class ChatClient {
public:
    virtual ~ChatClient() = default;

    // Returns the next assistant turn for the given conversation.
    virtual ChatMessage complete(const std::vector<ChatMessage>& messages,
                                 const nlohmann::json& tools) = 0;
};

struct GatewayConfig {
    std::string base_url;                        // e.g. "http://localhost:8000/v1"
    std::string model;
    std::string api_key_env = "KGNAV_API_KEY";   // environment variable holding the key
    ModelParams params;
    std::chrono::milliseconds timeout{120000};
    int max_retries = 3;
    int max_in_flight = 4;
};

// Live chat-completions client. Safe for concurrent calls; the number of
// requests in flight is bounded by cfg.max_in_flight.
class HttpChatClient final : public ChatClient {
public:
    explicit HttpChatClient(GatewayConfig cfg);
    ~HttpChatClient() override;

    ChatMessage complete(const std::vector<ChatMessage>& messages,
                         const nlohmann::json& tools) override;

    // The exact request body complete() would send (exposed for tests).
    nlohmann::json build_request(const std::vector<ChatMessage>& messages,
                                 const nlohmann::json& tools) const;

private:
    GatewayConfig cfg_;
    std::string api_key_;
    struct Gate;
    std::unique_ptr<Gate> gate_;
};

// Replays a fixed list of canned assistant turns, one per complete() call,
// ignoring the conversation it is shown. One conversation per instance.
class ScriptedChatClient final : public ChatClient {
public:
    explicit ScriptedChatClient(std::vector<ChatMessage> turns) : turns_(std::move(turns)) {}

    // Script file format: a JSON array of assistant turns
    //   [{"content": "...", "tool_calls": [{"id": "...", "name": "search",
    //     "arguments": "{...}" | {...}}], "reasoning": "..."}, ...]
    // Object-valued arguments are normalized to their compact serialization;
    // missing ids are assigned deterministically.
    static ScriptedChatClient from_json(const nlohmann::json& doc);
    static ScriptedChatClient from_file(const std::string& path);

    ChatMessage complete(const std::vector<ChatMessage>& messages,
                         const nlohmann::json& tools) override;

    std::size_t cursor() const { return cursor_; }
    std::size_t size() const { return turns_.size(); }

private:
    std::vector<ChatMessage> turns_;
    std::size_t cursor_ = 0;
};

}  // namespace kgnav
