#include "kgnav/llm_gateway.hpp"

#include <httplib.h>

#include <cstdlib>
#include <fstream>
#include <semaphore>
#include <thread>

namespace kgnav {

const char* to_string(Role role) {
    switch (role) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
        case Role::Tool: return "tool";
    }
    return "user";
}

std::optional<Role> role_from_string(std::string_view text) {
    if (text == "system") return Role::System;
    if (text == "user") return Role::User;
    if (text == "assistant") return Role::Assistant;
    if (text == "tool") return Role::Tool;
    return std::nullopt;
}

ChatMessage ChatMessage::system(std::string text) {
    ChatMessage m;
    m.role = Role::System;
    m.content = std::move(text);
    return m;
}

ChatMessage ChatMessage::user(std::string text) {
    ChatMessage m;
    m.role = Role::User;
    m.content = std::move(text);
    return m;
}

ChatMessage ChatMessage::assistant(std::optional<std::string> text, std::vector<ToolCall> calls) {
    ChatMessage m;
    m.role = Role::Assistant;
    m.content = std::move(text);
    m.tool_calls = std::move(calls);
    return m;
}

ChatMessage ChatMessage::tool(std::string call_id, std::string body) {
    ChatMessage m;
    m.role = Role::Tool;
    m.tool_call_id = std::move(call_id);
    m.content = std::move(body);
    return m;
}

nlohmann::json message_to_json(const ChatMessage& message) {
    nlohmann::json doc;
    doc["role"] = to_string(message.role);
    if (message.content) {
        doc["content"] = *message.content;
    }
    if (!message.tool_calls.empty()) {
        auto& calls = doc["tool_calls"] = nlohmann::json::array();
        for (const auto& call : message.tool_calls) {
            calls.push_back({{"id", call.id},
                             {"type", "function"},
                             {"function", {{"name", call.name}, {"arguments", call.arguments}}}});
        }
    }
    if (message.tool_call_id) {
        doc["tool_call_id"] = *message.tool_call_id;
    }
    if (message.reasoning) {
        doc["reasoning_content"] = *message.reasoning;
    }
    return doc;
}

ChatMessage message_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw ResponseShapeError("message is not a JSON object");
    }
    ChatMessage message;
    if (doc.contains("role")) {
        auto role = role_from_string(doc["role"].get<std::string>());
        if (!role) {
            throw ResponseShapeError("unknown message role '" + doc["role"].get<std::string>() + "'");
        }
        message.role = *role;
    } else {
        message.role = Role::Assistant;
    }
    if (doc.contains("content") && !doc["content"].is_null()) {
        if (!doc["content"].is_string()) {
            throw ResponseShapeError("message content is not a string");
        }
        message.content = doc["content"].get<std::string>();
    }
    if (doc.contains("reasoning_content") && doc["reasoning_content"].is_string()) {
        message.reasoning = doc["reasoning_content"].get<std::string>();
    }
    if (doc.contains("tool_call_id") && doc["tool_call_id"].is_string()) {
        message.tool_call_id = doc["tool_call_id"].get<std::string>();
    }
    if (doc.contains("tool_calls")) {
        if (!doc["tool_calls"].is_array()) {
            throw ResponseShapeError("tool_calls is not an array");
        }
        for (const auto& entry : doc["tool_calls"]) {
            if (!entry.is_object() || !entry.contains("function") ||
                !entry["function"].is_object() || !entry["function"].contains("name")) {
                throw ResponseShapeError("tool call entry lacks function.name");
            }
            ToolCall call;
            call.id = entry.value("id", "");
            call.name = entry["function"]["name"].get<std::string>();
            // Arguments pass through unparsed; object-valued arguments (from
            // hand-written scripts) are normalized to compact text.
            const auto& args = entry["function"].contains("arguments")
                                   ? entry["function"]["arguments"]
                                   : nlohmann::json("{}");
            call.arguments = args.is_string() ? args.get<std::string>() : args.dump();
            message.tool_calls.push_back(std::move(call));
        }
    }
    return message;
}

struct HttpChatClient::Gate {
    explicit Gate(int slots) : semaphore(slots) {}
    std::counting_semaphore<64> semaphore;
};

HttpChatClient::HttpChatClient(GatewayConfig cfg)
    : cfg_(std::move(cfg)), gate_(std::make_unique<Gate>(std::max(1, cfg_.max_in_flight))) {
    if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key != nullptr) {
        api_key_ = key;
    }
}

HttpChatClient::~HttpChatClient() = default;

nlohmann::json HttpChatClient::build_request(const std::vector<ChatMessage>& messages,
                                             const nlohmann::json& tools) const {
    nlohmann::json body;
    body["model"] = cfg_.model;
    auto& list = body["messages"] = nlohmann::json::array();
    for (const auto& message : messages) {
        auto doc = message_to_json(message);
        doc.erase("reasoning_content");  // never feed reasoning back
        if (!doc.contains("content")) doc["content"] = nullptr;
        list.push_back(std::move(doc));
    }
    if (!tools.is_null() && !tools.empty()) {
        body["tools"] = tools;
    }
    const auto& p = cfg_.params;
    if (p.temperature) body["temperature"] = *p.temperature;
    if (p.top_p) body["top_p"] = *p.top_p;
    if (p.top_k) body["top_k"] = *p.top_k;
    if (p.min_p) body["min_p"] = *p.min_p;
    if (p.max_output_tokens) body["max_tokens"] = *p.max_output_tokens;
    return body;
}

namespace {

std::pair<std::string, std::string> split_base_url(const std::string& url) {
    auto scheme_end = url.find("://");
    std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = url.find('/', host_start);
    if (path_start == std::string::npos) {
        return {url, ""};
    }
    std::string path = url.substr(path_start);
    while (!path.empty() && path.back() == '/') path.pop_back();
    return {url.substr(0, path_start), path};
}

}  // namespace

ChatMessage HttpChatClient::complete(const std::vector<ChatMessage>& messages,
                                     const nlohmann::json& tools) {
    if (messages.empty() || messages.front().role != Role::System) {
        throw Error("conversation must be non-empty and start with a system message");
    }

    const std::string payload = build_request(messages, tools).dump();
    auto [base, prefix] = split_base_url(cfg_.base_url);
    const std::string path = prefix + "/chat/completions";

    gate_->semaphore.acquire();
    struct Release {
        Gate* gate;
        ~Release() { gate->semaphore.release(); }
    } release{gate_.get()};

    std::string last_error = "no request attempted";
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(200) * (1 << (attempt - 1)));
        }

        httplib::Client client(base);
        client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout));
        client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout));
        httplib::Headers headers;
        if (!api_key_.empty()) {
            headers.emplace("Authorization", "Bearer " + api_key_);
        }

        auto res = client.Post(path, headers, payload, "application/json");
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "transient HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw ProviderError(res->status, "provider returned HTTP " +
                                                 std::to_string(res->status) + ": " + res->body);
        }

        nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
        if (doc.is_discarded() || !doc.contains("choices") || !doc["choices"].is_array() ||
            doc["choices"].empty() || !doc["choices"][0].contains("message")) {
            throw ResponseShapeError("provider response lacks choices[0].message");
        }
        ChatMessage message = message_from_json(doc["choices"][0]["message"]);
        message.role = Role::Assistant;
        return message;
    }
    throw TransportError("chat completion failed after " + std::to_string(cfg_.max_retries + 1) +
                         " attempts (" + last_error + ")");
}

ScriptedChatClient ScriptedChatClient::from_json(const nlohmann::json& doc) {
    if (!doc.is_array()) {
        throw Error("script must be a JSON array of assistant turns");
    }
    std::vector<ChatMessage> turns;
    std::size_t turn_index = 0;
    for (const auto& entry : doc) {
        ChatMessage turn = message_from_json(entry);
        turn.role = Role::Assistant;
        std::size_t call_index = 0;
        for (auto& call : turn.tool_calls) {
            if (call.id.empty()) {
                call.id = "call_" + std::to_string(turn_index) + "_" + std::to_string(call_index);
            }
            ++call_index;
        }
        turns.push_back(std::move(turn));
        ++turn_index;
    }
    return ScriptedChatClient(std::move(turns));
}

ScriptedChatClient ScriptedChatClient::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open script file '" + path + "'");
    }
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) {
        throw Error("script file '" + path + "' is not valid JSON");
    }
    return from_json(doc);
}

ChatMessage ScriptedChatClient::complete(const std::vector<ChatMessage>&, const nlohmann::json&) {
    if (cursor_ >= turns_.size()) {
        throw ScriptExhausted("script exhausted after " + std::to_string(turns_.size()) +
                              " turns; the loop asked for more");
    }
    return turns_[cursor_++];
}

}  // namespace kgnav
