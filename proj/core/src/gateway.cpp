#include "eco/gateway.hpp"

#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "eco/errors.hpp"

namespace eco {

using nlohmann::json;

std::string prompt_hash(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xF];
        h >>= 4;
    }
    return out;
}

int estimate_tokens(const std::string& text) {
    int n = 0;
    size_t i = 0;
    while (i < text.size()) {
        unsigned char c = text[i];
        if (std::isspace(c)) {
            ++i;
        } else if (std::isalnum(c) || c == '_') {
            ++n;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) ||
                    text[i] == '_'))
                ++i;
        } else {
            ++n;
            ++i;
        }
    }
    return n;
}

std::string truncate_to_budget(const std::string& text, int max_input_tokens) {
    if (max_input_tokens <= 0) throw ConfigError("token budget must be positive");
    int n = 0;
    size_t i = 0;
    while (i < text.size()) {
        unsigned char c = text[i];
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        size_t start = i;
        if (std::isalnum(c) || c == '_') {
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) ||
                    text[i] == '_'))
                ++i;
        } else {
            ++i;
        }
        if (++n > max_input_tokens) return text.substr(0, start);
    }
    return text;
}

Gateway::Gateway(GatewayConfig config) : config_(std::move(config)) {
    if (config_.mock_dir.empty() && config_.base_url.empty())
        throw ConfigError("gateway needs either a base URL or a mock directory");
}

GenerationResponse Gateway::complete(const std::string& prompt) {
    GenerationRequest req;
    req.model_name = config_.model;
    req.prompt = prompt;
    req.temperature = config_.temperature;
    req.max_output_tokens = config_.max_output_tokens;
    return complete(req);
}

GenerationResponse Gateway::complete(const GenerationRequest& req) {
    if (req.prompt.empty()) throw GatewayError("prompt is empty");
    GenerationRequest r = req;
    r.prompt = truncate_to_budget(req.prompt, config_.max_input_tokens);
    if (mock_mode()) return complete_mock(r.prompt);
    return complete_live(r);
}

GenerationResponse Gateway::complete_mock(const std::string& prompt) {
    auto t0 = std::chrono::steady_clock::now();
    std::string hash = prompt_hash(prompt);
    std::filesystem::path file = config_.mock_dir / (hash + ".txt");
    std::ifstream in(file, std::ios::binary);
    if (!in) throw FixtureMiss(hash);
    std::ostringstream buf;
    buf << in.rdbuf();
    GenerationResponse resp;
    resp.text = buf.str();
    resp.finish_reason = "stop";
    resp.latency_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return resp;
}

GenerationResponse Gateway::complete_live(const GenerationRequest& req) {
    json body = {{"model", req.model_name},
                 {"prompt", req.prompt},
                 {"temperature", req.temperature},
                 {"max_tokens", req.max_output_tokens}};
    std::string payload = body.dump();

    httplib::Headers headers;
    if (const char* token = std::getenv(config_.auth_env.c_str()))
        headers.emplace("Authorization", std::string("Bearer ") + token);

    auto t0 = std::chrono::steady_clock::now();
    std::string last_error;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(100 * (1 << attempt)));
        httplib::Client client(config_.base_url);
        client.set_read_timeout(static_cast<int>(config_.timeout_seconds), 0);
        client.set_connection_timeout(static_cast<int>(config_.timeout_seconds),
                                      0);
        auto res = client.Post("/v1/completions", headers, payload,
                               "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            if (res.error() == httplib::Error::ConnectionTimeout ||
                res.error() == httplib::Error::Read)
                continue;  // transient
            continue;
        }
        if (res->status >= 500) {
            last_error = "server status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw EndpointError("endpoint returned status " +
                                std::to_string(res->status) + ": " + res->body);
        try {
            json j = json::parse(res->body);
            GenerationResponse resp;
            if (j.contains("choices") && !j["choices"].empty()) {
                resp.text = j["choices"][0].value("text", "");
                resp.finish_reason = j["choices"][0].value("finish_reason", "stop");
            } else {
                resp.text = j.value("text", "");
                resp.finish_reason = j.value("finish_reason", "stop");
            }
            resp.latency_seconds = std::chrono::duration<double>(
                                       std::chrono::steady_clock::now() - t0)
                                       .count();
            return resp;
        } catch (const json::exception& e) {
            throw EndpointError("malformed endpoint response: " +
                                std::string(e.what()));
        }
    }
    if (last_error.find("imeout") != std::string::npos)
        throw TimeoutError("endpoint timed out: " + last_error);
    throw EndpointError("endpoint unreachable after retries: " + last_error);
}

}  // namespace eco
