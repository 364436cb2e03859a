#pragma once

#include <filesystem>
#include <string>

namespace eco {

struct GatewayConfig {
    std::string base_url;               // live endpoint, e.g. http://host:port
    std::string model = "default";
    std::string auth_env = "ECO_API_KEY";  // env var holding the token
    std::filesystem::path mock_dir;     // non-empty selects offline mock mode
    int max_input_tokens = 4096;
    int max_output_tokens = 8192;
    double temperature = 0.7;
    int retries = 2;
    double timeout_seconds = 60.0;
};

struct GenerationRequest {
    std::string model_name;
    std::string prompt;
    double temperature = 0.7;
    int max_output_tokens = 8192;
};

struct GenerationResponse {
    std::string text;
    std::string finish_reason;  // "stop" | "length" | "error"
    double latency_seconds = 0.0;
};

/// FNV-1a 64-bit hash of the text, as 16 lowercase hex digits.
std::string prompt_hash(const std::string& text);

/// Rough token count: maximal alphanumeric runs plus one per other
/// non-whitespace character. Documented estimator, not a tokenizer.
int estimate_tokens(const std::string& text);

/// Longest prefix whose estimate fits the budget; whole text when it fits.
std::string truncate_to_budget(const std::string& text, int max_input_tokens);

/// Text-completion client. Mock mode answers from fixture files named by
/// prompt hash, making responses a pure function of the prompt.
class Gateway {
public:
    explicit Gateway(GatewayConfig config);

    const GatewayConfig& config() const { return config_; }
    bool mock_mode() const { return !config_.mock_dir.empty(); }

    /// Convenience: wraps the prompt with configured defaults.
    GenerationResponse complete(const std::string& prompt);
    GenerationResponse complete(const GenerationRequest& req);

private:
    GenerationResponse complete_mock(const std::string& prompt);
    GenerationResponse complete_live(const GenerationRequest& req);

    GatewayConfig config_;
};

}  // namespace eco
