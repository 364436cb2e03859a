#pragma once

#include <stdexcept>
#include <string>

namespace eco {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::string msg, int line, int column)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) +
                ": " + std::move(msg)),
          line(line), column(column) {}
    int line;
    int column;
};

class UnknownMethod : public Error {
public:
    explicit UnknownMethod(const std::string& name) : Error("unknown method: " + name) {}
};

class UnknownIdentifier : public Error {
public:
    explicit UnknownIdentifier(const std::string& name) : Error("unknown identifier: " + name) {}
};

class MissingPlaceholder : public Error {
public:
    explicit MissingPlaceholder(const std::string& name)
        : Error("missing placeholder: " + name) {}
};

class GatewayError : public Error {
public:
    using Error::Error;
};

class TimeoutError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

class EndpointError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

class FixtureMiss : public GatewayError {
public:
    explicit FixtureMiss(const std::string& hash)
        : GatewayError("no mock fixture for prompt hash " + hash), hash(hash) {}
    std::string hash;
};

class TooManyExamples : public Error {
public:
    explicit TooManyExamples(size_t n)
        : Error("retrieval prompt takes at most 2 examples, got " + std::to_string(n)) {}
};

class EmptyDatabase : public Error {
public:
    EmptyDatabase() : Error("ROI database is empty") {}
};

class CompileError : public Error {
public:
    explicit CompileError(const std::string& diagnostics)
        : Error("compilation failed:\n" + diagnostics), diagnostics(diagnostics) {}
    std::string diagnostics;
};

class NonpositiveTime : public Error {
public:
    NonpositiveTime() : Error("runtimes must be positive") {}
};

class CorruptRecord : public Error {
public:
    CorruptRecord(int line, const std::string& what)
        : Error("corrupt record at line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace eco
