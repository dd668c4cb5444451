#pragma once

#include <stdexcept>
#include <string>

namespace clc {

// Exit-code contract used by the CLI: 0 success, 2 missing input,
// 3 config error, 4 numeric divergence.
enum class ExitCode : int {
    ok = 0,
    failure = 1,
    missing_input = 2,
    config_error = 3,
    numeric_divergence = 4,
};

struct Error : std::runtime_error {
    explicit Error(const std::string& msg, ExitCode code = ExitCode::failure)
        : std::runtime_error(msg), exit_code(code) {}
    ExitCode exit_code;
};

struct ShapeError : Error {
    explicit ShapeError(const std::string& msg) : Error("shape error: " + msg) {}
};

struct ParamError : Error {
    explicit ParamError(const std::string& msg)
        : Error("parameter error: " + msg, ExitCode::config_error) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg)
        : Error("config error: " + msg, ExitCode::config_error) {}
};

struct MissingInputError : Error {
    explicit MissingInputError(const std::string& msg)
        : Error("missing input: " + msg, ExitCode::missing_input) {}
};

struct NumericDivergenceError : Error {
    explicit NumericDivergenceError(const std::string& msg)
        : Error("numeric divergence: " + msg, ExitCode::numeric_divergence) {}
};

struct MetricError : Error {
    explicit MetricError(const std::string& msg) : Error("metric error: " + msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error("io error: " + msg) {}
};

}  // namespace clc
