#pragma once

#include <stdexcept>
#include <string>

#include "weilgap/io.hpp"

namespace weilgap::cli {

/// Bad parameter value; exit status 2.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Missing or unreadable input file; exit status 3.
struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Outcome {
    json result;
    bool pass = true;
    /// Verbatim stdout payload (coefficient lines) replacing the document.
    std::string raw;
};

const std::vector<std::string>& command_names();

/// Dispatches on cfg.command. Throws UsageError or FileError on bad input.
Outcome run(const ExperimentConfig& cfg);

/// Human-readable view of a result document.
std::string render(const json& doc);

} // namespace weilgap::cli
