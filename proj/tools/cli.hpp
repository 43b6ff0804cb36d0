#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace chainlab::cli {

enum ExitCode : int {
    kPass = 0,
    kAssertionFailed = 1,
    kUsage = 2,
    kInternal = 3,
};

/// Subcommand names in help order.
const std::vector<std::string>& subcommands();

/// Documented defaults for one subcommand; every accepted key appears here.
nlohmann::json defaults(const std::string& subcommand);

/// defaults < file < flags. Unknown keys and type mismatches throw DomainError.
nlohmann::json resolve_config(const std::string& subcommand, const nlohmann::json& file,
                              const nlohmann::json& flags);

/// Full command line entry point; the report goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chainlab::cli
