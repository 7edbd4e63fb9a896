#ifndef QGRAPH_CLI_HPP
#define QGRAPH_CLI_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qgraph/json_io.hpp"

namespace qgraph::cli {

inline constexpr std::string_view kToolVersion = "qgraph 0.1.0";

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kNumericalError = 2;
inline constexpr int kPartialSweep = 3;

/// Entry point behind the qgraph binary. args excludes the program name.
/// Results go to the --output file ("-" for stdout), messages to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reconstructs the argument list (command, flags) that produced a result
/// from its embedded manifest. The --output flag is not part of it.
std::vector<std::string> manifest_arguments(const Json& manifest);

/// Extracts the manifest from a result file (JSON, or CSV with a leading
/// "# manifest: " line).
Json read_manifest(const std::string& result_text);

}  // namespace qgraph::cli

#endif  // QGRAPH_CLI_HPP
