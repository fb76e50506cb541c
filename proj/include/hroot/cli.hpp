#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "hroot/linalg.hpp"

namespace hroot {

enum class Command { Decide, Construct, Verify, Canonicalize, Oracle };
enum class Format { Json, Text };

std::optional<Command> parse_command(std::string_view name);
std::optional<Format> parse_format(std::string_view name);

struct JobSpec {
    Command command = Command::Decide;
    /// Required for decide and construct; verify falls back to "m" in the input.
    std::optional<int> m;
    /// Input path; "-" reads standard input. The oracle runs a seeded sweep
    /// when the path is empty.
    std::string input;
    /// Residual tolerance for construct and verify.
    double tol = 1e-8;
    /// Rank and clustering tolerance for canonicalization and eigenvalue classes.
    double tol_canon = kDefaultTol;
    Format format = Format::Json;
    std::uint64_t seed = 0;
    int cases = 200;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;

/// Runs one job, writing the report to `out` and diagnostics to `err`.
/// Returns 0 on success, 2 for a negative verdict (no root, failed
/// verification, oracle says no), 1 on error.
int run(const JobSpec& job, std::ostream& out, std::ostream& err);

}  // namespace hroot
