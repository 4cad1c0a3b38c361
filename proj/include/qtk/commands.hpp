#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qtk::cli {

/// Exit statuses of the driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;  // bad input data, parse or I/O failure
inline constexpr int kExitUsageError = 2;   // bad command line

/// Output directory used when --out is absent.
inline constexpr const char* kOutputDirEnv = "QTK_OUTPUT_DIR";

/// Runs one subcommand. `args` excludes the program name, e.g.
/// {"epr", "--angle-a", "0", "--angle-b", "0"}. Diagnostics go to `err`,
/// tables and summaries to `out`; artifacts are written to the output
/// directory (--out, else $QTK_OUTPUT_DIR, else the working directory).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a, used to fingerprint inputs in run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

/// printf %.{digits}g
std::string format_real(double value, int digits);

}  // namespace qtk::cli
