#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace polokit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

/// Runs one `polokit <subcommand> ...` invocation. `args` excludes the
/// program name. Diagnostics go to `err`; file outputs named "-" go to stdout.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Unit values and finite-difference gradient checks for the losses.
/// Prints one line per check; returns true when all pass.
bool run_loss_check(std::ostream& out, std::uint64_t seed, std::size_t instances);

}  // namespace polokit::cli
