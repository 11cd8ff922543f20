#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace ikka::cli {

enum ExitCode : int { kSuccess = 0, kPartialFailure = 1, kConfigError = 2 };

// Overrides the default output directory when set.
inline constexpr const char* kOutputDirEnv = "IKKA_OUTPUT_DIR";

struct CliConfig {
    std::string subcommand;
    std::filesystem::path manifest;
    std::filesystem::path input;
    std::filesystem::path output;
    std::optional<std::uint64_t> seed;  // manifest row i gets derive_seed(seed, i)
    std::optional<std::filesystem::path> config;
    int verbosity = 0;
    unsigned jobs = 1;
    // ablation
    int runs = 30;
    // counterexample
    int n_per_class = 100;
};

// Output directory used when none is given: $IKKA_OUTPUT_DIR, else "ikka_out".
std::filesystem::path default_output_dir();

// Each command reports progress and errors on `err` and returns an ExitCode.
int cmd_simulate(const CliConfig& cfg, std::ostream& err);
int cmd_ablation(const CliConfig& cfg, std::ostream& err);
int cmd_analyze(const CliConfig& cfg, std::ostream& err);
int cmd_persistence(const CliConfig& cfg, std::ostream& err);
int cmd_counterexample(const CliConfig& cfg, std::ostream& err);

// Parses arguments and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ikka::cli
