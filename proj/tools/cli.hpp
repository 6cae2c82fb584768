#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace interprisk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

// Everything a command needs; written back into manifest.json so that
// `--config manifest.json` repeats the run.
struct RunContext {
  std::string command;
  nlohmann::json config;  // resolved: defaults, file contents and flags
  std::filesystem::path out_dir;
  std::ostream* log = nullptr;
};

// Parses argv, runs the subcommand and maps errors onto exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Subcommands; each writes its files under ctx.out_dir plus manifest.json.
void cmd_synth(RunContext& ctx);
void cmd_train(RunContext& ctx);
void cmd_cv(RunContext& ctx);
void cmd_sparsify(RunContext& ctx);
void cmd_smooth(RunContext& ctx);
void cmd_fairness(RunContext& ctx);
void cmd_explain(RunContext& ctx);
void cmd_sweep(RunContext& ctx);

}  // namespace interprisk::cli
