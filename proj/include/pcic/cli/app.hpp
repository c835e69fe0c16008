#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pcic::cli {

enum ExitCode : int { exit_ok = 0, exit_input_error = 2, exit_run_quality = 3 };

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "PCIC_OUTPUT_DIR";

/// Runs the command line `args` (args[0] is the program name) and returns
/// the process exit code. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// JSON report of PCIC, WAIC and IS-CV_wq for in-memory matrices.
std::string compute_report_json(const std::string& log_pred_csv, const std::string& score_csv,
                                const std::string* weights_csv);

}  // namespace pcic::cli
