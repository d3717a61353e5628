#pragma once

#include "qlink/config.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace qlink::cli {

// Command cores.  Each writes one deterministic CSV dataset; the CLI wraps
// them with file handling and a stdout summary.
void write_table2_csv(const RunConfig& config, std::ostream& out);
void write_figure_csv(const std::string& name, const RunConfig& config, std::ostream& out);
void write_optimize_csv(const RunConfig& config, std::ostream& out);
void write_budget_csv(const RunConfig& config, std::ostream& out);
McResult write_simulate_csv(const RunConfig& config, std::ostream& out);

const std::vector<std::string>& figure_names();

// Runs the command line given the arguments after argv[0].  Returns the
// process exit code: 0 success, 1 validation/usage error, 2 numerical
// failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qlink::cli
