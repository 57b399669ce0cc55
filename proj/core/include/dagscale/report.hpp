#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "dagscale/metrics.hpp"
#include "dagscale/set_points.hpp"
#include "dagscale/sim.hpp"

namespace dagscale {

// All writers print with fixed formats so identical inputs produce
// byte-identical files.

// time_s,function,arrival_rps,lrt_ms,rt_ms,millicores
void write_ticks_csv(std::ostream& os, const run_result& run);

// Window-mean series for one function, for plotting allocation curves.
void write_window_series_csv(std::ostream& os, const run_result& run,
                             const std::string& function);

// function,sla_ms,mode,rt_mu,rt_sigma,v_mu,v_sigma,c_mu,c_sigma
void write_summary_csv(std::ostream& os, const replicated_summary& summary,
                       const std::string& mode_label);

void write_summary_table(std::ostream& os, const replicated_summary& summary,
                         const std::string& mode_label);
std::string render_summary_json(const replicated_summary& summary, const std::string& mode_label);

void write_comparison_csv(std::ostream& os, const comparison_report& report);
// Side-by-side table: per function RT / V / C for both modes.
void write_comparison_table(std::ostream& os, const comparison_report& report,
                            const replicated_summary& a, const replicated_summary& b,
                            const std::string& label_a, const std::string& label_b);
std::string render_comparison_json(const comparison_report& report);

// Set-point report with provenance (user-SLA, propagated, ...).
void write_set_point_table(std::ostream& os, const app_graph& graph,
                           const set_point_table& table);
std::string render_set_point_json(const app_graph& graph, const set_point_table& table);

// Writes the standard output files of one run set into out_dir:
//   ticks.csv (replication 0), summary.csv, summary.txt, series/<fn>.csv
void write_run_outputs(const std::filesystem::path& out_dir, const std::vector<run_result>& runs,
                       const replicated_summary& summary, const std::string& mode_label);

}  // namespace dagscale
