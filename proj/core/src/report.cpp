#include "dagscale/report.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>

#include <nlohmann/json.hpp>

#include "dagscale/errors.hpp"

namespace dagscale {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);  // '\n' endings on every platform
  if (!os) fail(errc::io_error, "cannot open '" + path.string() + "' for writing");
  return os;
}

}  // namespace

void write_ticks_csv(std::ostream& os, const run_result& run) {
  os << "time_s,function,arrival_rps,lrt_ms,rt_ms,millicores\n";
  for (std::size_t i = 0; i < run.time_s.size(); ++i) {
    for (const auto& [name, series] : run.series) {
      os << fixed(run.time_s[i], 3) << ',' << name << ',' << fixed(series.arrival_rps[i], 6)
         << ',' << fixed(series.lrt_ms[i], 6) << ',' << fixed(series.rt_ms[i], 6) << ','
         << series.millicores[i] << '\n';
    }
  }
}

void write_window_series_csv(std::ostream& os, const run_result& run,
                             const std::string& function) {
  auto it = run.series.find(function);
  if (it == run.series.end()) fail(errc::unknown_function, "no series for '" + function + "'");
  const auto& series = it->second;
  const int tpw = run.ticks_per_window;
  const int windows = static_cast<int>(run.time_s.size()) / tpw;

  os << "time_s,arrival_rps,lrt_ms,rt_ms,millicores\n";
  for (int w = 0; w < windows; ++w) {
    double arrival = 0.0, lrt = 0.0, rt = 0.0, cores = 0.0;
    for (int i = w * tpw; i < (w + 1) * tpw; ++i) {
      arrival += series.arrival_rps[i];
      lrt += series.lrt_ms[i];
      rt += series.rt_ms[i];
      cores += series.millicores[i];
    }
    os << fixed(run.time_s[w * tpw], 3) << ',' << fixed(arrival / tpw, 6) << ','
       << fixed(lrt / tpw, 6) << ',' << fixed(rt / tpw, 6) << ',' << fixed(cores / tpw, 3)
       << '\n';
  }
}

void write_summary_csv(std::ostream& os, const replicated_summary& summary,
                       const std::string& mode_label) {
  os << "function,sla_ms,mode,rt_mu,rt_sigma,v_mu,v_sigma,c_mu,c_sigma\n";
  auto line = [&](const std::string& name, const metric_cell& cell) {
    os << name << ',' << (cell.has_sla ? fixed(cell.sla_ms, 3) : std::string()) << ','
       << mode_label << ',' << fixed(cell.rt_mu, 6) << ',' << fixed(cell.rt_sigma, 6) << ','
       << fixed(cell.v_mu, 6) << ',' << fixed(cell.v_sigma, 6) << ',' << fixed(cell.c_mu, 6)
       << ',' << fixed(cell.c_sigma, 6) << '\n';
  };
  for (const auto& [name, cell] : summary.rows) line(name, cell);
  line("overall", summary.overall);
}

void write_summary_table(std::ostream& os, const replicated_summary& summary,
                         const std::string& mode_label) {
  os << "mode: " << mode_label << "  (replications: " << summary.replications << ")\n";
  os << std::left << std::setw(14) << "function" << std::right << std::setw(9) << "SLA"
     << std::setw(11) << "RT mu" << std::setw(10) << "RT sd" << std::setw(9) << "V mu"
     << std::setw(8) << "V sd" << std::setw(11) << "C mu" << std::setw(10) << "C sd" << '\n';
  auto line = [&](const std::string& name, const metric_cell& cell) {
    os << std::left << std::setw(14) << name << std::right << std::setw(9)
       << (cell.has_sla ? fixed(cell.sla_ms, 0) : std::string("-")) << std::setw(11)
       << fixed(cell.rt_mu, 1) << std::setw(10) << fixed(cell.rt_sigma, 1) << std::setw(9)
       << fixed(cell.v_mu, 1) << std::setw(8) << fixed(cell.v_sigma, 1) << std::setw(11)
       << fixed(cell.c_mu, 1) << std::setw(10) << fixed(cell.c_sigma, 1) << '\n';
  };
  for (const auto& [name, cell] : summary.rows) line(name, cell);
  line("overall", summary.overall);
}

namespace {

ordered_json cell_to_json(const metric_cell& cell) {
  ordered_json j;
  if (cell.has_sla) j["sla_ms"] = cell.sla_ms;
  j["rt_mu"] = cell.rt_mu;
  j["rt_sigma"] = cell.rt_sigma;
  j["v_mu"] = cell.v_mu;
  j["v_sigma"] = cell.v_sigma;
  j["c_mu"] = cell.c_mu;
  j["c_sigma"] = cell.c_sigma;
  return j;
}

}  // namespace

std::string render_summary_json(const replicated_summary& summary,
                                const std::string& mode_label) {
  ordered_json j;
  j["mode"] = mode_label;
  j["replications"] = summary.replications;
  for (const auto& [name, cell] : summary.rows) j["functions"][name] = cell_to_json(cell);
  j["overall"] = cell_to_json(summary.overall);
  return j.dump(2) + "\n";
}

void write_comparison_csv(std::ostream& os, const comparison_report& report) {
  os << "function,a_c_mu,b_c_mu,cores_reduction_pct,a_rt_mu,b_rt_mu,rt_delta_pct,"
        "a_v_mu,b_v_mu,violation_delta_pp\n";
  auto line = [&](const std::string& name, const comparison_row& row) {
    os << name << ',' << fixed(row.a_cores_mean, 6) << ',' << fixed(row.b_cores_mean, 6) << ','
       << fixed(row.cores_reduction_pct, 6) << ',' << fixed(row.a_rt_mean, 6) << ','
       << fixed(row.b_rt_mean, 6) << ',' << fixed(row.rt_delta_pct, 6) << ','
       << fixed(row.a_violation_pct, 6) << ',' << fixed(row.b_violation_pct, 6) << ','
       << fixed(row.violation_delta_pp, 6) << '\n';
  };
  for (const auto& [name, row] : report.per_function) line(name, row);
  line("overall", report.overall);
}

void write_comparison_table(std::ostream& os, const comparison_report& report,
                            const replicated_summary& a, const replicated_summary& b,
                            const std::string& label_a, const std::string& label_b) {
  os << "A = " << label_a << ", B = " << label_b << "  (replications: " << report.replications
     << ")\n";
  os << std::left << std::setw(14) << "function" << std::right << std::setw(8) << "SLA"
     << std::setw(10) << "RT(A)" << std::setw(10) << "RT(B)" << std::setw(8) << "V(A)"
     << std::setw(8) << "V(B)" << std::setw(10) << "C(A)" << std::setw(10) << "C(B)"
     << std::setw(10) << "C red%" << '\n';
  auto line = [&](const std::string& name, const comparison_row& row, const metric_cell& cell) {
    os << std::left << std::setw(14) << name << std::right << std::setw(8)
       << (cell.has_sla ? fixed(cell.sla_ms, 0) : std::string("-")) << std::setw(10)
       << fixed(row.a_rt_mean, 1) << std::setw(10) << fixed(row.b_rt_mean, 1) << std::setw(8)
       << fixed(row.a_violation_pct, 1) << std::setw(8) << fixed(row.b_violation_pct, 1)
       << std::setw(10) << fixed(row.a_cores_mean, 1) << std::setw(10)
       << fixed(row.b_cores_mean, 1) << std::setw(10) << fixed(row.cores_reduction_pct, 1)
       << '\n';
  };
  for (const auto& [name, row] : report.per_function) line(name, row, a.rows.at(name));
  line("overall", report.overall, a.overall);
  (void)b;
}

std::string render_comparison_json(const comparison_report& report) {
  ordered_json j;
  j["replications"] = report.replications;
  auto row_json = [](const comparison_row& row) {
    ordered_json r;
    r["cores_reduction_pct"] = row.cores_reduction_pct;
    r["rt_delta_pct"] = row.rt_delta_pct;
    r["violation_delta_pp"] = row.violation_delta_pp;
    r["a"] = {{"c_mu", row.a_cores_mean}, {"rt_mu", row.a_rt_mean}, {"v_mu", row.a_violation_pct}};
    r["b"] = {{"c_mu", row.b_cores_mean}, {"rt_mu", row.b_rt_mean}, {"v_mu", row.b_violation_pct}};
    return r;
  };
  for (const auto& [name, row] : report.per_function) j["functions"][name] = row_json(row);
  j["overall"] = row_json(report.overall);
  return j.dump(2) + "\n";
}

void write_set_point_table(std::ostream& os, const app_graph& graph,
                           const set_point_table& table) {
  os << "alpha: " << fixed(table.alpha, 3) << '\n';
  os << std::left << std::setw(14) << "function" << std::right << std::setw(12) << "sp_ms"
     << std::setw(12) << "lsp_ms" << "  source\n";
  for (const auto& name : graph.topological_order()) {
    const auto& entry = table.at(name);
    os << std::left << std::setw(14) << name << std::right << std::setw(12)
       << fixed(entry.sp_ms, 4) << std::setw(12) << fixed(entry.lsp_ms, 4) << "  "
       << to_string(entry.source) << '\n';
  }
}

std::string render_set_point_json(const app_graph& graph, const set_point_table& table) {
  ordered_json j;
  j["alpha"] = table.alpha;
  for (const auto& name : graph.topological_order()) {
    const auto& entry = table.at(name);
    ordered_json row;
    row["sp_ms"] = entry.sp_ms;
    row["lsp_ms"] = entry.lsp_ms;
    row["source"] = to_string(entry.source);
    j["set_points"][name] = row;
  }
  return j.dump(2) + "\n";
}

void write_run_outputs(const std::filesystem::path& out_dir, const std::vector<run_result>& runs,
                       const replicated_summary& summary, const std::string& mode_label) {
  if (runs.empty()) fail(errc::empty_series, "no runs to write");
  std::filesystem::create_directories(out_dir / "series");

  {
    auto os = open_out(out_dir / "ticks.csv");
    write_ticks_csv(os, runs.front());
  }
  {
    auto os = open_out(out_dir / "summary.csv");
    write_summary_csv(os, summary, mode_label);
  }
  {
    auto os = open_out(out_dir / "summary.txt");
    write_summary_table(os, summary, mode_label);
  }
  for (const auto& [name, series] : runs.front().series) {
    auto os = open_out(out_dir / "series" / (name + ".csv"));
    write_window_series_csv(os, runs.front(), name);
  }
}

}  // namespace dagscale
