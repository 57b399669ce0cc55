#include "dagscale/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dagscale/errors.hpp"

namespace dagscale {

namespace {

struct moments {
  double mean = 0.0;
  double std_dev = 0.0;  // population formula
};

moments compute_moments(const std::vector<double>& values) {
  moments m;
  if (values.empty()) return m;
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double sq = 0.0;
  for (double v : values) sq += (v - m.mean) * (v - m.mean);
  m.std_dev = std::sqrt(sq / values.size());
  return m;
}

}  // namespace

summary_map summarize(const run_result& run, const std::map<std::string, double>& sla_ms,
                      int skip_warmup_windows) {
  if (run.time_s.empty()) fail(errc::empty_series, "run has no ticks");
  const int tpw = run.ticks_per_window;
  const int total_windows = static_cast<int>(run.time_s.size()) / tpw;
  const int first = std::clamp(skip_warmup_windows, 0, total_windows);
  if (first >= total_windows) fail(errc::empty_series, "warm-up skip leaves no windows");

  summary_map out;
  for (const auto& [name, series] : run.series) {
    std::vector<double> rt_w, lrt_w, cores_w;
    rt_w.reserve(total_windows - first);
    for (int w = first; w < total_windows; ++w) {
      double rt_sum = 0.0, lrt_sum = 0.0, cores_sum = 0.0;
      for (int i = w * tpw; i < (w + 1) * tpw; ++i) {
        rt_sum += series.rt_ms[i];
        lrt_sum += series.lrt_ms[i];
        cores_sum += series.millicores[i];
      }
      rt_w.push_back(rt_sum / tpw);
      lrt_w.push_back(lrt_sum / tpw);
      cores_w.push_back(cores_sum / tpw);
    }

    function_summary s;
    const auto rt_m = compute_moments(rt_w);
    const auto cores_m = compute_moments(cores_w);
    s.rt_mean_ms = rt_m.mean;
    s.rt_std_ms = rt_m.std_dev;
    s.lrt_mean_ms = compute_moments(lrt_w).mean;
    s.cores_mean = cores_m.mean;
    s.cores_std = cores_m.std_dev;
    s.windows = static_cast<int>(rt_w.size());

    auto sla_it = sla_ms.find(name);
    if (sla_it != sla_ms.end()) {
      s.has_sla = true;
      s.sla_ms = sla_it->second;
      const auto violations =
          std::count_if(rt_w.begin(), rt_w.end(), [&](double rt) { return rt > sla_it->second; });
      s.violation_pct = 100.0 * static_cast<double>(violations) / rt_w.size();
    }
    out[name] = s;
  }
  return out;
}

replicated_summary aggregate(const std::vector<run_result>& runs,
                             const std::map<std::string, double>& sla_ms,
                             int skip_warmup_windows) {
  if (runs.empty()) fail(errc::empty_series, "no runs to aggregate");

  std::vector<summary_map> per_run;
  per_run.reserve(runs.size());
  for (const auto& run : runs) per_run.push_back(summarize(run, sla_ms, skip_warmup_windows));

  replicated_summary out;
  out.replications = static_cast<int>(runs.size());

  std::vector<double> overall_rt, overall_v, overall_c;
  for (const auto& [name, first] : per_run.front()) {
    std::vector<double> rt, v, c;
    for (const auto& s : per_run) {
      const auto& cell = s.at(name);
      rt.push_back(cell.rt_mean_ms);
      v.push_back(cell.violation_pct);
      c.push_back(cell.cores_mean);
    }
    metric_cell cell;
    const auto rt_m = compute_moments(rt), v_m = compute_moments(v), c_m = compute_moments(c);
    cell.rt_mu = rt_m.mean;
    cell.rt_sigma = rt_m.std_dev;
    cell.v_mu = v_m.mean;
    cell.v_sigma = v_m.std_dev;
    cell.c_mu = c_m.mean;
    cell.c_sigma = c_m.std_dev;
    cell.has_sla = first.has_sla;
    cell.sla_ms = first.sla_ms;
    out.rows[name] = cell;
  }

  // Overall row: per replication, average the per-function metrics, then
  // mu/sigma across replications.
  for (std::size_t k = 0; k < per_run.size(); ++k) {
    double rt = 0.0, v = 0.0, c = 0.0;
    for (const auto& [name, cell] : per_run[k]) {
      rt += cell.rt_mean_ms;
      v += cell.violation_pct;
      c += cell.cores_mean;
    }
    const double n = static_cast<double>(per_run[k].size());
    overall_rt.push_back(rt / n);
    overall_v.push_back(v / n);
    overall_c.push_back(c / n);
  }
  const auto rt_m = compute_moments(overall_rt);
  const auto v_m = compute_moments(overall_v);
  const auto c_m = compute_moments(overall_c);
  out.overall.rt_mu = rt_m.mean;
  out.overall.rt_sigma = rt_m.std_dev;
  out.overall.v_mu = v_m.mean;
  out.overall.v_sigma = v_m.std_dev;
  out.overall.c_mu = c_m.mean;
  out.overall.c_sigma = c_m.std_dev;
  return out;
}

namespace {

double reduction_pct(double a, double b) { return b == 0.0 ? 0.0 : (b - a) / b * 100.0; }
double delta_pct(double a, double b) { return b == 0.0 ? 0.0 : (a - b) / b * 100.0; }

}  // namespace

comparison_report compare(const std::vector<run_result>& a, const std::vector<run_result>& b,
                          const std::map<std::string, double>& sla_ms, int skip_warmup_windows) {
  if (a.empty() || b.empty()) fail(errc::empty_series, "empty run set");
  if (a.size() != b.size())
    fail(errc::grid_mismatch, "replication counts differ: " + std::to_string(a.size()) + " vs " +
                                  std::to_string(b.size()));

  std::vector<summary_map> sa, sb;
  for (const auto& run : a) sa.push_back(summarize(run, sla_ms, skip_warmup_windows));
  for (const auto& run : b) sb.push_back(summarize(run, sla_ms, skip_warmup_windows));

  for (const auto& [name, cell] : sa.front())
    if (!sb.front().count(name))
      fail(errc::grid_mismatch, "function sets differ: '" + name + "' missing in reference runs");
  for (const auto& [name, cell] : sb.front())
    if (!sa.front().count(name))
      fail(errc::grid_mismatch, "function sets differ: '" + name + "' missing in candidate runs");

  comparison_report report;
  report.replications = static_cast<int>(a.size());
  const std::size_t reps = a.size();

  for (const auto& [name, cell] : sa.front()) {
    comparison_row row;
    for (std::size_t k = 0; k < reps; ++k) {
      const auto& ca = sa[k].at(name);
      const auto& cb = sb[k].at(name);
      row.cores_reduction_pct += reduction_pct(ca.cores_mean, cb.cores_mean);
      row.rt_delta_pct += delta_pct(ca.rt_mean_ms, cb.rt_mean_ms);
      row.violation_delta_pp += ca.violation_pct - cb.violation_pct;
      row.a_cores_mean += ca.cores_mean;
      row.b_cores_mean += cb.cores_mean;
      row.a_rt_mean += ca.rt_mean_ms;
      row.b_rt_mean += cb.rt_mean_ms;
      row.a_violation_pct += ca.violation_pct;
      row.b_violation_pct += cb.violation_pct;
    }
    const double n = static_cast<double>(reps);
    row.cores_reduction_pct /= n;
    row.rt_delta_pct /= n;
    row.violation_delta_pp /= n;
    row.a_cores_mean /= n;
    row.b_cores_mean /= n;
    row.a_rt_mean /= n;
    row.b_rt_mean /= n;
    row.a_violation_pct /= n;
    row.b_violation_pct /= n;
    report.per_function[name] = row;
  }

  // Overall: average the per-function means within each replication pair,
  // then delta, then mean over pairs.
  comparison_row overall;
  for (std::size_t k = 0; k < reps; ++k) {
    double a_c = 0.0, b_c = 0.0, a_rt = 0.0, b_rt = 0.0, a_v = 0.0, b_v = 0.0;
    for (const auto& [name, cell] : sa[k]) {
      a_c += cell.cores_mean;
      a_rt += cell.rt_mean_ms;
      a_v += cell.violation_pct;
    }
    for (const auto& [name, cell] : sb[k]) {
      b_c += cell.cores_mean;
      b_rt += cell.rt_mean_ms;
      b_v += cell.violation_pct;
    }
    const double na = static_cast<double>(sa[k].size());
    const double nb = static_cast<double>(sb[k].size());
    overall.cores_reduction_pct += reduction_pct(a_c / na, b_c / nb);
    overall.rt_delta_pct += delta_pct(a_rt / na, b_rt / nb);
    overall.violation_delta_pp += a_v / na - b_v / nb;
    overall.a_cores_mean += a_c / na;
    overall.b_cores_mean += b_c / nb;
    overall.a_rt_mean += a_rt / na;
    overall.b_rt_mean += b_rt / nb;
    overall.a_violation_pct += a_v / na;
    overall.b_violation_pct += b_v / nb;
  }
  const double n = static_cast<double>(reps);
  overall.cores_reduction_pct /= n;
  overall.rt_delta_pct /= n;
  overall.violation_delta_pp /= n;
  overall.a_cores_mean /= n;
  overall.b_cores_mean /= n;
  overall.a_rt_mean /= n;
  overall.b_rt_mean /= n;
  overall.a_violation_pct /= n;
  overall.b_violation_pct /= n;
  report.overall = overall;
  return report;
}

}  // namespace dagscale
