#include "dagscale/set_points.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "dagscale/errors.hpp"

namespace dagscale {

const char* to_string(sp_source source) noexcept {
  switch (source) {
    case sp_source::user_sla: return "user-SLA";
    case sp_source::propagated: return "propagated";
    case sp_source::parallel_max_raised: return "parallel-max-raised";
    case sp_source::multi_parent_min: return "multi-parent-min";
  }
  return "?";
}

const set_point_entry& set_point_table::at(std::string_view f) const {
  auto it = rows.find(std::string(f));
  if (it == rows.end())
    fail(errc::unknown_function, "no set point for '" + std::string(f) + "'");
  return it->second;
}

double entry_set_point(double sla_ms, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    fail(errc::invalid_alpha, "alpha must be in (0, 1], got " + std::to_string(alpha));
  if (sla_ms <= 0.0)
    fail(errc::invalid_value, "sla must be > 0, got " + std::to_string(sla_ms));
  return alpha * sla_ms;
}

namespace {

struct candidate {
  double sp_ms = 0.0;
  bool from_user = false;
  bool raised = false;  // parallel-group raise changed the raw value
};

}  // namespace

set_point_table propagate(const app_graph& graph, const nominal_profile& profile,
                          const std::map<std::string, double>& entry_slas_ms, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    fail(errc::invalid_alpha, "alpha must be in (0, 1], got " + std::to_string(alpha));

  std::map<std::string, std::vector<candidate>> candidates;

  for (const auto& [name, sla] : entry_slas_ms) {
    const auto& f = graph.function(name);
    if (!f.entrypoint)
      fail(errc::invalid_value, "'" + name + "' carries a user SLA but is not an entrypoint");
    candidates[name].push_back({entry_set_point(sla, alpha), /*from_user=*/true, false});
  }
  for (const auto& f : graph.functions()) {
    if (f.entrypoint && graph.incoming_edges(f.name).empty() && !entry_slas_ms.count(f.name))
      fail(errc::missing_sla, "user-only entrypoint '" + f.name + "' has no SLA");
  }

  set_point_table table;
  table.alpha = alpha;

  for (const auto& name : graph.topological_order()) {
    auto it = candidates.find(name);
    if (it == candidates.end() || it->second.empty())
      fail(errc::missing_sla, "'" + name + "' received no set-point candidate");
    const auto& cands = it->second;

    const auto best = std::min_element(
        cands.begin(), cands.end(),
        [](const candidate& a, const candidate& b) { return a.sp_ms < b.sp_ms; });
    // A user SLA that ties the winning value keeps the user-SLA provenance.
    bool user_wins = false;
    for (const auto& c : cands)
      if (c.from_user && c.sp_ms <= best->sp_ms) user_wins = true;

    sp_source source;
    if (user_wins)
      source = sp_source::user_sla;
    else if (cands.size() > 1)
      source = sp_source::multi_parent_min;
    else
      source = best->raised ? sp_source::parallel_max_raised : sp_source::propagated;

    const double sp = best->sp_ms;
    const double nrt = profile.nrt(name);
    const double lsp = sp * profile.nlrt(name) / nrt;
    if (!(sp > 0.0) || !(lsp > 0.0) || !std::isfinite(sp) || !std::isfinite(lsp))
      fail(errc::non_positive_set_point,
           "propagation produced a non-positive set point for '" + name + "'");
    table.rows[name] = {sp, lsp, source};

    // Hand candidates to the children. Sequential (singleton) groups get the
    // plain per-invocation share. Within a parallel group the budget is
    // pinned to the group's slowest total contribution and every member is
    // raised to it, so faster siblings are slowed down rather than
    // over-provisioned.
    for (const auto& group : graph.invocation_groups(name)) {
      if (!group.parallel()) {
        const auto& m = group.members.front();
        const double raw = (sp / m.multiplier) * (profile.nrt(m.child) / nrt);
        candidates[m.child].push_back({raw, false, false});
        continue;
      }
      double slowest = 0.0;
      for (const auto& m : group.members)
        slowest = std::max(slowest, m.multiplier * profile.nrt(m.child));
      const double group_budget = sp * slowest / nrt;
      for (const auto& m : group.members) {
        const double raw = (sp / m.multiplier) * (profile.nrt(m.child) / nrt);
        const double value = group_budget / m.multiplier;
        candidates[m.child].push_back({value, false, value > raw * (1.0 + 1e-12)});
      }
    }
  }
  return table;
}

double composed_target(const app_graph& graph, const set_point_table& table,
                       std::string_view f) {
  std::map<std::string, double, std::less<>> memo;
  std::function<double(std::string_view)> eval = [&](std::string_view fn) -> double {
    if (auto it = memo.find(fn); it != memo.end()) return it->second;
    double total = table.at(fn).lsp_ms;
    for (const auto& group : graph.invocation_groups(fn)) {
      double slowest = 0.0;
      for (const auto& m : group.members)
        slowest = std::max(slowest, m.multiplier * eval(m.child));
      total += slowest;
    }
    memo.emplace(std::string(fn), total);
    return total;
  };
  return eval(f);
}

}  // namespace dagscale
