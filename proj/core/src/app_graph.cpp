#include "dagscale/app_graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

#include "dagscale/errors.hpp"

namespace dagscale {

const char* to_string(errc code) noexcept {
  switch (code) {
    case errc::duplicate_name: return "DuplicateName";
    case errc::unknown_function: return "UnknownFunction";
    case errc::cycle_detected: return "CycleDetected";
    case errc::missing_sla: return "MissingSla";
    case errc::unreachable_function: return "UnreachableFunction";
    case errc::invalid_value: return "InvalidValue";
    case errc::missing_profile_entry: return "MissingProfileEntry";
    case errc::invalid_alpha: return "InvalidAlpha";
    case errc::non_positive_set_point: return "NonPositiveSetPoint";
    case errc::non_positive_measurement: return "NonPositiveMeasurement";
    case errc::empty_series: return "EmptySeries";
    case errc::grid_mismatch: return "GridMismatch";
    case errc::infeasible_shape: return "InfeasibleShape";
    case errc::bad_config: return "BadConfig";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

bool is_validation_error(errc code) noexcept {
  switch (code) {
    case errc::duplicate_name:
    case errc::unknown_function:
    case errc::cycle_detected:
    case errc::missing_sla:
    case errc::unreachable_function:
    case errc::invalid_value:
    case errc::missing_profile_entry:
    case errc::invalid_alpha:
    case errc::grid_mismatch:
    case errc::infeasible_shape:
    case errc::bad_config:
      return true;
    case errc::non_positive_set_point:
    case errc::non_positive_measurement:
    case errc::empty_series:
    case errc::io_error:
      return false;
  }
  return false;
}

namespace {

// Extracts one cycle from the subgraph induced by `alive` nodes. Called only
// when a cycle is known to exist, so the walk always closes.
std::vector<std::string> find_cycle(const std::vector<std::vector<std::size_t>>& out,
                                    const std::vector<bool>& alive,
                                    const std::vector<function_spec>& functions) {
  const std::size_t n = functions.size();
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on stack, 2 done
  std::vector<std::size_t> stack;

  for (std::size_t start = 0; start < n; ++start) {
    if (!alive[start] || state[start] != 0) continue;
    // Iterative DFS with explicit child cursors.
    std::vector<std::pair<std::size_t, std::size_t>> frames{{start, 0}};
    state[start] = 1;
    stack.push_back(start);
    while (!frames.empty()) {
      auto& [node, cursor] = frames.back();
      bool descended = false;
      for (; cursor < out[node].size(); ++cursor) {
        std::size_t next = out[node][cursor];
        if (!alive[next]) continue;
        if (state[next] == 1) {
          // Close the loop: slice the stack from `next` onward.
          std::vector<std::string> cycle;
          auto it = std::find(stack.begin(), stack.end(), next);
          for (; it != stack.end(); ++it) cycle.push_back(functions[*it].name);
          cycle.push_back(functions[next].name);
          return cycle;
        }
        if (state[next] == 0) {
          state[next] = 1;
          stack.push_back(next);
          frames.emplace_back(next, 0);
          ++cursor;
          descended = true;
          break;
        }
      }
      if (!descended) {
        state[node] = 2;
        stack.pop_back();
        frames.pop_back();
      }
    }
  }
  return {};
}

}  // namespace

app_graph app_graph::build(std::vector<function_spec> functions,
                           std::vector<dependency_edge> edges) {
  app_graph g;

  std::sort(functions.begin(), functions.end(),
            [](const function_spec& a, const function_spec& b) { return a.name < b.name; });
  for (std::size_t i = 0; i < functions.size(); ++i) {
    const auto& f = functions[i];
    if (f.name.empty()) fail(errc::invalid_value, "function with empty name");
    if (f.sla_ms && *f.sla_ms <= 0.0)
      fail(errc::invalid_value, "sla_ms of '" + f.name + "' must be > 0");
    if (!g.index_.emplace(f.name, i).second)
      fail(errc::duplicate_name, "function '" + f.name + "' declared twice");
  }
  g.functions_ = std::move(functions);
  const std::size_t n = g.functions_.size();

  std::sort(edges.begin(), edges.end(), [](const dependency_edge& a, const dependency_edge& b) {
    return std::tie(a.source, a.group_id, a.target, a.multiplier) <
           std::tie(b.source, b.group_id, b.target, b.multiplier);
  });
  for (const auto& e : edges) {
    if (!g.index_.count(e.source))
      fail(errc::unknown_function, "edge source '" + e.source + "' is not a declared function");
    if (!g.index_.count(e.target))
      fail(errc::unknown_function, "edge target '" + e.target + "' is not a declared function");
    if (e.source == e.target)
      fail(errc::cycle_detected, "self-invocation: " + e.source + " -> " + e.target);
    if (e.multiplier < 1)
      fail(errc::invalid_value,
           "edge " + e.source + " -> " + e.target + " has multiplier < 1");
  }
  g.edges_ = std::move(edges);

  // Adjacency by index.
  std::vector<std::vector<std::size_t>> out(n);
  g.incoming_.assign(n, {});
  for (const auto& e : g.edges_) {
    std::size_t s = g.index_.find(e.source)->second;
    std::size_t t = g.index_.find(e.target)->second;
    out[s].push_back(t);
    g.incoming_[t].push_back(e);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = g.functions_[i];
    const bool has_callers = !g.incoming_[i].empty();
    if (!f.entrypoint && !has_callers)
      fail(errc::unreachable_function,
           "'" + f.name + "' is not an entrypoint and nothing invokes it");
    if (f.entrypoint && !has_callers && !f.sla_ms)
      fail(errc::missing_sla,
           "'" + f.name + "' is invoked only by users and must declare an SLA");
  }

  // Kahn's algorithm with a lexicographic tie-break for a unique order.
  std::vector<std::size_t> in_degree(n, 0);
  for (const auto& targets : out)
    for (std::size_t t : targets) ++in_degree[t];

  auto name_greater = [&g](std::size_t a, std::size_t b) {
    return g.functions_[a].name > g.functions_[b].name;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(name_greater)> ready(
      name_greater);
  for (std::size_t i = 0; i < n; ++i)
    if (in_degree[i] == 0) ready.push(i);

  std::vector<bool> alive(n, true);
  g.topo_.reserve(n);
  while (!ready.empty()) {
    std::size_t i = ready.top();
    ready.pop();
    alive[i] = false;
    g.topo_.push_back(g.functions_[i].name);
    for (std::size_t t : out[i])
      if (--in_degree[t] == 0) ready.push(t);
  }
  if (g.topo_.size() != n) {
    auto cycle = find_cycle(out, alive, g.functions_);
    std::ostringstream msg;
    msg << "invocation cycle: ";
    for (std::size_t i = 0; i < cycle.size(); ++i) msg << (i ? " -> " : "") << cycle[i];
    fail(errc::cycle_detected, msg.str());
  }

  // Partition out-edges by (source, group_id). edges_ is already sorted that
  // way, so groups come out in ascending id with members sorted by name.
  g.groups_.assign(n, {});
  for (const auto& e : g.edges_) {
    std::size_t s = g.index_.find(e.source)->second;
    auto& groups = g.groups_[s];
    if (groups.empty() || groups.back().group_id != e.group_id)
      groups.push_back(invocation_group{e.group_id, {}});
    groups.back().members.push_back({e.target, e.multiplier});
  }

  return g;
}

bool app_graph::contains(std::string_view name) const noexcept {
  return index_.find(name) != index_.end();
}

std::size_t app_graph::index_of(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    fail(errc::unknown_function, "no function named '" + std::string(name) + "'");
  return it->second;
}

const function_spec& app_graph::function(std::string_view name) const {
  return functions_[index_of(name)];
}

const std::vector<invocation_group>& app_graph::invocation_groups(std::string_view f) const {
  return groups_[index_of(f)];
}

const std::vector<dependency_edge>& app_graph::incoming_edges(std::string_view f) const {
  return incoming_[index_of(f)];
}

std::vector<std::string> app_graph::entrypoint_names() const {
  std::vector<std::string> names;
  for (const auto& f : functions_)
    if (f.entrypoint) names.push_back(f.name);
  return names;
}

}  // namespace dagscale
