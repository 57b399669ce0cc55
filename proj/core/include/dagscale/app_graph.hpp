#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dagscale {

struct function_spec {
  std::string name;
  std::optional<double> sla_ms;  // upper bound on total response time, if declared
  bool entrypoint = false;       // can receive direct user requests
};

// One annotated invocation: `source` calls `target` `multiplier` times.
// Edges of the same source sharing a group_id form a parallel invocation
// group; a group of size one is a sequential call. group_id is only
// meaningful among siblings (edges of the same source).
struct dependency_edge {
  std::string source;
  std::string target;
  int group_id = 0;
  int multiplier = 1;
};

struct invocation_group {
  struct member {
    std::string child;
    int multiplier = 1;
  };
  int group_id = 0;
  std::vector<member> members;  // sorted by (child, multiplier)

  bool parallel() const noexcept { return members.size() > 1; }
};

// Validated, immutable dependency DAG. Construction via build(); after that
// the graph is read-only and safe to share across threads.
class app_graph {
 public:
  app_graph() = default;  // the empty application

  // Validates everything: unique names, known endpoints, no self-loops or
  // cycles, multipliers >= 1, SLAs > 0, user-only entrypoints carry an SLA,
  // and every non-entrypoint is reachable (has at least one incoming edge).
  static app_graph build(std::vector<function_spec> functions,
                         std::vector<dependency_edge> edges);

  std::size_t size() const noexcept { return functions_.size(); }
  bool contains(std::string_view name) const noexcept;

  // Sorted lexicographically by name.
  const std::vector<function_spec>& functions() const noexcept { return functions_; }
  // Sorted by (source, group_id, target).
  const std::vector<dependency_edge>& edges() const noexcept { return edges_; }

  const function_spec& function(std::string_view name) const;

  // Every edge source precedes its target; ties broken by lexicographic
  // name, so the order is unique and runs are reproducible.
  const std::vector<std::string>& topological_order() const noexcept { return topo_; }

  // Out-edges of f partitioned by group_id, ascending group_id.
  const std::vector<invocation_group>& invocation_groups(std::string_view f) const;

  // All edges whose target is f, in the graph's deterministic edge order.
  const std::vector<dependency_edge>& incoming_edges(std::string_view f) const;

  std::vector<std::string> entrypoint_names() const;
  bool is_leaf(std::string_view f) const { return invocation_groups(f).empty(); }

 private:
  std::size_t index_of(std::string_view name) const;  // throws unknown_function

  std::vector<function_spec> functions_;
  std::vector<dependency_edge> edges_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::vector<invocation_group>> groups_;
  std::vector<std::vector<dependency_edge>> incoming_;
  std::vector<std::string> topo_;
};

}  // namespace dagscale
