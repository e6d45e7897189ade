#include "slin/depgraph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <sstream>

namespace slin {

Wdg::Wdg(SpacePtr space, std::size_t node_count, std::map<EdgeKey, Polynomial> weights)
    : space_(std::move(space)), n_(node_count), succ_(node_count) {
  for (auto& [key, w] : weights) {
    if (key.first >= n_ || key.second >= n_) throw PreconditionError("edge endpoint out of range");
    if (!same_space(w.space(), space_)) throw SpaceMismatchError("edge weight over a foreign space");
    if (w.is_zero()) continue;
    succ_[key.first].push_back(key.second);
    weights_.emplace(key, std::move(w));
  }
}

const Polynomial& Wdg::weight(std::size_t i, std::size_t j) const {
  const auto it = weights_.find({i, j});
  if (it == weights_.end()) {
    throw PreconditionError("no edge v" + std::to_string(i + 1) + " -> v" + std::to_string(j + 1));
  }
  return it->second;
}

std::string Wdg::node_label(std::size_t i) const {
  if (space_ && space_->size() == n_) return space_->name(i);
  return "v" + std::to_string(i + 1);
}

Wdg build_wdg(const PolySystem& sys) {
  const std::size_t n = sys.dimension();
  std::map<Wdg::EdgeKey, Polynomial> weights;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!sys.rhs[j].uses_variable(i)) continue;
      weights.emplace(Wdg::EdgeKey{i, j}, differentiate(sys.rhs[j], i));
    }
  }
  return Wdg(sys.vars, n, std::move(weights));
}

// ---------------------------------------------------------------------------

namespace {

/// Iterative Tarjan; returns the component id of every node (ids in
/// reverse topological order of completion).
std::vector<std::size_t> tarjan(const Wdg& g, std::size_t& count) {
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  const std::size_t n = g.node_count();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (node, next successor position)
  std::size_t next_index = 0;
  count = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      const auto& succ = g.successors(v);
      if (pos < succ.size()) {
        const std::size_t w = succ[pos++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t finished = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
      if (low[finished] == index[finished]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != finished);
        ++count;
      }
    }
  }
  return comp;
}

}  // namespace

SccDecomposition scc_decomposition(const Wdg& g) {
  const std::size_t n = g.node_count();
  std::size_t count = 0;
  const std::vector<std::size_t> raw = tarjan(g, count);

  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t v = 0; v < n; ++v) members[raw[v]].push_back(v);

  // Kahn's algorithm on the condensation, smallest member index first.
  std::vector<std::vector<std::size_t>> out(count);
  std::vector<std::size_t> indegree(count, 0);
  for (const auto& [key, w] : g.weights()) {
    const std::size_t a = raw[key.first], b = raw[key.second];
    if (a != b) out[a].push_back(b);
  }
  for (auto& o : out) {
    std::sort(o.begin(), o.end());
    o.erase(std::unique(o.begin(), o.end()), o.end());
    for (std::size_t b : o) ++indegree[b];
  }
  using Item = std::pair<std::size_t, std::size_t>;  // (min member, raw id)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> ready;
  for (std::size_t c = 0; c < count; ++c) {
    if (indegree[c] == 0) ready.emplace(members[c].front(), c);
  }
  SccDecomposition d;
  d.component_of.assign(n, 0);
  while (!ready.empty()) {
    const std::size_t c = ready.top().second;
    ready.pop();
    for (std::size_t v : members[c]) d.component_of[v] = d.components.size();
    d.components.push_back(members[c]);
    for (std::size_t b : out[c]) {
      if (--indegree[b] == 0) ready.emplace(members[b].front(), b);
    }
  }
  if (d.components.size() != count) throw InternalError("condensation of the WDG has a cycle");
  return d;
}

SkeletonGraph build_skeleton(const Wdg& g, const SccDecomposition& d) {
  SkeletonGraph s;
  s.node_count = d.size();
  s.projection = d.component_of;
  for (const auto& [key, w] : g.weights()) {
    const std::size_t a = d.component_of[key.first], b = d.component_of[key.second];
    if (a != b) s.edges.emplace_back(a, b);
  }
  std::sort(s.edges.begin(), s.edges.end());
  s.edges.erase(std::unique(s.edges.begin(), s.edges.end()), s.edges.end());

  // Components are in topological order, so every edge must point forward.
  s.depth.assign(s.node_count, 0);
  for (const auto& [a, b] : s.edges) {
    if (a >= b) throw InternalError("skeleton edge u" + std::to_string(a + 1) + " -> u" +
                                    std::to_string(b + 1) + " breaks topological order");
  }
  // Edges sorted by source, and sources visited in topological order.
  for (const auto& [a, b] : s.edges) s.depth[b] = std::max(s.depth[b], s.depth[a] + 1);

  const std::size_t max_depth =
      s.node_count == 0 ? 0 : *std::max_element(s.depth.begin(), s.depth.end());
  if (s.node_count > 0) s.layers.resize(max_depth + 1);
  for (std::size_t u = 0; u < s.node_count; ++u) s.layers[s.depth[u]].push_back(u);
  return s;
}

Polynomial walk_weight(const Wdg& g, std::span<const std::size_t> walk) {
  Polynomial product = Polynomial::constant(g.space(), Rational(1));
  for (std::size_t k = 0; k + 1 < walk.size(); ++k) {
    product = product * g.weight(walk[k], walk[k + 1]);
  }
  if (walk.size() == 1 && walk[0] >= g.node_count()) throw PreconditionError("walk node out of range");
  return product;
}

ConditionReport check_condition(const Wdg& g, const SccDecomposition& d) {
  ConditionReport report;
  for (const auto& [key, w] : g.weights()) {
    const std::size_t c = d.component_of[key.first];
    if (c != d.component_of[key.second] || w.is_constant()) continue;
    report.witnesses.push_back({key.first, key.second, c, w.str()});
  }
  report.pass = report.witnesses.empty();
  return report;
}

std::vector<CycleProduct> enumerate_cycle_products(const Wdg& g, std::size_t max_nodes) {
  const std::size_t n = g.node_count();
  if (n > max_nodes) {
    throw PreconditionError("cycle enumeration refused: " + std::to_string(n) + " nodes exceeds limit " +
                            std::to_string(max_nodes));
  }
  std::vector<CycleProduct> cycles;
  std::vector<std::size_t> path;
  std::vector<bool> on_path(n, false);

  // Cycles are rooted at their smallest node; only larger nodes are explored.
  std::function<void(std::size_t, std::size_t)> extend = [&](std::size_t root, std::size_t v) {
    for (std::size_t w : g.successors(v)) {
      if (w == root) {
        std::vector<std::size_t> cycle = path;
        cycle.push_back(root);
        Polynomial product = walk_weight(g, cycle);
        cycles.push_back({std::move(cycle), std::move(product)});
      } else if (w > root && !on_path[w]) {
        on_path[w] = true;
        path.push_back(w);
        extend(root, w);
        path.pop_back();
        on_path[w] = false;
      }
    }
  };
  for (std::size_t root = 0; root < n; ++root) {
    path = {root};
    on_path[root] = true;
    extend(root, root);
    on_path[root] = false;
  }
  return cycles;
}

std::vector<std::vector<std::size_t>> weak_components(const Wdg& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& [key, w] : g.weights()) {
    const std::size_t a = find(key.first), b = find(key.second);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t v = 0; v < n; ++v) groups[find(v)].push_back(v);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    if (c == '"' || c == '\\') r.push_back('\\');
    r.push_back(c);
  }
  return r;
}

}  // namespace

std::string wdg_to_dot(const Wdg& g) {
  std::ostringstream os;
  os << "digraph wdg {\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    os << "  v" << i + 1 << " [label=\"" << dot_escape(g.node_label(i)) << "\"];\n";
  }
  for (const auto& [key, w] : g.weights()) {
    os << "  v" << key.first + 1 << " -> v" << key.second + 1 << " [label=\"" << dot_escape(w.str())
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string skeleton_to_dot(const Wdg& g, const SccDecomposition& d, const SkeletonGraph& s) {
  std::ostringstream os;
  os << "digraph skeleton {\n";
  for (std::size_t u = 0; u < s.node_count; ++u) {
    std::string members;
    for (std::size_t v : d.components[u]) {
      if (!members.empty()) members += ", ";
      members += g.node_label(v);
    }
    os << "  u" << u + 1 << " [label=\"u_" << u + 1 << "\", tooltip=\"" << dot_escape(members)
       << "\"];\n";
  }
  for (const auto& [a, b] : s.edges) os << "  u" << a + 1 << " -> u" << b + 1 << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace slin
