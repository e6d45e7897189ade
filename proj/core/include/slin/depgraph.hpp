#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slin/polynomial.hpp"
#include "slin/system.hpp"

namespace slin {

/// Weighted dependency graph. Node i stands for variable x_i; the edge i -> j
/// carries gamma_ij = d f_j / d x_i and exists iff that derivative is nonzero.
/// Node indices are 0-based; rendering uses 1-based labels.
class Wdg {
 public:
  using EdgeKey = std::pair<std::size_t, std::size_t>;

  /// Zero weights are dropped. Throws on out-of-range nodes or foreign spaces.
  Wdg(SpacePtr space, std::size_t node_count, std::map<EdgeKey, Polynomial> weights);

  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return weights_.size(); }
  const SpacePtr& space() const { return space_; }
  const std::map<EdgeKey, Polynomial>& weights() const { return weights_; }
  /// Ascending successor lists.
  const std::vector<std::size_t>& successors(std::size_t i) const { return succ_.at(i); }
  bool has_edge(std::size_t i, std::size_t j) const { return weights_.count({i, j}) != 0; }
  /// Throws PreconditionError if the edge is absent.
  const Polynomial& weight(std::size_t i, std::size_t j) const;
  /// Variable name for node i when the space has one, else `v<i+1>`.
  std::string node_label(std::size_t i) const;

 private:
  SpacePtr space_;
  std::size_t n_;
  std::map<EdgeKey, Polynomial> weights_;
  std::vector<std::vector<std::size_t>> succ_;
};

Wdg build_wdg(const PolySystem& sys);

/// Maximal strongly connected components, listed in a topological order of
/// the condensation (sources first, ties by smallest member index). Members
/// are sorted ascending.
struct SccDecomposition {
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> component_of;

  std::size_t size() const { return components.size(); }
};

SccDecomposition scc_decomposition(const Wdg& g);

/// Condensation of a WDG with longest-path depth layering from the sources.
struct SkeletonGraph {
  std::size_t node_count = 0;
  /// Sorted, deduplicated (from, to) component pairs; never a self-loop.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  /// Graph node -> skeleton node.
  std::vector<std::size_t> projection;
  std::vector<std::size_t> depth;
  /// layers[m] = skeleton nodes of depth m, ascending.
  std::vector<std::vector<std::size_t>> layers;

  /// Length of the longest path (the index of the last layer).
  std::size_t max_depth() const { return layers.empty() ? 0 : layers.size() - 1; }
};

SkeletonGraph build_skeleton(const Wdg& g, const SccDecomposition& d);

/// Product of edge weights along `walk`; a single node gives 1.
Polynomial walk_weight(const Wdg& g, std::span<const std::size_t> walk);

struct ConditionWitness {
  std::size_t from;
  std::size_t to;
  std::size_t component;
  std::string weight;
};

struct ConditionReport {
  bool pass = true;
  /// Every intra-component edge whose weight is not constant.
  std::vector<ConditionWitness> witnesses;
};

/// Passes iff every edge inside a strong component (self-loops included) has
/// a constant weight, which is equivalent to every cycle product being
/// constant.
ConditionReport check_condition(const Wdg& g, const SccDecomposition& d);

struct CycleProduct {
  /// Closed node sequence starting and ending at the smallest member, e.g. {0, 1, 0}.
  std::vector<std::size_t> cycle;
  Polynomial product;
};

/// Every simple cycle with its weight product. Exponential; refuses graphs
/// with more than `max_nodes` nodes.
std::vector<CycleProduct> enumerate_cycle_products(const Wdg& g, std::size_t max_nodes = 8);

/// Weakly connected components as ascending node lists, ordered by smallest member.
std::vector<std::vector<std::size_t>> weak_components(const Wdg& g);

/// Graphviz digraph of the WDG, edges labelled with their weights.
std::string wdg_to_dot(const Wdg& g);

/// Graphviz digraph of the skeleton; node tooltips list member variables.
std::string skeleton_to_dot(const Wdg& g, const SccDecomposition& d, const SkeletonGraph& s);

}  // namespace slin
