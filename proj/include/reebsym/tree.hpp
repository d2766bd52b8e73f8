#pragma once

#include <cstdint>
#include <vector>

#include "reebsym/errors.hpp"
#include "reebsym/profile.hpp"

namespace reebsym {

enum class NodeKind { minimum, maximum, saddle };

struct TreeNode {
    int id;
    double value;
    NodeKind kind;
};

/// Continuous piecewise-linear map from the measure coordinate s in [0, mu(e)]
/// (oriented u -> v) to function values.
struct EdgeProfile {
    std::vector<double> s;
    std::vector<double> value;

    double eval(double at) const;
    double integral() const;  // \int_0^{mu} value ds
    double min_value() const;
    double max_value() const;
};

struct TreeEdge {
    int id;
    int u, v;
    double measure;
    EdgeProfile profile;
};

/// Finite tree with a probability measure that is Lebesgue on edge interiors
/// (nodes carry measure 0), together with the function profiles along edges.
class MeasuredTree {
public:
    static MeasuredTree build(std::vector<TreeNode> nodes, std::vector<TreeEdge> edges);

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    const std::vector<TreeEdge>& edges() const { return edges_; }
    const TreeNode& node(int id) const;
    const TreeEdge& edge(int id) const;

    int edge_count() const { return static_cast<int>(edges_.size()); }

    // mu of the component of the tree minus the open edge that contains the
    // given endpoint.
    double subtree_measure(int edge_id, int node_id) const;

    double mean() const;       // \int h dmu
    double min_value() const;  // over all profiles
    double max_value() const;
    double osc() const { return max_value() - min_value(); }

    MeasuredTree shifted(double offset) const;  // h + offset, same tree

    // Rooted-orientation helpers used by the decomposition and its oracle.
    int root() const { return root_; }
    int parent_node(int node_id) const;
    int child_node_of_edge(int edge_id) const;
    bool node_in_subtree(int node_id, int subtree_root) const;

private:
    std::vector<TreeNode> nodes_;
    std::vector<TreeEdge> edges_;
    std::vector<int> node_index_;           // id -> index (ids kept dense-ish)
    std::vector<int> edge_index_;
    int root_ = 0;
    std::vector<int> parent_;               // node index -> parent node index (-1 at root)
    std::vector<int> parent_edge_;          // node index -> edge index to parent
    std::vector<double> below_;             // node index -> measure strictly below
    std::vector<int> tin_, tout_;           // Euler intervals for subtree tests

    int nidx(int id) const;
    int eidx(int id) const;
};

struct ElementaryFunction {
    int edge_id;
    int u, v;
    EdgeProfile profile;   // mean-subtracted values of h along the edge
    double value_u, value_v;      // constants on T_{e,u} and T_{e,v}
    double measure_u, measure_v;  // mu(T_{e,u}), mu(T_{e,v})
};

// h = sum_e h_e with h_e elementary w.r.t. e; verifies the residual vanishes.
std::vector<ElementaryFunction> elementary_decompose(const MeasuredTree& tree);

EvenProfile symmetrize_elementary(const ElementaryFunction& elem);

EvenProfile symmetrize_tree(const MeasuredTree& tree);

// Deterministic pseudorandom tree with normalized exponential measure split
// and random PL profiles, mean-zero.
MeasuredTree random_tree(std::uint64_t seed, int n_edges);

namespace detail {
// 53-bit uniform in [0, 1) from raw engine output; avoids the
// implementation-defined std distributions so seeds reproduce bit-exactly.
double uniform01(std::uint64_t raw);
}  // namespace detail

}  // namespace reebsym
