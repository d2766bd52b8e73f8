#include "reebsym/tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iostream>
#include <random>
#include <string>

namespace reebsym {

namespace {

constexpr double kMeanTol = 1e-10;
constexpr double kMeasureSumTol = 1e-9;
constexpr double kContinuityTol = 1e-9;

double lerp(double x0, double y0, double x1, double y1, double x) {
    if (x1 == x0) return y1;
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

}  // namespace

double EdgeProfile::eval(double at) const {
    if (at <= s.front()) return value.front();
    if (at >= s.back()) return value.back();
    auto it = std::upper_bound(s.begin(), s.end(), at);
    std::size_t i = static_cast<std::size_t>(it - s.begin());
    return lerp(s[i - 1], value[i - 1], s[i], value[i], at);
}

double EdgeProfile::integral() const {
    double acc = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i)
        acc += (s[i] - s[i - 1]) * (value[i] + value[i - 1]) * 0.5;
    return acc;
}

double EdgeProfile::min_value() const { return *std::min_element(value.begin(), value.end()); }
double EdgeProfile::max_value() const { return *std::max_element(value.begin(), value.end()); }

int MeasuredTree::nidx(int id) const {
    if (id < 0 || id >= static_cast<int>(node_index_.size()) || node_index_[id] < 0)
        throw UnknownEdgeError("unknown node id " + std::to_string(id));
    return node_index_[id];
}

int MeasuredTree::eidx(int id) const {
    if (id < 0 || id >= static_cast<int>(edge_index_.size()) || edge_index_[id] < 0)
        throw UnknownEdgeError("unknown edge id " + std::to_string(id));
    return edge_index_[id];
}

const TreeNode& MeasuredTree::node(int id) const { return nodes_[nidx(id)]; }
const TreeEdge& MeasuredTree::edge(int id) const { return edges_[eidx(id)]; }

MeasuredTree MeasuredTree::build(std::vector<TreeNode> nodes, std::vector<TreeEdge> edges) {
    if (nodes.empty()) throw DomainError("tree needs at least one node");
    if (edges.size() + 1 != nodes.size())
        throw TopologyError("tree must satisfy #nodes = #edges + 1");

    MeasuredTree t;
    std::sort(nodes.begin(), nodes.end(), [](const TreeNode& a, const TreeNode& b) { return a.id < b.id; });
    std::sort(edges.begin(), edges.end(), [](const TreeEdge& a, const TreeEdge& b) { return a.id < b.id; });
    t.nodes_ = std::move(nodes);
    t.edges_ = std::move(edges);

    int max_nid = 0, max_eid = 0;
    for (const auto& n : t.nodes_) max_nid = std::max(max_nid, n.id);
    for (const auto& e : t.edges_) max_eid = std::max(max_eid, e.id);
    t.node_index_.assign(static_cast<std::size_t>(max_nid) + 1, -1);
    t.edge_index_.assign(static_cast<std::size_t>(max_eid) + 1, -1);
    for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
        if (t.nodes_[i].id < 0 || t.node_index_[t.nodes_[i].id] >= 0)
            throw DomainError("node ids must be unique and non-negative");
        t.node_index_[t.nodes_[i].id] = static_cast<int>(i);
    }
    for (std::size_t i = 0; i < t.edges_.size(); ++i) {
        if (t.edges_[i].id < 0 || t.edge_index_[t.edges_[i].id] >= 0)
            throw DomainError("edge ids must be unique and non-negative");
        t.edge_index_[t.edges_[i].id] = static_cast<int>(i);
    }

    double mu_sum = 0.0;
    for (auto& e : t.edges_) {
        if (!(e.measure > 0.0))
            throw DegenerateError("edge " + std::to_string(e.id) + " has non-positive measure");
        mu_sum += e.measure;
        auto& p = e.profile;
        if (p.s.size() != p.value.size() || p.s.size() < 2)
            throw DomainError("edge profile needs >= 2 matching breakpoints");
        if (std::abs(p.s.front()) > 1e-12 * e.measure || std::abs(p.s.back() - e.measure) > 1e-12 * std::max(1.0, e.measure))
            throw DomainError("edge profile must span [0, mu(e)]");
        p.s.front() = 0.0;
        p.s.back() = e.measure;
        for (std::size_t i = 1; i < p.s.size(); ++i)
            if (!(p.s[i] > p.s[i - 1]))
                throw DomainError("edge profile s-breakpoints must be strictly increasing");
        // continuity at nodes, snapped exact
        double vu = t.node(e.u).value, vv = t.node(e.v).value;
        if (std::abs(p.value.front() - vu) > kContinuityTol || std::abs(p.value.back() - vv) > kContinuityTol)
            throw DomainError("edge profile endpoints must match node values");
        p.value.front() = vu;
        p.value.back() = vv;
    }
    if (std::abs(mu_sum - 1.0) > kMeasureSumTol)
        throw DegenerateError("edge measures must sum to 1 (got " + std::to_string(mu_sum) + ")");
    if (std::abs(mu_sum - 1.0) > 1e-12) {
        for (auto& e : t.edges_) {
            e.measure /= mu_sum;
            for (auto& s : e.profile.s) s /= mu_sum;
        }
    }

    // rooted orientation, connectivity check, subtree sums, Euler intervals
    std::size_t n = t.nodes_.size();
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (node index, edge index)
    for (std::size_t i = 0; i < t.edges_.size(); ++i) {
        int a = t.nidx(t.edges_[i].u), b = t.nidx(t.edges_[i].v);
        adj[a].push_back({b, static_cast<int>(i)});
        adj[b].push_back({a, static_cast<int>(i)});
    }
    t.parent_.assign(n, -1);
    t.parent_edge_.assign(n, -1);
    t.below_.assign(n, 0.0);
    t.tin_.assign(n, -1);
    t.tout_.assign(n, -1);
    t.root_ = t.nodes_[0].id;
    std::vector<int> order;
    order.reserve(n);
    std::vector<char> seen(n, 0);
    seen[0] = 1;
    int clock = 0;
    // iterative DFS with explicit tin/tout
    std::vector<std::pair<int, std::size_t>> frames{{0, 0}};
    t.tin_[0] = clock++;
    while (!frames.empty()) {
        auto& [x, k] = frames.back();
        if (k < adj[x].size()) {
            auto [y, ei] = adj[x][k++];
            if (!seen[y]) {
                seen[y] = 1;
                t.parent_[y] = x;
                t.parent_edge_[y] = ei;
                t.tin_[y] = clock++;
                frames.push_back({y, 0});
            }
        } else {
            t.tout_[x] = clock++;
            order.push_back(x);
            frames.pop_back();
        }
    }
    if (order.size() != n) throw TopologyError("tree is not connected");
    for (int x : order) {  // post-order: children finish first
        if (t.parent_[x] >= 0)
            t.below_[t.parent_[x]] += t.below_[x] + t.edges_[t.parent_edge_[x]].measure;
    }
    return t;
}

int MeasuredTree::parent_node(int node_id) const {
    int p = parent_[nidx(node_id)];
    return p < 0 ? -1 : nodes_[p].id;
}

int MeasuredTree::child_node_of_edge(int edge_id) const {
    const TreeEdge& e = edges_[eidx(edge_id)];
    int ui = nidx(e.u), vi = nidx(e.v);
    if (parent_[vi] == ui) return e.v;
    if (parent_[ui] == vi) return e.u;
    throw TopologyError("edge endpoints are not parent/child");
}

bool MeasuredTree::node_in_subtree(int node_id, int subtree_root) const {
    int a = nidx(subtree_root), b = nidx(node_id);
    return tin_[a] <= tin_[b] && tout_[b] <= tout_[a];
}

double MeasuredTree::subtree_measure(int edge_id, int node_id) const {
    const TreeEdge& e = edges_[eidx(edge_id)];
    if (node_id != e.u && node_id != e.v)
        throw UnknownEdgeError("node " + std::to_string(node_id) + " is not an endpoint of edge " +
                               std::to_string(edge_id));
    int c = child_node_of_edge(edge_id);
    double below_child = below_[nidx(c)];
    if (node_id == c) return below_child;
    return 1.0 - e.measure - below_child;
}

double MeasuredTree::mean() const {
    double acc = 0.0;
    for (const auto& e : edges_) acc += e.profile.integral();
    return acc;
}

double MeasuredTree::min_value() const {
    double m = edges_.empty() ? nodes_.front().value : edges_.front().profile.min_value();
    for (const auto& e : edges_) m = std::min(m, e.profile.min_value());
    return m;
}

double MeasuredTree::max_value() const {
    double m = edges_.empty() ? nodes_.front().value : edges_.front().profile.max_value();
    for (const auto& e : edges_) m = std::max(m, e.profile.max_value());
    return m;
}

MeasuredTree MeasuredTree::shifted(double offset) const {
    MeasuredTree t = *this;
    for (auto& n : t.nodes_) n.value += offset;
    for (auto& e : t.edges_)
        for (auto& v : e.profile.value) v += offset;
    return t;
}

std::vector<ElementaryFunction> elementary_decompose(const MeasuredTree& tree) {
    double m = tree.mean();
    const MeasuredTree* src = &tree;
    MeasuredTree normalized;
    if (std::abs(m) > kMeanTol) {
        if (std::abs(m) > 1e-3 * std::max(1.0, tree.osc()))
            throw MeanNotZeroError("tree function mean " + std::to_string(m) + " is far from zero");
        std::cerr << "reebsym: warning: tree function mean " << m << " exceeds tolerance, renormalizing\n";
        normalized = tree.shifted(-m);
        src = &normalized;
    }

    std::vector<ElementaryFunction> elems;
    elems.reserve(src->edges().size());
    for (const auto& e : src->edges()) {
        double mu_u = src->subtree_measure(e.id, e.u);
        double mu_v = src->subtree_measure(e.id, e.v);
        double vu = src->node(e.u).value, vv = src->node(e.v).value;
        double mean_e = vu * mu_u + vv * mu_v + e.profile.integral();
        ElementaryFunction el;
        el.edge_id = e.id;
        el.u = e.u;
        el.v = e.v;
        el.profile = e.profile;
        for (auto& val : el.profile.value) val -= mean_e;
        el.value_u = vu - mean_e;
        el.value_v = vv - mean_e;
        el.measure_u = mu_u;
        el.measure_v = mu_v;
        elems.push_back(std::move(el));
    }

    // residual a = h - sum_e h_e must vanish; it is constant on every edge, so
    // it suffices to evaluate the constant per edge.
    double worst = 0.0;
    for (std::size_t i = 0; i < src->edges().size(); ++i) {
        const TreeEdge& e = src->edges()[i];
        int child_e = src->child_node_of_edge(e.id);
        double mean_e = src->node(e.u).value - elems[i].value_u;
        double a = mean_e;
        for (const auto& el : elems) {
            if (el.edge_id == e.id) continue;
            int child_el = src->child_node_of_edge(el.edge_id);
            bool child_is_u = child_el == el.u;
            // h_el restricted to e is its constant on whichever side holds e
            if (src->node_in_subtree(child_e, child_el))
                a -= child_is_u ? el.value_u : el.value_v;
            else
                a -= child_is_u ? el.value_v : el.value_u;
        }
        worst = std::max(worst, std::abs(a));
    }
    if (worst > kMeanTol)
        throw ResidualError("elementary decomposition residual " + std::to_string(worst));
    return elems;
}

EvenProfile symmetrize_elementary(const ElementaryFunction& elem) {
    // Assemble f = Sigma_{h,u} on [-1/2, 1/2]: the constant value_u up to
    // -1/2 + mu(T_u), the edge profile in measure coordinates, then value_v.
    double m = -0.5 + elem.measure_u;
    double mu = elem.profile.s.back();
    std::vector<double> xs, ys;
    xs.reserve(elem.profile.s.size() + 4);
    ys.reserve(elem.profile.s.size() + 4);
    auto push = [&](double x, double y) {
        if (!xs.empty() && !(x > xs.back())) return;
        xs.push_back(x);
        ys.push_back(y);
    };
    push(-0.5, elem.value_u);
    push(m, elem.value_u);
    for (std::size_t i = 0; i < elem.profile.s.size(); ++i)
        push(m + elem.profile.s[i], elem.profile.value[i]);
    push(m + mu, elem.value_v);
    push(0.5, elem.value_v);

    auto feval = [&](double x) {
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs.begin());
        return lerp(xs[i - 1], ys[i - 1], xs[i], ys[i], x);
    };

    std::vector<double> zs;
    zs.reserve(xs.size() + 2);
    zs.push_back(0.0);
    for (double x : xs) {
        double a = std::abs(x);
        if (a > 0.0 && a < 0.5) zs.push_back(a);
    }
    zs.push_back(0.5);
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());

    std::vector<double> vals(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i)
        vals[i] = 0.5 * (feval(zs[i]) + feval(-zs[i]));
    return EvenProfile::from_breakpoints(std::move(zs), std::move(vals));
}

EvenProfile symmetrize_tree(const MeasuredTree& tree) {
    auto elems = elementary_decompose(tree);
    std::vector<EvenProfile> parts;
    parts.reserve(elems.size());
    for (const auto& el : elems) parts.push_back(symmetrize_elementary(el));
    return EvenProfile::sum(parts);
}

namespace detail {
double uniform01(std::uint64_t raw) { return static_cast<double>(raw >> 11) * 0x1.0p-53; }
}  // namespace detail

MeasuredTree random_tree(std::uint64_t seed, int n_edges) {
    if (n_edges < 1) throw DomainError("random_tree needs n_edges >= 1");
    std::mt19937_64 eng(seed);
    auto u01 = [&] { return detail::uniform01(eng()); };

    int n_nodes = n_edges + 1;
    std::vector<int> parent(static_cast<std::size_t>(n_nodes), 0);
    for (int i = 1; i < n_nodes; ++i)
        parent[static_cast<std::size_t>(i)] = static_cast<int>(u01() * i);

    std::vector<double> w(static_cast<std::size_t>(n_edges));
    double wsum = 0.0;
    for (auto& x : w) {
        x = std::max(1e-9, -std::log(std::max(1.0 - u01(), 1e-300)));
        wsum += x;
    }
    for (auto& x : w) x /= wsum;

    std::vector<double> nodeval(static_cast<std::size_t>(n_nodes));
    for (auto& x : nodeval) x = 2.0 * u01() - 1.0;

    std::vector<TreeNode> nodes;
    std::vector<TreeEdge> edges;
    for (int i = 0; i < n_nodes; ++i)
        nodes.push_back({i, nodeval[static_cast<std::size_t>(i)], NodeKind::saddle});
    for (int i = 1; i < n_nodes; ++i) {
        TreeEdge e;
        e.id = i - 1;
        e.u = parent[static_cast<std::size_t>(i)];
        e.v = i;
        e.measure = w[static_cast<std::size_t>(i - 1)];
        int n_interior = static_cast<int>(u01() * 4.0);
        std::vector<double> ss{0.0};
        for (int j = 0; j < n_interior; ++j) ss.push_back(u01() * e.measure);
        ss.push_back(e.measure);
        std::sort(ss.begin(), ss.end());
        EdgeProfile p;
        for (double s : ss) {
            if (!p.s.empty() && s - p.s.back() < 1e-9 * e.measure) continue;
            p.s.push_back(s);
            p.value.push_back(2.0 * u01() - 1.0);
        }
        if (p.s.size() < 2 || p.s.back() != e.measure) {
            p.s.push_back(e.measure);
            p.value.push_back(2.0 * u01() - 1.0);
        }
        p.value.front() = nodeval[static_cast<std::size_t>(e.u)];
        p.value.back() = nodeval[static_cast<std::size_t>(e.v)];
        e.profile = std::move(p);
        edges.push_back(std::move(e));
    }

    // leaf/extremum kinds for reporting; interior nodes stay saddles
    std::vector<int> degree(static_cast<std::size_t>(n_nodes), 0);
    for (const auto& e : edges) {
        ++degree[static_cast<std::size_t>(e.u)];
        ++degree[static_cast<std::size_t>(e.v)];
    }
    for (auto& n : nodes) {
        if (degree[static_cast<std::size_t>(n.id)] != 1) continue;
        for (const auto& e : edges) {
            if (e.u != n.id && e.v != n.id) continue;
            double other = e.u == n.id ? nodes[static_cast<std::size_t>(e.v)].value
                                       : nodes[static_cast<std::size_t>(e.u)].value;
            n.kind = n.value <= other ? NodeKind::minimum : NodeKind::maximum;
            break;
        }
    }

    MeasuredTree t = MeasuredTree::build(std::move(nodes), std::move(edges));
    return t.shifted(-t.mean());
}

}  // namespace reebsym
