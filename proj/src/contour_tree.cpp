#include "reebsym/contour_tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>

namespace reebsym {

namespace {

// total order making all critical values distinct: (value, vertex index)
struct SosOrder {
    const std::vector<double>& h;
    bool less(int a, int b) const {
        if (h[a] != h[b]) return h[a] < h[b];
        return a < b;
    }
};

struct Dsu {
    std::vector<int> p;
    explicit Dsu(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[x] != x) {
            p[x] = p[p[x]];
            x = p[x];
        }
        return x;
    }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

std::vector<std::vector<int>> vertex_neighbors(const SphereMesh& mesh) {
    std::vector<std::vector<int>> nbr(mesh.vertices.size());
    for (const auto& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) {
            nbr[t[k]].push_back(t[(k + 1) % 3]);
            nbr[t[k]].push_back(t[(k + 2) % 3]);
        }
    for (auto& v : nbr) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return nbr;
}

// Augmented merge tree: parent[v] = vertex at which v's sweep component is
// next extended or merged; -1 for the last vertex of the sweep.
std::vector<int> merge_tree_parents(const std::vector<std::vector<int>>& nbr,
                                    const std::vector<int>& order) {
    std::size_t n = order.size();
    std::vector<int> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[order[i]] = static_cast<int>(i);
    Dsu dsu(n);
    std::vector<int> head(n, -1);
    std::vector<int> parent(n, -1);
    std::vector<int> comps;
    for (int v : order) {
        comps.clear();
        for (int u : nbr[v]) {
            if (rank[u] < rank[v]) {
                int c = dsu.find(u);
                if (std::find(comps.begin(), comps.end(), c) == comps.end()) comps.push_back(c);
            }
        }
        for (int c : comps) {
            parent[head[c]] = v;
            dsu.unite(c, v);
        }
        head[dsu.find(v)] = v;
    }
    return parent;
}

double tri_frac_below(double t0, double t1, double t2, double t) {
    if (t <= t0) return 0.0;
    if (t >= t2) return 1.0;
    if (t <= t1) {
        double d = (t1 - t0) * (t2 - t0);
        return d > 0.0 ? (t - t0) * (t - t0) / d : 1.0;
    }
    double d = (t2 - t1) * (t2 - t0);
    return d > 0.0 ? 1.0 - (t2 - t) * (t2 - t) / d : 1.0;
}

struct ReducedArc {
    int lo, hi;                 // vertex ids, lo below hi in the tie-break order
    std::vector<int> interior;  // regular vertices assigned to this arc
};

struct TriangleSlab {
    int tri;
    double lo, hi;
};

}  // namespace

std::vector<CriticalPoint> critical_points(const SphereMesh& mesh, const ScalarField& field) {
    const auto& h = field.values;
    if (h.size() != mesh.vertices.size()) throw DomainError("field size does not match mesh");
    auto [mn, mx] = std::minmax_element(h.begin(), h.end());
    if (!(*mx > *mn)) throw DegenerateFieldError("field has no regular values");

    SosOrder ord{h};
    std::size_t n = h.size();
    std::vector<int> changes(n, 0);
    std::vector<int> up(n, 0), deg(n, 0);
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            int v = t[k], a = t[(k + 1) % 3], b = t[(k + 2) % 3];
            if (ord.less(v, a) != ord.less(v, b)) ++changes[v];
        }
    }
    auto nbr = vertex_neighbors(mesh);
    std::vector<CriticalPoint> out;
    for (std::size_t v = 0; v < n; ++v) {
        if (changes[v] == 2) continue;  // regular
        if (changes[v] == 0) {
            bool all_above = true;
            for (int u : nbr[v])
                if (ord.less(u, static_cast<int>(v))) {
                    all_above = false;
                    break;
                }
            out.push_back({static_cast<int>(v), all_above ? NodeKind::minimum : NodeKind::maximum,
                           h[v]});
        } else {
            int multiplicity = changes[v] / 2 - 1;
            for (int m = 0; m < multiplicity; ++m)
                out.push_back({static_cast<int>(v), NodeKind::saddle, h[v]});
        }
    }
    return out;
}

double sublevel_area(const SphereMesh& mesh, const ScalarField& field, double t) {
    const auto& h = field.values;
    double acc = 0.0;
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
        const auto& tri = mesh.triangles[i];
        double a = h[tri[0]], b = h[tri[1]], c = h[tri[2]];
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        acc += mesh.triangle_areas[i] * tri_frac_below(a, b, c, t);
    }
    return acc;
}

int count_reeb_edges(const MeasuredTree& tree) { return tree.edge_count(); }

MeasuredTree build_contour_tree(const SphereMesh& mesh, const ScalarField& field) {
    const auto& h = field.values;
    if (h.size() != mesh.vertices.size()) throw DomainError("field size does not match mesh");
    auto [mn_it, mx_it] = std::minmax_element(h.begin(), h.end());
    if (!(*mx_it > *mn_it)) throw DegenerateFieldError("field has no regular values");

    SosOrder ord{h};
    int n = mesh.vertex_count();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return ord.less(a, b); });
    std::vector<int> desc(order.rbegin(), order.rend());

    auto nbr = vertex_neighbors(mesh);
    std::vector<int> jpar = merge_tree_parents(nbr, order);
    std::vector<int> spar = merge_tree_parents(nbr, desc);

    // CSA merge with union-find shortcuts over removed vertices
    std::vector<int> jdown(static_cast<std::size_t>(n), 0), sup(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        if (jpar[v] >= 0) ++jdown[jpar[v]];
        if (spar[v] >= 0) ++sup[spar[v]];
    }
    Dsu jskip(static_cast<std::size_t>(n)), sskip(static_cast<std::size_t>(n));
    auto jparent = [&](int v) { return jpar[v] < 0 ? -1 : jskip.find(jpar[v]); };
    auto sparent = [&](int v) { return spar[v] < 0 ? -1 : sskip.find(spar[v]); };

    std::vector<char> alive(static_cast<std::size_t>(n), 1);
    auto is_upper_leaf = [&](int v) { return jdown[v] == 0 && sup[v] <= 1 && jparent(v) >= 0; };
    auto is_lower_leaf = [&](int v) { return sup[v] == 0 && jdown[v] <= 1 && sparent(v) >= 0; };

    std::deque<int> queue;
    for (int v = 0; v < n; ++v)
        if (is_upper_leaf(v) || is_lower_leaf(v)) queue.push_back(v);

    std::vector<std::pair<int, int>> arcs;  // (v, parent at removal)
    arcs.reserve(static_cast<std::size_t>(n) - 1);
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        if (!alive[v]) continue;
        int p;
        if (is_upper_leaf(v)) {
            p = jparent(v);
            --jdown[p];
            int ps = sparent(v);
            if (ps >= 0) {
                sup[ps] += sup[v] - 1;
                sskip.p[v] = ps;  // survivors of v's split subtree re-parent to ps
            }
        } else if (is_lower_leaf(v)) {
            p = sparent(v);
            --sup[p];
            int pj = jparent(v);
            if (pj >= 0) {
                jdown[pj] += jdown[v] - 1;
                jskip.p[v] = pj;
            }
        } else {
            continue;
        }
        alive[v] = 0;
        arcs.push_back({v, p});
        if (alive[p] && (is_upper_leaf(p) || is_lower_leaf(p))) queue.push_back(p);
    }
    if (arcs.size() != static_cast<std::size_t>(n) - 1)
        throw TopologyError("contour tree merge left " +
                            std::to_string(n - 1 - static_cast<long long>(arcs.size())) +
                            " arcs unresolved");

    // reduce: contract regular (degree-2) vertices of the full contour tree
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (auto [a, b] : arcs) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    std::vector<int> crit;
    for (int v = 0; v < n; ++v)
        if (adj[v].size() != 2) crit.push_back(v);

    std::vector<int> vert_arc(static_cast<std::size_t>(n), -1);
    std::vector<ReducedArc> red;
    {
        std::map<std::pair<int, int>, bool> seen;
        std::vector<char> is_crit(static_cast<std::size_t>(n), 0);
        for (int c : crit) is_crit[c] = 1;
        for (int c : crit) {
            for (int w0 : adj[c]) {
                auto key = std::minmax(c, w0);
                if (seen[key]) continue;
                seen[key] = true;
                ReducedArc arc;
                int prev = c, cur = w0;
                while (!is_crit[cur]) {
                    arc.interior.push_back(cur);
                    int nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
                    prev = cur;
                    cur = nxt;
                    seen[std::minmax(prev, cur)] = true;
                }
                if (ord.less(c, cur)) {
                    arc.lo = c;
                    arc.hi = cur;
                } else {
                    arc.lo = cur;
                    arc.hi = c;
                }
                int aid = static_cast<int>(red.size());
                for (int u : arc.interior) vert_arc[u] = aid;
                red.push_back(std::move(arc));
            }
        }
    }

    // arcs incident to each critical node, for path walks
    std::unordered_map<int, std::vector<int>> node_arcs;
    for (std::size_t i = 0; i < red.size(); ++i) {
        node_arcs[red[i].lo].push_back(static_cast<int>(i));
        node_arcs[red[i].hi].push_back(static_cast<int>(i));
    }

    // position of a vertex: a node (itself) or the arc it lies on
    std::vector<char> is_crit(static_cast<std::size_t>(n), 0);
    for (int c : crit) is_crit[c] = 1;

    // BFS in the reduced tree from a start position to a goal position,
    // returning the arc sequence. The image of a triangle is a monotone path,
    // so the unique tree path is what the area attribution needs.
    std::vector<int> bfs_prev_arc(red.size());
    std::vector<char> arc_visited(red.size());
    auto arc_path = [&](int v_start, int v_goal) {
        std::vector<int> path;
        if (!is_crit[v_start] && !is_crit[v_goal] && vert_arc[v_start] == vert_arc[v_goal]) {
            path.push_back(vert_arc[v_start]);
            return path;
        }
        std::fill(arc_visited.begin(), arc_visited.end(), 0);
        std::deque<std::pair<int, int>> q;  // (node, arc we came through)
        int goal_arc = is_crit[v_goal] ? -1 : vert_arc[v_goal];
        int goal_node = is_crit[v_goal] ? v_goal : -1;
        auto expand_start = [&](int arc_id) {
            arc_visited[arc_id] = 1;
            bfs_prev_arc[arc_id] = -1;
            q.push_back({red[arc_id].lo, arc_id});
            q.push_back({red[arc_id].hi, arc_id});
        };
        if (is_crit[v_start]) {
            for (int a : node_arcs[v_start])
                if (!arc_visited[a]) {
                    arc_visited[a] = 1;
                    bfs_prev_arc[a] = -2;  // marks "first arc out of the start node"
                    q.push_back({red[a].lo == v_start ? red[a].hi : red[a].lo, a});
                    if (a == goal_arc) goal_node = red[a].lo == v_start ? red[a].hi : red[a].lo;
                }
        } else {
            expand_start(vert_arc[v_start]);
        }
        int final_arc = -1;
        if (goal_arc >= 0 && arc_visited[goal_arc]) {
            final_arc = goal_arc;
        } else {
            while (!q.empty() && final_arc < 0) {
                auto [node, via] = q.front();
                q.pop_front();
                if (goal_node == node) {
                    final_arc = via;
                    break;
                }
                for (int a : node_arcs[node]) {
                    if (arc_visited[a]) continue;
                    arc_visited[a] = 1;
                    bfs_prev_arc[a] = via;
                    if (a == goal_arc) {
                        final_arc = a;
                        break;
                    }
                    q.push_back({red[a].lo == node ? red[a].hi : red[a].lo, a});
                }
            }
        }
        if (final_arc < 0) throw TopologyError("reduced contour tree is not connected");
        for (int a = final_arc; a >= 0; a = bfs_prev_arc[a]) {
            path.push_back(a);
            if (bfs_prev_arc[a] == -2) break;
        }
        std::reverse(path.begin(), path.end());
        return path;
    };

    // attribute each triangle's area across the arcs its image traverses
    std::vector<std::vector<TriangleSlab>> slabs(red.size());
    for (int ti = 0; ti < mesh.triangle_count(); ++ti) {
        const auto& t = mesh.triangles[ti];
        int v0 = t[0], v1 = t[1], v2 = t[2];
        if (ord.less(v1, v0)) std::swap(v0, v1);
        if (ord.less(v2, v1)) std::swap(v1, v2);
        if (ord.less(v1, v0)) std::swap(v0, v1);
        auto path = arc_path(v0, v2);
        double lo_t = h[v0];
        for (std::size_t i = 0; i < path.size(); ++i) {
            double hi_t;
            if (i + 1 < path.size()) {
                const ReducedArc& a = red[path[i]];
                const ReducedArc& b = red[path[i + 1]];
                int shared = (a.lo == b.lo || a.lo == b.hi) ? a.lo : a.hi;
                hi_t = h[shared];
            } else {
                hi_t = h[v2];
            }
            slabs[path[i]].push_back({ti, lo_t, hi_t});
            lo_t = hi_t;
        }
    }

    // per-arc profile: exact sublevel-within-band area at each distinct
    // vertex value inside the band, swept incrementally
    struct ArcData {
        std::vector<double> ts, ss;
        double measure = 0.0;
    };
    std::vector<ArcData> data(red.size());
    for (std::size_t ai = 0; ai < red.size(); ++ai) {
        const ReducedArc& arc = red[ai];
        std::vector<double> ts;
        ts.reserve(arc.interior.size() + 2);
        ts.push_back(h[arc.lo]);
        for (int u : arc.interior) ts.push_back(h[u]);
        ts.push_back(h[arc.hi]);
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

        auto& sl = slabs[ai];
        std::sort(sl.begin(), sl.end(),
                  [](const TriangleSlab& a, const TriangleSlab& b) { return a.lo < b.lo; });
        std::size_t next_slab = 0;
        std::vector<TriangleSlab> active;
        double s = 0.0, prev_t = ts.front();
        std::vector<double> ss;
        ss.reserve(ts.size());
        for (double t : ts) {
            while (next_slab < sl.size() && sl[next_slab].lo < t) active.push_back(sl[next_slab++]);
            std::size_t keep = 0;
            for (std::size_t k = 0; k < active.size(); ++k) {
                const TriangleSlab& slab = active[k];
                const auto& tri = mesh.triangles[slab.tri];
                double a = h[tri[0]], b = h[tri[1]], c = h[tri[2]];
                if (a > b) std::swap(a, b);
                if (b > c) std::swap(b, c);
                if (a > b) std::swap(a, b);
                double f1 = tri_frac_below(a, b, c, std::min(t, slab.hi));
                double f0 = tri_frac_below(a, b, c, std::min(std::max(prev_t, slab.lo), slab.hi));
                if (f1 > f0) s += mesh.triangle_areas[slab.tri] * (f1 - f0);
                if (slab.hi > t) active[keep++] = slab;
            }
            active.resize(keep);
            ss.push_back(s);
            prev_t = t;
        }
        data[ai].measure = s;
        data[ai].ts = std::move(ts);
        data[ai].ss = std::move(ss);
    }

    // node kinds from the link classification
    std::unordered_map<int, NodeKind> kind;
    for (const auto& cp : critical_points(mesh, field)) kind[cp.vertex] = cp.kind;

    // assemble the measured tree; zero-measure bands (tied critical values)
    // are contracted into their lower node
    std::vector<int> remap(static_cast<std::size_t>(n), -1);
    for (int c : crit) remap[c] = c;
    std::vector<char> arc_dead(red.size(), 0);
    for (std::size_t ai = 0; ai < red.size(); ++ai) {
        if (data[ai].measure > 0.0) continue;
        if (data[ai].measure > 1e-12)
            continue;  // unreachable; measures are sums of non-negative terms
        int lo = red[ai].lo, hi = red[ai].hi;
        while (remap[lo] != lo) lo = remap[lo];
        while (remap[hi] != hi) hi = remap[hi];
        if (lo != hi) remap[hi] = lo;
        arc_dead[ai] = 1;
    }
    auto resolve = [&](int v) {
        while (remap[v] != v) v = remap[v];
        return v;
    };

    std::vector<TreeNode> nodes;
    std::vector<char> node_emitted(static_cast<std::size_t>(n), 0);
    std::vector<TreeEdge> edges;
    for (std::size_t ai = 0; ai < red.size(); ++ai) {
        if (arc_dead[ai]) continue;
        int lo = resolve(red[ai].lo), hi = resolve(red[ai].hi);
        if (lo == hi) throw DegenerateFieldError("level set has a flat band of positive area");
        ArcData& d = data[ai];
        if (d.ts.size() < 2 || !(d.ts.back() > d.ts.front()))
            throw DegenerateFieldError("level set has a flat band of positive area");
        for (int v : {lo, hi}) {
            if (!node_emitted[v]) {
                node_emitted[v] = 1;
                auto it = kind.find(v);
                nodes.push_back({v, h[v], it == kind.end() ? NodeKind::saddle : it->second});
            }
        }
        TreeEdge e;
        e.id = static_cast<int>(edges.size());
        e.u = lo;
        e.v = hi;
        e.measure = d.measure;
        // keep the profile strictly increasing in both coordinates
        EdgeProfile p;
        p.s.push_back(0.0);
        p.value.push_back(d.ts.front());
        for (std::size_t i = 1; i + 1 < d.ts.size(); ++i) {
            if (d.ss[i] > p.s.back() && d.ts[i] > p.value.back() && d.ss[i] < d.measure) {
                p.s.push_back(d.ss[i]);
                p.value.push_back(d.ts[i]);
            }
        }
        p.s.push_back(d.measure);
        p.value.push_back(d.ts.back());
        e.profile = std::move(p);
        edges.push_back(std::move(e));
    }

    return MeasuredTree::build(std::move(nodes), std::move(edges));
}

EvenProfile symmetrize_field(const SphereMesh& mesh, const ScalarField& field) {
    ScalarField f = normalize_mean_zero(mesh, field);
    MeasuredTree tree = build_contour_tree(mesh, f);
    return symmetrize_tree(tree.shifted(-tree.mean()));
}

}  // namespace reebsym
