#include "qkdn/paths.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace qkdn {

namespace {

struct Edge {
    int to;
    int cap;
    int rev; // index of the reverse edge in adj[to]
    bool forward;
};

struct FlowGraph {
    std::vector<std::vector<Edge>> adj;

    void add_edge(int from, int to, int cap) {
        adj[from].push_back({to, cap, static_cast<int>(adj[to].size()), true});
        adj[to].push_back({from, 0, static_cast<int>(adj[from].size()) - 1, false});
    }

    int flow_on(const Edge& e) const {
        return e.forward ? adj[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)].cap
                         : 0;
    }

    // One augmentation along a shortest residual path; returns false when
    // the sink is unreachable.
    bool augment(int s, int t) {
        std::vector<std::pair<int, int>> parent(adj.size(), {-1, -1});
        std::queue<int> bfs;
        bfs.push(s);
        parent[s] = {s, 0};
        while (!bfs.empty() && parent[t].first < 0) {
            int u = bfs.front();
            bfs.pop();
            for (std::size_t i = 0; i < adj[u].size(); ++i) {
                const Edge& e = adj[u][i];
                if (e.cap > 0 && parent[e.to].first < 0) {
                    parent[e.to] = {u, static_cast<int>(i)};
                    bfs.push(e.to);
                }
            }
        }
        if (parent[t].first < 0)
            return false;
        for (int v = t; v != s;) {
            auto [u, i] = parent[v];
            Edge& e = adj[u][static_cast<std::size_t>(i)];
            e.cap -= 1;
            adj[e.to][static_cast<std::size_t>(e.rev)].cap += 1;
            v = u;
        }
        return true;
    }
};

} // namespace

std::vector<std::vector<std::string>> find_disjoint_paths(const Fabric& f,
                                                          const std::string& src,
                                                          const std::string& dst,
                                                          unsigned k,
                                                          bool quantum_only) {
    if (k < 1)
        throw ConfigError("find_disjoint_paths: k must be at least 1");
    if (!f.has_node(src) || !f.has_node(dst) || src == dst)
        throw ConfigError("find_disjoint_paths: bad endpoints " + src + ", " + dst);

    std::vector<std::string> names;
    for (const Node& n : f.nodes())
        names.push_back(n.name);
    std::sort(names.begin(), names.end());
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < names.size(); ++i)
        index[names[i]] = static_cast<int>(i);

    std::set<std::pair<int, int>> pairs;
    for (const QuantumLink& l : f.qlinks())
        pairs.insert(std::minmax(index[l.a], index[l.b]));
    if (!quantum_only)
        for (const ClassicalChannel& c : f.cchannels())
            if (c.secure)
                pairs.insert(std::minmax(index[c.a], index[c.b]));

    // Node splitting: vertex 2i is the in-side, 2i+1 the out-side of node i.
    const int n = static_cast<int>(names.size());
    FlowGraph g;
    g.adj.resize(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        bool endpoint = names[static_cast<std::size_t>(i)] == src ||
                        names[static_cast<std::size_t>(i)] == dst;
        g.add_edge(2 * i, 2 * i + 1, endpoint ? static_cast<int>(k) : 1);
    }
    // pairs is ordered, so adjacency targets come out sorted by node name
    // and both the BFS and the decomposition tie-break lexicographically.
    for (const auto& [a, b] : pairs) {
        g.add_edge(2 * a + 1, 2 * b, 1);
        g.add_edge(2 * b + 1, 2 * a, 1);
    }

    const int s = 2 * index[src];
    const int t = 2 * index[dst] + 1;
    unsigned flow = 0;
    while (flow < k && g.augment(s, t))
        ++flow;
    if (flow < k)
        throw ProtocolError("only " + std::to_string(flow) + " disjoint paths between " +
                            src + " and " + dst + ", need " + std::to_string(k));

    // Decompose the flow into paths, preferring the lexicographically
    // smallest next node at every branch.
    std::vector<std::vector<std::string>> paths;
    for (unsigned p = 0; p < k; ++p) {
        std::vector<std::string> path{src};
        int u = s; // in-side of src
        while (u != t) {
            bool advanced = false;
            for (Edge& e : g.adj[static_cast<std::size_t>(u)]) {
                if (!e.forward || g.flow_on(e) <= 0)
                    continue;
                g.adj[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)].cap -= 1;
                if (e.to % 2 == 0)
                    path.push_back(names[static_cast<std::size_t>(e.to / 2)]);
                u = e.to;
                advanced = true;
                break;
            }
            if (!advanced)
                throw std::logic_error("flow decomposition failed");
        }
        paths.push_back(std::move(path));
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

} // namespace qkdn
