#include "hamexp/graph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <queue>
#include <sstream>

#include "hamexp/error.hpp"

namespace hamexp {

bool Graph::has_edge(int u, int v) const {
  auto nb = neighbors_of(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

bool Graph::connected() const {
  if (n == 0) return true;
  std::vector<uint8_t> seen(n, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : neighbors_of(v)) {
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == n;
}

std::vector<int> Graph::part(int s) const {
  std::vector<int> out;
  if (!bipartite) return out;
  for (int v = 0; v < n; ++v)
    if (side[v] == s) out.push_back(v);
  return out;
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 0) throw InputError("vertex count must be nonnegative");
  Graph g;
  g.n = n;
  std::vector<int> deg(n, 0);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw InputError("vertex index out of range: " + std::to_string(std::max(u, v)) +
                       " >= " + std::to_string(n));
    if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
    ++deg[u];
    ++deg[v];
  }
  g.offsets.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) g.offsets[v + 1] = g.offsets[v] + deg[v];
  g.neighbors.assign(g.offsets[n], 0);
  std::vector<int> fill(g.offsets.begin(), g.offsets.end() - 1);
  for (auto [u, v] : edges) {
    g.neighbors[fill[u]++] = v;
    g.neighbors[fill[v]++] = u;
  }
  for (int v = 0; v < n; ++v) {
    auto begin = g.neighbors.begin() + g.offsets[v];
    auto end = g.neighbors.begin() + g.offsets[v + 1];
    std::sort(begin, end);
    if (std::adjacent_find(begin, end) != end)
      throw InputError("duplicate edge at vertex " + std::to_string(v));
  }
  g.d_min = n > 0 ? *std::min_element(deg.begin(), deg.end()) : 0;
  g.d_max = n > 0 ? *std::max_element(deg.begin(), deg.end()) : 0;
  g.d_avg = n > 0 ? 2.0 * static_cast<double>(edges.size()) / n : 0.0;

  // canonical 2-colouring attempt
  g.side.assign(n, 2);
  g.bipartite = true;
  for (int root = 0; root < n && g.bipartite; ++root) {
    if (g.side[root] != 2) continue;
    g.side[root] = 0;
    std::queue<int> q;
    q.push(root);
    while (!q.empty() && g.bipartite) {
      int v = q.front();
      q.pop();
      for (int u : g.neighbors_of(v)) {
        if (g.side[u] == 2) {
          g.side[u] = 1 - g.side[v];
          q.push(u);
        } else if (g.side[u] == g.side[v]) {
          g.bipartite = false;
          break;
        }
      }
    }
  }
  if (g.bipartite) {
    long long c0 = std::count(g.side.begin(), g.side.end(), uint8_t{0});
    g.balanced_bipartition = (2 * c0 == n);
  } else {
    g.side.clear();
    g.balanced_bipartition = false;
  }
  return g;
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  auto next_token_line = [&](std::string& line) -> bool {
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
    }
    return false;
  };
  std::string line;
  if (!next_token_line(line)) throw InputError(path + ": missing header line");
  std::istringstream head(line);
  long long n = -1, m = -1;
  if (!(head >> n >> m) || n < 0 || m < 0) throw InputError(path + ": bad header, expected 'n m'");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(m);
  for (long long i = 0; i < m; ++i) {
    if (!next_token_line(line)) throw InputError(path + ": expected " + std::to_string(m) + " edges");
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u >> v)) throw InputError(path + ": bad edge line '" + line + "'");
    std::string extra;
    if (ls >> extra) throw InputError(path + ": trailing tokens on edge line '" + line + "'");
    edges.emplace_back(static_cast<int>(std::min(u, v)), static_cast<int>(std::max(u, v)));
  }
  return Graph::from_edges(static_cast<int>(n), edges);
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << g.n << " " << g.edge_count() << "\n";
  for (int u = 0; u < g.n; ++u)
    for (int v : g.neighbors_of(u))
      if (u < v) out << u << " " << v << "\n";
}

std::pair<Graph, std::vector<int>> induced_subgraph(const Graph& g, const std::vector<int>& verts) {
  std::vector<int> to_new(g.n, -1);
  std::vector<int> to_host(verts);
  std::sort(to_host.begin(), to_host.end());
  to_host.erase(std::unique(to_host.begin(), to_host.end()), to_host.end());
  for (size_t i = 0; i < to_host.size(); ++i) to_new[to_host[i]] = static_cast<int>(i);
  std::vector<std::pair<int, int>> edges;
  for (int u : to_host)
    for (int v : g.neighbors_of(u))
      if (u < v && to_new[v] >= 0) edges.emplace_back(to_new[u], to_new[v]);
  return {Graph::from_edges(static_cast<int>(to_host.size()), edges), to_host};
}

std::vector<int> components(const Graph& g) {
  std::vector<int> comp(g.n, -1);
  int c = 0;
  for (int root = 0; root < g.n; ++root) {
    if (comp[root] != -1) continue;
    comp[root] = c;
    std::vector<int> stack = {root};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : g.neighbors_of(v))
        if (comp[u] == -1) {
          comp[u] = c;
          stack.push_back(u);
        }
    }
    ++c;
  }
  return comp;
}

bool is_path_in(const Graph& g, const std::vector<int>& seq) {
  if (seq.empty()) return false;
  std::vector<uint8_t> seen(g.n, 0);
  for (int v : seq) {
    if (v < 0 || v >= g.n || seen[v]) return false;
    seen[v] = 1;
  }
  for (size_t i = 0; i + 1 < seq.size(); ++i)
    if (!g.has_edge(seq[i], seq[i + 1])) return false;
  return true;
}

}  // namespace hamexp
