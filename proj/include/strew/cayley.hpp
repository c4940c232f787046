#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strew/errors.hpp"
#include "strew/io.hpp"
#include "strew/rewrite.hpp"
#include "strew/system.hpp"

namespace strew {

struct CayleyEdge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  Letter label;
  friend bool operator==(const CayleyEdge&, const CayleyEdge&) = default;
  friend bool operator<(const CayleyEdge& a, const CayleyEdge& b) {
    if (a.from != b.from) return a.from < b.from;
    if (a.to != b.to) return a.to < b.to;
    return a.label < b.label;
  }
};

/// Radius-bounded portion of the directed Cayley graph: vertices are the
/// irreducible words of length <= radius, rooted at the empty word, with an
/// edge (g, nf(g x), x) whenever the product stays inside the radius.
class CayleyBall {
 public:
  std::size_t radius = 0;
  std::vector<Word> vertices;           // BFS discovery order; [0] is empty
  std::map<Word, std::uint32_t> index;  // word -> vertex id
  std::vector<CayleyEdge> edges;        // sorted by (from, to, label)
  std::vector<std::vector<CayleyEdge>> out;  // adjacency grouped by `from`
  bool has_loops = false;
  bool has_multi_edges = false;

  std::optional<std::uint32_t> find(const Word& w) const {
    auto it = index.find(w);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

inline CayleyBall build_ball(const RewritingSystem& sys, std::size_t radius,
                             std::size_t size_cap = 1'000'000) {
  CayleyBall ball;
  ball.radius = radius;
  ball.vertices.push_back(Word{});
  ball.index.emplace(Word{}, 0);
  for (std::size_t qi = 0; qi < ball.vertices.size(); ++qi) {
    const Word g = ball.vertices[qi];  // copy: the vector reallocates
    for (std::size_t c = 0; c < sys.alphabet().size(); ++c) {
      Letter x = sys.alphabet().letter(c);
      Word h = normal_form(sys, g + x);
      if (h.size() > radius) continue;
      auto it = ball.index.find(h);
      std::uint32_t id;
      if (it == ball.index.end()) {
        if (ball.vertices.size() >= size_cap) throw SizeBudgetError(size_cap);
        id = static_cast<std::uint32_t>(ball.vertices.size());
        ball.index.emplace(h, id);
        ball.vertices.push_back(std::move(h));
      } else {
        id = it->second;
      }
      ball.edges.push_back({static_cast<std::uint32_t>(qi), id, x});
    }
  }
  std::sort(ball.edges.begin(), ball.edges.end());
  ball.out.resize(ball.vertices.size());
  for (std::size_t i = 0; i < ball.edges.size(); ++i) {
    const CayleyEdge& e = ball.edges[i];
    if (e.from == e.to) ball.has_loops = true;
    if (i && ball.edges[i - 1].from == e.from && ball.edges[i - 1].to == e.to)
      ball.has_multi_edges = true;
    ball.out[e.from].push_back(e);
  }
  return ball;
}

struct Dipath {
  std::vector<Word> vertices;  // size = labels.size() + 1
  std::vector<Letter> labels;
};

namespace detail {

struct GeodesicSearch {
  std::vector<std::uint32_t> dist;
  std::vector<std::uint32_t> path_count;  // saturated at 2
  std::vector<CayleyEdge> pred;           // one predecessor edge per vertex
  static constexpr std::uint32_t kInf = 0xffffffff;
};

inline GeodesicSearch bfs_paths(const CayleyBall& ball, std::uint32_t from) {
  GeodesicSearch s;
  s.dist.assign(ball.vertices.size(), GeodesicSearch::kInf);
  s.path_count.assign(ball.vertices.size(), 0);
  s.pred.resize(ball.vertices.size());
  s.dist[from] = 0;
  s.path_count[from] = 1;
  std::vector<std::uint32_t> queue{from};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::uint32_t v = queue[qi];
    for (const CayleyEdge& e : ball.out[v]) {
      if (s.dist[e.to] == GeodesicSearch::kInf) {
        s.dist[e.to] = s.dist[v] + 1;
        s.path_count[e.to] = s.path_count[v];
        s.pred[e.to] = e;
        queue.push_back(e.to);
      } else if (s.dist[e.to] == s.dist[v] + 1) {
        s.path_count[e.to] =
            std::min<std::uint32_t>(2, s.path_count[e.to] + s.path_count[v]);
      }
    }
  }
  return s;
}

}  // namespace detail

/// The unique geodesic dipath from g to h. Uniqueness is asserted by
/// exhaustive shortest-path counting; more than one shortest path raises
/// LemmaViolationError (a test hook that must never fire on a valid
/// system). The conservative guard max(|g|,|h|) + d <= radius ensures
/// every shortest path of the full graph lies inside the ball.
inline Dipath geodesic(const CayleyBall& ball, const Word& g, const Word& h) {
  auto gid = ball.find(g);
  auto hid = ball.find(h);
  if (!gid || !hid) throw OutOfBallError("geodesic endpoint not in ball");
  auto s = detail::bfs_paths(ball, *gid);
  if (s.dist[*hid] == detail::GeodesicSearch::kInf)
    throw OutOfBallError("target not reachable within ball");
  std::size_t d = s.dist[*hid];
  if (std::max(g.size(), h.size()) + d > ball.radius)
    throw OutOfBallError("geodesic may leave ball; grow the radius");
  if (s.path_count[*hid] > 1)
    throw LemmaViolationError("multiple geodesic dipaths between " +
                              std::to_string(*gid) + " and " +
                              std::to_string(*hid));
  Dipath path;
  std::vector<CayleyEdge> rev;
  for (std::uint32_t v = *hid; v != *gid;) {
    rev.push_back(s.pred[v]);
    v = s.pred[v].from;
  }
  path.vertices.push_back(ball.vertices[*gid]);
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
    path.labels.push_back(it->label);
    path.vertices.push_back(ball.vertices[it->to]);
  }
  return path;
}

struct ConfinementReport {
  std::size_t paths_checked = 0;
  bool ok = true;
  std::vector<Word> geodesic_vertices;
  std::optional<std::vector<Word>> violating_path;
};

/// Enumerate every dipath from g to h of length <= max_len that stays in
/// the ball and assert that each one passes through all vertices of the
/// (unique) geodesic, in order.
inline ConfinementReport check_path_confinement(
    const CayleyBall& ball, const Word& g, const Word& h, std::size_t max_len,
    std::size_t step_budget = 50'000'000) {
  if (g == h) throw PreconditionError("distinct vertices");
  Dipath geo = geodesic(ball, g, h);
  std::vector<std::uint32_t> geo_ids;
  for (const Word& w : geo.vertices) geo_ids.push_back(*ball.find(w));

  ConfinementReport report;
  report.geodesic_vertices = geo.vertices;
  std::uint32_t gid = geo_ids.front();
  std::uint32_t hid = geo_ids.back();

  std::vector<std::uint32_t> walk{gid};
  std::size_t steps = 0;
  // DFS over labeled walks; geo_idx greedily matches the geodesic sequence.
  auto dfs = [&](auto&& self, std::uint32_t v, std::size_t depth,
                 std::size_t geo_idx) -> bool {
    if (geo_idx < geo_ids.size() && v == geo_ids[geo_idx]) ++geo_idx;
    if (v == hid && depth > 0) {
      ++report.paths_checked;
      if (geo_idx != geo_ids.size()) {
        report.ok = false;
        std::vector<Word> path;
        for (std::uint32_t id : walk) path.push_back(ball.vertices[id]);
        report.violating_path = std::move(path);
        return false;
      }
    }
    if (depth == max_len) return true;
    for (const CayleyEdge& e : ball.out[v]) {
      if (++steps > step_budget)
        throw BudgetExceededError("path enumeration budget exhausted");
      walk.push_back(e.to);
      bool keep_going = self(self, e.to, depth + 1, geo_idx);
      walk.pop_back();
      if (!keep_going) return false;
    }
    return true;
  };
  dfs(dfs, gid, 0, 0);
  return report;
}

struct SingleEdgeReport {
  std::size_t pairs_checked = 0;
  std::size_t pairs_with_two_disjoint = 0;
  bool ok = true;
  std::optional<std::pair<Word, Word>> violation;
};

namespace detail {

// Max number of internally vertex-disjoint dipaths from s to t (capped at
// 2): unit vertex capacities via node splitting, BFS augmentation.
inline std::size_t disjoint_dipaths(const CayleyBall& ball, std::uint32_t s,
                                    std::uint32_t t) {
  const std::size_t n = ball.vertices.size();
  // Node v splits into v_in = 2v, v_out = 2v+1.
  struct FlowEdge {
    std::uint32_t to;
    std::int32_t cap;
    std::size_t rev;
  };
  std::vector<std::vector<FlowEdge>> adj(2 * n);
  auto add_edge = [&](std::uint32_t a, std::uint32_t b, std::int32_t cap) {
    adj[a].push_back({b, cap, adj[b].size()});
    adj[b].push_back({a, 0, adj[a].size() - 1});
  };
  for (std::uint32_t v = 0; v < n; ++v)
    add_edge(2 * v, 2 * v + 1, (v == s || v == t) ? 4 : 1);
  for (const CayleyEdge& e : ball.edges)
    add_edge(2 * e.from + 1, 2 * e.to, 1);

  std::size_t flow = 0;
  while (flow < 2) {
    std::vector<std::int32_t> pre_edge(2 * n, -1);
    std::vector<std::uint32_t> pre_node(2 * n, 0);
    std::vector<char> seen(2 * n, 0);
    std::vector<std::uint32_t> queue{2 * s + 1};
    seen[2 * s + 1] = 1;
    bool reached = false;
    for (std::size_t qi = 0; qi < queue.size() && !reached; ++qi) {
      std::uint32_t v = queue[qi];
      for (std::size_t i = 0; i < adj[v].size(); ++i) {
        const FlowEdge& fe = adj[v][i];
        if (fe.cap <= 0 || seen[fe.to]) continue;
        seen[fe.to] = 1;
        pre_edge[fe.to] = static_cast<std::int32_t>(i);
        pre_node[fe.to] = v;
        if (fe.to == 2 * t) {
          reached = true;
          break;
        }
        queue.push_back(fe.to);
      }
    }
    if (!reached) break;
    for (std::uint32_t v = 2 * t; v != 2 * s + 1; v = pre_node[v]) {
      FlowEdge& fe = adj[pre_node[v]][static_cast<std::size_t>(pre_edge[v])];
      fe.cap -= 1;
      adj[fe.to][fe.rev].cap += 1;
    }
    ++flow;
  }
  return flow;
}

}  // namespace detail

/// For every ordered vertex pair (g, h) joined by two internally disjoint
/// dipaths inside the ball, assert that a single directed edge g -> h
/// exists.
inline SingleEdgeReport check_single_edge(const CayleyBall& ball) {
  SingleEdgeReport report;
  const std::size_t n = ball.vertices.size();
  std::vector<std::size_t> outdeg(n, 0), indeg(n, 0);
  for (const CayleyEdge& e : ball.edges) {
    ++outdeg[e.from];
    ++indeg[e.to];
  }
  for (std::uint32_t g = 0; g < n; ++g) {
    if (outdeg[g] < 2) continue;  // two disjoint paths need two first edges
    for (std::uint32_t h = 0; h < n; ++h) {
      if (g == h || indeg[h] < 2) continue;
      ++report.pairs_checked;
      if (detail::disjoint_dipaths(ball, g, h) < 2) continue;
      ++report.pairs_with_two_disjoint;
      bool edge = std::any_of(ball.out[g].begin(), ball.out[g].end(),
                              [&](const CayleyEdge& e) { return e.to == h; });
      if (!edge) {
        report.ok = false;
        if (!report.violation)
          report.violation = {ball.vertices[g], ball.vertices[h]};
      }
    }
  }
  return report;
}

struct MultiplicationTable {
  std::vector<Word> elements;  // shortlex order
  std::vector<std::vector<Word>> product;
};

/// product[i][j] = nf(elements[i] + elements[j]) for all normal forms of
/// length <= max_len; every product must land inside the ball.
inline MultiplicationTable multiplication_table(const CayleyBall& ball,
                                                const RewritingSystem& sys,
                                                std::size_t max_len) {
  MultiplicationTable table;
  for (const auto& [w, id] : ball.index)
    if (w.size() <= max_len) table.elements.push_back(w);
  table.product.resize(table.elements.size());
  for (std::size_t i = 0; i < table.elements.size(); ++i) {
    for (std::size_t j = 0; j < table.elements.size(); ++j) {
      Word p = normal_form(sys, table.elements[i] + table.elements[j]);
      if (p.size() > ball.radius)
        throw OutOfBallError("product leaves the ball; grow the radius");
      table.product[i].push_back(std::move(p));
    }
  }
  return table;
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

/// Deterministic DOT rendering: one node line per vertex in BFS discovery
/// order, one edge line per edge in (from, to, label) order. Byte-identical
/// across runs for a fixed ball.
inline std::string export_dot(const CayleyBall& ball, const Alphabet& alphabet) {
  auto name = [&](std::uint32_t v) {
    const Word& w = ball.vertices[v];
    return w.empty() ? std::string("1")
                     : detail::dot_escape(render_word(alphabet, w));
  };
  std::string out = "digraph cayley {\n";
  for (std::uint32_t v = 0; v < ball.vertices.size(); ++v)
    out += "  \"" + name(v) + "\";\n";
  for (const CayleyEdge& e : ball.edges)
    out += "  \"" + name(e.from) + "\" -> \"" + name(e.to) + "\" [label=\"" +
           detail::dot_escape(alphabet.display(e.label)) + "\"];\n";
  out += "}\n";
  return out;
}

}  // namespace strew
