#include "densitrace/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "densitrace/channel.hpp"
#include "densitrace/linalg.hpp"
#include "densitrace/parallel.hpp"

namespace densitrace {

namespace {

struct DegreeTable {
  std::vector<std::int64_t> out;  // indexed by node code
  std::vector<std::int64_t> in;
};

DegreeTable degrees(const DeBruijnGraph& graph) {
  DegreeTable t;
  const std::size_t node_count = std::size_t{1} << (graph.k - 1);
  t.out.assign(node_count, 0);
  t.in.assign(node_count, 0);
  for (const auto& e : graph.edges) {
    t.out[DeBruijnGraph::edge_from(e.kmer)] += e.multiplicity;
    t.in[graph.edge_to(e.kmer)] += e.multiplicity;
  }
  return t;
}

/// Depth-first enumeration over remaining edge multiplicities. At node v the
/// only possible out-edges are the k-mers (v<<1)|0 and (v<<1)|1, so trying
/// bit 0 before bit 1 emits spellings in lexicographic order.
struct PathEnumerator {
  const DeBruijnGraph& graph;
  std::vector<std::int64_t> remaining;  // by k-mer code
  std::int64_t edges_left = 0;
  std::size_t limit;
  std::vector<int> spelled;
  std::vector<BitString>& out;

  PathEnumerator(const DeBruijnGraph& g, std::size_t lim, std::vector<BitString>& sink)
      : graph(g), limit(lim), out(sink) {
    remaining.assign(std::size_t{1} << g.k, 0);
    for (const auto& e : g.edges) {
      remaining[e.kmer] = e.multiplicity;
      edges_left += e.multiplicity;
    }
  }

  bool full() const { return out.size() >= limit; }

  void emit(std::uint64_t start_node) {
    BitString s;
    s.reserve(graph.k - 1 + spelled.size());
    for (std::size_t b = 0; b < graph.k - 1; ++b) {
      s.push_back(static_cast<int>((start_node >> (graph.k - 2 - b)) & 1u));
    }
    for (int bit : spelled) s.push_back(bit);
    out.push_back(std::move(s));
  }

  void dfs(std::uint64_t node, std::uint64_t start_node) {
    if (full()) return;
    if (edges_left == 0) {
      emit(start_node);
      return;
    }
    for (int bit = 0; bit <= 1; ++bit) {
      const std::uint64_t e = (node << 1) | static_cast<std::uint64_t>(bit);
      if (remaining[e] == 0) continue;
      --remaining[e];
      --edges_left;
      spelled.push_back(bit);
      dfs(e & graph.node_mask(), start_node);
      spelled.pop_back();
      ++remaining[e];
      ++edges_left;
      if (full()) return;
    }
  }
};

}  // namespace

std::vector<std::uint64_t> DeBruijnGraph::nodes() const {
  std::vector<std::uint64_t> out;
  for (const auto& e : edges) {
    out.push_back(edge_from(e.kmer));
    out.push_back(edge_to(e.kmer));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::int64_t DeBruijnGraph::total_multiplicity() const {
  std::int64_t sum = 0;
  for (const auto& e : edges) sum += e.multiplicity;
  return sum;
}

DeBruijnGraph build_debruijn(const Deck& deck) {
  DeBruijnGraph graph;
  graph.k = deck.k;
  for (std::uint64_t code = 0; code < deck.kmer_count(); ++code) {
    if (deck.counts[code] > 0) {
      graph.edges.push_back({code, deck.counts[code]});
    }
  }
  if (graph.edges.empty()) throw EmptyDeck("deck has no positive counts");
  return graph;
}

std::vector<BitString> eulerian_paths(const DeBruijnGraph& graph, std::size_t limit) {
  std::vector<BitString> out;
  if (limit < 1) throw OutOfRange("eulerian_paths requires limit >= 1");

  const DegreeTable deg = degrees(graph);
  std::uint64_t forced_start = 0;
  bool have_forced_start = false;
  std::size_t plus_one = 0, minus_one = 0;
  for (std::size_t v = 0; v < deg.out.size(); ++v) {
    const std::int64_t balance = deg.out[v] - deg.in[v];
    if (balance == 0) continue;
    if (balance == 1) {
      ++plus_one;
      forced_start = v;
      have_forced_start = true;
    } else if (balance == -1) {
      ++minus_one;
    } else {
      return out;  // no Eulerian path can exist
    }
  }
  if (!(plus_one == 0 && minus_one == 0) && !(plus_one == 1 && minus_one == 1)) {
    return out;
  }

  PathEnumerator enumerator(graph, limit, out);
  if (have_forced_start) {
    enumerator.dfs(forced_start, forced_start);
  } else {
    // balanced graph: any node with outgoing edges can start a circuit
    for (std::uint64_t v : graph.nodes()) {
      if (deg.out[v] == 0) continue;
      enumerator.dfs(v, v);
      if (enumerator.full()) break;
    }
  }
  return out;
}

bool spells_eulerian_path(const DeBruijnGraph& graph, const BitString& s) {
  if (s.size() < graph.k) return false;
  std::vector<std::int64_t> remaining(std::size_t{1} << graph.k, 0);
  std::int64_t edges_left = 0;
  for (const auto& e : graph.edges) {
    remaining[e.kmer] = e.multiplicity;
    edges_left += e.multiplicity;
  }
  for (std::size_t a = 0; a + graph.k <= s.size(); ++a) {
    const std::uint64_t code = s.code_at(a, graph.k);
    if (remaining[code] == 0) return false;
    --remaining[code];
    --edges_left;
  }
  return edges_left == 0;
}

BitString merge_reconstruct(const Deck& deck, std::size_t n) {
  const DeBruijnGraph graph = build_debruijn(deck);
  const DegreeTable deg = degrees(graph);

  std::size_t starts = 0, ends = 0;
  std::uint64_t start_node = 0;
  for (std::size_t v = 0; v < deg.out.size(); ++v) {
    if (deg.out[v] > 1 || deg.in[v] > 1) {
      throw RepeatDetected("a (k-1)-mer occurs more than once in the implied source");
    }
    const std::int64_t balance = deg.out[v] - deg.in[v];
    if (balance == 1) {
      start_node = v;
      ++starts;
    } else if (balance == -1) {
      ++ends;
    }
  }
  if (starts != 1 || ends != 1) {
    // covers circuits (first (k-1)-mer equals the last) and split chains
    throw RepeatDetected("deck does not admit a unique merge walk");
  }

  BitString s;
  s.reserve(n);
  for (std::size_t b = 0; b < graph.k - 1; ++b) {
    s.push_back(static_cast<int>((start_node >> (graph.k - 2 - b)) & 1u));
  }
  std::vector<std::int64_t> remaining(std::size_t{1} << graph.k, 0);
  for (const auto& e : graph.edges) remaining[e.kmer] = e.multiplicity;
  std::uint64_t node = start_node;
  for (;;) {
    const std::uint64_t e0 = node << 1;
    std::uint64_t next;
    if (remaining[e0] > 0) {
      next = e0;
    } else if (remaining[e0 | 1] > 0) {
      next = e0 | 1;
    } else {
      break;
    }
    --remaining[next];
    s.push_back(static_cast<int>(next & 1u));
    node = next & graph.node_mask();
  }
  for (auto count : remaining) {
    if (count != 0) throw RepeatDetected("deck walk did not cover every k-mer");
  }
  if (s.size() != n) {
    throw LengthMismatch("merged string has length " + std::to_string(s.size()) +
                         ", expected " + std::to_string(n));
  }
  return s;
}

std::vector<std::vector<double>> ridge_indicators(const DensityMap& map, double p,
                                                  double lambda) {
  if (!(lambda > 0.0)) throw OutOfRange("ridge requires lambda > 0");
  const Matrix f = kernel_matrix(map.n(), map.k(), p);
  Matrix normal = f.gram();
  for (std::size_t i = 0; i < normal.rows(); ++i) normal.at(i, i) += lambda;
  const Matrix chol = cholesky_factor(std::move(normal));

  std::vector<std::vector<double>> indicators(map.kmer_count());
  parallel_for_index(map.kmer_count(), [&](std::size_t code) {
    const auto row = map.row(code);
    std::vector<double> rhs = f.transpose_multiply(std::vector<double>(row.begin(), row.end()));
    indicators[code] = cholesky_solve_factored(chol, std::move(rhs));
  });
  return indicators;
}

BitString ridge_reconstruct(const DensityMap& map, std::size_t n, std::size_t k, double p,
                            double lambda, double tau) {
  if (map.k() != k || map.n() != n) throw ShapeMismatch("density map shape mismatch");
  if (!(tau > 0.0) || tau >= 1.0) throw OutOfRange("ridge requires tau in (0, 1)");
  const auto indicators = ridge_indicators(map, p, lambda);

  std::vector<double> zero_weight(n, 0.0), one_weight(n, 0.0);
  for (std::uint64_t code = 0; code < map.kmer_count(); ++code) {
    const auto& ind = indicators[code];
    for (std::size_t j = 0; j < ind.size(); ++j) {
      const double vote = ind[j];
      if (vote < tau) continue;
      for (std::size_t r = 0; r < k; ++r) {
        const int bit = static_cast<int>((code >> (k - 1 - r)) & 1u);
        (bit ? one_weight : zero_weight)[j + r] += vote;
      }
    }
  }
  BitString s;
  s.reserve(n);
  for (std::size_t b = 0; b < n; ++b) {
    s.push_back(one_weight[b] > zero_weight[b] ? 1 : 0);
  }
  return s;
}

void write_dot(std::ostream& out, const DeBruijnGraph& graph,
               const std::vector<std::string>& header) {
  for (const auto& line : header) out << "# " << line << '\n';  // graphviz skips # lines
  out << "digraph deck {\n";
  for (std::uint64_t v : graph.nodes()) {
    out << "  \"" << BitString::from_code(v, graph.k - 1).str() << "\";\n";
  }
  for (const auto& e : graph.edges) {
    out << "  \"" << BitString::from_code(DeBruijnGraph::edge_from(e.kmer), graph.k - 1).str()
        << "\" -> \"" << BitString::from_code(graph.edge_to(e.kmer), graph.k - 1).str()
        << "\" [label=\"" << BitString::from_code(e.kmer, graph.k).str() << " x"
        << e.multiplicity << "\"];\n";
  }
  out << "}\n";
}

}  // namespace densitrace
