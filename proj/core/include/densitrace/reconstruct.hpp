#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "densitrace/bitstring.hpp"
#include "densitrace/deck.hpp"
#include "densitrace/density.hpp"

namespace densitrace {

/// Multigraph with (k-1)-mer nodes and k-mer edges: edge x runs from the
/// node spelled by x's first k-1 bits to the node spelled by its last k-1
/// bits, with the deck count as multiplicity. Nodes exist only through
/// incident edges.
struct DeBruijnGraph {
  struct Edge {
    std::uint64_t kmer = 0;  // k-bit code
    std::int64_t multiplicity = 0;
  };

  std::size_t k = 0;
  std::vector<Edge> edges;  // sorted by k-mer code, positive multiplicities

  std::uint64_t node_mask() const { return (std::uint64_t{1} << (k - 1)) - 1; }
  static std::uint64_t edge_from(std::uint64_t kmer) { return kmer >> 1; }
  std::uint64_t edge_to(std::uint64_t kmer) const { return kmer & node_mask(); }

  /// Distinct incident node codes, ascending.
  std::vector<std::uint64_t> nodes() const;
  std::int64_t total_multiplicity() const;
};

/// Builds the graph from a deck's rounded counts. Throws EmptyDeck when no
/// k-mer has a positive count.
DeBruijnGraph build_debruijn(const Deck& deck);

/// Up to `limit` distinct strings spelled by Eulerian paths of the graph
/// (every edge used exactly as often as its multiplicity), in lexicographic
/// order; empty when no Eulerian path exists.
std::vector<BitString> eulerian_paths(const DeBruijnGraph& graph, std::size_t limit);

/// Whether `s` spells an Eulerian path of the graph: its k-mer walk consumes
/// every edge exactly as often as its multiplicity.
bool spells_eulerian_path(const DeBruijnGraph& graph, const BitString& s);

/// Reconstruction by prefix-suffix merging, valid when the source has no
/// repeated (k-1)-mer. Checked structurally: every node must have in- and
/// out-degree at most 1 and the walk must have a unique start
/// (RepeatDetected otherwise); the spelled string must have length n
/// (LengthMismatch otherwise).
BitString merge_reconstruct(const Deck& deck, std::size_t n);

/// Per-k-mer ridge inversion of the kernel transform: solves
/// (F^T F + lambda I) indicator = F^T density for every k-mer row.
std::vector<std::vector<double>> ridge_indicators(const DensityMap& map, double p, double lambda);

/// Full density-map reconstruction: ridge-inverts each k-mer's density
/// vector, then lets every indicator entry >= tau vote (with its value as
/// weight) for the k bits it would place; each source bit becomes the
/// weighted majority, ties resolving to 0.
BitString ridge_reconstruct(const DensityMap& map, std::size_t n, std::size_t k, double p,
                            double lambda, double tau);

/// Graphviz DOT form, node labels are (k-1)-mers, edge labels the k-mer and
/// its multiplicity.
void write_dot(std::ostream& out, const DeBruijnGraph& graph,
               const std::vector<std::string>& header = {});

}  // namespace densitrace
