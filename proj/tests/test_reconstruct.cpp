#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "densitrace/exact_oracle.hpp"
#include "densitrace/reconstruct.hpp"
#include "helpers.hpp"

using namespace densitrace;
using densitrace::testing::random_bits;

namespace {

const char* kFigureString = "000111000111000000000111";

/// Random string whose (k-1)-mers are all distinct (so the merge walk is
/// unique); rejection-samples until one shows up.
BitString random_repeat_free(SplitMix64& rng, std::size_t n, std::size_t k) {
  for (;;) {
    const BitString s = random_bits(rng, n);
    std::set<std::uint64_t> seen;
    bool ok = true;
    for (std::size_t a = 0; a + k - 1 <= s.size() && ok; ++a) {
      ok = seen.insert(s.code_at(a, k - 1)).second;
    }
    if (ok) return s;
  }
}

}  // namespace

TEST_CASE("graph construction from a deck") {
  const Deck deck = exact_deck(BitString::parse("0101"), 2);
  const DeBruijnGraph graph = build_debruijn(deck);
  CHECK(graph.nodes() == std::vector<std::uint64_t>{0, 1});
  REQUIRE(graph.edges.size() == 2);
  CHECK(graph.edges[0].kmer == 1);  // "01"
  CHECK(graph.edges[0].multiplicity == 2);
  CHECK(graph.edges[1].kmer == 2);  // "10"
  CHECK(graph.edges[1].multiplicity == 1);
  CHECK(graph.total_multiplicity() == 3);

  CHECK_THROWS_AS(build_debruijn(Deck::from_counts(2, {0, 0, 0, 0})), EmptyDeck);

  const Deck single = Deck::from_counts(2, {0, 1, 0, 0});
  CHECK(build_debruijn(single).edges.size() == 1);
}

TEST_CASE("eulerian path enumeration") {
  const Deck deck = exact_deck(BitString::parse("0101"), 2);
  const auto paths = eulerian_paths(build_debruijn(deck), 5);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].str() == "0101");
}

TEST_CASE("the figure-string deck admits several eulerian spellings") {
  const BitString s = BitString::parse(kFigureString);
  const DeBruijnGraph graph = build_debruijn(exact_deck(s, 4));

  CHECK(spells_eulerian_path(graph, s));

  const auto paths = eulerian_paths(graph, 8);
  CHECK(paths.size() >= 2);
  std::set<std::string> distinct;
  for (const auto& path : paths) {
    distinct.insert(path.str());
    CHECK(exact_deck(path, 4).counts == exact_deck(s, 4).counts);
    CHECK(spells_eulerian_path(graph, path));
  }
  CHECK(distinct.size() == paths.size());

  // lexicographic output order
  for (std::size_t i = 1; i < paths.size(); ++i) CHECK(paths[i - 1] < paths[i]);
}

TEST_CASE("disconnected multigraphs have no eulerian path") {
  Deck deck = Deck::from_counts(3, std::vector<std::int64_t>(8, 0));
  deck.counts[BitString::parse("000").code()] = 1;
  deck.counts[BitString::parse("111").code()] = 1;
  deck.raw[0] = 1.0;
  deck.raw[7] = 1.0;
  CHECK(eulerian_paths(build_debruijn(deck), 4).empty());
}

TEST_CASE("unique merge walk recovers repeat-free strings") {
  const BitString s = BitString::parse("00110");  // distinct 2-mers
  CHECK(merge_reconstruct(exact_deck(s, 3), 5) == s);

  SplitMix64 rng(101);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = 8 + (rng.next() % 33);
    const BitString t = random_repeat_free(rng, n, 8);
    CHECK(merge_reconstruct(exact_deck(t, 8), n) == t);
  }

  // single k-mer deck, n = k
  const Deck single = Deck::from_counts(2, {0, 1, 0, 0});
  CHECK(merge_reconstruct(single, 2).str() == "01");
}

TEST_CASE("merge rejects repeated (k-1)-mers") {
  const BitString fig = BitString::parse(kFigureString);
  CHECK_THROWS_AS(merge_reconstruct(exact_deck(fig, 4), fig.size()), RepeatDetected);

  // a circular walk has no unique start either
  CHECK_THROWS_AS(merge_reconstruct(exact_deck(BitString::parse("010"), 2), 3), RepeatDetected);

  // wrong target length on an otherwise clean chain
  CHECK_THROWS_AS(merge_reconstruct(exact_deck(BitString::parse("00110"), 3), 6),
                  LengthMismatch);
}

TEST_CASE("a source with repeats can still be the unique eulerian spelling") {
  // 0010111 repeats the 2-mers 01 and 11, so the merge walk refuses it, yet
  // its 3-deck graph admits exactly one Eulerian path
  const BitString s = BitString::parse("0010111");
  const Deck deck = exact_deck(s, 3);
  CHECK_THROWS_AS(merge_reconstruct(deck, 7), RepeatDetected);
  const auto paths = eulerian_paths(build_debruijn(deck), 4);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0] == s);
}

TEST_CASE("ridge inversion of an exact noiseless map recovers the source") {
  SplitMix64 rng(102);
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t n = 20 + (rng.next() % 21);
    const BitString s = random_bits(rng, n);
    const DensityMap clean = exact_density_map(s, 3, 0.0);
    CHECK(ridge_reconstruct(clean, n, 3, 0.0, 1e-8, 0.5) == s);
  }

  // noisy channel, exact map: the transform is invertible, and at small
  // lambda the vote threshold absorbs the residual ridge shrinkage
  SplitMix64 rng2(1);
  for (int rep = 0; rep < 10; ++rep) {
    const BitString s = random_bits(rng2, 30);
    const DensityMap map = exact_density_map(s, 3, 0.2);
    CHECK(ridge_reconstruct(map, 30, 3, 0.2, 1e-8, 0.5) == s);
  }
}

TEST_CASE("ridge indicators approach the occurrence indicators as lambda shrinks") {
  // F's trailing singular values are tiny, so the ridge error in their
  // directions fades only as lambda drops below sigma^2; the errors must
  // decrease monotonically between the two probed lambdas.
  SplitMix64 rng(103);
  const std::size_t n = 24;
  const BitString s = random_bits(rng, n);
  const DensityMap map = exact_density_map(s, 3, 0.2);

  auto max_indicator_error = [&](double lambda) {
    const auto indicators = ridge_indicators(map, 0.2, lambda);
    double err = 0.0;
    for (std::uint64_t code = 0; code < map.kmer_count(); ++code) {
      for (std::size_t j = 0; j < indicators[code].size(); ++j) {
        const double truth = s.code_at(j, 3) == code ? 1.0 : 0.0;
        err = std::max(err, std::fabs(indicators[code][j] - truth));
      }
    }
    return err;
  };

  const double coarse = max_indicator_error(1e-4);
  const double fine = max_indicator_error(1e-6);
  const double finest = max_indicator_error(1e-8);
  CHECK(fine < coarse);
  CHECK(finest < fine);
  CHECK(finest < 0.45);  // below the vote threshold once lambda trails sigma_min^2
}

TEST_CASE("ridge argument validation") {
  SplitMix64 rng(104);
  const BitString s = random_bits(rng, 12);
  const DensityMap map = exact_density_map(s, 3, 0.2);
  CHECK_THROWS_AS(ridge_reconstruct(map, 13, 3, 0.2, 1e-3, 0.5), ShapeMismatch);
  CHECK_THROWS_AS(ridge_reconstruct(map, 12, 3, 0.2, 0.0, 0.5), OutOfRange);
  CHECK_THROWS_AS(ridge_reconstruct(map, 12, 3, 0.2, 1e-3, 1.5), OutOfRange);
}

TEST_CASE("DOT export lists nodes and labeled edges") {
  const Deck deck = exact_deck(BitString::parse("0101"), 2);
  std::ostringstream out;
  write_dot(out, build_debruijn(deck), {"cmd=test"});
  const std::string text = out.str();
  CHECK(text.find("digraph deck {") != std::string::npos);
  CHECK(text.find("\"0\" -> \"1\" [label=\"01 x2\"];") != std::string::npos);
  CHECK(text.find("\"1\" -> \"0\" [label=\"10 x1\"];") != std::string::npos);
}
