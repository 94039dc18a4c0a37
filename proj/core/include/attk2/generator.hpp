#pragma once

// Seeded synthetic attributed multigraphs and matching query sets.

#include <cstdint>
#include <string>
#include <vector>

#include "attk2/model.hpp"

namespace attk2 {

/// xorshift64* (shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D), seeded
/// through one splitmix64 step so that any seed, including 0, is usable.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform in [0, n); n must be > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  /// True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

 private:
  std::uint64_t state_;
};

struct GenParams {
  std::uint64_t nodes = 1000;
  std::uint64_t edges = 5000;
  unsigned node_types = 4;
  unsigned edge_types = 5;
  unsigned attrs = 6;
  std::uint64_t seed = 1;
  std::size_t queries_per_set = 1000;
};

struct QueryScript {
  std::string name;
  std::vector<std::string> lines;
};

struct Generated {
  GraphInput graph;
  /// Query sets 1..8: node type, edge type, node attribute, edge attribute,
  /// select nodes, select edges, neighbors, related.
  std::vector<QueryScript> scripts;
};

/// Nodes get consecutive numeric external ids with labels in contiguous
/// blocks; most edges connect nearby ids, some are uniform, and some repeat
/// the previous pair. An attribute is dense iff its distinct values number at
/// most the square root of the elements that can carry it.
/// Throws InputError if a count cannot be honoured (e.g. more types than nodes).
Generated generate(const GenParams& params);

/// Query sets over an arbitrary graph description, same layout as generate().
std::vector<QueryScript> generate_queries(const GraphInput& graph, std::size_t per_set, std::uint64_t seed);

}  // namespace attk2
