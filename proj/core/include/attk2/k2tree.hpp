#pragma once

// k2-trees over an n x n boolean matrix.
//
// The matrix is padded to the next power of k and recursively split into
// k^2 submatrices; child order inside a block is row-major. Levels are
// stored breadth-first: T holds every level but the last, L holds the
// single-cell leaf level. The children of a set bit at concatenated
// position q start at rank1(T, q+1) * k^2.
//
// Rows and columns are 1-based in the public API.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "attk2/bits.hpp"
#include "attk2/wire.hpp"

namespace attk2 {

struct Cell {
  std::uint64_t row = 0;
  std::uint64_t col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

namespace detail {

inline constexpr std::size_t kNoLeaf = std::numeric_limits<std::size_t>::max();

/// Read-only navigation shared by the static and dynamic trees. `Bits` must
/// provide size(), test(i) (0-based) and rank1(i).
template <class Bits>
class K2Walker {
 public:
  K2Walker(const Bits& t, const Bits& l, unsigned k, std::uint64_t n) : t_(t), l_(l), k_(k), n_(n) {}

  /// Position in L of cell (r, c) (0-based), or kNoLeaf.
  std::size_t find_leaf(std::uint64_t r, std::uint64_t c) const {
    std::size_t base = 0;
    std::uint64_t size = n_;
    while (true) {
      const std::uint64_t s = size / k_;
      const std::size_t q = base + static_cast<std::size_t>((r / s) * k_ + c / s);
      if (!bit(q)) return kNoLeaf;
      if (s == 1) return q - t_.size();
      base = children(q);
      r %= s;
      c %= s;
      size = s;
    }
  }

  /// Calls f(row, col, leaf_position) for every 1-cell in the inclusive
  /// 0-based rectangle, in depth-first row-major child order. Single-row and
  /// single-column rectangles are therefore reported in ascending order.
  template <class F>
  void visit(std::uint64_t r1, std::uint64_t r2, std::uint64_t c1, std::uint64_t c2, F&& f) const {
    if (c1 == c2) {
      visit_line(true, c1, r1, r2, [&](std::uint64_t r, std::size_t leaf) { f(r, c1, leaf); });
    } else if (r1 == r2) {
      visit_line(false, r1, c1, c2, [&](std::uint64_t c, std::size_t leaf) { f(r1, c, leaf); });
    } else {
      visit_node(0, n_, 0, 0, r1, r2, c1, c2, f);
    }
  }

 private:
  bool bit(std::size_t q) const { return q < t_.size() ? t_.test(q) : l_.test(q - t_.size()); }
  std::size_t children(std::size_t q) const { return t_.rank1(q + 1) * k_ * k_; }

  // Level-order walk of one row (column == false) or one column, restricted
  // to [lo, hi] along the other axis. Frontier entries are (first position
  // of the child block, origin along the free axis) and stay sorted, so
  // results come out ascending.
  template <class F>
  void visit_line(bool column, std::uint64_t fixed, std::uint64_t lo, std::uint64_t hi, F&& f) const {
    std::vector<std::pair<std::size_t, std::uint64_t>> cur{{0, 0}}, next;
    const unsigned kk = k_ * k_;
    std::uint64_t size = n_;
    while (!cur.empty()) {
      const std::uint64_t s = size / k_;
      const unsigned fixed_child = static_cast<unsigned>((fixed / s) % k_);
      std::uint64_t line = 0;
      for (unsigned a = 0; a < k_; ++a) line |= std::uint64_t{1} << (column ? a * k_ + fixed_child : fixed_child * k_ + a);
      next.clear();
      next.reserve(cur.size() * 2);
      auto take = [&](std::size_t q, std::uint64_t origin, std::uint64_t a) {
        if (s == 1) {
          f(origin + a, q - t_.size());
        } else {
          next.emplace_back(children(q), origin + a * s);
        }
      };
      for (const auto& [base, origin] : cur) {
        const std::uint64_t a_lo = lo > origin ? (lo - origin) / s : 0;
        const std::uint64_t a_hi = hi >= origin + size - 1 ? k_ - 1 : (hi - origin) / s;
        if constexpr (requires(const Bits& b) { b.bits(std::size_t{0}, 1u); }) {
          if (kk <= 64) {
            // A child block never straddles T and L, so one read covers it.
            std::uint64_t m =
                (base < t_.size() ? t_.bits(base, kk) : l_.bits(base - t_.size(), kk)) & line;
            while (m) {
              const unsigned p = static_cast<unsigned>(std::countr_zero(m));
              m &= m - 1;
              const std::uint64_t a = column ? p / k_ : p % k_;
              if (a >= a_lo && a <= a_hi) take(base + p, origin, a);
            }
            continue;
          }
        }
        for (std::uint64_t a = a_lo; a <= a_hi; ++a) {
          const std::size_t q = base + static_cast<std::size_t>(column ? a * k_ + fixed_child : fixed_child * k_ + a);
          if (bit(q)) take(q, origin, a);
        }
      }
      cur.swap(next);
      size = s;
    }
  }

  template <class F>
  void visit_node(std::size_t base, std::uint64_t size, std::uint64_t r0, std::uint64_t c0,
                  std::uint64_t r1, std::uint64_t r2, std::uint64_t c1, std::uint64_t c2, F& f) const {
    const std::uint64_t s = size / k_;
    const std::uint64_t i_lo = (r1 > r0 ? r1 - r0 : 0) / s;
    const std::uint64_t i_hi = (std::min(r2, r0 + size - 1) - r0) / s;
    const std::uint64_t j_lo = (c1 > c0 ? c1 - c0 : 0) / s;
    const std::uint64_t j_hi = (std::min(c2, c0 + size - 1) - c0) / s;
    for (std::uint64_t i = i_lo; i <= i_hi; ++i) {
      for (std::uint64_t j = j_lo; j <= j_hi; ++j) {
        const std::size_t q = base + static_cast<std::size_t>(i * k_ + j);
        if (!bit(q)) continue;
        if (s == 1) {
          f(r0 + i, c0 + j, q - t_.size());
        } else {
          visit_node(children(q), s, r0 + i * s, c0 + j * s, r1, r2, c1, c2, f);
        }
      }
    }
  }

  const Bits& t_;
  const Bits& l_;
  unsigned k_;
  std::uint64_t n_;
};

/// Smallest power of k that is >= max(side, k), with its exponent.
struct PaddedSide {
  std::uint64_t side;
  unsigned height;
};
PaddedSide pad_side(std::uint64_t side, unsigned k);

}  // namespace detail

/// Static k2-tree with rank support on both T and L.
class K2Tree {
 public:
  /// An empty 1x1 matrix with k = 2.
  K2Tree() : K2Tree(build(1, {}, 2)) {}

  /// Builds from 1-based cells. Throws InputError for k < 2 or out-of-range
  /// cells; duplicates are merged.
  static K2Tree build(std::uint64_t n_logical, std::span<const Cell> cells, unsigned k = 2);

  unsigned k() const { return k_; }
  /// Padded side (a power of k).
  std::uint64_t side() const { return n_; }
  std::uint64_t logical_side() const { return n_logical_; }
  unsigned height() const { return height_; }
  /// Number of 1-cells.
  std::size_t count() const { return l_.ones(); }

  const BitSequence& tree_bits() const { return t_; }
  const BitSequence& leaf_bits() const { return l_; }

  bool cell(std::uint64_t r, std::uint64_t c) const;
  std::vector<std::uint64_t> row_neighbors(std::uint64_t r) const;
  std::vector<std::uint64_t> col_neighbors(std::uint64_t c) const;
  /// Every 1-cell inside the inclusive rectangle, lexicographic (row, col).
  std::vector<Cell> range(std::uint64_t r1, std::uint64_t r2, std::uint64_t c1, std::uint64_t c2) const;
  /// j such that (r, c)'s leaf bit is the j-th one of L. Throws NotFound on a 0-cell.
  std::uint64_t leaf_ordinal(std::uint64_t r, std::uint64_t c) const;

  /// Visits 1-cells of a validated 1-based rectangle as f(row, col, leaf_ordinal),
  /// all 1-based, in traversal order (ascending for a single row or column).
  template <class F>
  void for_each(std::uint64_t r1, std::uint64_t r2, std::uint64_t c1, std::uint64_t c2, F&& f) const {
    check_rectangle(r1, r2, c1, c2);
    walker().visit(r1 - 1, r2 - 1, c1 - 1, c2 - 1, [&](std::uint64_t r, std::uint64_t c, std::size_t leaf) {
      f(r + 1, c + 1, static_cast<std::uint64_t>(l_.rank1(leaf + 1)));
    });
  }

  std::size_t size_in_bytes() const { return t_.size_in_bytes() + l_.size_in_bytes(); }

  /// Wire form: k (u32), n (u64), n_logical (u64), T, L.
  void serialize(wire::Writer& out) const;
  static K2Tree deserialize(wire::Reader& in);

  friend bool operator==(const K2Tree& a, const K2Tree& b) {
    return a.k_ == b.k_ && a.n_ == b.n_ && a.n_logical_ == b.n_logical_ && a.t_ == b.t_ && a.l_ == b.l_;
  }

 private:
  K2Tree(unsigned k, std::uint64_t n, unsigned height, std::uint64_t n_logical, BitSequence t, BitSequence l)
      : k_(k), n_(n), height_(height), n_logical_(n_logical), t_(std::move(t)), l_(std::move(l)) {}

  detail::K2Walker<BitSequence> walker() const { return {t_, l_, k_, n_}; }
  void check_cell(std::uint64_t r, std::uint64_t c) const;
  void check_rectangle(std::uint64_t r1, std::uint64_t r2, std::uint64_t c1, std::uint64_t c2) const;

  unsigned k_;
  std::uint64_t n_;
  unsigned height_;
  std::uint64_t n_logical_;
  BitSequence t_;
  BitSequence l_;
};

/// k2-tree over dynamic bitmaps. Cells can be set and cleared anywhere
/// inside the current side; the side itself only grows, by a factor of k,
/// with the old matrix kept as the top-left submatrix.
class DynK2Tree {
 public:
  /// Empty matrix whose side is the smallest power of k >= max(side, k).
  explicit DynK2Tree(std::uint64_t side = 1, unsigned k = 2);

  unsigned k() const { return k_; }
  std::uint64_t side() const { return n_; }
  unsigned height() const { return height_; }
  std::size_t count() const { return l_.ones(); }

  /// Sets (r, c); returns false if it was already set.
  bool set(std::uint64_t r, std::uint64_t c);
  /// Clears (r, c); returns false ("was absent") if it was not set. Blocks
  /// that become all-zero are removed and their parent bits cleared.
  bool clear(std::uint64_t r, std::uint64_t c);
  /// Multiplies the side by k.
  void grow();
  /// Grows until side() >= side.
  void ensure_side(std::uint64_t side);

  bool cell(std::uint64_t r, std::uint64_t c) const;
  std::vector<std::uint64_t> row_neighbors(std::uint64_t r) const;
  std::vector<std::uint64_t> col_neighbors(std::uint64_t c) const;
  std::vector<Cell> range(std::uint64_t r1, std::uint64_t r2, std::uint64_t c1, std::uint64_t c2) const;
  std::uint64_t leaf_ordinal(std::uint64_t r, std::uint64_t c) const;

  template <class F>
  void for_each(std::uint64_t r1, std::uint64_t r2, std::uint64_t c1, std::uint64_t c2, F&& f) const {
    check_rectangle(r1, r2, c1, c2);
    walker().visit(r1 - 1, r2 - 1, c1 - 1, c2 - 1, [&](std::uint64_t r, std::uint64_t c, std::size_t leaf) {
      f(r + 1, c + 1, static_cast<std::uint64_t>(l_.rank1(leaf + 1)));
    });
  }

  std::string tree_string() const { return t_.to_string(); }
  std::string leaf_string() const { return l_.to_string(); }

  /// Static copy with logical side = side().
  K2Tree freeze() const;
  std::size_t size_in_bytes() const { return t_.size_in_bytes() + l_.size_in_bytes(); }

 private:
  detail::K2Walker<DynBitSequence> walker() const { return {t_, l_, k_, n_}; }
  void check_cell(std::uint64_t r, std::uint64_t c) const;
  void check_rectangle(std::uint64_t r1, std::uint64_t r2, std::uint64_t c1, std::uint64_t c2) const;
  bool block_is_zero(std::size_t level, std::size_t base) const;

  unsigned k_;
  std::uint64_t n_;
  unsigned height_;
  DynBitSequence t_;
  DynBitSequence l_;
};

}  // namespace attk2
