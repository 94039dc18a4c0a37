#include "attk2/k2tree.hpp"

#include <algorithm>
#include <string>

#include "attk2/errors.hpp"

namespace attk2 {
namespace detail {

PaddedSide pad_side(std::uint64_t side, unsigned k) {
  if (k < 2) throw InputError("k2-tree arity must be >= 2, got " + std::to_string(k));
  // n * n must stay representable as a 64-bit leaf key.
  constexpr std::uint64_t kMaxSide = std::uint64_t{1} << 32;
  std::uint64_t n = k;
  unsigned h = 1;
  while (n < side) {
    if (n > kMaxSide / k) throw InputError("matrix side " + std::to_string(side) + " too large");
    n *= k;
    ++h;
  }
  if (n > kMaxSide - 1) throw InputError("matrix side " + std::to_string(side) + " too large");
  return {n, h};
}

}  // namespace detail

namespace {

std::string cell_text(std::uint64_t r, std::uint64_t c) {
  return "(" + std::to_string(r) + "," + std::to_string(c) + ")";
}

void check_rect_against(std::uint64_t limit, std::uint64_t r1, std::uint64_t r2, std::uint64_t c1,
                        std::uint64_t c2) {
  if (r1 > r2 || c1 > c2) {
    throw InputError("inverted rectangle rows " + std::to_string(r1) + ".." + std::to_string(r2) + " cols " +
                     std::to_string(c1) + ".." + std::to_string(c2));
  }
  if (r1 == 0 || c1 == 0 || r2 > limit || c2 > limit) {
    throw OutOfRange("rectangle rows " + std::to_string(r1) + ".." + std::to_string(r2) +
                     " cols " + std::to_string(c1) + ".." + std::to_string(c2) + " for side " +
                     std::to_string(limit));
  }
}

template <class Tree>
std::vector<Cell> collect_range(const Tree& tree, std::uint64_t r1, std::uint64_t r2, std::uint64_t c1,
                                std::uint64_t c2) {
  std::vector<Cell> out;
  tree.for_each(r1, r2, c1, c2, [&](std::uint64_t r, std::uint64_t c, std::uint64_t) {
    out.push_back({r, c});
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// K2Tree

K2Tree K2Tree::build(std::uint64_t n_logical, std::span<const Cell> cells, unsigned k) {
  if (n_logical == 0) throw InputError("k2-tree side must be >= 1");
  const auto [n, h] = detail::pad_side(n_logical, k);
  const std::uint64_t kk = std::uint64_t{k} * k;

  // Each cell becomes the base-k^2 number spelled by its root-to-leaf child
  // indices; sorting those keys yields breadth-first order at every level.
  std::vector<std::uint64_t> scale(h);  // k^(h-1-l): side of a level-l child
  scale[h - 1] = 1;
  for (unsigned l = h - 1; l-- > 0;) scale[l] = scale[l + 1] * k;
  std::vector<std::uint64_t> weight(h);  // (k^2)^(h-1-l)
  weight[h - 1] = 1;
  for (unsigned l = h - 1; l-- > 0;) weight[l] = weight[l + 1] * kk;

  std::vector<std::uint64_t> keys;
  keys.reserve(cells.size());
  for (const Cell& cell : cells) {
    if (cell.row == 0 || cell.col == 0 || cell.row > n_logical || cell.col > n_logical) {
      throw InputError("cell " + cell_text(cell.row, cell.col) + " outside 1.." + std::to_string(n_logical));
    }
    const std::uint64_t r = cell.row - 1, c = cell.col - 1;
    std::uint64_t key = 0;
    for (unsigned l = 0; l < h; ++l) {
      key += (((r / scale[l]) % k) * k + (c / scale[l]) % k) * weight[l];
    }
    keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  BitBuilder t, l;
  for (unsigned level = 0; level < h; ++level) {
    BitBuilder& out = level + 1 < h ? t : l;
    if (level == 0) {
      std::vector<bool> block(kk, false);
      for (auto key : keys) block[(key / weight[0]) % kk] = true;
      for (bool b : block) out.push_back(b);
      continue;
    }
    const std::uint64_t parent_weight = weight[level - 1];
    std::size_t i = 0;
    while (i < keys.size()) {
      const std::uint64_t prefix = keys[i] / parent_weight;
      std::vector<bool> block(kk, false);
      while (i < keys.size() && keys[i] / parent_weight == prefix) {
        block[(keys[i] / weight[level]) % kk] = true;
        ++i;
      }
      for (bool b : block) out.push_back(b);
    }
  }
  return K2Tree(k, n, h, n_logical, std::move(t).build(), std::move(l).build());
}

void K2Tree::check_cell(std::uint64_t r, std::uint64_t c) const {
  if (r == 0 || c == 0 || r > n_logical_ || c > n_logical_) {
    throw OutOfRange("cell " + cell_text(r, c) + " outside 1.." + std::to_string(n_logical_));
  }
}

void K2Tree::check_rectangle(std::uint64_t r1, std::uint64_t r2, std::uint64_t c1, std::uint64_t c2) const {
  check_rect_against(n_logical_, r1, r2, c1, c2);
}

bool K2Tree::cell(std::uint64_t r, std::uint64_t c) const {
  check_cell(r, c);
  return walker().find_leaf(r - 1, c - 1) != detail::kNoLeaf;
}

std::vector<std::uint64_t> K2Tree::row_neighbors(std::uint64_t r) const {
  check_cell(r, 1);
  std::vector<std::uint64_t> out;
  for_each(r, r, 1, n_logical_, [&](std::uint64_t, std::uint64_t c, std::uint64_t) { out.push_back(c); });
  return out;
}

std::vector<std::uint64_t> K2Tree::col_neighbors(std::uint64_t c) const {
  check_cell(1, c);
  std::vector<std::uint64_t> out;
  for_each(1, n_logical_, c, c, [&](std::uint64_t r, std::uint64_t, std::uint64_t) { out.push_back(r); });
  return out;
}

std::vector<Cell> K2Tree::range(std::uint64_t r1, std::uint64_t r2, std::uint64_t c1, std::uint64_t c2) const {
  return collect_range(*this, r1, r2, c1, c2);
}

std::uint64_t K2Tree::leaf_ordinal(std::uint64_t r, std::uint64_t c) const {
  check_cell(r, c);
  const std::size_t leaf = walker().find_leaf(r - 1, c - 1);
  if (leaf == detail::kNoLeaf) throw NotFound("cell " + cell_text(r, c) + " is empty");
  return l_.rank1(leaf + 1);
}

void K2Tree::serialize(wire::Writer& out) const {
  out.u32(k_);
  out.u64(n_);
  out.u64(n_logical_);
  t_.serialize(out);
  l_.serialize(out);
}

K2Tree K2Tree::deserialize(wire::Reader& in) {
  const std::uint32_t k = in.u32();
  const std::uint64_t n = in.u64();
  const std::uint64_t n_logical = in.u64();
  BitSequence t = BitSequence::deserialize(in);
  BitSequence l = BitSequence::deserialize(in);
  if (k < 2 || n_logical == 0) throw CorruptFile("k2-tree header invalid");
  detail::PaddedSide padded{};
  try {
    padded = detail::pad_side(n_logical, k);
  } catch (const InputError&) {
    throw CorruptFile("k2-tree side invalid");
  }
  const std::uint64_t kk = std::uint64_t{k} * k;
  if (padded.side != n) throw CorruptFile("k2-tree side does not match its arity");
  // Every level must hold exactly k^2 bits per one in the level above it.
  std::uint64_t offset = 0, level_size = kk;
  for (unsigned level = 0; level + 1 < padded.height; ++level) {
    if (offset + level_size > t.size()) throw CorruptFile("k2-tree internal levels truncated");
    const std::uint64_t ones = t.rank1(offset + level_size) - t.rank1(offset);
    offset += level_size;
    level_size = ones * kk;
  }
  if (offset != t.size() || level_size != l.size()) throw CorruptFile("k2-tree level sizes inconsistent");
  return K2Tree(k, n, padded.height, n_logical, std::move(t), std::move(l));
}

// ---------------------------------------------------------------------------
// DynK2Tree

DynK2Tree::DynK2Tree(std::uint64_t side, unsigned k) : k_(k) {
  const auto padded = detail::pad_side(std::max<std::uint64_t>(side, 1), k);
  n_ = padded.side;
  height_ = padded.height;
  const std::size_t kk = std::size_t{k} * k;
  if (height_ == 1) {
    l_ = DynBitSequence(kk, false);
  } else {
    t_ = DynBitSequence(kk, false);
  }
}

void DynK2Tree::check_cell(std::uint64_t r, std::uint64_t c) const {
  if (r == 0 || c == 0 || r > n_ || c > n_) {
    throw OutOfRange("cell " + cell_text(r, c) + " outside 1.." + std::to_string(n_));
  }
}

void DynK2Tree::check_rectangle(std::uint64_t r1, std::uint64_t r2, std::uint64_t c1, std::uint64_t c2) const {
  check_rect_against(n_, r1, r2, c1, c2);
}

bool DynK2Tree::block_is_zero(std::size_t level, std::size_t base) const {
  const std::size_t kk = std::size_t{k_} * k_;
  if (level + 1 == height_) {
    const std::size_t b = base - t_.size();
    return l_.rank1(b + kk) == l_.rank1(b);
  }
  return t_.rank1(base + kk) == t_.rank1(base);
}

bool DynK2Tree::set(std::uint64_t r, std::uint64_t c) {
  check_cell(r, c);
  --r;
  --c;
  const std::size_t kk = std::size_t{k_} * k_;
  std::size_t base = 0;
  std::uint64_t size = n_;
  for (unsigned level = 0;; ++level) {
    const std::uint64_t s = size / k_;
    const std::size_t q = base + static_cast<std::size_t>((r / s) * k_ + c / s);
    if (s == 1) {
      const std::size_t leaf = q - t_.size();
      return !l_.set(leaf + 1, true);
    }
    const bool present = t_.test(q);
    if (!present) t_.set(q + 1, true);
    const std::size_t child = t_.rank1(q + 1) * kk;
    if (!present) {
      // Materialise an all-zero child block for the new subtree.
      if (level + 2 == height_) {
        const std::size_t at = child - t_.size();
        for (std::size_t i = 0; i < kk; ++i) l_.insert(at + 1, false);
      } else {
        for (std::size_t i = 0; i < kk; ++i) t_.insert(child + 1, false);
      }
    }
    base = child;
    r %= s;
    c %= s;
    size = s;
  }
}

bool DynK2Tree::clear(std::uint64_t r, std::uint64_t c) {
  check_cell(r, c);
  --r;
  --c;
  const std::size_t kk = std::size_t{k_} * k_;
  std::vector<std::size_t> bases(height_), nodes(height_);
  std::size_t base = 0;
  std::uint64_t size = n_;
  for (unsigned level = 0; level < height_; ++level) {
    const std::uint64_t s = size / k_;
    const std::size_t q = base + static_cast<std::size_t>((r / s) * k_ + c / s);
    bases[level] = base;
    nodes[level] = q;
    const bool on = q < t_.size() ? t_.test(q) : l_.test(q - t_.size());
    if (!on) return false;
    if (s == 1) break;
    base = t_.rank1(q + 1) * kk;
    r %= s;
    c %= s;
    size = s;
  }
  l_.set(nodes[height_ - 1] - t_.size() + 1, false);
  for (std::size_t level = height_ - 1; level > 0; --level) {
    if (!block_is_zero(level, bases[level])) break;
    if (level + 1 == height_) {
      const std::size_t at = bases[level] - t_.size();
      for (std::size_t i = 0; i < kk; ++i) l_.remove(at + 1);
    } else {
      for (std::size_t i = 0; i < kk; ++i) t_.remove(bases[level] + 1);
    }
    t_.set(nodes[level - 1] + 1, false);
  }
  return true;
}

void DynK2Tree::grow() {
  const std::size_t kk = std::size_t{k_} * k_;
  if (n_ >= ((std::uint64_t{1} << 32) - 1) / k_) throw OutOfRange("dynamic k2-tree cannot grow further");
  if (count() == 0) {
    t_ = DynBitSequence(kk, false);
    l_ = DynBitSequence();
  } else {
    // New root whose top-left child is the old root.
    for (std::size_t i = 1; i < kk; ++i) t_.insert(1, false);
    t_.insert(1, true);
  }
  n_ *= k_;
  ++height_;
}

void DynK2Tree::ensure_side(std::uint64_t side) {
  while (n_ < side) grow();
}

bool DynK2Tree::cell(std::uint64_t r, std::uint64_t c) const {
  check_cell(r, c);
  return walker().find_leaf(r - 1, c - 1) != detail::kNoLeaf;
}

std::vector<std::uint64_t> DynK2Tree::row_neighbors(std::uint64_t r) const {
  check_cell(r, 1);
  std::vector<std::uint64_t> out;
  for_each(r, r, 1, n_, [&](std::uint64_t, std::uint64_t c, std::uint64_t) { out.push_back(c); });
  return out;
}

std::vector<std::uint64_t> DynK2Tree::col_neighbors(std::uint64_t c) const {
  check_cell(1, c);
  std::vector<std::uint64_t> out;
  for_each(1, n_, c, c, [&](std::uint64_t r, std::uint64_t, std::uint64_t) { out.push_back(r); });
  return out;
}

std::vector<Cell> DynK2Tree::range(std::uint64_t r1, std::uint64_t r2, std::uint64_t c1,
                                   std::uint64_t c2) const {
  return collect_range(*this, r1, r2, c1, c2);
}

std::uint64_t DynK2Tree::leaf_ordinal(std::uint64_t r, std::uint64_t c) const {
  check_cell(r, c);
  const std::size_t leaf = walker().find_leaf(r - 1, c - 1);
  if (leaf == detail::kNoLeaf) throw NotFound("cell " + cell_text(r, c) + " is empty");
  return l_.rank1(leaf + 1);
}

K2Tree DynK2Tree::freeze() const {
  std::vector<Cell> cells = range(1, n_, 1, n_);
  return K2Tree::build(n_, cells, k_);
}

}  // namespace attk2
