#pragma once

// Succinct bit sequences with rank/select, a dynamic bit sequence with
// positional insert/remove, a dynamic symbol sequence (wavelet matrix over
// dynamic bitmaps), and a fixed-width packed integer array.
//
// Public positions and ordinals are 1-based: rank1(i) counts ones in
// positions 1..i, select1(j) returns the position of the j-th one. The only
// 0-based accessor is test(i), the unchecked hot-path read used by the
// k2-tree navigation.

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "attk2/wire.hpp"

namespace attk2 {

/// Immutable bit array with a sampled rank directory.
///
/// One cumulative popcount is kept per 512-bit superblock plus a 16-bit
/// in-superblock count per word; rank is two directory reads and one
/// popcount, select is a binary search over the superblocks followed by an
/// in-superblock scan.
class BitSequence {
 public:
  BitSequence() = default;
  /// Parses a string of '0'/'1' characters (spaces are ignored).
  explicit BitSequence(std::string_view bits);
  /// Takes ownership of packed words; bits beyond `n_bits` are cleared.
  BitSequence(std::vector<std::uint64_t> words, std::size_t n_bits);

  std::size_t size() const { return n_bits_; }
  bool empty() const { return n_bits_ == 0; }
  std::size_t ones() const { return ones_; }

  /// 1-based checked read.
  bool access(std::size_t p) const;
  /// 0-based unchecked read. Requires i < size().
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

  /// `len` bits starting at 0-based i, bit 0 of the result being position i.
  /// Unchecked; requires 1 <= len <= 64 and i + len <= size().
  std::uint64_t bits(std::size_t i, unsigned len) const {
    const std::size_t w = i >> 6;
    const unsigned o = i & 63;
    std::uint64_t x = words_[w] >> o;
    if (o + len > 64) x |= words_[w + 1] << (64 - o);
    return len == 64 ? x : x & ((std::uint64_t{1} << len) - 1);
  }

  /// Ones in positions 1..i. Throws OutOfRange when i > size().
  std::size_t rank1(std::size_t i) const {
    if (i > n_bits_) rank_out_of_range(i);
    const std::size_t word = i >> 6;
    std::size_t r = super_[word / kSuperWords] + word_rank_[word];
    if (i & 63) r += static_cast<std::size_t>(std::popcount(words_[word] << (64 - (i & 63))));
    return r;
  }
  std::size_t rank0(std::size_t i) const { return i - rank1(i); }
  /// Position of the j-th one. Throws NotFound when j == 0 or j > ones().
  std::size_t select1(std::size_t j) const;
  std::size_t select0(std::size_t j) const;

  std::string to_string() const;
  const std::vector<std::uint64_t>& words() const { return words_; }
  /// Payload plus rank directory.
  std::size_t size_in_bytes() const;

  /// Wire form: u64 bit length, then ceil(n/64) u64 words.
  void serialize(wire::Writer& out) const;
  static BitSequence deserialize(wire::Reader& in);

  friend bool operator==(const BitSequence& a, const BitSequence& b) {
    return a.n_bits_ == b.n_bits_ && a.words_ == b.words_;
  }

 private:
  static constexpr std::size_t kSuperWords = 8;

  void build_directory();
  [[noreturn]] void rank_out_of_range(std::size_t i) const;

  std::vector<std::uint64_t> words_;
  std::size_t n_bits_ = 0;
  std::size_t ones_ = 0;
  std::vector<std::uint64_t> super_{0};     // ones before each superblock
  std::vector<std::uint16_t> word_rank_{0};  // ones before each word, within its superblock
};

/// Append-only helper for building a BitSequence.
class BitBuilder {
 public:
  void push_back(bool bit);
  void append(std::size_t count, bool bit);
  std::size_t size() const { return n_bits_; }
  BitSequence build() &&;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t n_bits_ = 0;
};

/// Bit sequence supporting positional insertion and removal.
///
/// Bits live in fixed-capacity blocks; two Fenwick trees over per-block bit
/// counts and one counts locate the block for a position or an ordinal in
/// O(log m). A full block is split in half; an emptied block is dropped.
class DynBitSequence {
 public:
  DynBitSequence() = default;
  explicit DynBitSequence(std::string_view bits);
  DynBitSequence(std::size_t count, bool bit);

  std::size_t size() const { return n_bits_; }
  bool empty() const { return n_bits_ == 0; }
  std::size_t ones() const { return ones_; }

  bool access(std::size_t p) const;
  /// 0-based read. Requires i < size().
  bool test(std::size_t i) const;

  std::size_t rank1(std::size_t i) const;
  std::size_t rank0(std::size_t i) const { return i - rank1(i); }
  std::size_t select1(std::size_t j) const;
  std::size_t select0(std::size_t j) const;

  /// Inserts `bit` so that it becomes position p; 1 <= p <= size()+1.
  void insert(std::size_t p, bool bit);
  /// Removes position p and returns the removed bit.
  bool remove(std::size_t p);
  /// Overwrites position p; returns the previous bit.
  bool set(std::size_t p, bool bit);

  std::string to_string() const;
  BitSequence freeze() const;
  std::size_t size_in_bytes() const;

 private:
  static constexpr std::size_t kBlockWords = 32;
  static constexpr std::size_t kBlockBits = kBlockWords * 64;

  struct Block {
    std::array<std::uint64_t, kBlockWords> words{};
    std::uint32_t bits = 0;
    std::uint32_t ones = 0;
  };

  struct Located {
    std::size_t block;
    std::size_t local;        // bit offset inside the block
    std::size_t bits_before;  // bits in preceding blocks
    std::size_t ones_before;
  };

  Located locate_position(std::size_t i) const;
  Located locate_one(std::size_t j) const;
  Located locate_zero(std::size_t j) const;
  void fenwick_add(std::vector<std::uint64_t>& tree, std::size_t block, std::int64_t delta);
  void rebuild_fenwick();
  void split(std::size_t block);

  std::vector<Block> blocks_;
  std::vector<std::uint64_t> fen_bits_;  // 1-indexed
  std::vector<std::uint64_t> fen_ones_;
  std::size_t n_bits_ = 0;
  std::size_t ones_ = 0;
};

/// Dynamic sequence over a growable integer alphabet with access, rank,
/// select, and positional insert. Implemented as a wavelet matrix whose
/// levels are DynBitSequences; the alphabet widens by prepending an
/// all-zero top level, which leaves every existing symbol's path intact.
class DynSequence {
 public:
  using Symbol = std::uint32_t;

  DynSequence();

  std::size_t size() const { return n_; }
  /// Symbol at position p (1-based).
  Symbol access(std::size_t p) const;
  /// Occurrences of c in positions 1..i. Unknown symbols count 0.
  std::size_t rank(Symbol c, std::size_t i) const;
  /// Position of the j-th occurrence of c. Throws NotFound.
  std::size_t select(Symbol c, std::size_t j) const;
  std::size_t count(Symbol c) const { return rank(c, n_); }
  /// Inserts c so that it becomes position p; 1 <= p <= size()+1.
  void insert(std::size_t p, Symbol c);
  void push_back(Symbol c) { insert(n_ + 1, c); }

  std::size_t width() const { return levels_.size(); }
  std::size_t size_in_bytes() const;

 private:
  bool representable(Symbol c) const;
  void widen_for(Symbol c);

  std::vector<DynBitSequence> levels_;  // most significant bit first
  std::vector<std::size_t> zeros_;
  std::size_t n_ = 0;
};

/// Fixed-width packed array of unsigned integers (width = bit width of the
/// largest value, at least 1).
class IntVector {
 public:
  IntVector() = default;
  explicit IntVector(std::span<const std::uint64_t> values);

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }
  unsigned width() const { return width_; }
  std::uint64_t operator[](std::size_t i) const;
  std::vector<std::uint64_t> to_vector() const;
  std::size_t size_in_bytes() const { return words_.size() * sizeof(std::uint64_t); }

  friend bool operator==(const IntVector&, const IntVector&) = default;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t n_ = 0;
  unsigned width_ = 1;
};

}  // namespace attk2
