#include "attk2/bits.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "attk2/errors.hpp"

namespace attk2 {
namespace {

constexpr std::uint64_t low_mask(unsigned n) { return n >= 64 ? ~0ull : ((1ull << n) - 1); }

// 0-based index of the r-th (0-based) set bit of w. Requires popcount(w) > r.
unsigned select_in_word(std::uint64_t w, unsigned r) {
  for (unsigned i = 0; i < r; ++i) w &= w - 1;
  return static_cast<unsigned>(std::countr_zero(w));
}

std::vector<std::uint64_t> parse_bits(std::string_view bits, std::size_t& n) {
  std::vector<std::uint64_t> words;
  n = 0;
  for (char ch : bits) {
    if (ch == ' ') continue;
    if (ch != '0' && ch != '1') throw InputError(std::string("invalid bit character '") + ch + "'");
    if ((n & 63) == 0) words.push_back(0);
    if (ch == '1') words.back() |= 1ull << (n & 63);
    ++n;
  }
  return words;
}

}  // namespace

// ---------------------------------------------------------------------------
// BitSequence

BitSequence::BitSequence(std::string_view bits) {
  words_ = parse_bits(bits, n_bits_);
  build_directory();
}

BitSequence::BitSequence(std::vector<std::uint64_t> words, std::size_t n_bits)
    : words_(std::move(words)), n_bits_(n_bits) {
  words_.resize((n_bits_ + 63) / 64);
  if (n_bits_ & 63) words_.back() &= low_mask(n_bits_ & 63);
  build_directory();
}

void BitSequence::build_directory() {
  const std::size_t n_super = (words_.size() + kSuperWords - 1) / kSuperWords;
  super_.assign(n_super + 1, 0);
  // One extra slot so that rank1(size()) on a word boundary stays in bounds.
  word_rank_.assign(words_.size() + 1, 0);
  std::size_t acc = 0;
  for (std::size_t s = 0; s < n_super; ++s) {
    super_[s] = acc;
    const std::size_t end = std::min(words_.size(), (s + 1) * kSuperWords);
    for (std::size_t w = s * kSuperWords; w < end; ++w) {
      word_rank_[w] = static_cast<std::uint16_t>(acc - super_[s]);
      acc += std::popcount(words_[w]);
    }
  }
  super_[n_super] = acc;
  if (words_.size() % kSuperWords != 0) {
    word_rank_[words_.size()] = static_cast<std::uint16_t>(acc - super_[n_super - 1]);
  }
  ones_ = acc;
}

bool BitSequence::access(std::size_t p) const {
  if (p == 0 || p > n_bits_) {
    throw OutOfRange("bit position " + std::to_string(p) + " outside 1.." + std::to_string(n_bits_));
  }
  return test(p - 1);
}

void BitSequence::rank_out_of_range(std::size_t i) const {
  throw OutOfRange("rank position " + std::to_string(i) + " beyond length " + std::to_string(n_bits_));
}

std::size_t BitSequence::select1(std::size_t j) const {
  if (j == 0 || j > ones_) {
    throw NotFound("select1 ordinal " + std::to_string(j) + " outside 1.." + std::to_string(ones_));
  }
  // Last superblock whose preceding count is < j.
  const std::size_t n_super = super_.size() - 1;
  auto it = std::lower_bound(super_.begin(), super_.begin() + n_super, j);
  std::size_t sb = static_cast<std::size_t>(it - super_.begin()) - 1;
  std::size_t r = j - super_[sb];
  for (std::size_t w = sb * kSuperWords; w < words_.size(); ++w) {
    const std::size_t pc = std::popcount(words_[w]);
    if (r <= pc) return w * 64 + select_in_word(words_[w], static_cast<unsigned>(r - 1)) + 1;
    r -= pc;
  }
  throw NotFound("select1 directory inconsistent");
}

std::size_t BitSequence::select0(std::size_t j) const {
  const std::size_t zeros = n_bits_ - ones_;
  if (j == 0 || j > zeros) {
    throw NotFound("select0 ordinal " + std::to_string(j) + " outside 1.." + std::to_string(zeros));
  }
  const std::size_t n_super = super_.size() - 1;
  std::size_t lo = 0, hi = n_super;  // find last sb with zeros_before(sb) < j
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    const std::size_t zeros_before = mid * kSuperWords * 64 - super_[mid];
    if (zeros_before < j) lo = mid; else hi = mid;
  }
  std::size_t r = j - (lo * kSuperWords * 64 - super_[lo]);
  for (std::size_t w = lo * kSuperWords; w < words_.size(); ++w) {
    std::uint64_t inv = ~words_[w];
    if (w == words_.size() - 1 && (n_bits_ & 63)) inv &= low_mask(n_bits_ & 63);
    const std::size_t pc = std::popcount(inv);
    if (r <= pc) return w * 64 + select_in_word(inv, static_cast<unsigned>(r - 1)) + 1;
    r -= pc;
  }
  throw NotFound("select0 directory inconsistent");
}

std::string BitSequence::to_string() const {
  std::string s(n_bits_, '0');
  for (std::size_t i = 0; i < n_bits_; ++i) {
    if (test(i)) s[i] = '1';
  }
  return s;
}

std::size_t BitSequence::size_in_bytes() const {
  return (words_.size() + super_.size()) * sizeof(std::uint64_t) + word_rank_.size() * sizeof(std::uint16_t);
}

void BitSequence::serialize(wire::Writer& out) const {
  out.u64(n_bits_);
  for (auto w : words_) out.u64(w);
}

BitSequence BitSequence::deserialize(wire::Reader& in) {
  const std::uint64_t n = in.u64();
  const std::uint64_t n_words = (n + 63) / 64;
  if (n_words > in.remaining() / 8) throw CorruptFile("bit sequence length exceeds payload");
  std::vector<std::uint64_t> words(n_words);
  for (auto& w : words) w = in.u64();
  if ((n & 63) && (words.back() & ~low_mask(n & 63))) {
    throw CorruptFile("bit sequence has bits set past its length");
  }
  return BitSequence(std::move(words), n);
}

// ---------------------------------------------------------------------------
// BitBuilder

void BitBuilder::push_back(bool bit) {
  if ((n_bits_ & 63) == 0) words_.push_back(0);
  if (bit) words_.back() |= 1ull << (n_bits_ & 63);
  ++n_bits_;
}

void BitBuilder::append(std::size_t count, bool bit) {
  for (std::size_t i = 0; i < count; ++i) push_back(bit);
}

BitSequence BitBuilder::build() && { return BitSequence(std::move(words_), n_bits_); }

// ---------------------------------------------------------------------------
// DynBitSequence

DynBitSequence::DynBitSequence(std::string_view bits) {
  std::size_t n = 0;
  auto words = parse_bits(bits, n);
  for (std::size_t i = 0; i < n; ++i) insert(i + 1, (words[i >> 6] >> (i & 63)) & 1u);
}

DynBitSequence::DynBitSequence(std::size_t count, bool bit) {
  constexpr std::size_t kFill = kBlockBits / 2;
  std::size_t left = count;
  while (left > 0) {
    Block b;
    const std::size_t take = std::min(left, kFill);
    if (bit) {
      for (std::size_t w = 0; w * 64 < take; ++w) {
        b.words[w] = low_mask(static_cast<unsigned>(std::min<std::size_t>(64, take - w * 64)));
      }
      b.ones = static_cast<std::uint32_t>(take);
    }
    b.bits = static_cast<std::uint32_t>(take);
    blocks_.push_back(b);
    left -= take;
  }
  n_bits_ = count;
  ones_ = bit ? count : 0;
  rebuild_fenwick();
}

void DynBitSequence::rebuild_fenwick() {
  const std::size_t m = blocks_.size();
  fen_bits_.assign(m + 1, 0);
  fen_ones_.assign(m + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    fen_bits_[i] += blocks_[i - 1].bits;
    fen_ones_[i] += blocks_[i - 1].ones;
    const std::size_t parent = i + (i & (~i + 1));
    if (parent <= m) {
      fen_bits_[parent] += fen_bits_[i];
      fen_ones_[parent] += fen_ones_[i];
    }
  }
}

void DynBitSequence::fenwick_add(std::vector<std::uint64_t>& tree, std::size_t block,
                                 std::int64_t delta) {
  for (std::size_t i = block + 1; i < tree.size(); i += i & (~i + 1)) {
    tree[i] += static_cast<std::uint64_t>(delta);
  }
}

DynBitSequence::Located DynBitSequence::locate_position(std::size_t i) const {
  const std::size_t m = blocks_.size();
  Located at{0, i, 0, 0};
  std::size_t idx = 0;
  for (std::size_t step = std::bit_floor(m); step != 0; step >>= 1) {
    if (idx + step <= m && fen_bits_[idx + step] <= at.local) {
      idx += step;
      at.local -= fen_bits_[idx];
      at.bits_before += fen_bits_[idx];
      at.ones_before += fen_ones_[idx];
    }
  }
  at.block = idx;
  if (idx == m && m > 0) {  // one past the end: append to the last block
    const Block& last = blocks_.back();
    at.block = m - 1;
    at.local = last.bits;
    at.bits_before -= last.bits;
    at.ones_before -= last.ones;
  }
  return at;
}

DynBitSequence::Located DynBitSequence::locate_one(std::size_t j) const {
  const std::size_t m = blocks_.size();
  Located at{0, 0, 0, 0};
  std::size_t rem = j;
  std::size_t idx = 0;
  for (std::size_t step = std::bit_floor(m); step != 0; step >>= 1) {
    if (idx + step <= m && fen_ones_[idx + step] < rem) {
      idx += step;
      rem -= fen_ones_[idx];
      at.bits_before += fen_bits_[idx];
      at.ones_before += fen_ones_[idx];
    }
  }
  at.block = idx;
  const Block& b = blocks_[idx];
  for (std::size_t w = 0; w < kBlockWords; ++w) {
    const std::size_t pc = std::popcount(b.words[w]);
    if (rem <= pc) {
      at.local = w * 64 + select_in_word(b.words[w], static_cast<unsigned>(rem - 1));
      return at;
    }
    rem -= pc;
  }
  throw NotFound("dynamic select1 index inconsistent");
}

DynBitSequence::Located DynBitSequence::locate_zero(std::size_t j) const {
  const std::size_t m = blocks_.size();
  Located at{0, 0, 0, 0};
  std::size_t rem = j;
  std::size_t idx = 0;
  for (std::size_t step = std::bit_floor(m); step != 0; step >>= 1) {
    if (idx + step <= m && fen_bits_[idx + step] - fen_ones_[idx + step] < rem) {
      idx += step;
      rem -= fen_bits_[idx] - fen_ones_[idx];
      at.bits_before += fen_bits_[idx];
      at.ones_before += fen_ones_[idx];
    }
  }
  at.block = idx;
  const Block& b = blocks_[idx];
  for (std::size_t w = 0; w * 64 < b.bits; ++w) {
    std::uint64_t inv = ~b.words[w];
    if ((w + 1) * 64 > b.bits) inv &= low_mask(static_cast<unsigned>(b.bits - w * 64));
    const std::size_t pc = std::popcount(inv);
    if (rem <= pc) {
      at.local = w * 64 + select_in_word(inv, static_cast<unsigned>(rem - 1));
      return at;
    }
    rem -= pc;
  }
  throw NotFound("dynamic select0 index inconsistent");
}

bool DynBitSequence::test(std::size_t i) const {
  const Located at = locate_position(i);
  const Block& b = blocks_[at.block];
  return (b.words[at.local >> 6] >> (at.local & 63)) & 1u;
}

bool DynBitSequence::access(std::size_t p) const {
  if (p == 0 || p > n_bits_) {
    throw OutOfRange("bit position " + std::to_string(p) + " outside 1.." + std::to_string(n_bits_));
  }
  return test(p - 1);
}

std::size_t DynBitSequence::rank1(std::size_t i) const {
  if (i > n_bits_) {
    throw OutOfRange("rank position " + std::to_string(i) + " beyond length " + std::to_string(n_bits_));
  }
  if (i == n_bits_) return ones_;
  const Located at = locate_position(i);
  const Block& b = blocks_[at.block];
  std::size_t r = at.ones_before;
  const std::size_t word = at.local >> 6;
  for (std::size_t w = 0; w < word; ++w) r += std::popcount(b.words[w]);
  if (at.local & 63) r += std::popcount(b.words[word] & low_mask(at.local & 63));
  return r;
}

std::size_t DynBitSequence::select1(std::size_t j) const {
  if (j == 0 || j > ones_) {
    throw NotFound("select1 ordinal " + std::to_string(j) + " outside 1.." + std::to_string(ones_));
  }
  const Located at = locate_one(j);
  return at.bits_before + at.local + 1;
}

std::size_t DynBitSequence::select0(std::size_t j) const {
  const std::size_t zeros = n_bits_ - ones_;
  if (j == 0 || j > zeros) {
    throw NotFound("select0 ordinal " + std::to_string(j) + " outside 1.." + std::to_string(zeros));
  }
  const Located at = locate_zero(j);
  return at.bits_before + at.local + 1;
}

void DynBitSequence::insert(std::size_t p, bool bit) {
  if (p == 0 || p > n_bits_ + 1) {
    throw OutOfRange("insert position " + std::to_string(p) + " outside 1.." +
                     std::to_string(n_bits_ + 1));
  }
  if (blocks_.empty()) {
    blocks_.emplace_back();
    rebuild_fenwick();
  }
  const Located at = locate_position(p - 1);
  Block& b = blocks_[at.block];
  const std::size_t word = at.local >> 6;
  const std::size_t top = b.bits >> 6;  // last word touched after the insert
  for (std::size_t w = top; w > word; --w) {
    b.words[w] = (b.words[w] << 1) | (b.words[w - 1] >> 63);
  }
  const std::uint64_t mask = low_mask(at.local & 63);
  const std::uint64_t cur = b.words[word];
  b.words[word] = (cur & mask) | ((cur & ~mask) << 1) |
                  (static_cast<std::uint64_t>(bit) << (at.local & 63));
  ++b.bits;
  fenwick_add(fen_bits_, at.block, 1);
  if (bit) {
    ++b.ones;
    ++ones_;
    fenwick_add(fen_ones_, at.block, 1);
  }
  ++n_bits_;
  if (b.bits == kBlockBits) split(at.block);
}

bool DynBitSequence::remove(std::size_t p) {
  if (p == 0 || p > n_bits_) {
    throw OutOfRange("remove position " + std::to_string(p) + " outside 1.." + std::to_string(n_bits_));
  }
  const Located at = locate_position(p - 1);
  Block& b = blocks_[at.block];
  const std::size_t word = at.local >> 6;
  const std::size_t top = (b.bits - 1) >> 6;
  const std::uint64_t cur = b.words[word];
  const bool bit = (cur >> (at.local & 63)) & 1u;
  const std::uint64_t mask = low_mask(at.local & 63);
  b.words[word] = (cur & mask) | ((cur >> 1) & ~mask);
  for (std::size_t w = word; w < top; ++w) {
    b.words[w] |= b.words[w + 1] << 63;
    b.words[w + 1] >>= 1;
  }
  --b.bits;
  fenwick_add(fen_bits_, at.block, -1);
  if (bit) {
    --b.ones;
    --ones_;
    fenwick_add(fen_ones_, at.block, -1);
  }
  --n_bits_;
  if (b.bits == 0 && blocks_.size() > 1) {
    blocks_.erase(blocks_.begin() + static_cast<std::ptrdiff_t>(at.block));
    rebuild_fenwick();
  }
  return bit;
}

bool DynBitSequence::set(std::size_t p, bool bit) {
  if (p == 0 || p > n_bits_) {
    throw OutOfRange("set position " + std::to_string(p) + " outside 1.." + std::to_string(n_bits_));
  }
  const Located at = locate_position(p - 1);
  Block& b = blocks_[at.block];
  std::uint64_t& w = b.words[at.local >> 6];
  const std::uint64_t m = 1ull << (at.local & 63);
  const bool old = w & m;
  if (old == bit) return old;
  if (bit) {
    w |= m;
    ++b.ones;
    ++ones_;
    fenwick_add(fen_ones_, at.block, 1);
  } else {
    w &= ~m;
    --b.ones;
    --ones_;
    fenwick_add(fen_ones_, at.block, -1);
  }
  return old;
}

void DynBitSequence::split(std::size_t block) {
  constexpr std::size_t half = kBlockWords / 2;
  Block fresh;
  Block& b = blocks_[block];
  for (std::size_t w = 0; w < half; ++w) {
    fresh.words[w] = b.words[half + w];
    b.words[half + w] = 0;
    fresh.ones += static_cast<std::uint32_t>(std::popcount(fresh.words[w]));
  }
  fresh.bits = b.bits - static_cast<std::uint32_t>(half * 64);
  b.bits = static_cast<std::uint32_t>(half * 64);
  b.ones -= fresh.ones;
  blocks_.insert(blocks_.begin() + static_cast<std::ptrdiff_t>(block) + 1, fresh);
  rebuild_fenwick();
}

std::string DynBitSequence::to_string() const {
  std::string s;
  s.reserve(n_bits_);
  for (const Block& b : blocks_) {
    for (std::size_t i = 0; i < b.bits; ++i) s.push_back(((b.words[i >> 6] >> (i & 63)) & 1u) ? '1' : '0');
  }
  return s;
}

BitSequence DynBitSequence::freeze() const {
  BitBuilder out;
  for (const Block& b : blocks_) {
    for (std::size_t i = 0; i < b.bits; ++i) out.push_back((b.words[i >> 6] >> (i & 63)) & 1u);
  }
  return std::move(out).build();
}

std::size_t DynBitSequence::size_in_bytes() const {
  return blocks_.size() * sizeof(Block) + (fen_bits_.size() + fen_ones_.size()) * sizeof(std::uint64_t);
}

// ---------------------------------------------------------------------------
// DynSequence

DynSequence::DynSequence() {
  levels_.emplace_back();
  zeros_.push_back(0);
}

bool DynSequence::representable(Symbol c) const {
  return levels_.size() >= 32 || c < (Symbol{1} << levels_.size());
}

void DynSequence::widen_for(Symbol c) {
  while (!representable(c)) {
    levels_.insert(levels_.begin(), DynBitSequence(n_, false));
    zeros_.insert(zeros_.begin(), n_);
  }
}

DynSequence::Symbol DynSequence::access(std::size_t p) const {
  if (p == 0 || p > n_) {
    throw OutOfRange("sequence position " + std::to_string(p) + " outside 1.." + std::to_string(n_));
  }
  std::size_t i = p - 1;
  Symbol c = 0;
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    const bool bit = levels_[l].test(i);
    c = (c << 1) | static_cast<Symbol>(bit);
    i = bit ? zeros_[l] + levels_[l].rank1(i) : levels_[l].rank0(i);
  }
  return c;
}

std::size_t DynSequence::rank(Symbol c, std::size_t i) const {
  if (i > n_) {
    throw OutOfRange("sequence rank position " + std::to_string(i) + " beyond length " +
                     std::to_string(n_));
  }
  if (!representable(c)) return 0;
  const std::size_t w = levels_.size();
  std::size_t s = 0, e = i;
  for (std::size_t l = 0; l < w; ++l) {
    if ((c >> (w - 1 - l)) & 1u) {
      s = zeros_[l] + levels_[l].rank1(s);
      e = zeros_[l] + levels_[l].rank1(e);
    } else {
      s = levels_[l].rank0(s);
      e = levels_[l].rank0(e);
    }
  }
  return e - s;
}

std::size_t DynSequence::select(Symbol c, std::size_t j) const {
  if (j == 0 || j > count(c)) {
    throw NotFound("symbol " + std::to_string(c) + " has no occurrence " + std::to_string(j));
  }
  const std::size_t w = levels_.size();
  std::size_t s = 0;
  for (std::size_t l = 0; l < w; ++l) {
    s = ((c >> (w - 1 - l)) & 1u) ? zeros_[l] + levels_[l].rank1(s) : levels_[l].rank0(s);
  }
  std::size_t pos = s + j - 1;
  for (std::size_t l = w; l-- > 0;) {
    if ((c >> (w - 1 - l)) & 1u) {
      pos = levels_[l].select1(pos - zeros_[l] + 1) - 1;
    } else {
      pos = levels_[l].select0(pos + 1) - 1;
    }
  }
  return pos + 1;
}

void DynSequence::insert(std::size_t p, Symbol c) {
  if (p == 0 || p > n_ + 1) {
    throw OutOfRange("sequence insert position " + std::to_string(p) + " outside 1.." +
                     std::to_string(n_ + 1));
  }
  widen_for(c);
  const std::size_t w = levels_.size();
  std::size_t i = p - 1;
  for (std::size_t l = 0; l < w; ++l) {
    const bool bit = (c >> (w - 1 - l)) & 1u;
    levels_[l].insert(i + 1, bit);
    if (bit) {
      i = zeros_[l] + levels_[l].rank1(i);
    } else {
      i = levels_[l].rank0(i);
      ++zeros_[l];
    }
  }
  ++n_;
}

std::size_t DynSequence::size_in_bytes() const {
  std::size_t total = zeros_.size() * sizeof(std::size_t);
  for (const auto& l : levels_) total += l.size_in_bytes();
  return total;
}

// ---------------------------------------------------------------------------
// IntVector

IntVector::IntVector(std::span<const std::uint64_t> values) : n_(values.size()) {
  std::uint64_t max = 0;
  for (auto v : values) max = std::max(max, v);
  width_ = std::max(1u, static_cast<unsigned>(std::bit_width(max)));
  words_.assign((n_ * width_ + 63) / 64, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t bit = i * width_;
    const std::size_t w = bit >> 6;
    const unsigned off = bit & 63;
    words_[w] |= values[i] << off;
    if (off + width_ > 64) words_[w + 1] |= values[i] >> (64 - off);
  }
}

std::uint64_t IntVector::operator[](std::size_t i) const {
  const std::size_t bit = i * width_;
  const std::size_t w = bit >> 6;
  const unsigned off = bit & 63;
  std::uint64_t v = words_[w] >> off;
  if (off + width_ > 64) v |= words_[w + 1] << (64 - off);
  return v & low_mask(width_);
}

std::vector<std::uint64_t> IntVector::to_vector() const {
  std::vector<std::uint64_t> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = (*this)[i];
  return out;
}

}  // namespace attk2
