#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace attk2::wire {

/// Append-only little-endian byte sink.
class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  /// u64 length prefix followed by the raw bytes.
  void str(std::string_view s);
  void u64_array(std::span<const std::uint64_t> values);
  void bytes(std::span<const std::uint8_t> data);

  /// Overwrites 8 bytes at `offset` (used to patch section tables).
  void patch_u64(std::size_t offset, std::uint64_t v);

  std::size_t size() const { return buf_.size(); }
  const std::vector<std::uint8_t>& buffer() const { return buf_; }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

/// Bounds-checked little-endian reader. Every overrun throws CorruptFile.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::string str();
  std::vector<std::uint64_t> u64_array();
  std::span<const std::uint8_t> bytes(std::size_t n);

  /// Reads a count that is about to drive an allocation of `unit` bytes per
  /// element; rejects counts the remaining payload cannot possibly hold.
  std::uint64_t count(std::size_t unit);

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  bool at_end() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const;

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace attk2::wire
