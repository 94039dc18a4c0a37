#include "attk2/wire.hpp"

#include <string>

#include "attk2/errors.hpp"

namespace attk2::wire {

void Writer::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Writer::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Writer::str(std::string_view s) {
  u64(s.size());
  buf_.insert(buf_.end(), s.begin(), s.end());
}

void Writer::u64_array(std::span<const std::uint64_t> values) {
  u64(values.size());
  for (auto v : values) u64(v);
}

void Writer::bytes(std::span<const std::uint8_t> data) {
  buf_.insert(buf_.end(), data.begin(), data.end());
}

void Writer::patch_u64(std::size_t offset, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf_[offset + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

void Reader::need(std::size_t n) const {
  if (n > data_.size() - pos_) {
    throw CorruptFile("truncated payload: need " + std::to_string(n) + " bytes at offset " +
                      std::to_string(pos_));
  }
}

std::uint8_t Reader::u8() {
  need(1);
  return data_[pos_++];
}

std::uint32_t Reader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
  pos_ += 4;
  return v;
}

std::uint64_t Reader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
  pos_ += 8;
  return v;
}

std::uint64_t Reader::count(std::size_t unit) {
  auto n = u64();
  if (unit != 0 && n > remaining() / unit) {
    throw CorruptFile("length prefix " + std::to_string(n) + " exceeds payload");
  }
  return n;
}

std::string Reader::str() {
  auto n = count(1);
  auto b = bytes(n);
  return std::string(b.begin(), b.end());
}

std::vector<std::uint64_t> Reader::u64_array() {
  auto n = count(8);
  std::vector<std::uint64_t> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(u64());
  return out;
}

std::span<const std::uint8_t> Reader::bytes(std::size_t n) {
  need(n);
  auto s = data_.subspan(pos_, n);
  pos_ += n;
  return s;
}

}  // namespace attk2::wire
