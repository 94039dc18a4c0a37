#include "attk2/model.hpp"

#include <algorithm>

#include "attk2/errors.hpp"

namespace attk2 {

std::string_view kind_name(Kind kind) { return kind == Kind::node ? "node" : "edge"; }

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view strip_zeros(std::string_view s) {
  const auto nz = s.find_first_not_of('0');
  return nz == std::string_view::npos ? s.substr(s.size() - 1) : s.substr(nz);
}

}  // namespace

bool natural_less(std::string_view a, std::string_view b) {
  const bool da = all_digits(a), db = all_digits(b);
  if (da && db) {
    const auto sa = strip_zeros(a), sb = strip_zeros(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
    return a < b;
  }
  if (da != db) return da;
  return a < b;
}

IdMap::IdMap(std::vector<std::string> ext_of) : ext_(std::move(ext_of)) {
  index_.reserve(ext_.size());
  for (std::size_t i = 0; i < ext_.size(); ++i) {
    if (!index_.emplace(ext_[i], i + 1).second) throw InputError("duplicate external id '" + ext_[i] + "'");
  }
}

const std::string& IdMap::external(std::uint64_t id) const {
  if (id == 0 || id > ext_.size()) {
    throw OutOfRange("internal id " + std::to_string(id) + " outside 1.." + std::to_string(ext_.size()));
  }
  return ext_[id - 1];
}

std::optional<std::uint64_t> IdMap::find(std::string_view ext) const {
  const auto it = index_.find(std::string(ext));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t IdMap::internal(std::string_view ext) const {
  const auto id = find(ext);
  if (!id) throw NotFound("unknown external id '" + std::string(ext) + "'");
  return *id;
}

std::size_t IdMap::size_in_bytes() const {
  std::size_t bytes = 0;
  for (const auto& e : ext_) bytes += e.size() + sizeof(std::uint64_t);
  return bytes;
}

void IdMap::serialize(wire::Writer& out) const {
  out.u64(ext_.size());
  for (const auto& e : ext_) out.str(e);
}

IdMap IdMap::deserialize(wire::Reader& in) {
  std::vector<std::string> ext(in.count(8));
  for (auto& e : ext) e = in.str();
  try {
    return IdMap(std::move(ext));
  } catch (const InputError& e) {
    throw CorruptFile(std::string("id map: ") + e.what());
  }
}

}  // namespace attk2
