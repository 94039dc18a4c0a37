#pragma once

// Text bundle ingestion, binary store files and id-map emission.
//
// Bundle directory:
//   schema.tsv  NODE|EDGE <TAB> label <TAB> name:s|d ...
//   nodes.tsv   ext <TAB> label <TAB> name=value ...
//   edges.tsv   ext <TAB> label <TAB> source-ext <TAB> target-ext <TAB> name=value ...
//
// Store file: "ATTK2TRE", u32 version, u32 section count, then per section
// u32 tag, u64 offset, u64 length; sections follow back to back.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "attk2/graph.hpp"
#include "attk2/model.hpp"

namespace attk2::io {

inline constexpr std::uint32_t kFormatVersion = 1;

enum class Section : std::uint32_t {
  node_schema = 1,
  edge_schema = 2,
  node_attributes = 3,
  edge_attributes = 4,
  relations = 5,
  id_maps = 6,
};

/// Throws InputError ("file:line: message") at the first problem found.
GraphInput load_input(const std::filesystem::path& dir);
GraphInput parse_input(std::istream& schema, std::istream& nodes, std::istream& edges);
void write_input(const std::filesystem::path& dir, const GraphInput& input);

std::vector<std::uint8_t> encode(const AttK2Graph& g);
/// Throws CorruptFile.
AttK2Graph decode(std::span<const std::uint8_t> bytes);

void save_db(const AttK2Graph& g, const std::filesystem::path& path);
/// Throws CorruptFile, or InputError when the file cannot be read.
AttK2Graph load_db(const std::filesystem::path& path);

/// `kind<TAB>ext<TAB>internal` for every node, then every edge.
void write_ids(const AttK2Graph& g, const std::filesystem::path& path);

/// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace attk2::io
