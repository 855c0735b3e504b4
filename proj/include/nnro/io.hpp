#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "nnro/dataset.hpp"
#include "nnro/flat_index.hpp"
#include "nnro/graph.hpp"

namespace nnro {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Little-endian vector files. Every record is a 32-bit component count d
// followed by d components (f32 / u8 / i32 for fvecs / bvecs / ivecs). All
// records in one stream must share d. Truncated records raise an IoError
// naming the byte offset; an empty stream yields an empty collection, which
// consumers reject at use time.
VectorDataset read_fvecs(std::istream& in);
void write_fvecs(std::ostream& out, const VectorDataset& data);
// bvecs components widen to float on read; writing requires every component
// to be an integer in [0, 255].
VectorDataset read_bvecs(std::istream& in);
void write_bvecs(std::ostream& out, const VectorDataset& data);
// ivecs rows hold non-negative ids (ground truth and result lists).
std::vector<std::vector<uint32_t>> read_ivecs(std::istream& in);
void write_ivecs(std::ostream& out, const std::vector<std::vector<uint32_t>>& rows);

VectorDataset read_fvecs_file(const std::string& path);
void write_fvecs_file(const std::string& path, const VectorDataset& data);
VectorDataset read_bvecs_file(const std::string& path);
std::vector<std::vector<uint32_t>> read_ivecs_file(const std::string& path);
void write_ivecs_file(const std::string& path, const std::vector<std::vector<uint32_t>>& rows);

// Reads .fvecs or .bvecs based on the file extension.
VectorDataset read_vectors_file(const std::string& path);

// Index file: magic "NNRO", u16 version, u16 metric tag, u32 counts
// (N, dim, max_links, entry slot, upper-layer count), the hierarchy table,
// then the block region, all little-endian. load(save(x)) == x bit-exactly.
void save_index(std::ostream& out, const FlatIndex& index);
FlatIndex load_index(std::istream& in);
void save_index_file(const std::string& path, const FlatIndex& index);
FlatIndex load_index_file(const std::string& path);

// Ordering file: magic "ORDR", u32 n, then n little-endian u32 forward slots.
void save_ordering(std::ostream& out, const Ordering& p);
Ordering load_ordering(std::istream& in);
void save_ordering_file(const std::string& path, const Ordering& p);
Ordering load_ordering_file(const std::string& path);

}  // namespace nnro
