#include "nnro/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace nnro {
namespace {

void put_bytes(std::ostream& out, const void* src, size_t n) {
  out.write(static_cast<const char*>(src), static_cast<std::streamsize>(n));
  if (!out) throw IoError("write failed");
}

void put_u16(std::ostream& out, uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>(v >> 8)};
  put_bytes(out, b, 2);
}

void put_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF),
                        static_cast<unsigned char>((v >> 16) & 0xFF),
                        static_cast<unsigned char>(v >> 24)};
  put_bytes(out, b, 4);
}

void put_f32(std::ostream& out, float v) { put_u32(out, std::bit_cast<uint32_t>(v)); }

uint32_t le32(const void* p) {
  const unsigned char* b = static_cast<const unsigned char*>(p);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

// Tracks the byte offset so truncation errors can name where parsing failed.
struct ByteReader {
  std::istream& in;
  uint64_t offset = 0;

  // Returns false only on a clean EOF when eof_ok; throws IoError otherwise.
  bool read_exact(void* dst, size_t n, bool eof_ok, const std::string& what) {
    in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    const size_t got = static_cast<size_t>(in.gcount());
    if (got == n) {
      offset += n;
      return true;
    }
    if (got == 0 && eof_ok) return false;
    throw IoError(what + " truncated at byte offset " + std::to_string(offset) + " (wanted " +
                  std::to_string(n) + " bytes, got " + std::to_string(got) + ")");
  }
  uint32_t u32(const std::string& what) {
    unsigned char b[4];
    read_exact(b, 4, false, what);
    return le32(b);
  }
  uint16_t u16(const std::string& what) {
    unsigned char b[2];
    read_exact(b, 2, false, what);
    return static_cast<uint16_t>(b[0] | (b[1] << 8));
  }
  void expect_eof(const std::string& what) {
    char dummy;
    in.read(&dummy, 1);
    if (in.gcount() != 0)
      throw IoError(what + ": trailing data at byte offset " + std::to_string(offset));
  }
};

// Shared loop for the three per-record formats: i32 component count, then
// that many components.
template <typename OnRecord>
void read_records(std::istream& in, size_t comp_bytes, const std::string& format,
                  OnRecord on_record) {
  ByteReader r{in};
  uint32_t dim = 0;
  uint64_t count = 0;
  std::vector<unsigned char> buf;
  for (;;) {
    unsigned char dbuf[4];
    const uint64_t rec_start = r.offset;
    if (!r.read_exact(dbuf, 4, true, format + " record header")) break;
    const int32_t d = static_cast<int32_t>(le32(dbuf));
    if (d <= 0)
      throw IoError(format + " record at byte offset " + std::to_string(rec_start) +
                    " has non-positive dimension " + std::to_string(d));
    if (count == 0) {
      dim = static_cast<uint32_t>(d);
    } else if (static_cast<uint32_t>(d) != dim) {
      throw IoError(format + " record at byte offset " + std::to_string(rec_start) +
                    " has dimension " + std::to_string(d) + " but earlier records have " +
                    std::to_string(dim));
    }
    buf.resize(static_cast<size_t>(d) * comp_bytes);
    r.read_exact(buf.data(), buf.size(), false,
                 format + " record starting at byte offset " + std::to_string(rec_start));
    on_record(static_cast<uint32_t>(d), buf.data());
    ++count;
  }
}

}  // namespace

VectorDataset read_fvecs(std::istream& in) {
  std::vector<float> values;
  uint32_t dim = 0;
  read_records(in, 4, "fvecs", [&](uint32_t d, const unsigned char* comps) {
    dim = d;
    for (uint32_t i = 0; i < d; ++i)
      values.push_back(std::bit_cast<float>(le32(comps + 4u * i)));
  });
  if (dim == 0) return VectorDataset{};
  return VectorDataset(dim, std::move(values));
}

void write_fvecs(std::ostream& out, const VectorDataset& data) {
  for (uint32_t i = 0; i < data.size(); ++i) {
    put_u32(out, data.dim());
    const float* v = data.vec(i);
    for (uint32_t j = 0; j < data.dim(); ++j) put_f32(out, v[j]);
  }
}

VectorDataset read_bvecs(std::istream& in) {
  std::vector<float> values;
  uint32_t dim = 0;
  read_records(in, 1, "bvecs", [&](uint32_t d, const unsigned char* comps) {
    dim = d;
    for (uint32_t i = 0; i < d; ++i) values.push_back(static_cast<float>(comps[i]));
  });
  if (dim == 0) return VectorDataset{};
  return VectorDataset(dim, std::move(values));
}

void write_bvecs(std::ostream& out, const VectorDataset& data) {
  for (uint32_t i = 0; i < data.size(); ++i) {
    put_u32(out, data.dim());
    const float* v = data.vec(i);
    for (uint32_t j = 0; j < data.dim(); ++j) {
      float f = v[j];
      unsigned char b = static_cast<unsigned char>(f);
      if (f < 0.f || f > 255.f || static_cast<float>(b) != f)
        throw IoError("bvecs write: component " + std::to_string(f) +
                      " is not an integer in [0, 255]");
      put_bytes(out, &b, 1);
    }
  }
}

std::vector<std::vector<uint32_t>> read_ivecs(std::istream& in) {
  std::vector<std::vector<uint32_t>> rows;
  read_records(in, 4, "ivecs", [&](uint32_t d, const unsigned char* comps) {
    std::vector<uint32_t> row(d);
    for (uint32_t i = 0; i < d; ++i) {
      const int32_t v = static_cast<int32_t>(le32(comps + 4u * i));
      if (v < 0) throw IoError("ivecs record holds negative id " + std::to_string(v));
      row[i] = static_cast<uint32_t>(v);
    }
    rows.push_back(std::move(row));
  });
  return rows;
}

void write_ivecs(std::ostream& out, const std::vector<std::vector<uint32_t>>& rows) {
  for (const auto& row : rows) {
    put_u32(out, static_cast<uint32_t>(row.size()));
    for (uint32_t v : row) put_u32(out, v);
  }
}

namespace {

constexpr uint16_t kIndexVersion = 1;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

}  // namespace

void save_index(std::ostream& out, const FlatIndex& index) {
  put_bytes(out, "NNRO", 4);
  put_u16(out, kIndexVersion);
  put_u16(out, static_cast<uint16_t>(index.metric()));
  put_u32(out, index.size());
  put_u32(out, index.dim());
  put_u32(out, index.max_links());
  put_u32(out, index.entry_slot());
  put_u32(out, static_cast<uint32_t>(index.upper_layers().size()));
  for (const auto& layer : index.upper_layers()) {
    put_u32(out, static_cast<uint32_t>(layer.slots.size()));
    for (size_t i = 0; i < layer.slots.size(); ++i) {
      put_u32(out, layer.slots[i]);
      put_u32(out, static_cast<uint32_t>(layer.links[i].size()));
      for (uint32_t v : layer.links[i]) put_u32(out, v);
    }
  }
  const auto region = index.block_region();
  if constexpr (std::endian::native == std::endian::little) {
    put_bytes(out, region.data(), region.size());
  } else {
    for (size_t w = 0; w < region.size() / 4; ++w) {
      uint32_t x;
      std::memcpy(&x, region.data() + 4 * w, 4);
      put_u32(out, x);
    }
  }
}

FlatIndex load_index(std::istream& in) {
  ByteReader r{in};
  char magic[4];
  r.read_exact(magic, 4, false, "index magic");
  if (std::memcmp(magic, "NNRO", 4) != 0) throw IoError("index file: bad magic");
  const uint16_t version = r.u16("index version");
  if (version != kIndexVersion)
    throw IoError("index file: unsupported version " + std::to_string(version));
  const uint16_t metric = r.u16("index metric tag");
  if (metric != static_cast<uint16_t>(MetricTag::kL2Squared))
    throw IoError("index file: unknown metric tag " + std::to_string(metric));

  const uint32_t n = r.u32("index node count");
  const uint32_t dim = r.u32("index dimension");
  const uint32_t max_links = r.u32("index link cap");
  const uint32_t entry = r.u32("index entry slot");
  const uint32_t levels = r.u32("index layer count");
  if (n == 0 || n >= FlatIndex::kMaxNodes) throw IoError("index file: invalid node count");
  if (dim == 0) throw IoError("index file: invalid dimension");
  if (max_links == 0 || max_links > FlatIndex::kMaxLinkCap)
    throw IoError("index file: invalid link cap");
  if (entry >= n) throw IoError("index file: entry slot out of range");

  FlatIndex index(n, dim, max_links, MetricTag::kL2Squared);
  auto& upper = index.upper_layers();
  upper.resize(levels);
  for (uint32_t l = 0; l < levels; ++l) {
    const uint32_t m = r.u32("index layer size");
    if (m > n) throw IoError("index file: layer larger than the index");
    auto& layer = upper[l];
    layer.slots.reserve(m);
    layer.links.reserve(m);
    for (uint32_t i = 0; i < m; ++i) {
      const uint32_t slot = r.u32("index layer slot");
      if (slot >= n) throw IoError("index file: layer slot out of range");
      if (!layer.slots.empty() && slot <= layer.slots.back())
        throw IoError("index file: layer slots not strictly ascending");
      const uint32_t count = r.u32("index layer link count");
      if (count > max_links) throw IoError("index file: layer link count over the cap");
      std::vector<uint32_t> links(count);
      for (uint32_t j = 0; j < count; ++j) {
        links[j] = r.u32("index layer link");
        if (links[j] >= n) throw IoError("index file: layer link out of range");
      }
      layer.slots.push_back(slot);
      layer.links.push_back(std::move(links));
    }
    // Links at a layer must stay inside that layer.
    for (const auto& links : layer.links)
      for (uint32_t v : links)
        if (!layer.find(v)) throw IoError("index file: layer link leaves the layer");
  }

  const size_t block_bytes = index.block_bytes();
  std::vector<unsigned char> raw(static_cast<size_t>(n) * block_bytes);
  r.read_exact(raw.data(), raw.size(), false, "index block region");
  std::vector<uint32_t> links;
  std::vector<float> vec(dim);
  for (uint32_t slot = 0; slot < n; ++slot) {
    const unsigned char* b = raw.data() + static_cast<size_t>(slot) * block_bytes;
    const uint32_t header = le32(b);
    const uint32_t count = header >> 24;
    const uint32_t id = header & 0x00FFFFFFu;
    if (count > max_links) throw IoError("index file: block link count over the cap");
    if (id >= n) throw IoError("index file: block id out of range");
    links.assign(count, 0);
    for (uint32_t i = 0; i < count; ++i) {
      links[i] = le32(b + 4u + 4u * i);
      if (links[i] >= n) throw IoError("index file: block link out of range");
    }
    for (uint32_t i = count; i < max_links; ++i)
      if (le32(b + 4u + 4u * i) != FlatIndex::kLinkSentinel)
        throw IoError("index file: unused link slot is not the sentinel");
    for (uint32_t j = 0; j < dim; ++j)
      vec[j] = std::bit_cast<float>(le32(b + 4u + 4u * max_links + 4u * j));
    index.set_block(slot, id, links, vec.data());
  }
  index.set_entry_slot(entry);
  r.expect_eof("index file");
  return index;
}

void save_index_file(const std::string& path, const FlatIndex& index) {
  auto out = open_out(path);
  save_index(out, index);
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

FlatIndex load_index_file(const std::string& path) {
  auto in = open_in(path);
  return load_index(in);
}

void save_ordering(std::ostream& out, const Ordering& p) {
  put_bytes(out, "ORDR", 4);
  put_u32(out, p.size());
  for (uint32_t slot : p.forward) put_u32(out, slot);
}

Ordering load_ordering(std::istream& in) {
  ByteReader r{in};
  char magic[4];
  r.read_exact(magic, 4, false, "ordering magic");
  if (std::memcmp(magic, "ORDR", 4) != 0) throw IoError("ordering file: bad magic");
  const uint32_t n = r.u32("ordering size");
  std::vector<uint32_t> fwd(n);
  for (uint32_t i = 0; i < n; ++i) fwd[i] = r.u32("ordering slot");
  r.expect_eof("ordering file");
  try {
    return Ordering::from_forward(std::move(fwd));
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("ordering file: ") + e.what());
  }
}

void save_ordering_file(const std::string& path, const Ordering& p) {
  auto out = open_out(path);
  save_ordering(out, p);
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

Ordering load_ordering_file(const std::string& path) {
  auto in = open_in(path);
  return load_ordering(in);
}

VectorDataset read_fvecs_file(const std::string& path) {
  auto in = open_in(path);
  return read_fvecs(in);
}

void write_fvecs_file(const std::string& path, const VectorDataset& data) {
  auto out = open_out(path);
  write_fvecs(out, data);
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

VectorDataset read_bvecs_file(const std::string& path) {
  auto in = open_in(path);
  return read_bvecs(in);
}

std::vector<std::vector<uint32_t>> read_ivecs_file(const std::string& path) {
  auto in = open_in(path);
  return read_ivecs(in);
}

void write_ivecs_file(const std::string& path, const std::vector<std::vector<uint32_t>>& rows) {
  auto out = open_out(path);
  write_ivecs(out, rows);
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

VectorDataset read_vectors_file(const std::string& path) {
  if (path.size() >= 6 && path.compare(path.size() - 6, 6, ".bvecs") == 0)
    return read_bvecs_file(path);
  return read_fvecs_file(path);
}

}  // namespace nnro
