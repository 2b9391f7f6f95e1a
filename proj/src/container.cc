// Copyright 2026 The cfrmat Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Compiled-game container layout. All integers are little-endian; every
// integer field is 64-bit except the version (u16) and checksums (u32).
//
//   "CFRM"                       4-byte magic
//   version                      u16
//   dims                         7 x i64: |V| |T| |D| |H+| |Q+| |I+| D
//   sections, in order:
//     G, G_T, L1..LD, L_T1..L_TD, M_QV, M_QV_T, M_HQ, M_HQ_T,
//     M_VI, s_sigma0, U_term, sigma1, index_maps
//   each section:
//     name length u64, name bytes, payload length u64, payload,
//     CRC-32 (IEEE) of the payload u32
//
// Payloads:
//   CSR     rows, cols, nnz, row_ptr[rows+1], col_idx[nnz], values[nnz] (f64)
//   dense   rows, cols, data[rows*cols] (f64, row-major)
//   vector  length, data (f64)
//   index_maps
//           game name (u64 length + bytes), |H+|, then per infoset row:
//           owner, source infoset id, label; |Q+|, then per pair row:
//           infoset row, action id, label. Strings are u64 length + bytes.

#include <zlib.h>

#include <bit>
#include <cstring>
#include <iterator>
#include <sstream>

#include "cfrmat/compiler.h"

namespace cfrmat {
namespace {

constexpr char kMagic[4] = {'C', 'F', 'R', 'M'};

std::uint32_t Crc32(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(bytes.data()),
            static_cast<uInt>(bytes.size())));
}

class ByteWriter {
 public:
  void U16(std::uint16_t x) {
    for (int i = 0; i < 2; ++i) out_.push_back(static_cast<char>((x >> (8 * i)) & 0xFF));
  }
  void U32(std::uint32_t x) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((x >> (8 * i)) & 0xFF));
  }
  void U64(std::uint64_t x) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((x >> (8 * i)) & 0xFF));
  }
  void I64(std::int64_t x) { U64(static_cast<std::uint64_t>(x)); }
  void F64(double x) { U64(std::bit_cast<std::uint64_t>(x)); }
  void Bytes(std::string_view s) { out_.append(s); }
  void String(std::string_view s) {
    U64(s.size());
    Bytes(s);
  }
  void I64s(const std::vector<Index>& xs) {
    for (Index x : xs) I64(x);
  }
  void F64s(const std::vector<double>& xs) {
    for (double x : xs) F64(x);
  }

  std::string& str() { return out_; }

 private:
  std::string out_;
};

class ByteReader {
 public:
  ByteReader(std::string_view bytes, std::string context)
      : bytes_(bytes), context_(std::move(context)) {}

  std::string_view Take(std::uint64_t n) {
    if (n > bytes_.size() - pos_)
      throw ContainerError(ContainerError::Kind::kTruncated,
                           "container truncated in " + context_ + " (need " + std::to_string(n) +
                               " bytes, " + std::to_string(bytes_.size() - pos_) + " left)");
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint64_t Unsigned(int width) {
    auto b = Take(static_cast<std::uint64_t>(width));
    std::uint64_t x = 0;
    for (int i = 0; i < width; ++i)
      x |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[static_cast<size_t>(i)])) << (8 * i);
    return x;
  }
  std::uint16_t U16() { return static_cast<std::uint16_t>(Unsigned(2)); }
  std::uint32_t U32() { return static_cast<std::uint32_t>(Unsigned(4)); }
  std::uint64_t U64() { return Unsigned(8); }
  std::int64_t I64() { return static_cast<std::int64_t>(U64()); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string String() {
    const std::uint64_t n = U64();
    return std::string(Take(n));
  }
  // Reads a count that must fit in the remaining bytes at `unit` bytes each.
  std::uint64_t Count(std::uint64_t unit) {
    const std::int64_t n = I64();
    if (n < 0)
      throw ContainerError(ContainerError::Kind::kMalformed, "negative length in " + context_);
    if (unit > 0 && static_cast<std::uint64_t>(n) > (bytes_.size() - pos_) / unit)
      throw ContainerError(ContainerError::Kind::kTruncated,
                           "container truncated in " + context_);
    return static_cast<std::uint64_t>(n);
  }
  std::vector<Index> I64s(std::uint64_t n) {
    std::vector<Index> xs(n);
    for (auto& x : xs) x = I64();
    return xs;
  }
  std::vector<double> F64s(std::uint64_t n) {
    std::vector<double> xs(n);
    for (auto& x : xs) x = F64();
    return xs;
  }
  bool AtEnd() const { return pos_ == bytes_.size(); }
  void ExpectEnd() const {
    if (!AtEnd())
      throw ContainerError(ContainerError::Kind::kMalformed,
                           "trailing bytes after " + context_);
  }

 private:
  std::string_view bytes_;
  size_t pos_ = 0;
  std::string context_;
};

void EncodeCsr(ByteWriter& w, const CsrMatrix<double>& m) {
  w.I64(m.num_rows);
  w.I64(m.num_cols);
  w.I64(m.nnz());
  w.I64s(m.row_ptr);
  w.I64s(m.col_idx);
  w.F64s(m.values);
}

void EncodeDense(ByteWriter& w, const DenseMatrix<double>& m) {
  w.I64(m.num_rows);
  w.I64(m.num_cols);
  w.F64s(m.data);
}

void EncodeVector(ByteWriter& w, const std::vector<double>& x) {
  w.I64(static_cast<Index>(x.size()));
  w.F64s(x);
}

void EncodeMaps(ByteWriter& w, const CompiledGame& cg) {
  const IndexMaps& m = cg.maps;
  w.String(cg.name);
  w.I64(static_cast<Index>(m.infoset_owner.size()));
  for (size_t h = 0; h < m.infoset_owner.size(); ++h) {
    w.I64(m.infoset_owner[h]);
    w.I64(m.infoset_id[h]);
    w.String(m.infoset_label[h]);
  }
  w.I64(static_cast<Index>(m.pair_infoset.size()));
  for (size_t q = 0; q < m.pair_infoset.size(); ++q) {
    w.I64(m.pair_infoset[q]);
    w.I64(m.pair_action[q]);
    w.String(m.pair_label[q]);
  }
}

[[noreturn]] void Malformed(const std::string& message) {
  throw ContainerError(ContainerError::Kind::kMalformed, message);
}

CsrMatrix<double> DecodeCsr(ByteReader& r, const std::string& name, Index rows, Index cols) {
  CsrMatrix<double> m;
  m.num_rows = r.I64();
  m.num_cols = r.I64();
  if (m.num_rows != rows || m.num_cols != cols)
    Malformed("section " + name + " has shape " + std::to_string(m.num_rows) + "x" +
              std::to_string(m.num_cols) + ", expected " + std::to_string(rows) + "x" +
              std::to_string(cols));
  const std::uint64_t nnz = r.Count(16);
  if (static_cast<std::uint64_t>(m.num_rows) + 1 > (1ULL << 40)) Malformed("section " + name + " too large");
  m.row_ptr = r.I64s(static_cast<std::uint64_t>(m.num_rows) + 1);
  m.col_idx = r.I64s(nnz);
  m.values = r.F64s(nnz);
  r.ExpectEnd();
  if (!m.WellFormed()) Malformed("section " + name + " is not a well-formed CSR matrix");
  return m;
}

DenseMatrix<double> DecodeDense(ByteReader& r, const std::string& name, Index rows, Index cols) {
  DenseMatrix<double> m;
  m.num_rows = r.I64();
  m.num_cols = r.I64();
  if (m.num_rows != rows || m.num_cols != cols)
    Malformed("section " + name + " has unexpected shape");
  m.data = r.F64s(static_cast<std::uint64_t>(rows * cols));
  r.ExpectEnd();
  return m;
}

std::vector<double> DecodeVector(ByteReader& r, const std::string& name, Index length) {
  if (r.I64() != length) Malformed("section " + name + " has unexpected length");
  auto x = r.F64s(static_cast<std::uint64_t>(length));
  r.ExpectEnd();
  return x;
}

void DecodeMaps(ByteReader& r, CompiledGame& cg) {
  IndexMaps& m = cg.maps;
  cg.name = r.String();
  const std::uint64_t infosets = r.Count(24);
  if (static_cast<Index>(infosets) != cg.dims.num_infosets) Malformed("index_maps infoset count");
  for (std::uint64_t h = 0; h < infosets; ++h) {
    m.infoset_owner.push_back(static_cast<PlayerId>(r.I64()));
    m.infoset_id.push_back(r.I64());
    m.infoset_label.push_back(r.String());
  }
  const std::uint64_t pairs = r.Count(24);
  if (static_cast<Index>(pairs) != cg.dims.num_pairs) Malformed("index_maps pair count");
  for (std::uint64_t q = 0; q < pairs; ++q) {
    m.pair_infoset.push_back(r.I64());
    m.pair_action.push_back(r.I64());
    m.pair_label.push_back(r.String());
  }
  r.ExpectEnd();
  for (PlayerId owner : m.infoset_owner)
    if (owner < 1 || owner > cg.dims.num_players) Malformed("index_maps owner out of range");
  for (Index h : m.pair_infoset)
    if (h < 0 || h >= cg.dims.num_infosets) Malformed("index_maps pair infoset out of range");
}

std::vector<std::string> SectionNames(Index depth) {
  std::vector<std::string> names{"G", "G_T"};
  for (Index l = 1; l <= depth; ++l) names.push_back("L" + std::to_string(l));
  for (Index l = 1; l <= depth; ++l) names.push_back("L_T" + std::to_string(l));
  for (const char* n : {"M_QV", "M_QV_T", "M_HQ", "M_HQ_T", "M_VI", "s_sigma0", "U_term",
                        "sigma1", "index_maps"})
    names.emplace_back(n);
  return names;
}

}  // namespace

std::string WriteCompiledToString(const CompiledGame& cg) {
  ByteWriter w;
  w.Bytes(std::string_view(kMagic, 4));
  w.U16(kContainerVersion);
  const GameDims& d = cg.dims;
  for (Index x : {d.num_nodes, d.num_terminals, d.num_decisions, d.num_infosets, d.num_pairs,
                  d.num_players, d.depth})
    w.I64(x);

  auto section = [&](const std::string& name, auto&& encode) {
    ByteWriter payload;
    encode(payload);
    w.String(name);
    w.U64(payload.str().size());
    w.Bytes(payload.str());
    w.U32(Crc32(payload.str()));
  };
  section("G", [&](ByteWriter& p) { EncodeCsr(p, cg.g); });
  section("G_T", [&](ByteWriter& p) { EncodeCsr(p, cg.g_t); });
  for (size_t l = 0; l < cg.levels.size(); ++l)
    section("L" + std::to_string(l + 1), [&](ByteWriter& p) { EncodeCsr(p, cg.levels[l]); });
  for (size_t l = 0; l < cg.levels_t.size(); ++l)
    section("L_T" + std::to_string(l + 1), [&](ByteWriter& p) { EncodeCsr(p, cg.levels_t[l]); });
  section("M_QV", [&](ByteWriter& p) { EncodeCsr(p, cg.m_qv); });
  section("M_QV_T", [&](ByteWriter& p) { EncodeCsr(p, cg.m_qv_t); });
  section("M_HQ", [&](ByteWriter& p) { EncodeCsr(p, cg.m_hq); });
  section("M_HQ_T", [&](ByteWriter& p) { EncodeCsr(p, cg.m_hq_t); });
  section("M_VI", [&](ByteWriter& p) { EncodeDense(p, cg.m_vi); });
  section("s_sigma0", [&](ByteWriter& p) { EncodeVector(p, cg.s_sigma0); });
  section("U_term", [&](ByteWriter& p) { EncodeDense(p, cg.u_term); });
  section("sigma1", [&](ByteWriter& p) { EncodeVector(p, cg.sigma1); });
  section("index_maps", [&](ByteWriter& p) { EncodeMaps(p, cg); });
  return std::move(w.str());
}

std::uint64_t WriteCompiled(const CompiledGame& cg, std::ostream& sink) {
  const std::string bytes = WriteCompiledToString(cg);
  sink.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!sink) throw ContainerError(ContainerError::Kind::kIo, "failed writing container");
  return bytes.size();
}

CompiledGame ReadCompiledFromString(const std::string& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw ContainerError(ContainerError::Kind::kBadMagic, "not a compiled game (bad magic)");
  ByteReader r(std::string_view(bytes).substr(4), "header");
  const std::uint16_t version = r.U16();
  if (version != kContainerVersion)
    throw ContainerError(ContainerError::Kind::kVersionMismatch,
                         "container version " + std::to_string(version) + ", expected " +
                             std::to_string(kContainerVersion));
  CompiledGame cg;
  GameDims& d = cg.dims;
  for (Index* x : {&d.num_nodes, &d.num_terminals, &d.num_decisions, &d.num_infosets,
                   &d.num_pairs, &d.num_players, &d.depth})
    *x = r.I64();
  const Index limit = Index{1} << 40;
  for (Index x : {d.num_nodes, d.num_terminals, d.num_decisions, d.num_infosets, d.num_pairs,
                  d.num_players, d.depth})
    if (x < 0 || x > limit) Malformed("dims block out of range");
  if (d.num_terminals + d.num_decisions != d.num_nodes) Malformed("dims block inconsistent");

  const Index n = d.num_nodes;
  for (const std::string& expected : SectionNames(d.depth)) {
    const std::string name = r.String();
    if (name != expected) Malformed("expected section " + expected + ", found '" + name + "'");
    const std::uint64_t length = r.U64();
    const std::string_view payload = r.Take(length);
    const std::uint32_t crc = r.U32();
    if (crc != Crc32(payload))
      throw ContainerError(ContainerError::Kind::kChecksum, "checksum mismatch in section " + name);
    ByteReader p(payload, "section " + name);
    if (name == "G") cg.g = DecodeCsr(p, name, n, n);
    else if (name == "G_T") cg.g_t = DecodeCsr(p, name, n, n);
    else if (name.starts_with("L_T")) cg.levels_t.push_back(DecodeCsr(p, name, n, n));
    else if (name.starts_with("L")) cg.levels.push_back(DecodeCsr(p, name, n, n));
    else if (name == "M_QV") cg.m_qv = DecodeCsr(p, name, d.num_pairs, n);
    else if (name == "M_QV_T") cg.m_qv_t = DecodeCsr(p, name, n, d.num_pairs);
    else if (name == "M_HQ") cg.m_hq = DecodeCsr(p, name, d.num_infosets, d.num_pairs);
    else if (name == "M_HQ_T") cg.m_hq_t = DecodeCsr(p, name, d.num_pairs, d.num_infosets);
    else if (name == "M_VI") cg.m_vi = DecodeDense(p, name, n, d.num_players);
    else if (name == "s_sigma0") cg.s_sigma0 = DecodeVector(p, name, n);
    else if (name == "U_term") cg.u_term = DecodeDense(p, name, n, d.num_players);
    else if (name == "sigma1") cg.sigma1 = DecodeVector(p, name, d.num_pairs);
    else DecodeMaps(p, cg);
  }
  r.ExpectEnd();
  return cg;
}

CompiledGame ReadCompiled(std::istream& source) {
  std::string bytes{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  if (source.bad()) throw ContainerError(ContainerError::Kind::kIo, "failed reading container");
  return ReadCompiledFromString(bytes);
}

}  // namespace cfrmat
