// sincnet/checkpoint.hpp

// Copyright 2026  SincNet C++ Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "sincnet/common.hpp"
#include "sincnet/config.hpp"
#include "sincnet/network.hpp"

// Versioned binary checkpoint, magic "SNC1", little-endian throughout
// (little-endian host assumed). Layout:
//
//   "SNC1"  u32 version  u32 n_tensors
//   per tensor: u32 name_len, name bytes, u8 dtype (0=f64, 1=u8),
//               u32 ndim, u64 dims[ndim]
//   raw tensor blobs concatenated in header order
//
// Parameters and running statistics are f64 tensors named by the network's
// registry; the model configuration rides along as the u8 tensor
// "meta.config" holding flat key=value text (model keys only, no paths).

namespace sincnet {

struct TensorRecord {
  std::string name;
  std::uint8_t dtype = 0;  // 0 = f64, 1 = u8
  std::vector<std::uint64_t> dims;
  std::vector<unsigned char> bytes;

  std::uint64_t element_count() const {
    std::uint64_t n = 1;
    for (std::uint64_t d : dims) n *= d;
    return n;
  }
};

namespace detail {

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

struct ByteReader {
  const std::vector<unsigned char>& bytes;
  std::size_t pos = 0;
  std::string origin;

  void need(std::size_t n) const {
    if (pos + n > bytes.size()) throw FormatError(origin + ": truncated checkpoint");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
  std::uint8_t u8() {
    need(1);
    return bytes[pos++];
  }
  std::string str(std::size_t n) {
    need(n);
    std::string s(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                  bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
    pos += n;
    return s;
  }
};

}  // namespace detail

inline constexpr std::uint32_t kCheckpointVersion = 1;

inline void write_checkpoint_records(const std::string& path,
                                     const std::vector<TensorRecord>& records) {
  std::vector<unsigned char> out;
  out.insert(out.end(), {'S', 'N', 'C', '1'});
  detail::put_u32(out, kCheckpointVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(records.size()));
  for (const auto& r : records) {
    detail::put_u32(out, static_cast<std::uint32_t>(r.name.size()));
    out.insert(out.end(), r.name.begin(), r.name.end());
    out.push_back(r.dtype);
    detail::put_u32(out, static_cast<std::uint32_t>(r.dims.size()));
    for (std::uint64_t d : r.dims) detail::put_u64(out, d);
  }
  for (const auto& r : records) out.insert(out.end(), r.bytes.begin(), r.bytes.end());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FormatError("cannot write checkpoint: " + path);
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw FormatError("short write: " + path);
}

inline std::vector<TensorRecord> read_checkpoint_records(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open checkpoint: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
  detail::ByteReader r{bytes, 0, path};
  if (r.str(4) != "SNC1") throw FormatError(path + ": not an SNC1 checkpoint (bad magic)");
  std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    throw FormatError(path + ": unsupported checkpoint version " + std::to_string(version) +
                      " (expected " + std::to_string(kCheckpointVersion) + ")");
  std::uint32_t n = r.u32();
  std::vector<TensorRecord> records(n);
  for (auto& rec : records) {
    std::uint32_t name_len = r.u32();
    rec.name = r.str(name_len);
    rec.dtype = r.u8();
    if (rec.dtype > 1)
      throw FormatError(path + ": tensor '" + rec.name + "' has unknown dtype " +
                        std::to_string(rec.dtype));
    std::uint32_t ndim = r.u32();
    rec.dims.resize(ndim);
    for (auto& d : rec.dims) d = r.u64();
  }
  for (auto& rec : records) {
    std::size_t elem = rec.dtype == 0 ? 8 : 1;
    std::size_t len = static_cast<std::size_t>(rec.element_count()) * elem;
    r.need(len);
    rec.bytes.assign(bytes.begin() + static_cast<std::ptrdiff_t>(r.pos),
                     bytes.begin() + static_cast<std::ptrdiff_t>(r.pos + len));
    r.pos += len;
  }
  if (r.pos != bytes.size()) throw FormatError(path + ": trailing bytes after tensor data");
  return records;
}

/// Model keys embedded in a checkpoint; chunk geometry rides along so
/// evaluation commands chunk exactly as training did.
inline ConfigMap meta_from_arch(const ArchConfig& arch, std::size_t chunk_ms,
                                std::size_t overlap_ms,
                                const std::vector<std::string>& speakers) {
  ConfigMap meta;
  meta["first_kind"] = arch.first_kind;
  meta["input_samples"] = std::to_string(arch.input_samples);
  meta["sample_rate"] = std::to_string(arch.sample_rate);
  meta["n_filters"] = std::to_string(arch.n_filters);
  meta["filter_length"] = std::to_string(arch.filter_length);
  meta["mel_fmin"] = format_double_exact(arch.mel_fmin_hz);
  meta["mel_fmax"] = format_double_exact(arch.mel_fmax_hz);
  if (!arch.conv_channels.empty()) {
    meta["conv_channels"] = join_size_list(arch.conv_channels);
    meta["conv_kernels"] = join_size_list(arch.conv_kernels);
  }
  meta["pool_width"] = std::to_string(arch.pool_width);
  if (!arch.fc_sizes.empty()) meta["fc_sizes"] = join_size_list(arch.fc_sizes);
  meta["n_classes"] = std::to_string(arch.n_classes);
  meta["leaky_slope"] = format_double_exact(arch.leaky_slope);
  meta["dropout_rate"] = format_double_exact(arch.dropout_rate);
  meta["chunk_ms"] = std::to_string(chunk_ms);
  meta["overlap_ms"] = std::to_string(overlap_ms);
  std::string joined;
  for (std::size_t i = 0; i < speakers.size(); ++i) {
    if (i) joined += ",";
    joined += speakers[i];
  }
  if (!joined.empty()) meta["speakers"] = joined;
  return meta;
}

inline ArchConfig arch_from_meta(const ConfigMap& meta) {
  ArchConfig arch;
  arch.first_kind = get_required(meta, "first_kind");
  arch.input_samples = static_cast<std::size_t>(get_u64(meta, "input_samples", 0));
  arch.sample_rate = static_cast<std::size_t>(get_u64(meta, "sample_rate", 0));
  arch.n_filters = static_cast<std::size_t>(get_u64(meta, "n_filters", 0));
  arch.filter_length = static_cast<std::size_t>(get_u64(meta, "filter_length", 0));
  arch.mel_fmin_hz = get_double(meta, "mel_fmin", 30.0);
  arch.mel_fmax_hz = get_double(meta, "mel_fmax", 0.0);
  arch.conv_channels = get_size_list(meta, "conv_channels", {});
  arch.conv_kernels = get_size_list(meta, "conv_kernels", {});
  arch.pool_width = static_cast<std::size_t>(get_u64(meta, "pool_width", 3));
  arch.fc_sizes = get_size_list(meta, "fc_sizes", {});
  arch.n_classes = static_cast<std::size_t>(get_u64(meta, "n_classes", 0));
  arch.leaky_slope = get_double(meta, "leaky_slope", 0.2);
  arch.dropout_rate = get_double(meta, "dropout_rate", 0.0);
  return arch;
}

inline std::vector<std::string> speakers_from_meta(const ConfigMap& meta) {
  std::vector<std::string> out;
  std::string joined = get_string(meta, "speakers", "");
  std::size_t start = 0;
  while (start < joined.size()) {
    std::size_t comma = joined.find(',', start);
    if (comma == std::string::npos) comma = joined.size();
    out.push_back(joined.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

inline void save_checkpoint(const std::string& path, Network& net, const ConfigMap& meta) {
  std::vector<TensorRecord> records;
  auto append = [&](const ParamRef& p) {
    TensorRecord rec;
    rec.name = p.name;
    rec.dtype = 0;
    for (std::size_t d : p.value->shape()) rec.dims.push_back(d);
    rec.bytes.resize(p.value->size() * sizeof(double));
    std::memcpy(rec.bytes.data(), p.value->data(), rec.bytes.size());
    records.push_back(std::move(rec));
  };
  for (const auto& p : net.params()) append(p);
  for (const auto& p : net.state()) append(p);
  TensorRecord cfg;
  cfg.name = "meta.config";
  cfg.dtype = 1;
  std::string text = render_config(meta);
  cfg.dims.push_back(text.size());
  cfg.bytes.assign(text.begin(), text.end());
  records.push_back(std::move(cfg));
  write_checkpoint_records(path, records);
}

/// Rebuilds the network from the embedded config and loads every parameter
/// and running-statistic tensor by name. Unknown or missing tensors are
/// format errors.
inline Network load_checkpoint(const std::string& path, ConfigMap* meta_out = nullptr) {
  std::vector<TensorRecord> records = read_checkpoint_records(path);
  ConfigMap meta;
  bool have_meta = false;
  for (const auto& r : records) {
    if (r.name != "meta.config") continue;
    meta = parse_config_text(std::string(r.bytes.begin(), r.bytes.end()), path + ":meta.config");
    have_meta = true;
  }
  if (!have_meta) throw FormatError(path + ": missing meta.config tensor");

  Rng rng(0);  // initialization is immediately overwritten by loaded tensors
  Network net = Network::build(arch_from_meta(meta), rng);

  std::map<std::string, ParamRef> targets;
  for (const auto& p : net.params()) targets.emplace(p.name, p);
  for (const auto& p : net.state()) targets.emplace(p.name, p);

  std::size_t loaded = 0;
  for (const auto& r : records) {
    if (r.name == "meta.config") continue;
    auto it = targets.find(r.name);
    if (it == targets.end())
      throw FormatError(path + ": unexpected tensor '" + r.name + "'");
    if (r.dtype != 0) throw FormatError(path + ": tensor '" + r.name + "' must be f64");
    Tensor* dst = it->second.value;
    if (r.element_count() != dst->size() || r.dims.size() != dst->rank())
      throw FormatError(path + ": tensor '" + r.name + "' shape mismatch");
    for (std::size_t i = 0; i < r.dims.size(); ++i)
      if (r.dims[i] != dst->dim(i))
        throw FormatError(path + ": tensor '" + r.name + "' shape mismatch");
    std::memcpy(dst->data(), r.bytes.data(), r.bytes.size());
    ++loaded;
  }
  if (loaded != targets.size())
    throw FormatError(path + ": checkpoint is missing model tensors");
  if (meta_out) *meta_out = meta;
  return net;
}

}  // namespace sincnet
