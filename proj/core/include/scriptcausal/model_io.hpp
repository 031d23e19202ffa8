#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "scriptcausal/tensor.hpp"

namespace scriptcausal {

struct NamedTensor {
  std::string name;
  Tensor tensor;

  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

// Parameter file: the text line
//   #scriptcausal-model v1 <kind> <config-json>\n
// followed by a little-endian block: u32 array count, then per array
// u32 name length, name bytes, u32 rank, u64 dims[rank], f64 values.
struct ModelFile {
  std::string kind;
  std::string config_json;  // compact, single line
  std::vector<NamedTensor> arrays;

  const Tensor& get(const std::string& name) const;

  friend bool operator==(const ModelFile&, const ModelFile&) = default;
};

void write_model(std::ostream& out, const ModelFile& model);
ModelFile read_model(std::istream& in, const std::string& source = "<stream>");
void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);

// Little-endian scalar helpers shared by the binary formats.
void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_f64(std::ostream& out, double v);
std::uint32_t read_u32(std::istream& in, const std::string& source);
std::uint64_t read_u64(std::istream& in, const std::string& source);
double read_f64(std::istream& in, const std::string& source);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace scriptcausal
