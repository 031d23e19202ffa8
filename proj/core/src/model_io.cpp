#include "scriptcausal/model_io.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include "scriptcausal/errors.hpp"

namespace scriptcausal {

namespace {

constexpr std::string_view kMagic = "#scriptcausal-model";
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 34;

template <class T>
void write_le(std::ostream& out, T v) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T read_le(std::istream& in, const std::string& source) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T)))
    throw_format(source + ": truncated binary block");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void write_u32(std::ostream& out, std::uint32_t v) { write_le(out, v); }
void write_u64(std::ostream& out, std::uint64_t v) { write_le(out, v); }
void write_f64(std::ostream& out, double v) { write_le(out, std::bit_cast<std::uint64_t>(v)); }
std::uint32_t read_u32(std::istream& in, const std::string& s) { return read_le<std::uint32_t>(in, s); }
std::uint64_t read_u64(std::istream& in, const std::string& s) { return read_le<std::uint64_t>(in, s); }
double read_f64(std::istream& in, const std::string& s) {
  return std::bit_cast<double>(read_le<std::uint64_t>(in, s));
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const Tensor& ModelFile::get(const std::string& name) const {
  for (const auto& a : arrays)
    if (a.name == name) return a.tensor;
  throw_format("model file has no array '" + name + "'");
}

void write_model(std::ostream& out, const ModelFile& m) {
  if (m.kind.empty() || m.kind.find_first_of(" \t\n") != std::string::npos)
    throw_invalid("model kind must be a non-empty word");
  if (m.config_json.find('\n') != std::string::npos)
    throw_invalid("model config must fit on one line");
  out << kMagic << " v1 " << m.kind << ' ' << m.config_json << '\n';
  write_u32(out, static_cast<std::uint32_t>(m.arrays.size()));
  for (const auto& a : m.arrays) {
    write_u32(out, static_cast<std::uint32_t>(a.name.size()));
    out.write(a.name.data(), static_cast<std::streamsize>(a.name.size()));
    write_u32(out, static_cast<std::uint32_t>(a.tensor.shape.size()));
    for (auto d : a.tensor.shape) write_u64(out, d);
    for (double v : a.tensor.values) write_f64(out, v);
  }
  if (!out) throw_format("failed writing model");
}

ModelFile read_model(std::istream& in, const std::string& source) {
  std::string header;
  if (!std::getline(in, header)) throw_format(source + ": empty model file");
  const std::string prefix = std::string(kMagic) + " v1 ";
  if (header.rfind(prefix, 0) != 0) throw_format(source + ": not a scriptcausal model file (bad header)");
  const std::string rest = header.substr(prefix.size());
  const auto space = rest.find(' ');
  if (space == std::string::npos || space == 0) throw_format(source + ": model header lacks kind or config");
  ModelFile m;
  m.kind = rest.substr(0, space);
  m.config_json = rest.substr(space + 1);

  const std::uint32_t count = read_u32(in, source);
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor a;
    const std::uint32_t len = read_u32(in, source);
    if (len > 4096) throw_format(source + ": implausible array name length");
    a.name.resize(len);
    if (!in.read(a.name.data(), len)) throw_format(source + ": truncated array name");
    const std::uint32_t rank = read_u32(in, source);
    if (rank > 8) throw_format(source + ": implausible array rank for '" + a.name + "'");
    std::vector<std::size_t> dims(rank);
    std::uint64_t total = 1;
    for (auto& d : dims) {
      const std::uint64_t v = read_u64(in, source);
      if (v > kMaxElements || (v != 0 && total > kMaxElements / v))
        throw_format(source + ": array '" + a.name + "' too large");
      d = static_cast<std::size_t>(v);
      total *= v;
    }
    a.tensor = Tensor(std::move(dims));
    for (auto& v : a.tensor.values) v = read_f64(in, source);
    m.arrays.push_back(std::move(a));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw_format(source + ": trailing bytes after model data");
  return m;
}

void save_model(const std::filesystem::path& path, const ModelFile& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_invalid("cannot open '" + path.string() + "' for writing");
  write_model(out, m);
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_invalid("cannot open model file '" + path.string() + "'");
  return read_model(in, path.string());
}

}  // namespace scriptcausal
