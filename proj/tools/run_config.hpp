#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace scriptcausal::cli {

enum class FieldKind { input_path, output_path, output_dir, text, count, real, flag, counts, texts };

struct FieldSpec {
  const char* key;
  FieldKind kind;
  const char* fallback;  // default as written on a command line; "" = none
  const char* help;
};

// Every configurable key. Config files are flat JSON objects over these keys.
const std::vector<FieldSpec>& field_specs();
const FieldSpec& field_spec(const std::string& key);

// Resolved settings for one command: defaults, then the config file, then
// command-line values.
class RunConfig {
 public:
  RunConfig() = default;

  // Applies a raw value (command-line syntax) to a key, with field-level
  // errors.
  void set_raw(const std::string& key, const std::string& raw);
  void set_json(const std::string& key, const nlohmann::json& value);
  bool has(const std::string& key) const;

  std::string text(const std::string& key) const;
  std::string path(const std::string& key) const { return text(key); }
  std::size_t count(const std::string& key) const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<std::size_t> counts(const std::string& key) const;
  std::vector<std::string> texts(const std::string& key) const;

  // Rejects missing required keys and missing input paths before anything
  // is written.
  void validate(const std::vector<std::string>& keys, const std::vector<std::string>& required) const;

  // Canonical dump of the resolved values (sorted keys) and its FNV-1a hash.
  std::string canonical() const;
  std::uint64_t hash() const;
  const nlohmann::json& values() const { return values_; }

 private:
  nlohmann::json values_ = nlohmann::json::object();
};

// Loads a flat JSON config, rejecting unknown keys.
nlohmann::json read_config_file(const std::string& path);

}  // namespace scriptcausal::cli
