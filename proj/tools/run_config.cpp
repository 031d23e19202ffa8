#include "run_config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "scriptcausal/errors.hpp"
#include "scriptcausal/model_io.hpp"

namespace scriptcausal::cli {

namespace {

using nlohmann::json;

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(raw);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw_invalid("empty list element");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::size_t parse_count(const std::string& raw) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    if (!raw.empty() && raw[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(raw, &pos);
  } catch (const std::exception&) {
    throw_invalid("expected a non-negative integer, got '" + raw + "'");
  }
  if (pos != raw.size()) throw_invalid("expected a non-negative integer, got '" + raw + "'");
  return static_cast<std::size_t>(v);
}

double parse_real(const std::string& raw) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(raw, &pos);
  } catch (const std::exception&) {
    throw_invalid("expected a number, got '" + raw + "'");
  }
  if (pos != raw.size()) throw_invalid("expected a number, got '" + raw + "'");
  return v;
}

bool parse_flag(const std::string& raw) {
  if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") return true;
  if (raw == "false" || raw == "0" || raw == "no" || raw == "off") return false;
  throw_invalid("expected true or false, got '" + raw + "'");
}

json convert(FieldKind kind, const std::string& raw) {
  switch (kind) {
    case FieldKind::count:
      return parse_count(raw);
    case FieldKind::real:
      return parse_real(raw);
    case FieldKind::flag:
      return parse_flag(raw);
    case FieldKind::counts: {
      json arr = json::array();
      if (!raw.empty())
        for (const auto& s : split_list(raw)) arr.push_back(parse_count(s));
      return arr;
    }
    case FieldKind::texts: {
      json arr = json::array();
      if (!raw.empty())
        for (const auto& s : split_list(raw)) arr.push_back(s);
      return arr;
    }
    default:
      return raw;
  }
}

// Checks a config-file value against the field kind.
void check_json(const FieldSpec& f, const json& v) {
  bool ok = false;
  switch (f.kind) {
    case FieldKind::count:
      ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
      break;
    case FieldKind::real:
      ok = v.is_number();
      break;
    case FieldKind::flag:
      ok = v.is_boolean();
      break;
    case FieldKind::counts:
      ok = v.is_array();
      for (const auto& e : v)
        ok = ok && (e.is_number_unsigned() || (e.is_number_integer() && e.get<long long>() >= 0));
      break;
    case FieldKind::texts:
      ok = v.is_array();
      for (const auto& e : v) ok = ok && e.is_string();
      break;
    default:
      ok = v.is_string();
  }
  if (!ok) throw_invalid(std::string(f.key) + ": value has the wrong type");
}

}  // namespace

const std::vector<FieldSpec>& field_specs() {
  using K = FieldKind;
  static const std::vector<FieldSpec> specs{
      // global
      {"seed", K::count, "1", "base seed for every random stream"},
      {"threads", K::count, "1", "worker threads (0 = hardware concurrency); outputs do not depend on it"},
      {"run_log", K::text, "scriptcausal-runs.log", "manifest log appended after each successful command ('none' disables)"},
      // paths
      {"input", K::input_path, "", "raw input: chain JSON lines (ingest), filled sheet (score-summary), system<TAB>event emissions (diversity)"},
      {"corpus", K::input_path, "", "chain corpus (JSON lines)"},
      {"dev", K::input_path, "", "development corpus for early stopping"},
      {"vocab", K::input_path, "", "event vocabulary file"},
      {"model", K::input_path, "", "conditional model file"},
      {"lm", K::input_path, "", "event language model file"},
      {"itable", K::input_path, "", "intervention table file"},
      {"pmi_counts", K::input_path, "", "skip-bigram counts file"},
      {"cbn", K::input_path, "", "CBN definition file (JSON), alternative to fixture"},
      {"out", K::output_path, "", "output file"},
      {"out_dir", K::output_dir, "", "output directory (created when missing)"},
      {"tsv_out", K::output_path, "", "optional TSV export of an intervention table"},
      {"paired_out", K::output_path, "", "optional per-task paired scores for signed-rank tests"},
      // corpus
      {"factual_only", K::flag, "true", "drop events whose factuality is not positive"},
      {"ratios", K::text, "0.8,0.1,0.1", "train,dev,test chain proportions"},
      {"min_count", K::count, "10", "minimum event count kept in the vocabulary"},
      {"token_min_count", K::count, "1", "minimum text token count kept"},
      // PMI
      {"window", K::count, "2", "skip-bigram window"},
      {"self_pairs", K::flag, "true", "count (e, e) pairs"},
      {"discounted", K::flag, "true", "apply the low-frequency discount to PMI"},
      // event LM
      {"lm_input_dim", K::count, "300", "LM embedding size"},
      {"lm_hidden", K::count, "512", "LM hidden size (two GRU layers)"},
      {"dropout", K::real, "0.1", "LM dropout"},
      {"lm_lr", K::real, "0.001", "LM Adam learning rate"},
      {"lm_batch", K::count, "64", "LM batch size in chains"},
      // conditional model
      {"dim", K::count, "300", "event/text embedding size"},
      {"hidden", K::count, "300", "encoder hidden size"},
      {"text_mode", K::text, "mean", "text encoder: mean or cnn"},
      {"lr", K::real, "0.001", "pretraining Adam learning rate"},
      {"finetune_lr", K::real, "0.00001", "finetuning learning rate"},
      {"batch", K::count, "512", "conditional model batch size in instances"},
      {"history", K::count, "10", "in-text history window"},
      {"oot_threshold", K::count, "3", "minimum rating (0-4) admitting an out-of-text event"},
      // shared training
      {"clip", K::real, "10", "global gradient norm clip"},
      {"patience", K::count, "3", "early stopping patience in epochs"},
      {"max_epochs", K::count, "50", "epoch limit for pretraining and LM training"},
      {"finetune_max_epochs", K::count, "50", "epoch limit for finetuning"},
      // interventions and scoring
      {"samples", K::count, "2000", "adjustment-set size N"},
      {"model_id", K::text, "", "identifier stored in the intervention table (default: model file name)"},
      {"system", K::text, "causal", "pairwise scorer: causal or pmi"},
      {"target", K::text, "", "target event key (score); all targets when empty"},
      {"context", K::texts, "", "comma-separated context event keys (complete)"},
      {"topk", K::count, "10", "results per query"},
      {"exclude_top", K::count, "20", "most frequent events excluded from candidates"},
      // synthetic data
      {"fixture", K::text, "", "shipped CBN: F-POPCORN, F-DET, F-UNIFORM or F-ZIPF"},
      {"chains", K::count, "50000", "number of sampled chains"},
      {"annotate", K::flag, "false", "expose the scenario as an out-of-text annotation"},
      // evaluation
      {"systems", K::texts, "lm,causal,pmi", "cloze/sheet systems"},
      {"cutoffs", K::counts, "0,50,100,125,150,200,500", "cloze exclusion thresholds"},
      {"recall_n", K::count, "100", "N of Recall@N"},
      {"cloze_count", K::count, "10000", "cloze instances sampled from the corpus"},
      {"targets", K::count, "150", "sheet target events"},
      {"per_system", K::count, "2", "sheet candidates per system and target"},
      // gradient check
      {"check", K::text, "all", "gradcheck target: lm, cond or all"},
      {"eps", K::real, "0.00001", "finite-difference step"},
      {"param_scale", K::real, "1", "gradcheck parameters drawn in +-scale"},
      {"check_batch", K::count, "10", "gradcheck batch size"},
  };
  return specs;
}

const FieldSpec& field_spec(const std::string& key) {
  for (const auto& f : field_specs())
    if (key == f.key) return f;
  throw_invalid("unknown config key '" + key + "'");
}

void RunConfig::set_raw(const std::string& key, const std::string& raw) {
  const auto& f = field_spec(key);
  try {
    values_[key] = convert(f.kind, raw);
  } catch (const InvalidArgument& e) {
    throw_invalid(key + ": " + e.what());
  }
}

void RunConfig::set_json(const std::string& key, const json& value) {
  check_json(field_spec(key), value);
  values_[key] = value;
}

bool RunConfig::has(const std::string& key) const {
  if (!values_.contains(key)) return false;
  const auto& v = values_.at(key);
  return !(v.is_string() && v.get<std::string>().empty());
}

std::string RunConfig::text(const std::string& key) const {
  return values_.contains(key) ? values_.at(key).get<std::string>() : std::string();
}

std::size_t RunConfig::count(const std::string& key) const { return values_.at(key).get<std::size_t>(); }
double RunConfig::real(const std::string& key) const { return values_.at(key).get<double>(); }
bool RunConfig::flag(const std::string& key) const { return values_.at(key).get<bool>(); }

std::vector<std::size_t> RunConfig::counts(const std::string& key) const {
  return values_.at(key).get<std::vector<std::size_t>>();
}

std::vector<std::string> RunConfig::texts(const std::string& key) const {
  return values_.at(key).get<std::vector<std::string>>();
}

void RunConfig::validate(const std::vector<std::string>& keys,
                         const std::vector<std::string>& required) const {
  namespace fs = std::filesystem;
  for (const auto& key : required)
    if (!has(key)) throw_invalid(key + ": required but not set");
  for (const auto& key : keys) {
    const auto& f = field_spec(key);
    if (f.kind != FieldKind::input_path && f.kind != FieldKind::output_path &&
        f.kind != FieldKind::output_dir)
      continue;
    if (!has(key)) continue;
    const auto p = text(key);
    if (f.kind == FieldKind::input_path && !fs::is_regular_file(p))
      throw_invalid(key + ": file not found: " + p);
    if (f.kind == FieldKind::output_path) {
      const auto parent = fs::path(p).parent_path();
      if (!parent.empty() && !fs::is_directory(parent))
        throw_invalid(key + ": directory does not exist: " + parent.string());
      if (fs::is_directory(p)) throw_invalid(key + ": is a directory: " + p);
    }
    if (f.kind == FieldKind::output_dir && fs::exists(p) && !fs::is_directory(p))
      throw_invalid(key + ": not a directory: " + p);
  }
}

std::string RunConfig::canonical() const { return values_.dump(); }

std::uint64_t RunConfig::hash() const { return fnv1a(canonical()); }

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_invalid("config: cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw_invalid("config: " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw_invalid("config: " + path + ": expected a flat JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object()) throw_invalid("config: " + key + ": nested objects are not supported");
    field_spec(key);
  }
  return doc;
}

}  // namespace scriptcausal::cli
