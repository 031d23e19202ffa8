#include "scriptcausal/pmi.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "scriptcausal/errors.hpp"
#include "scriptcausal/parallel.hpp"

namespace scriptcausal {

namespace {

constexpr std::size_t kShardChains = 1024;
constexpr std::string_view kCountsMagic = "#scriptcausal-counts v1";

OrderedCounts empty_counts(std::size_t vocab_size, std::size_t window, bool self_pairs) {
  OrderedCounts c;
  c.window = window;
  c.self_pairs = self_pairs;
  c.left_totals.assign(vocab_size, 0);
  c.right_totals.assign(vocab_size, 0);
  return c;
}

void add_pair(OrderedCounts& c, EventId a, EventId b, std::uint64_t n) {
  c.pairs[{a, b}] += n;
  c.left_totals[a] += n;
  c.right_totals[b] += n;
  c.grand_total += n;
}

}  // namespace

std::uint64_t OrderedCounts::count(EventId a, EventId b) const {
  auto it = pairs.find({a, b});
  return it == pairs.end() ? 0 : it->second;
}

void OrderedCounts::merge(const OrderedCounts& o) {
  if (o.window != window || o.self_pairs != self_pairs || o.left_totals.size() != left_totals.size())
    throw_invalid("cannot merge counts with different settings");
  for (const auto& [k, n] : o.pairs) pairs[k] += n;
  for (std::size_t i = 0; i < left_totals.size(); ++i) {
    left_totals[i] += o.left_totals[i];
    right_totals[i] += o.right_totals[i];
  }
  grand_total += o.grand_total;
}

OrderedCounts count_skip_bigrams(std::span<const std::vector<EventId>> chains,
                                 std::size_t vocab_size, std::size_t window, bool self_pairs,
                                 std::size_t threads) {
  if (window < 1) throw_invalid("skip-bigram window must be at least 1");
  const std::size_t shards = (chains.size() + kShardChains - 1) / kShardChains;
  std::vector<OrderedCounts> parts(shards);
  parallel_for(shards, threads, [&](std::size_t s) {
    OrderedCounts c = empty_counts(vocab_size, window, self_pairs);
    const std::size_t end = std::min(chains.size(), (s + 1) * kShardChains);
    for (std::size_t ci = s * kShardChains; ci < end; ++ci) {
      const auto& chain = chains[ci];
      for (std::size_t i = 0; i < chain.size(); ++i) {
        if (chain[i] >= vocab_size) throw_invalid("event id out of vocabulary range");
        for (std::size_t j = i + 1; j <= i + window && j < chain.size(); ++j) {
          if (chain[j] >= vocab_size) throw_invalid("event id out of vocabulary range");
          if (!self_pairs && chain[i] == chain[j]) continue;
          add_pair(c, chain[i], chain[j], 1);
        }
      }
    }
    parts[s] = std::move(c);
  });
  OrderedCounts total = empty_counts(vocab_size, window, self_pairs);
  for (const auto& p : parts) total.merge(p);
  return total;
}

double ordered_pmi(const OrderedCounts& counts, EventId a, EventId b, bool discounted) {
  if (a >= counts.left_totals.size() || b >= counts.right_totals.size())
    throw_invalid("ordered_pmi: unknown event id");
  const std::uint64_t c = counts.count(a, b);
  if (c == 0) return -std::numeric_limits<double>::infinity();
  const double t = static_cast<double>(counts.grand_total);
  const double joint = static_cast<double>(c) / t;
  const double left = static_cast<double>(counts.left_totals[a]) / t;
  const double right = static_cast<double>(counts.right_totals[b]) / t;
  double pmi = std::log(joint / (left * right));
  if (discounted) {
    const double cd = static_cast<double>(c);
    const double m = static_cast<double>(std::min(counts.left_totals[a], counts.right_totals[b]));
    pmi *= (cd / (cd + 1.0)) * (m / (m + 1.0));
  }
  return pmi;
}

void write_counts(std::ostream& out, const OrderedCounts& c, const Vocabulary& vocab) {
  if (c.left_totals.size() != vocab.size()) throw_invalid("counts do not match the vocabulary");
  out << kCountsMagic << "\twindow=" << c.window << "\tself_pairs=" << (c.self_pairs ? 1 : 0)
      << "\ttotal=" << c.grand_total << "\tpairs=" << c.pairs.size() << '\n';
  for (const auto& [k, n] : c.pairs)
    out << vocab.key(k.first) << '\t' << vocab.key(k.second) << '\t' << n << '\n';
}

OrderedCounts read_counts(std::istream& in, const Vocabulary& vocab, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(kCountsMagic, 0) != 0)
    throw_format(source + ": missing counts header");
  std::size_t window = 0, npairs = 0;
  int self = 1;
  std::uint64_t total = 0;
  {
    std::istringstream hs(line.substr(kCountsMagic.size()));
    std::string field;
    while (hs >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw_format(source + ": bad header field '" + field + "'");
      const std::string name = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      try {
        if (name == "window") window = std::stoul(value);
        else if (name == "self_pairs") self = std::stoi(value);
        else if (name == "total") total = std::stoull(value);
        else if (name == "pairs") npairs = std::stoul(value);
        else throw_format(source + ": unknown header field '" + name + "'");
      } catch (const std::logic_error&) {
        throw_format(source + ": bad header value in '" + field + "'");
      }
    }
  }
  if (window < 1) throw_format(source + ": window must be at least 1");
  OrderedCounts c = empty_counts(vocab.size(), window, self != 0);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw_format(source + ":" + std::to_string(lineno) + ": expected 3 columns");
    auto a = vocab.find(line.substr(0, t1));
    auto b = vocab.find(line.substr(t1 + 1, t2 - t1 - 1));
    if (!a || !b) throw_format(source + ":" + std::to_string(lineno) + ": event key not in vocabulary");
    std::uint64_t n = 0;
    try {
      n = std::stoull(line.substr(t2 + 1));
    } catch (const std::logic_error&) {
      throw_format(source + ":" + std::to_string(lineno) + ": bad count");
    }
    add_pair(c, *a, *b, n);
  }
  if (c.pairs.size() != npairs || c.grand_total != total)
    throw_format(source + ": totals do not match the header");
  return c;
}

}  // namespace scriptcausal
