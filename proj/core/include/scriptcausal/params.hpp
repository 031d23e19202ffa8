#pragma once

#include <string>
#include <vector>

#include "scriptcausal/errors.hpp"
#include "scriptcausal/model_io.hpp"
#include "scriptcausal/tensor.hpp"

namespace scriptcausal {

// Helpers over parameter structs exposing visit(prefix, f(name, Tensor&)).

template <class P>
std::vector<Tensor*> tensor_list(P& p) {
  std::vector<Tensor*> out;
  p.visit("", [&](const std::string&, Tensor& t) { out.push_back(&t); });
  return out;
}

template <class P>
P zeros_like(const P& p) {
  P z = p;
  z.visit("", [](const std::string&, Tensor& t) { t.zero(); });
  return z;
}

template <class P>
void add_into(P& dst, P& src) {
  auto d = tensor_list(dst);
  auto s = tensor_list(src);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d[i]->values.size(); ++j) d[i]->values[j] += s[i]->values[j];
}

template <class P>
void scale_all(P& p, double factor) {
  p.visit("", [&](const std::string&, Tensor& t) {
    for (auto& v : t.values) v *= factor;
  });
}

template <class P>
std::vector<NamedTensor> export_arrays(P& p) {
  std::vector<NamedTensor> out;
  p.visit("", [&](const std::string& name, Tensor& t) { out.push_back({name, t}); });
  return out;
}

// Copies arrays into p by name, checking that every expected array exists
// with the expected shape.
template <class P>
void import_arrays(P& p, const ModelFile& file) {
  p.visit("", [&](const std::string& name, Tensor& t) {
    const Tensor& src = file.get(name);
    if (src.shape != t.shape) throw_format("array '" + name + "' has an unexpected shape");
    t = src;
  });
}

}  // namespace scriptcausal
