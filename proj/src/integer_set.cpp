#include "freqlab/integer_set.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "freqlab/errors.hpp"

namespace freqlab {

IntegerSet IntegerSet::from_sorted(const std::vector<std::uint64_t>& elems, std::uint64_t bound,
                                   std::string label) {
  IntegerSet s;
  s.mask_.assign(bound, 0);
  s.label_ = std::move(label);
  std::uint64_t prev = 0;
  for (auto e : elems) {
    if (e == 0) throw StructuralError("set entries must be >= 1");
    if (e <= prev) throw StructuralError("set entries must be strictly increasing (" + std::to_string(prev) +
                                         " then " + std::to_string(e) + ")");
    prev = e;
    if (e <= bound) s.mask_[e - 1] = 1;
  }
  return s;
}

IntegerSet IntegerSet::from_predicate(const std::function<bool(std::uint64_t)>& pred, std::uint64_t bound,
                                      std::string label) {
  IntegerSet s;
  s.mask_.resize(bound);
  s.label_ = std::move(label);
  for (std::uint64_t k = 1; k <= bound; ++k) s.mask_[k - 1] = pred(k) ? 1 : 0;
  return s;
}

IntegerSet IntegerSet::from_mask(std::vector<std::uint8_t> mask, std::string label) {
  IntegerSet s;
  s.mask_ = std::move(mask);
  for (auto& b : s.mask_) b = b ? 1 : 0;
  s.label_ = std::move(label);
  return s;
}

std::uint64_t IntegerSet::count() const {
  return static_cast<std::uint64_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

std::vector<std::uint64_t> IntegerSet::elements() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 1; k <= bound(); ++k)
    if (mask_[k - 1]) out.push_back(k);
  return out;
}

IntegerSet IntegerSet::complement() const {
  IntegerSet s;
  s.mask_.resize(mask_.size());
  for (std::size_t i = 0; i < mask_.size(); ++i) s.mask_[i] = mask_[i] ? 0 : 1;
  s.label_ = "complement(" + label_ + ")";
  return s;
}

bool IntegerSet::subset_of(const IntegerSet& other) const {
  for (std::uint64_t k = 1; k <= bound(); ++k)
    if (mask_[k - 1] && !other.contains(k)) return false;
  return true;
}

IntegerSet builtin_set(const std::string& name, std::uint64_t bound) {
  if (name == "evens") return IntegerSet::from_predicate([](std::uint64_t k) { return k % 2 == 0; }, bound, name);
  if (name == "odds") return IntegerSet::from_predicate([](std::uint64_t k) { return k % 2 == 1; }, bound, name);
  if (name == "all") return IntegerSet::from_predicate([](std::uint64_t) { return true; }, bound, name);
  if (name == "empty") return IntegerSet::from_predicate([](std::uint64_t) { return false; }, bound, name);
  if (name == "squares") {
    std::vector<std::uint64_t> sq;
    for (std::uint64_t r = 1; r * r <= bound; ++r) sq.push_back(r * r);
    return IntegerSet::from_sorted(sq, bound, name);
  }
  throw DomainError("unknown builtin set '" + name + "' (evens, odds, squares, all, empty)");
}

IntegerSet read_set_file(const std::string& path, std::uint64_t bound) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open set file '" + path + "'");
  std::vector<std::uint64_t> elems;
  std::uint64_t v = 0;
  while (in >> v) elems.push_back(v);
  if (!in.eof()) throw StructuralError("set file '" + path + "' holds a non-integer token");
  return IntegerSet::from_sorted(elems, bound, path);
}

}  // namespace freqlab
