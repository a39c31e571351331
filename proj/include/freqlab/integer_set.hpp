#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace freqlab {

// A subset of [1, bound], stored as a membership byte per integer.
class IntegerSet {
 public:
  // Entries must be strictly increasing and >= 1; entries above bound are dropped.
  static IntegerSet from_sorted(const std::vector<std::uint64_t>& elems, std::uint64_t bound,
                                std::string label = "explicit");
  static IntegerSet from_predicate(const std::function<bool(std::uint64_t)>& pred, std::uint64_t bound,
                                   std::string label);
  static IntegerSet from_mask(std::vector<std::uint8_t> mask, std::string label);

  std::uint64_t bound() const { return mask_.size(); }
  bool contains(std::uint64_t k) const { return k >= 1 && k <= bound() && mask_[k - 1] != 0; }
  std::span<const std::uint8_t> mask() const { return mask_; }
  const std::string& label() const { return label_; }

  std::uint64_t count() const;
  std::vector<std::uint64_t> elements() const;
  IntegerSet complement() const;
  bool subset_of(const IntegerSet& other) const;

 private:
  std::vector<std::uint8_t> mask_;
  std::string label_;
};

// evens | odds | squares | all | empty
IntegerSet builtin_set(const std::string& name, std::uint64_t bound);

// Whitespace-separated positive integers, strictly increasing.
IntegerSet read_set_file(const std::string& path, std::uint64_t bound);

}  // namespace freqlab
