#ifndef CHAINLAB_ALPHABET_HPP
#define CHAINLAB_ALPHABET_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "chainlab/errors.hpp"

namespace chainlab {

/// Bijection between surface symbols (tags, tokens, state names) and dense
/// indices 0..size-1. An empty alphabet is allowed (an empty corpus induces
/// one); models require nonempty alphabets and check that themselves.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    index_.reserve(symbols_.size());
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      auto [it, inserted] = index_.emplace(symbols_[i], i);
      if (!inserted) {
        throw ValidationError("duplicate alphabet symbol '" + symbols_[i] + "'");
      }
    }
  }

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }

  const std::string& symbol(std::size_t index) const {
    if (index >= symbols_.size()) {
      throw IndexError("alphabet index " + std::to_string(index) + " out of range (size " +
                       std::to_string(symbols_.size()) + ")");
    }
    return symbols_[index];
  }

  std::size_t index(const std::string& symbol) const {
    auto it = index_.find(symbol);
    if (it == index_.end()) {
      throw VocabularyError("symbol '" + symbol + "' is not in the alphabet");
    }
    return it->second;
  }

  std::optional<std::size_t> find(const std::string& symbol) const {
    auto it = index_.find(symbol);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const std::string& symbol) const { return index_.count(symbol) != 0; }

  const std::vector<std::string>& symbols() const { return symbols_; }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace chainlab

#endif  // CHAINLAB_ALPHABET_HPP
