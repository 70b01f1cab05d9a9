#ifndef CHAINLAB_SEQUENCE_HPP
#define CHAINLAB_SEQUENCE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chainlab/alphabet.hpp"
#include "chainlab/errors.hpp"

namespace chainlab {

/// One aligned sequence: observation indices, plus label indices when the
/// sequence is tagged.
struct LabeledSequence {
  std::vector<std::size_t> observations;
  std::optional<std::vector<std::size_t>> labels;

  std::size_t size() const { return observations.size(); }
  bool has_labels() const { return labels.has_value(); }
};

/// A list of sequences together with the alphabets their indices refer to.
class TaggedCorpus {
 public:
  TaggedCorpus() = default;

  TaggedCorpus(Alphabet obs_alphabet, Alphabet label_alphabet,
               std::vector<LabeledSequence> sequences)
      : obs_alphabet_(std::move(obs_alphabet)),
        label_alphabet_(std::move(label_alphabet)),
        sequences_(std::move(sequences)) {
    for (std::size_t s = 0; s < sequences_.size(); ++s) {
      const LabeledSequence& seq = sequences_[s];
      if (seq.labels && seq.labels->size() != seq.observations.size()) {
        throw DimensionError("sequence " + std::to_string(s) + ": " +
                             std::to_string(seq.labels->size()) + " labels for " +
                             std::to_string(seq.observations.size()) + " observations");
      }
      for (std::size_t y : seq.observations) {
        if (y >= obs_alphabet_.size()) {
          throw IndexError("sequence " + std::to_string(s) + ": observation index " +
                           std::to_string(y) + " out of range");
        }
      }
      if (seq.labels) {
        for (std::size_t x : *seq.labels) {
          if (x >= label_alphabet_.size()) {
            throw IndexError("sequence " + std::to_string(s) + ": label index " +
                             std::to_string(x) + " out of range");
          }
        }
      }
    }
  }

  const Alphabet& obs_alphabet() const { return obs_alphabet_; }
  const Alphabet& label_alphabet() const { return label_alphabet_; }
  const std::vector<LabeledSequence>& sequences() const { return sequences_; }

  bool empty() const { return sequences_.empty(); }

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const auto& s : sequences_) n += s.size();
    return n;
  }

  bool fully_labeled() const {
    for (const auto& s : sequences_) {
      if (!s.has_labels()) return false;
    }
    return true;
  }

 private:
  Alphabet obs_alphabet_;
  Alphabet label_alphabet_;
  std::vector<LabeledSequence> sequences_;
};

}  // namespace chainlab

#endif  // CHAINLAB_SEQUENCE_HPP
