#ifndef CHAINLAB_ERRORS_HPP
#define CHAINLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chainlab {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Sequence/matrix sizes do not line up (or a fixed-length model was given a
/// sequence of the wrong length).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An index is outside its alphabet or table bounds.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A construction invariant was violated (bad probability row, non-finite
/// potential, duplicate alphabet symbol, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An internal numeric guard tripped (renormalization residue too large,
/// non-finite value where one is impossible).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A prior label marginal used as a denominator is zero.
class DegeneratePriorError : public Error {
 public:
  using Error::Error;
};

/// The observation sequence has probability zero under the model.
class ImpossibleEvidenceError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration would exceed the configured cap.
class TooLargeError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or did not match the expected format.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A surface symbol is not part of the relevant alphabet.
class VocabularyError : public Error {
 public:
  using Error::Error;
};

/// Estimation was asked for something the corpus cannot support.
class EstimationError : public Error {
 public:
  using Error::Error;
};

}  // namespace chainlab

#endif  // CHAINLAB_ERRORS_HPP
