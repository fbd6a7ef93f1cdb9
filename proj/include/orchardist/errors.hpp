#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace orchardist {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A digraph failed the structural checks of a binary phylogenetic network.
class ValidationError : public Error {
 public:
  enum class Reason {
    kEmpty,
    kVertexOutOfRange,
    kParallelArcs,
    kNotADag,
    kMultipleRoots,
    kBadDegree,
    kMissingLabel,
    kDuplicateLabel,
  };

  ValidationError(Reason reason, std::string message,
                  std::optional<std::size_t> vertex = std::nullopt)
      : Error(std::move(message)), reason_(reason), vertex_(vertex) {}

  Reason reason() const { return reason_; }
  // Raw index of the offending vertex, when the violation is local to one.
  std::optional<std::size_t> vertex() const { return vertex_; }

 private:
  Reason reason_;
  std::optional<std::size_t> vertex_;
};

// Invalid request to an edit operation (leaf addition or deletion).
class EditError : public Error {
 public:
  enum class Reason { kUnknownArc, kLabelClash, kNotALeaf, kNotAReticulationArc };

  EditError(Reason reason, std::string message)
      : Error(std::move(message)), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

class ParseError : public Error {
 public:
  enum class Reason { kSyntax, kUnbalancedHybridTag };

  ParseError(Reason reason, std::string message, std::size_t position)
      : Error(std::move(message) + " (at offset " + std::to_string(position) +
              ")"),
        reason_(reason),
        position_(position) {}

  Reason reason() const { return reason_; }
  std::size_t position() const { return position_; }

 private:
  Reason reason_;
  std::size_t position_;
};

class CoverError : public Error {
 public:
  enum class Reason { kInfeasibleChoice, kNotTreeBased };

  CoverError(Reason reason, std::string message)
      : Error(std::move(message)), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

class LabellingError : public Error {
 public:
  enum class Reason { kPartialLabelling, kInfeasibleAssignment };

  LabellingError(Reason reason, std::string message)
      : Error(std::move(message)), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

class SolverError : public Error {
 public:
  enum class Reason { kGuardExceeded, kCertificateFailure };

  SolverError(Reason reason, std::string message)
      : Error(std::move(message)), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

class GenerationError : public Error {
 public:
  enum class Reason { kBadConfig, kRetriesExhausted, kNotCubic };

  GenerationError(Reason reason, std::string message)
      : Error(std::move(message)), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

}  // namespace orchardist
