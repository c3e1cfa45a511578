#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hgnn {

/// Failure categories raised by the library. Every thrown hgnn::Error carries one.
enum class Errc {
  // hypergraph construction / validation
  EmptyHyperedge,
  IndexOutOfRange,
  NonPositiveWeight,
  DuplicateVertexInEdge,
  VertexCountMismatch,
  EmptyInputList,
  // construction
  KTooLarge,
  NonFiniteFeature,
  DegenerateDistances,
  // linear algebra
  ShapeMismatch,
  DimMismatch,
  NotSymmetric,
  TooLarge,
  // training
  EmptyMask,
  StaleCache,
  DisjointnessViolation,
  EmptyIndexSet,
  InvalidConfig,
  // io
  MissingFile,
  ParseError,
  InconsistentNodeCount,
  SplitOverlap,
  IoError,
  VersionMismatch,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Parse failure located at a 1-based line of a named input.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& detail);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace hgnn
