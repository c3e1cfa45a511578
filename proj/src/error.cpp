#include "hgnn/error.hpp"

namespace hgnn {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyHyperedge: return "EmptyHyperedge";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::DuplicateVertexInEdge: return "DuplicateVertexInEdge";
    case Errc::VertexCountMismatch: return "VertexCountMismatch";
    case Errc::EmptyInputList: return "EmptyInputList";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::NonFiniteFeature: return "NonFiniteFeature";
    case Errc::DegenerateDistances: return "DegenerateDistances";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::TooLarge: return "TooLarge";
    case Errc::EmptyMask: return "EmptyMask";
    case Errc::StaleCache: return "StaleCache";
    case Errc::DisjointnessViolation: return "DisjointnessViolation";
    case Errc::EmptyIndexSet: return "EmptyIndexSet";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::MissingFile: return "MissingFile";
    case Errc::ParseError: return "ParseError";
    case Errc::InconsistentNodeCount: return "InconsistentNodeCount";
    case Errc::SplitOverlap: return "SplitOverlap";
    case Errc::IoError: return "IoError";
    case Errc::VersionMismatch: return "VersionMismatch";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

ParseError::ParseError(std::string source, std::size_t line, const std::string& detail)
    : Error(Errc::ParseError, source + ":" + std::to_string(line) + ": " + detail),
      source_(std::move(source)),
      line_(line) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace hgnn
