#pragma once

#include <stdexcept>
#include <string>
#include <vector>
#include <cstdint>

namespace toporec {

using NodeId = std::uint32_t;
using Round = std::uint64_t;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidTree : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct UnknownNode : Error { using Error::Error; };
struct MalformedLabel : Error { using Error::Error; };
struct UnsupportedShape : Error { using Error::Error; };
struct IndexNotFound : Error { using Error::Error; };
struct MissingChunk : Error { using Error::Error; };
struct NoMatch : Error { using Error::Error; };
struct ProtocolViolation : Error { using Error::Error; };
struct InfeasibleParameters : Error { using Error::Error; };

struct RoundLimitExceeded : Error {
  RoundLimitExceeded(Round limit, std::vector<NodeId> missing_nodes)
      : Error("round limit " + std::to_string(limit) + " exceeded; " +
              std::to_string(missing_nodes.size()) + " node(s) without output"),
        missing(std::move(missing_nodes)) {}
  std::vector<NodeId> missing;
};

}  // namespace toporec
