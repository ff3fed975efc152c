#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace ctc {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using ExternalId = std::uint64_t;
using Trussness = std::uint32_t;

/// Packed canonical key for an undirected edge: (min << 32) | max.
using EdgeKey = std::uint64_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

constexpr EdgeKey edge_key(NodeId a, NodeId b) {
  return a < b ? (EdgeKey{a} << 32) | b : (EdgeKey{b} << 32) | a;
}

constexpr Edge canonical(NodeId a, NodeId b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

// Error hierarchy. Everything thrown by the library derives from Error.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// No connected k-truss (k >= 2) contains the query nodes.
class NoCommunity : public Error {
 public:
  using Error::Error;
};

class IndexFormatError : public Error {
 public:
  using Error::Error;
};

/// Index file does not describe the graph it is being paired with.
class IndexMismatch : public Error {
 public:
  using Error::Error;
};

class OracleSizeExceeded : public Error {
 public:
  using Error::Error;
};

class WorkloadInfeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace ctc
