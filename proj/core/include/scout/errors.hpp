#pragma once

#include <stdexcept>
#include <string>

namespace scout {

// Base for every error thrown by the library. The CLI maps ConfigError to
// exit code 2 (bad usage / bad configuration) and every other Error to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration values, including algorithm/variant
// mismatches and out-of-range knobs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures: missing files, unreadable paths, write errors.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated files, unknown magic, unsupported format versions.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Model file whose feature schema does not match the current extractor.
class SchemaMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Node sampling cannot place the requested number of nodes in free space.
class InsufficientFreeSpaceError : public Error {
 public:
  using Error::Error;
};

// Sensor origin lies inside an occupied cell (or outside the grid).
class NodeInsideObstacleError : public Error {
 public:
  using Error::Error;
};

// A measurement contradicts cells already committed in a belief.
class ObservationConflictError : public Error {
 public:
  using Error::Error;
};

// A policy or oracle was asked to act with an empty feasible set.
class NoFeasibleActionError : public Error {
 public:
  using Error::Error;
};

// Exact reference computation requested on an instance above its size caps.
class InstanceTooLargeError : public Error {
 public:
  using Error::Error;
};

// Posterior conditioning eliminated every world in the ensemble.
class NoConsistentWorldError : public Error {
 public:
  using Error::Error;
};

// Lookup of a node id that is not part of the node set.
class UnknownIdError : public Error {
 public:
  using Error::Error;
};

// Training or statistics requested on an empty dataset.
class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

}  // namespace scout
