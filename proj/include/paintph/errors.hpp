#pragma once

#include <stdexcept>

namespace paintph {

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bytes were readable but not a decodable PNG/JPEG (or not a valid
/// barcode/matrix file).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user configuration: manifest shape does not fit the design, unknown
/// channel names, and so on. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stored data is inconsistent: missing barcodes, missing matrix entries,
/// ids that do not resolve. The CLI maps this to exit code 3.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a precondition (wrong homological dimension, empty sample).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace paintph
