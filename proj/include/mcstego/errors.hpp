#pragma once

#include <stdexcept>
#include <string>

namespace mcstego {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by the caller (bad length, unsupported size, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Payload does not fit into the cover.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class CorpusError : public Error {
 public:
  using Error::Error;
};

/// Unsupported or malformed file/wire format.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A Reed-Solomon block carried more errors than the code can correct.
class UncorrectableError : public Error {
 public:
  using Error::Error;
};

/// Coded length does not match the block structure implied by the data length.
class LengthError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

class MissingEntryError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace mcstego
