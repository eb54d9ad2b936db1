#pragma once

#include <stdexcept>
#include <string>

namespace cmt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed argument: wrong width, bad hex, inconsistent table.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DuplicateKey : public Error {
 public:
  using Error::Error;
};

class KeyNotFound : public Error {
 public:
  using Error::Error;
};

/// Proof requested from an empty tree.
class EmptyTree : public Error {
 public:
  using Error::Error;
};

/// Undecodable or inconsistent tree dump / proof document.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace cmt
