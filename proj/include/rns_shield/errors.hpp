#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rns_shield {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// moduli validation
class NotCoprime : public Error {
public:
  using Error::Error;
};

class OrderingViolation : public Error {
public:
  using Error::Error;
};

// codec preconditions
class ValueOutOfFullRange : public Error {
public:
  using Error::Error;
};

class ProjectionOutOfRange : public Error {
public:
  using Error::Error;
};

// configuration and hashing
class ConfigInvalid : public Error {
public:
  using Error::Error;
};

class UnknownAlgorithm : public Error {
public:
  using Error::Error;
};

class CellOverflow : public Error {
public:
  using Error::Error;
};

// I/O and container parsing
class IoFailure : public Error {
public:
  using Error::Error;
};

class ContainerError : public Error {
public:
  using Error::Error;
};

class BadMagic : public ContainerError {
public:
  using ContainerError::ContainerError;
};

class UnsupportedVersion : public ContainerError {
public:
  using ContainerError::ContainerError;
};

class ChecksumMismatch : public ContainerError {
public:
  using ContainerError::ContainerError;
};

class Truncated : public ContainerError {
public:
  Truncated(const std::string& msg, std::uint64_t first_missing)
      : ContainerError(msg), first_missing_super_block(first_missing) {}
  std::uint64_t first_missing_super_block;
};

// fault injection
class RegionEmpty : public Error {
public:
  using Error::Error;
};

}  // namespace rns_shield
