#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tgq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// mu(sub)/mu(parent) is not a positive integer.
class NonIntegralIndex : public Error {
 public:
  using Error::Error;
};

// Riemann-Hurwitz needs a parent of positive area.
class ZeroAreaParent : public Error {
 public:
  using Error::Error;
};

// Transfer or construction data that cannot describe a real subgroup.
class InconsistentData : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class NotHyperbolic : public Error {
 public:
  using Error::Error;
};

class PerfectGroup : public Error {
 public:
  using Error::Error;
};

// Signature shape that cannot arise as a derived subgroup.
class NotADerivedShape : public Error {
 public:
  using Error::Error;
};

class ZeroAreaInput : public Error {
 public:
  using Error::Error;
};

class GenusZeroKernel : public Error {
 public:
  using Error::Error;
};

class NonIntegralGenus : public Error {
 public:
  using Error::Error;
};

class ConstraintViolated : public Error {
 public:
  using Error::Error;
};

// A cross-check between two independent computation routes failed.
class MismatchDetected : public Error {
 public:
  using Error::Error;
};

// An exact value would exceed the configured size guards.  Tower orders grow
// doubly exponentially, so deep chains can leave the representable range.
class TowerTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace tgq
