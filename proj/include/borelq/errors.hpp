#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace borelq {

class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("division by zero") {}
};

class NotInSubfield : public std::domain_error {
 public:
  explicit NotInSubfield(const std::string& what) : std::domain_error(what) {}
};

class LevelCapExceeded : public std::overflow_error {
 public:
  explicit LevelCapExceeded(int level)
      : std::overflow_error("tower level " + std::to_string(level) +
                            " exceeds the supported maximum"),
        level_(level) {}
  int level() const { return level_; }

 private:
  int level_;
};

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : std::invalid_argument(msg + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

class PreconditionViolation : public std::invalid_argument {
 public:
  explicit PreconditionViolation(const std::string& what)
      : std::invalid_argument(what) {}
};

class SizeGuardExceeded : public std::length_error {
 public:
  explicit SizeGuardExceeded(const std::string& what) : std::length_error(what) {}
};

}  // namespace borelq
