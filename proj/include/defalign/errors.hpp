#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace defalign {

// Error classes map one-to-one onto CLI exit codes.
enum class ErrorClass {
  Config = 2,
  Parse = 3,
  Transport = 4,
  InsufficientData = 5,
  Validation = 6,
  Io = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string message)
      : std::runtime_error(std::move(message)), class_(cls) {}
  ErrorClass error_class() const noexcept { return class_; }
  int exit_code() const noexcept { return static_cast<int>(class_); }

 private:
  ErrorClass class_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::string message)
      : Error(ErrorClass::Config, std::move(message)) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& message)
      : Error(ErrorClass::Parse, path + ":" + std::to_string(line) + ": " + message),
        path_(path),
        line_(line) {}
  explicit ParseError(std::string message)
      : Error(ErrorClass::Parse, std::move(message)) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_ = 0;
};

class TransportError : public Error {
 public:
  explicit TransportError(std::string message, int status = 0, int attempts = 0)
      : Error(ErrorClass::Transport, std::move(message)),
        status_(status),
        attempts_(attempts) {}
  int status() const noexcept { return status_; }
  int attempts() const noexcept { return attempts_; }

 private:
  int status_;
  int attempts_;
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(std::string message)
      : Error(ErrorClass::InsufficientData, std::move(message)) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::string message)
      : Error(ErrorClass::Validation, std::move(message)) {}
};

// Vector length disagreement.
class ArityError : public ValidationError {
 public:
  explicit ArityError(std::string message) : ValidationError(std::move(message)) {}
};

// Input outside the mathematical domain of an operation (e.g. zero vector for cosine).
class DomainError : public ValidationError {
 public:
  explicit DomainError(std::string message) : ValidationError(std::move(message)) {}
};

// Index or rank window outside the available range.
class BoundsError : public ValidationError {
 public:
  explicit BoundsError(std::string message) : ValidationError(std::move(message)) {}
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& message)
      : Error(ErrorClass::Io, path + ": " + message) {}
};

}  // namespace defalign
