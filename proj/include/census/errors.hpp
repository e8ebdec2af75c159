#pragma once

#include <stdexcept>
#include <string>

namespace census {

/// Base of all library errors. The exit code is what the CLI returns.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, int code) : std::runtime_error(what), code_(code) {}
  int exit_code() const noexcept { return code_; }

 private:
  int code_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what, 2) {}
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what) : Error(what, 3) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(what, 4) {}
};

class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what) : Error(what, 5) {}
};

}  // namespace census
