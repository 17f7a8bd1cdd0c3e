#pragma once

#include <stdexcept>
#include <string>

namespace gibbsar {

// Core routines report failures with exceptions:
//   std::invalid_argument  bad shapes, out-of-range scalars, non-finite input
//   std::domain_error      parameters outside the stability domain
//   NumericalFailure       a computation that cannot produce a finite answer
//   IoError                file system failures, message carries the path

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace gibbsar
