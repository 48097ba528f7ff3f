#pragma once

#include <stdexcept>
#include <string>

namespace cogl {

/// Process exit codes, one per error family (0 = success, 1 = unexpected).
enum class ExitCode : int {
  Ok = 0,
  Other = 1,
  Argument = 2,
  Parse = 3,
  Format = 4,
  Io = 5,
  Empty = 6,
  DegenerateFold = 7,
  Diverged = 8,
};

class Error : public std::runtime_error {
public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

private:
  ExitCode code_;
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& what) : Error(ExitCode::Argument, what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(ExitCode::Parse, what) {}
};

struct FormatError : Error {
  explicit FormatError(const std::string& what) : Error(ExitCode::Format, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ExitCode::Io, what) {}
};

struct EmptyError : Error {
  explicit EmptyError(const std::string& what) : Error(ExitCode::Empty, what) {}
};

struct DegenerateFoldError : Error {
  explicit DegenerateFoldError(const std::string& what) : Error(ExitCode::DegenerateFold, what) {}
};

struct DivergedError : Error {
  DivergedError(const std::string& what, long step) : Error(ExitCode::Diverged, what), step_(step) {}
  long step() const { return step_; }

private:
  long step_;
};

}  // namespace cogl
