#pragma once

#include <stdexcept>
#include <string>

namespace visemelab {

// Process exit codes. These are part of the CLI contract.
enum class ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNumeric = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Malformed input file. `line` is 1-based; 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& msg)
      : Error(ExitCode::kData, source + (line ? ":" + std::to_string(line) : "") + ": " + msg),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConflictError : public Error {
 public:
  explicit ConflictError(const std::string& msg) : Error(ExitCode::kData, msg) {}
};

class UnknownVisemeError : public Error {
 public:
  explicit UnknownVisemeError(const std::string& base)
      : Error(ExitCode::kData, "unknown viseme '" + base + "'"), base_(base) {}

  const std::string& base() const noexcept { return base_; }

 private:
  std::string base_;
};

class MissingEntryError : public Error {
 public:
  explicit MissingEntryError(const std::string& word)
      : Error(ExitCode::kData, "word '" + word + "' is not in the lexicon"), word_(word) {}

  const std::string& word() const noexcept { return word_; }

 private:
  std::string word_;
};

class UnmappedPhonemeError : public Error {
 public:
  UnmappedPhonemeError(const std::string& phoneme, const std::string& language)
      : Error(ExitCode::kData,
              "phoneme '" + phoneme + "' has no viseme mapping for " + language) {}
};

class EmptyInputError : public Error {
 public:
  explicit EmptyInputError(const std::string& what) : Error(ExitCode::kData, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::kUsage, what) {}
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& what) : Error(ExitCode::kData, what) {}
};

class IncompatibleError : public Error {
 public:
  explicit IncompatibleError(const std::string& what) : Error(ExitCode::kData, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ExitCode::kNumeric, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ExitCode::kData, what) {}
};

}  // namespace visemelab
