#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace valdetect {

enum class Errc {
  PreconditionViolated,
  LevelMismatch,
  ZeroElement,
  PrecisionExhausted,
  UnsupportedField,
  UnsupportedValuation,
  InvalidWindow,
  NotInDecomposition,
  RankNotTwo,
  NotQuasiIndependent,
  NotValuative,
  MainClaimViolated,
  HypothesisFailed,
  FrameMismatch,
  NoRootsOfUnity,
  WrongLevel,
  ParseError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t pos, const std::string& msg)
      : Error(Errc::ParseError, msg), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

}  // namespace valdetect
