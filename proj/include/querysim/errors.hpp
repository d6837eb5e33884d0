// Copyright 2026 The querysim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace querysim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QUERYSIM_DEFINE_ERROR(Name)      \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

// A program read more bits than its declared budget (runaway sampler).
QUERYSIM_DEFINE_ERROR(BitBudgetExceeded);
// A finite replay tape was read past its end.
QUERYSIM_DEFINE_ERROR(TapeExhausted);
// The rejection loop hit its iteration cap.
QUERYSIM_DEFINE_ERROR(MaxIterationsExceeded);
QUERYSIM_DEFINE_ERROR(ZeroMassCondition);
QUERYSIM_DEFINE_ERROR(DimensionTooLarge);
QUERYSIM_DEFINE_ERROR(CountMismatch);
QUERYSIM_DEFINE_ERROR(InconsistentCounts);
QUERYSIM_DEFINE_ERROR(WidthMismatch);
QUERYSIM_DEFINE_ERROR(DomainError);
QUERYSIM_DEFINE_ERROR(PrecisionExhausted);
QUERYSIM_DEFINE_ERROR(HorizonExceeded);
QUERYSIM_DEFINE_ERROR(AllActionsFail);
QUERYSIM_DEFINE_ERROR(CyclicBeliefGraph);
QUERYSIM_DEFINE_ERROR(NoClosedForm);
QUERYSIM_DEFINE_ERROR(InvalidModel);

#undef QUERYSIM_DEFINE_ERROR

/// Malformed input file; carries the offending line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace querysim
