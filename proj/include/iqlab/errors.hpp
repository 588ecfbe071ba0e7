#pragma once

#include <stdexcept>
#include <string>

namespace iqlab {

/** Base class for all library errors. */
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/** Bad arguments or configuration; the CLI maps these to exit code 3. */
struct ParamError : Error {
  explicit ParamError(const std::string& msg) : Error(msg) {}
};

/** A mathematical consistency check failed; the CLI maps these to exit code 2. */
struct CheckError : Error {
  explicit CheckError(const std::string& msg) : Error(msg) {}
};

struct NotClassNumberOne : ParamError {
  explicit NotClassNumberOne(int d)
      : ParamError("d = " + std::to_string(d) +
                   " does not give an imaginary quadratic field of class number one") {}
};

struct NotNegativeSquarefree : ParamError {
  explicit NotNegativeSquarefree(int d)
      : ParamError("d = " + std::to_string(d) + " must be negative and squarefree") {}
};

struct OverflowError : Error {
  explicit OverflowError(const std::string& where)
      : Error("64-bit coordinate arithmetic overflow in " + where) {}
};

struct DivisionByZero : ParamError {
  DivisionByZero() : ParamError("division by the zero element") {}
};

struct ZeroElement : ParamError {
  explicit ZeroElement(const std::string& where)
      : ParamError("zero element not allowed in " + where) {}
};

struct PrecisionLoss : ParamError {
  explicit PrecisionLoss(const std::string& msg) : ParamError(msg) {}
};

struct BoundTooLarge : ParamError {
  explicit BoundTooLarge(const std::string& msg) : ParamError(msg) {}
};

struct AlphaLooksRational : ParamError {
  explicit AlphaLooksRational(const std::string& msg) : ParamError(msg) {}
};

struct NoApproximationFound : ParamError {
  explicit NoApproximationFound(const std::string& msg) : ParamError(msg) {}
};

struct ParamOutOfRange : ParamError {
  explicit ParamOutOfRange(const std::string& msg) : ParamError(msg) {}
};

struct UnknownFormat : ParamError {
  explicit UnknownFormat(const std::string& fmt)
      : ParamError("unknown output format: " + fmt) {}
};

struct EqualArguments : ParamError {
  explicit EqualArguments(const std::string& msg) : ParamError(msg) {}
};

struct GNotVanishing : ParamError {
  explicit GNotVanishing(const std::string& msg) : ParamError(msg) {}
};

struct SupportUnbounded : ParamError {
  explicit SupportUnbounded(const std::string& msg) : ParamError(msg) {}
};

}  // namespace iqlab
