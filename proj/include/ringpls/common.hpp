#pragma once

#include <stdexcept>
#include <string>

namespace ringpls {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Errors caused by user-supplied data, configuration or paths.
/// The CLI maps these to exit code 2; everything else exits 1.
class InputError : public Error {
public:
    using Error::Error;
};

struct ConfigError : InputError { using InputError::InputError; };
struct SchemaError : InputError { using InputError::InputError; };
struct ParseError : InputError { using InputError::InputError; };
struct DuplicateKey : InputError { using InputError::InputError; };
struct NoInputs : InputError { using InputError::InputError; };
struct EmptyJoin : InputError { using InputError::InputError; };
struct TooFewRows : InputError { using InputError::InputError; };
struct FoldTooSmall : InputError { using InputError::InputError; };
struct EmptyTest : InputError { using InputError::InputError; };
struct EmptyValidation : InputError { using InputError::InputError; };
struct DiscOutOfBounds : InputError { using InputError::InputError; };

struct DimensionMismatch : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct EmptyRing : Error { using Error::Error; };
struct WrongRingCount : Error { using Error::Error; };
struct ZeroVariance : Error { using Error::Error; };
struct ConstantColumn : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };
struct DegenerateModel : Error { using Error::Error; };
struct ComponentOutOfRange : Error { using Error::Error; };

}  // namespace ringpls
