#pragma once

#include <stdexcept>
#include <string>

namespace ckord {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ordinal-core
struct DepthCapExceeded : Error { using Error::Error; };
struct SubtractUnderflow : Error { using Error::Error; };
struct ZeroInput : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };

struct SyntaxError : Error {
    SyntaxError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"), pos(position) {}
    std::size_t pos;
};

// cb-topology
struct UnsupportedBase : Error { using Error::Error; };
struct FiniteSpace : Error { using Error::Error; };

// interval-decomp
struct NotInUnion : Error { using Error::Error; };
struct UnknownPiece : Error { using Error::Error; };
struct NotLimit : Error { using Error::Error; };

// ck-functions
struct OutOfDomain : Error { using Error::Error; };
struct DomainMismatch : Error { using Error::Error; };
struct PoolTooSmall : Error { using Error::Error; };

// ck-operators
struct RegionInvariantViolated : Error { using Error::Error; };
struct BadWeights : Error { using Error::Error; };
struct NonConstantUnitImage : Error { using Error::Error; };
struct NonPositiveUnitImage : Error { using Error::Error; };
struct BadWitness : Error { using Error::Error; };
struct ToleranceNotMet : Error { using Error::Error; };

} // namespace ckord
