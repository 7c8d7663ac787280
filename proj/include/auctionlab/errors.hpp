#pragma once

#include <stdexcept>
#include <string>

namespace auctionlab {

/// Base class for all auctionlab error conditions.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfSupport : Error {
    using Error::Error;
};

struct DegenerateDensity : Error {
    using Error::Error;
};

struct NotUnimodal : Error {
    using Error::Error;
};

struct NonMonotone : Error {
    using Error::Error;
};

struct EmptySample : Error {
    using Error::Error;
};

struct AssumptionViolated : Error {
    using Error::Error;
};

struct InvalidThresholds : Error {
    using Error::Error;
};

struct NoRoot : Error {
    using Error::Error;
};

struct NoCrossing : Error {
    using Error::Error;
};

struct ConfigInvalid : Error {
    using Error::Error;
};

} // namespace auctionlab
