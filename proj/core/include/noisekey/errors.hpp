#ifndef NOISEKEY_ERRORS_HPP
#define NOISEKEY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace noisekey {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (wrong block length, bad seed size, ...).
struct ContractViolation : Error {
    using Error::Error;
};

// A numeric parameter is outside the model's valid domain (e.g. sigma would reach pi/2).
struct DomainError : Error {
    using Error::Error;
};

// The running key or keystream has no unconsumed bits left for the request.
struct KeyExhausted : Error {
    using Error::Error;
};

// The peer sent something inconsistent with the session state.
struct ProtocolViolation : Error {
    using Error::Error;
};

// Requested work exceeds a hard resource guard (e.g. exhaustive attack over 2^20 keys).
struct ResourceGuard : Error {
    using Error::Error;
};

// Likelihood is undefined: sigma = 0 and the observation is off-constellation.
struct UndefinedLikelihood : Error {
    using Error::Error;
};

// The requested quantity does not exist for this wheel mode.
struct NotApplicable : Error {
    using Error::Error;
};

// Wire-level decode failures, each distinct per the frame contract.
struct WireError : Error {
    using Error::Error;
};
struct BadMagic : WireError {
    using WireError::WireError;
};
struct BadVersion : WireError {
    using WireError::WireError;
};
struct BadLength : WireError {
    using WireError::WireError;
};
struct BadTag : WireError {
    using WireError::WireError;
};

// Handshake rejections.
struct FingerprintMismatch : Error {
    using Error::Error;
};
struct ConfigMismatch : Error {
    using Error::Error;
};

// Transport-level failure (socket closed, short read, connect refused).
struct TransportError : Error {
    using Error::Error;
};

}  // namespace noisekey

#endif
