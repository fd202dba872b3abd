#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace penc {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An exact computation left the supported integer width (128-bit signed).
struct OverflowError : Error {
    using Error::Error;
};

// A value does not belong to the congruence class it was claimed to be in.
struct MembershipError : Error {
    using Error::Error;
};

// An operand count is not admissible for the polyadic operation.
struct AdmissibilityError : Error {
    using Error::Error;
};

// The class has no multiplicative arity, hence no ring multiplication.
struct NoRingError : Error {
    using Error::Error;
};

// A precondition on an argument was violated.
struct ParameterError : Error {
    using Error::Error;
};

// The amplitude system has no integral solution.
struct NoSolutionError : Error {
    using Error::Error;
};

// The amplitude system has more than one verified solution.
struct AmbiguousCipherError : Error {
    using Error::Error;
};

// A cipher failed a consistency check (arity, nonce or waveform assignment).
struct InconsistentCipherError : Error {
    using Error::Error;
};

// A decoded arity does not map back into the plaintext byte alphabet.
struct SymbolRangeError : Error {
    using Error::Error;
};

// A signal frame does not match the template it is paired with.
struct FrameError : Error {
    using Error::Error;
};

// A session cannot be serialized because its structure is inconsistent.
struct SerializationError : Error {
    using Error::Error;
};

// The byte stream is not a well-formed wire session.
struct ProtocolError : Error {
    using Error::Error;
};

// The byte stream ends before the declared session is complete.
struct IncompleteSessionError : ProtocolError {
    using ProtocolError::ProtocolError;
};

// The session declares a wire format version this build does not speak.
struct UnsupportedVersionError : ProtocolError {
    using ProtocolError::ProtocolError;
};

// Network-level failure, distinct from protocol errors.
struct TransportError : Error {
    using Error::Error;
};

struct TimeoutError : TransportError {
    using TransportError::TransportError;
};

// Failure while decrypting a stream; carries the offending symbol index.
class DecryptError : public Error {
public:
    DecryptError(std::size_t symbol_index, const std::string& what)
        : Error("symbol " + std::to_string(symbol_index) + ": " + what),
          symbol_index_(symbol_index) {}

    std::size_t symbol_index() const noexcept { return symbol_index_; }

private:
    std::size_t symbol_index_;
};

} // namespace penc
