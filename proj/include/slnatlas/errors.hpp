#pragma once

#include <stdexcept>
#include <string>

namespace slnatlas {

// Base for every failure the library reports deliberately. CLI maps subclasses
// to exit codes; everything else escaping is a genuine bug.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input field is zero everywhere (all coefficients vanish, or a sampled field
// never rises above the zero tolerance on the probe grid).
struct IdenticallyZero : Error {
    using Error::Error;
};

// A derivative of higher order than the field representation carries was
// requested.
struct DerivDepthExceeded : Error {
    using Error::Error;
};

// Two candidate zeros sit closer than the resolution limit without agreeing
// numerically; orders cannot be assigned reliably.
struct ZeroIsolationFailure : Error {
    using Error::Error;
};

// The supplied circle map fails the orientation-preserving diffeomorphism
// check (derivative not positive everywhere on the probe grid).
struct NotDiffeomorphism : Error {
    using Error::Error;
};

// An interval field violates an endpoint normalization required by the
// operation (value or first derivative at a domain endpoint).
struct EndpointConstraintViolated : Error {
    using Error::Error;
};

// A sampled representation does not carry enough derivatives for the
// requested Laurent or residue computation.
struct InsufficientDerivativeDepth : Error {
    using Error::Error;
};

// The regularized integral failed its self-consistency check (values at two
// window scales disagree beyond tolerance).
struct NonconvergentRegularization : Error {
    using Error::Error;
};

// An equivalence decision falls inside the tolerance buffer zone: neither a
// confident yes nor a confident no.
struct AmbiguousMatch : Error {
    using Error::Error;
};

// Action descriptor is structurally inconsistent (involution incompatible
// with component count, interval normalization violated, orbit type not a
// closed manifold of the stated dimension, ...).
struct InvalidActionData : Error {
    using Error::Error;
};

// A generator parameter produces an inadmissible field (e.g. a zero residue
// parameter in the disk family).
struct InadmissibleParameter : Error {
    using Error::Error;
};

// Group dimension below the range the classification covers (n >= 3).
struct DimensionTooSmall : Error {
    using Error::Error;
};

// Malformed JSON input, unknown schema tag, or a structural validation
// failure while deserializing.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace slnatlas
