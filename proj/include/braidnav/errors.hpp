#pragma once

#include <stdexcept>
#include <string>

namespace braidnav {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operands live in braid groups on different strand counts.
struct StrandMismatchError : Error {
  using Error::Error;
};

/// Integer arithmetic left the representable range; results are never wrapped.
struct OverflowError : Error {
  using Error::Error;
};

/// All agents share one projected coordinate for the whole execution.
struct DegenerateExtentError : Error {
  using Error::Error;
};

/// Strands coincide at a crossing instant, or the sample sequence is too
/// coarse to order crossings consistently.
struct DegenerateCrossingError : Error {
  using Error::Error;
};

struct TrajectoryFormatError : Error {
  using Error::Error;
};

/// Pose handed to the tracking controller is outside its capture region.
struct CaptureRegionError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace braidnav
