#ifndef MMOT_ERRORS_HPP
#define MMOT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mmot {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two charge positions closer than the coincidence threshold; the
// potential is treated as infinite there.
struct CoincidentCharges : Error {
  using Error::Error;
};

struct ConvergenceFailure : Error {
  using Error::Error;
};

struct InvalidRadii : Error {
  using Error::Error;
};

struct DegenerateRadii : Error {
  using Error::Error;
};

struct UnsortedRadii : Error {
  using Error::Error;
};

struct ArityMismatch : Error {
  using Error::Error;
};

struct DuplicateCoordinates : Error {
  using Error::Error;
};

struct InvalidMeasure : Error {
  using Error::Error;
};

struct InadmissiblePattern : Error {
  using Error::Error;
};

struct BreakpointHit : Error {
  using Error::Error;
};

struct RoundingInfeasible : Error {
  using Error::Error;
};

struct ResourceLimit : Error {
  using Error::Error;
};

}  // namespace mmot

#endif
