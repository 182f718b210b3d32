#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace symbill {

// Arbitrary-precision rational. mpq_class keeps values canonical after every
// arithmetic operation; values built from raw num/den go through make_rat.
using Rat = mpq_class;

enum class Errc {
  NotConvex,
  CollinearVertices,
  DuplicateVertex,
  TooFewVertices,
  InvalidPhasePoint,
  ParamOutOfRange,
  ClosureViolated,
  NotConvexAfterPerturbation,
  DegenerateRect,
  NotPeriodic,
  NotClosed,
  HaltEncountered,
  UnsupportedFormat,
  ParseError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

Rat make_rat(long num, long den = 1);

// Accepts "p/q", integers, and finite decimals ("0.125", "-3.5e-2").
Rat parse_rat(std::string_view text);

// Exact value of the shortest decimal that round-trips to `value`.
Rat rat_from_double(double value);

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rat& r);

double to_double(const Rat& r);

// Larger of the bit lengths of numerator and denominator.
std::size_t bit_size(const Rat& r);

Rat floor_rat(const Rat& r);
Rat abs_rat(const Rat& r);

}  // namespace symbill
