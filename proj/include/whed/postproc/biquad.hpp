#pragma once

#include "whed/core/error.hpp"

#include <array>
#include <complex>

namespace whed::postproc {

class FilterDesignError : public DataError {
 public:
  using DataError::DataError;
};

/// H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)
struct BiquadCoefficients {
  double b0 = 1.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
};

/// Second-order section in transposed direct form II.
class Biquad {
 public:
  Biquad(const BiquadCoefficients& c, double sample_rate_hz);

  const BiquadCoefficients& coefficients() const { return c_; }
  double sample_rate() const { return fs_; }

  double dc_gain() const;
  std::complex<double> response(double frequency_hz) const;
  double magnitude_db(double frequency_hz) const;
  std::array<std::complex<double>, 2> poles() const;

  /// Sets the delay states to the steady state for a constant input x.
  void reset_to(double x);
  double step(double x);

 private:
  BiquadCoefficients c_;
  double fs_;
  double s1_ = 0.0;
  double s2_ = 0.0;
};

/// Second-order Butterworth low-pass via the bilinear transform with the
/// cutoff prewarped. Throws FilterDesignError unless 0 < fc < fs/2.
Biquad design_butterworth2(double sample_rate_hz, double cutoff_hz);

}  // namespace whed::postproc
