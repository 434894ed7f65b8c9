#include "whed/postproc/biquad.hpp"

#include "whed/core/angles.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace whed::postproc {

Biquad::Biquad(const BiquadCoefficients& c, double sample_rate_hz) : c_(c), fs_(sample_rate_hz) {
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
    throw FilterDesignError("biquad sample rate must be positive");
  }
}

double Biquad::dc_gain() const { return (c_.b0 + c_.b1 + c_.b2) / (1.0 + c_.a1 + c_.a2); }

std::complex<double> Biquad::response(double frequency_hz) const {
  const std::complex<double> zinv = std::polar(1.0, -kTwoPi * frequency_hz / fs_);
  const std::complex<double> zinv2 = zinv * zinv;
  return (c_.b0 + c_.b1 * zinv + c_.b2 * zinv2) / (1.0 + c_.a1 * zinv + c_.a2 * zinv2);
}

double Biquad::magnitude_db(double frequency_hz) const {
  return 20.0 * std::log10(std::abs(response(frequency_hz)));
}

std::array<std::complex<double>, 2> Biquad::poles() const {
  // z^2 + a1 z + a2 = 0
  const std::complex<double> disc = std::sqrt(std::complex<double>(c_.a1 * c_.a1 - 4.0 * c_.a2));
  return {(-c_.a1 + disc) / 2.0, (-c_.a1 - disc) / 2.0};
}

void Biquad::reset_to(double x) {
  const double y = dc_gain() * x;
  s2_ = c_.b2 * x - c_.a2 * y;
  s1_ = c_.b1 * x - c_.a1 * y + s2_;
}

double Biquad::step(double x) {
  const double y = c_.b0 * x + s1_;
  s1_ = c_.b1 * x - c_.a1 * y + s2_;
  s2_ = c_.b2 * x - c_.a2 * y;
  return y;
}

Biquad design_butterworth2(double fs, double fc) {
  if (!std::isfinite(fs) || !(fs > 0.0)) {
    throw FilterDesignError(fmt::format("sample rate must be positive (got {})", fs));
  }
  if (!std::isfinite(fc) || !(fc > 0.0) || !(fc < fs / 2.0)) {
    throw FilterDesignError(
        fmt::format("cutoff must satisfy 0 < fc < fs/2 (fc = {} Hz, fs = {} Hz)", fc, fs));
  }
  const double k = std::tan(kPi * fc / fs);
  const double k2 = k * k;
  const double norm = 1.0 / (1.0 + std::numbers::sqrt2 * k + k2);
  BiquadCoefficients c;
  c.b0 = k2 * norm;
  c.b1 = 2.0 * c.b0;
  c.b2 = c.b0;
  c.a1 = 2.0 * (k2 - 1.0) * norm;
  c.a2 = (1.0 - std::numbers::sqrt2 * k + k2) * norm;
  return Biquad(c, fs);
}

}  // namespace whed::postproc
