#pragma once

#include "whed/core/series.hpp"
#include "whed/core/types.hpp"
#include "whed/postproc/biquad.hpp"

namespace whed::postproc {

/// Biquad low-pass followed by a trailing moving average.
struct FilterChain {
  double cutoff_hz = 10.0;
  std::size_t window = 30;
};

inline constexpr double kEncoderRateHz = 1000.0;
inline constexpr double kPoseRateHz = 60.0;

/// Causal single pass, states initialized to the steady state of the first
/// sample. Throws DataError when any sampling interval is off the biquad's
/// period by more than 1%.
Series<double> filter_series(const Series<double>& series, const Biquad& biquad);

/// Trailing mean over `window` samples; the first samples average whatever
/// is available. Throws std::invalid_argument for window 0.
Series<double> moving_average(const Series<double>& series, std::size_t window = 30);

/// Biquad (designed at fs) then moving average.
Series<double> filter_two_stage(const Series<double>& series, double fs,
                                const FilterChain& chain = {});

Series<ChannelValues> filter_encoder_series(const Series<ChannelValues>& encoders,
                                            double fs = kEncoderRateHz,
                                            const FilterChain& chain = {});

/// Positions per axis; orientations hemisphere-aligned to their predecessor,
/// filtered per component and renormalized. Throws NumericalError naming the
/// sample when a filtered quaternion is too short to normalize.
Series<RigidTransform> filter_pose_series(const Series<RigidTransform>& poses,
                                          double fs = kPoseRateHz, const FilterChain& chain = {});

}  // namespace whed::postproc
