#pragma once

#include <complex>
#include <vector>

#include "momentsense/config.hpp"
#include "momentsense/rng.hpp"
#include "momentsense/stats_core.hpp"

namespace momentsense {

using ComplexSample = std::complex<double>;
using SampleVec = std::vector<ComplexSample>;

// Square-root raised cosine pulse with its oversampling factor. Taps are
// unit-energy normalized and symmetric about the center index (L-1)/2.
struct PulseShape {
    double rolloff = 0.2;
    int oversampling = 4;
    std::vector<double> taps;

    static PulseShape make(double rolloff, int oversampling);
    int length() const { return static_cast<int>(taps.size()); }
};

// SRRC impulse response, length L (odd), S samples per symbol, unit energy.
// The removable singularities at t = 0 and |t| = 1/(4 rolloff) are filled
// with their analytic limits.
std::vector<double> srrc_taps(double rolloff, int oversampling, int length);

// Self-convolution of the taps (the raised-cosine response); center index
// is length-1. Exposed because the Nyquist/ISI structure of this sequence
// is what both the SNR normalization and the tests reason about.
std::vector<double> pulse_self_convolution(const PulseShape& pulse);

// Signal power collected by symbol-rate sampling of the matched-filter
// output at phase `offset`: sum over m of g[(L-1) + offset + m S]^2.
double sampled_pulse_power(const PulseShape& pulse, int offset);

// i.i.d. unit-power symbols; BPSK emits real-only samples. Rejects NoiseOnly.
SampleVec generate_symbols(SignalModel model, std::size_t count, RngStream& rng);

// i.i.d. ZMCSCG noise, per-component variance sigma2 (so E|w|^2 = 2 sigma2).
SampleVec generate_noise(std::size_t count, double sigma2, RngStream& rng);

// Zero-stuff by S and convolve with the taps, scaled so the matched-filtered
// symbol-rate samples at the ideal phase have unit signal power.
SampleVec shape_and_upsample(const SampleVec& symbols, const PulseShape& pulse);

// Convolve with the matched (identical) SRRC and decimate at symbol rate
// starting from the ideal phase shifted by `offset` in [0, S). Only
// full-overlap outputs are returned: one sample per input symbol when the
// input came from shape_and_upsample.
SampleVec matched_filter_and_sample(const SampleVec& samples, const PulseShape& pulse, int offset);

// One uniform draw from [sigma2/eps, eps*sigma2]; delta_db = 0 returns the
// nominal exactly (and consumes no randomness).
double draw_actual_variance(double nominal_sigma2, const UncertaintyModel& model, RngStream& rng);

// Block-fading gain h ~ ZMCSCG with E|h|^2 = 1.
ComplexSample rayleigh_gain(RngStream& rng);

// Composes the full pipeline for one observation of exactly config.n samples.
// Per-trial draw order (fixed for reproducibility): actual-variance draw,
// Rayleigh gain (H1 only), sampling offset (async only), symbols (H1 only),
// noise. SNR is enforced at the detector input: with pulse shaping on, the
// signal amplitude is scaled per offset so the symbol-rate signal power is
// 2 sigma2_true beta at whichever phase the receiver samples.
SampleVec synthesize_observation(const TrialConfig& config, RngStream& rng);

}  // namespace momentsense
