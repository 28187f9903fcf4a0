#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace wavesel {

/// In-place unitary radix-2 FFT (scale 1/sqrt(N) both directions, so a
/// forward/inverse pair is the identity and Parseval holds exactly).
/// Size must be a power of two.
void fft_unitary(std::vector<std::complex<double>>& data, bool inverse);

/// One contiguous numerology block requested from the synthesizer.
struct OracleBlockSpec {
    int mu = 0;
    int n_subcarriers = 0;  ///< native subcarriers, 1..600
};

/// A synthesized block: geometry plus the QPSK symbols that were sent,
/// kept for error measurement at the receiver.
struct OracleBlock {
    int mu = 0;
    int n_subcarriers = 0;
    int start_sc15 = 0;  ///< left edge on the common 15 kHz grid
    int fft_size = 0;
    int cp_len = 0;
    int sc_offset = 0;  ///< native index of the first occupied subcarrier
    std::vector<std::vector<std::complex<double>>> symbols;  ///< [symbol][subcarrier]
};

/// Multi-numerology baseband frame sampled at a common rate. Blocks are
/// time-aligned over whole mu=0 symbol periods; a block at numerology mu
/// carries 2^mu symbols per period.
struct TimeDomainFrame {
    double sample_rate_hz = 0.0;
    int guard_sc15 = 0;
    int n_periods = 0;
    std::vector<std::complex<double>> samples;
    std::vector<OracleBlock> blocks;
};

inline constexpr double kOracleSampleRateHz = 2048.0 * 15000.0;

/// Modulates up to two CP-OFDM blocks with unit-power QPSK from the seed,
/// placed contiguously on the 15 kHz grid with `guard_sc15` between them
/// (the second block start rounds up to its own subcarrier grid). Each
/// block uses its own FFT size with the normal CP ratio.
TimeDomainFrame synthesize_frame(const std::vector<OracleBlockSpec>& specs, int guard_sc15,
                                 std::uint64_t seed, int n_periods = 100);

/// Receiver view of one block: CP-strip + FFT per symbol, returning the
/// received values on the block's subcarriers.
std::vector<std::vector<std::complex<double>>> demodulate_block(const TimeDomainFrame& frame,
                                                                std::size_t block_index);

/// Per-subcarrier SINR of the victim block after injecting complex AWGN of
/// the given per-sample power: intended symbol energy over the measured
/// residual error energy, averaged over at least 100 symbols.
std::vector<double> measure_link(const TimeDomainFrame& frame, std::size_t victim_block,
                                 double noise_power, std::uint64_t noise_seed = 0x6f7261636c65ULL);

}  // namespace wavesel
