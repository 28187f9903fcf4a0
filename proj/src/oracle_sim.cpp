#include "wavesel/oracle_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wavesel/errors.hpp"
#include "wavesel/rng.hpp"

namespace wavesel {

namespace {

constexpr int kBaseFft = 2048;     ///< FFT size at mu = 0
constexpr int kBaseCp = 144;       ///< CP length at mu = 0
constexpr int kBasePeriod = kBaseFft + kBaseCp;
constexpr int kGridSlots = 2048;   ///< 15 kHz positions across the sample rate
constexpr int kEdgeMargin = 64;    ///< grid headroom kept clear at both band edges

std::complex<double> qpsk_symbol(Rng& rng) {
    const std::uint64_t bits = rng.uniform_int(4);
    const double re = (bits & 1) ? 1.0 : -1.0;
    const double im = (bits & 2) ? 1.0 : -1.0;
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

}  // namespace

void fft_unitary(std::vector<std::complex<double>>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw DomainError("fft size must be a power of two");
    }
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                // Twiddle from polar per butterfly keeps roundoff flat.
                const std::complex<double> w = std::polar(1.0, ang * static_cast<double>(j));
                const std::complex<double> u = data[i + j];
                const std::complex<double> v = data[i + j + len / 2] * w;
                data[i + j] = u + v;
                data[i + j + len / 2] = u - v;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& x : data) {
        x *= scale;
    }
}

TimeDomainFrame synthesize_frame(const std::vector<OracleBlockSpec>& specs, int guard_sc15,
                                 std::uint64_t seed, int n_periods) {
    if (specs.empty() || specs.size() > 2) {
        throw ConfigError("synthesize_frame supports 1 or 2 blocks");
    }
    if (guard_sc15 < 0) {
        throw ConfigError("guard width must be non-negative");
    }
    if (n_periods < 1) {
        throw ConfigError("need at least one symbol period");
    }
    for (const OracleBlockSpec& spec : specs) {
        if (spec.mu < 0 || spec.mu > 3) {
            throw ConfigError("block numerology out of range");
        }
        if (spec.n_subcarriers < 1 || spec.n_subcarriers > 600) {
            throw ConfigError("block width out of range (1..600 subcarriers)");
        }
    }

    TimeDomainFrame frame;
    frame.sample_rate_hz = kOracleSampleRateHz;
    frame.guard_sc15 = guard_sc15;
    frame.n_periods = n_periods;
    frame.samples.assign(static_cast<std::size_t>(n_periods) * kBasePeriod, {0.0, 0.0});

    int next_grid = kEdgeMargin;
    for (std::size_t b = 0; b < specs.size(); ++b) {
        const OracleBlockSpec& spec = specs[b];
        const int stride = 1 << spec.mu;

        OracleBlock block;
        block.mu = spec.mu;
        block.n_subcarriers = spec.n_subcarriers;
        block.fft_size = kBaseFft >> spec.mu;
        block.cp_len = kBaseCp >> spec.mu;
        // Round the left edge up to this numerology's own grid.
        block.start_sc15 = ((next_grid + stride - 1) / stride) * stride;
        block.sc_offset = block.start_sc15 / stride;

        const int width_grid = spec.n_subcarriers * stride;
        if (block.start_sc15 + width_grid > kGridSlots - kEdgeMargin) {
            throw ConfigError("blocks and guard do not fit in the sampled band");
        }
        next_grid = block.start_sc15 + width_grid + guard_sc15;

        const int n_symbols = n_periods * stride;
        const int period = kBasePeriod >> spec.mu;  // fft + cp at this mu
        Rng rng(substream_seed(seed, b));
        block.symbols.resize(static_cast<std::size_t>(n_symbols));

        std::vector<std::complex<double>> freq(static_cast<std::size_t>(block.fft_size));
        for (int s = 0; s < n_symbols; ++s) {
            auto& sent = block.symbols[static_cast<std::size_t>(s)];
            sent.resize(static_cast<std::size_t>(spec.n_subcarriers));
            std::fill(freq.begin(), freq.end(), std::complex<double>{0.0, 0.0});
            for (int k = 0; k < spec.n_subcarriers; ++k) {
                const std::complex<double> sym = qpsk_symbol(rng);
                sent[static_cast<std::size_t>(k)] = sym;
                freq[static_cast<std::size_t>(block.sc_offset + k)] = sym;
            }
            std::vector<std::complex<double>> time = freq;
            fft_unitary(time, true);

            const std::size_t base = static_cast<std::size_t>(s) * static_cast<std::size_t>(period);
            // Cyclic prefix: the tail of the useful part.
            for (int i = 0; i < block.cp_len; ++i) {
                frame.samples[base + static_cast<std::size_t>(i)] +=
                    time[static_cast<std::size_t>(block.fft_size - block.cp_len + i)];
            }
            for (int i = 0; i < block.fft_size; ++i) {
                frame.samples[base + static_cast<std::size_t>(block.cp_len + i)] +=
                    time[static_cast<std::size_t>(i)];
            }
        }
        frame.blocks.push_back(std::move(block));
    }
    return frame;
}

std::vector<std::vector<std::complex<double>>> demodulate_block(const TimeDomainFrame& frame,
                                                                std::size_t block_index) {
    if (block_index >= frame.blocks.size()) {
        throw DomainError("block index out of range");
    }
    const OracleBlock& block = frame.blocks[block_index];
    const int period = block.fft_size + block.cp_len;
    const int n_symbols = frame.n_periods * (1 << block.mu);

    std::vector<std::vector<std::complex<double>>> received(
        static_cast<std::size_t>(n_symbols));
    std::vector<std::complex<double>> window(static_cast<std::size_t>(block.fft_size));
    for (int s = 0; s < n_symbols; ++s) {
        const std::size_t start =
            static_cast<std::size_t>(s) * static_cast<std::size_t>(period) +
            static_cast<std::size_t>(block.cp_len);
        for (int i = 0; i < block.fft_size; ++i) {
            window[static_cast<std::size_t>(i)] = frame.samples[start + static_cast<std::size_t>(i)];
        }
        fft_unitary(window, false);
        auto& row = received[static_cast<std::size_t>(s)];
        row.resize(static_cast<std::size_t>(block.n_subcarriers));
        for (int k = 0; k < block.n_subcarriers; ++k) {
            row[static_cast<std::size_t>(k)] = window[static_cast<std::size_t>(block.sc_offset + k)];
        }
    }
    return received;
}

std::vector<double> measure_link(const TimeDomainFrame& frame, std::size_t victim_block,
                                 double noise_power, std::uint64_t noise_seed) {
    if (victim_block >= frame.blocks.size()) {
        throw DomainError("victim block index out of range");
    }
    if (noise_power < 0.0) {
        throw DomainError("noise power must be non-negative");
    }
    const OracleBlock& block = frame.blocks[victim_block];
    const int n_symbols = frame.n_periods * (1 << block.mu);
    if (n_symbols < 100) {
        throw DomainError("link measurement needs at least 100 victim symbols");
    }

    TimeDomainFrame noisy = frame;
    if (noise_power > 0.0) {
        Rng rng(noise_seed);
        const double sigma = std::sqrt(noise_power / 2.0);
        for (auto& sample : noisy.samples) {
            sample += std::complex<double>(sigma * rng.normal(), sigma * rng.normal());
        }
    }

    const auto received = demodulate_block(noisy, victim_block);
    std::vector<double> sinr(static_cast<std::size_t>(block.n_subcarriers));
    for (int k = 0; k < block.n_subcarriers; ++k) {
        double error_energy = 0.0;
        double signal_energy = 0.0;
        for (int s = 0; s < n_symbols; ++s) {
            const std::complex<double> sent =
                block.symbols[static_cast<std::size_t>(s)][static_cast<std::size_t>(k)];
            const std::complex<double> err =
                received[static_cast<std::size_t>(s)][static_cast<std::size_t>(k)] - sent;
            error_energy += std::norm(err);
            signal_energy += std::norm(sent);
        }
        sinr[static_cast<std::size_t>(k)] = signal_energy / std::max(error_energy, 1e-300);
    }
    return sinr;
}

}  // namespace wavesel
