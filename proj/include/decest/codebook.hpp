// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "decest/model.hpp"
#include "decest/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace decest {

enum class CodebookKind { NaturalBinary, CrcCoded, TrainingPrefixed, Custom };

/// L x M transmission codebook. Column m is the symbol vector sent for
/// quantization level m; every column has unit energy. When training_len > 0
/// the first training_len symbols are a pilot shared by all columns.
class Codebook {
public:
    Codebook(std::vector<CVector> columns, int training_len, CodebookKind kind);

    int length() const noexcept { return length_; }            // L
    int size() const noexcept { return static_cast<int>(columns_.size()); }  // M
    int training_len() const noexcept { return training_len_; }
    CodebookKind kind() const noexcept { return kind_; }

    std::span<const cplx> column(int m) const { return columns_.at(static_cast<std::size_t>(m)); }
    std::span<const cplx> pilot() const { return column(0).first(static_cast<std::size_t>(training_len_)); }
    std::span<const cplx> data_part(int m) const { return column(m).subspan(static_cast<std::size_t>(training_len_)); }

    /// Data bits carried by column m, for codebooks built from bit words
    /// (MSB first). Empty for Custom codebooks.
    const std::vector<std::uint8_t>& word(int m) const { return words_.at(static_cast<std::size_t>(m)); }

    /// Bits per codeword symbol position (training rows excluded).
    int data_bits() const noexcept { return data_bits_; }

private:
    friend Codebook make_bpsk_codebook(const std::vector<std::vector<std::uint8_t>>&, int, int, CodebookKind);

    std::vector<CVector> columns_;
    std::vector<std::vector<std::uint8_t>> words_;
    int length_ = 0;
    int training_len_ = 0;
    int data_bits_ = 0;
    CodebookKind kind_;
};

/// Natural binary code with BPSK: bit 1 -> +1/sqrt(L), bit 0 -> -1/sqrt(L), MSB first.
Codebook build_natural_binary(int levels);

/// Natural binary data bits followed by 4 CRC bits for G(x) = x^4 + x + 1.
Codebook build_crc(int levels);

/// Pilot of training_len symbols (+1/sqrt(L)) followed by natural-binary BPSK data.
Codebook build_training(int levels, int training_len);

/// Remainder of data(x) * x^4 modulo x^4 + x + 1, as 4 bits MSB first.
std::vector<std::uint8_t> crc4_remainder(std::span<const std::uint8_t> data_bits);

/// True when a data-then-check word divides evenly by the generator.
bool crc4_check(std::span<const std::uint8_t> word_bits);

/// Column selected by quantize(x, q).
std::span<const cplx> message(double x, const Codebook& cb, const Quantizer& q);

struct AfMessage {
    double gain;
};

/// gain = 1 / sqrt(V^2/3 + sigma_s^2), giving unit mean energy when theta is
/// uniform on [-V, V].
AfMessage make_af_message(double theta_range, double sigma_s);

inline cplx af_message(double x, const AfMessage& af) { return {af.gain * x, 0.0}; }

struct PhaseAmbiguity {
    int m;
    int n;
    double phase; // c_m = c_n * exp(j*phase), in [0, 2*pi)
};

/// All column pairs (m < n) that are collinear up to a unit phase.
std::vector<PhaseAmbiguity> detect_phase_ambiguity(const Codebook& cb);

/// Text format: one line per symbol period, whitespace-separated "re,im"
/// entries, one per column. Lines starting with '#' are comments; an optional
/// "# training_len <n>" comment sets the pilot length.
void write_codebook(std::ostream& os, const Codebook& cb);
Codebook read_codebook(std::istream& is);

std::string to_string(CodebookKind kind);

} // namespace decest
