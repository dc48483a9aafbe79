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

#include "decest/codebook.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace decest {

namespace {

constexpr double kEnergyTol = 1e-9;

int log2_exact(int levels, const char* who) {
    if (levels < 2 || (levels & (levels - 1)) != 0)
        throw std::invalid_argument(std::string(who) + ": level count must be a power of 2, got " +
                                    std::to_string(levels));
    int k = 0;
    while ((1 << k) < levels)
        ++k;
    return k;
}

std::vector<std::uint8_t> index_bits(int m, int k) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(k));
    for (int b = 0; b < k; ++b)
        bits[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>((m >> (k - 1 - b)) & 1);
    return bits;
}

} // namespace

Codebook::Codebook(std::vector<CVector> columns, int training_len, CodebookKind kind)
    : columns_(std::move(columns)), training_len_(training_len), kind_(kind) {
    if (columns_.empty())
        throw std::invalid_argument("Codebook: no columns");
    length_ = static_cast<int>(columns_.front().size());
    if (length_ < 1)
        throw std::invalid_argument("Codebook: empty columns");
    if (training_len_ < 0 || training_len_ >= length_)
        throw std::invalid_argument("Codebook: training_len must be in [0, L)");
    for (std::size_t m = 0; m < columns_.size(); ++m) {
        const auto& c = columns_[m];
        if (static_cast<int>(c.size()) != length_)
            throw std::invalid_argument("Codebook: ragged columns");
        if (std::abs(norm2(c) - 1.0) > kEnergyTol)
            throw std::invalid_argument("Codebook: column " + std::to_string(m) + " does not have unit energy");
        for (int r = 0; r < training_len_; ++r)
            if (std::abs(c[static_cast<std::size_t>(r)] - columns_.front()[static_cast<std::size_t>(r)]) > 1e-12)
                throw std::invalid_argument("Codebook: training rows differ between columns");
    }
    data_bits_ = 0;
}

Codebook make_bpsk_codebook(const std::vector<std::vector<std::uint8_t>>& words, int training_len, int data_bits,
                            CodebookKind kind) {
    const int L = static_cast<int>(words.front().size()) + training_len;
    const double a = 1.0 / std::sqrt(static_cast<double>(L));
    std::vector<CVector> cols;
    cols.reserve(words.size());
    for (const auto& w : words) {
        CVector c(static_cast<std::size_t>(L), cplx{a, 0.0});
        for (std::size_t b = 0; b < w.size(); ++b)
            c[static_cast<std::size_t>(training_len) + b] = w[b] ? cplx{a, 0.0} : cplx{-a, 0.0};
        cols.push_back(std::move(c));
    }
    Codebook cb(std::move(cols), training_len, kind);
    cb.words_ = words;
    cb.data_bits_ = data_bits;
    return cb;
}

Codebook build_natural_binary(int levels) {
    const int k = log2_exact(levels, "build_natural_binary");
    std::vector<std::vector<std::uint8_t>> words;
    for (int m = 0; m < levels; ++m)
        words.push_back(index_bits(m, k));
    return make_bpsk_codebook(words, 0, k, CodebookKind::NaturalBinary);
}

Codebook build_crc(int levels) {
    const int k = log2_exact(levels, "build_crc");
    std::vector<std::vector<std::uint8_t>> words;
    for (int m = 0; m < levels; ++m) {
        auto w = index_bits(m, k);
        auto r = crc4_remainder(w);
        w.insert(w.end(), r.begin(), r.end());
        words.push_back(std::move(w));
    }
    return make_bpsk_codebook(words, 0, k, CodebookKind::CrcCoded);
}

Codebook build_training(int levels, int training_len) {
    const int k = log2_exact(levels, "build_training");
    if (training_len < 1)
        throw std::invalid_argument("build_training: training_len must be >= 1");
    std::vector<std::vector<std::uint8_t>> words;
    for (int m = 0; m < levels; ++m)
        words.push_back(index_bits(m, k));
    return make_bpsk_codebook(words, training_len, k, CodebookKind::TrainingPrefixed);
}

std::vector<std::uint8_t> crc4_remainder(std::span<const std::uint8_t> data_bits) {
    // Long division of data(x) * x^4 by 10011.
    std::vector<std::uint8_t> reg(data_bits.begin(), data_bits.end());
    reg.resize(reg.size() + 4, 0);
    constexpr std::uint8_t gen[5] = {1, 0, 0, 1, 1};
    for (std::size_t i = 0; i + 4 < reg.size(); ++i) {
        if (!reg[i])
            continue;
        for (std::size_t j = 0; j < 5; ++j)
            reg[i + j] ^= gen[j];
    }
    return {reg.end() - 4, reg.end()};
}

bool crc4_check(std::span<const std::uint8_t> word_bits) {
    if (word_bits.size() < 5)
        return false;
    std::vector<std::uint8_t> reg(word_bits.begin(), word_bits.end());
    constexpr std::uint8_t gen[5] = {1, 0, 0, 1, 1};
    for (std::size_t i = 0; i + 4 < reg.size(); ++i) {
        if (!reg[i])
            continue;
        for (std::size_t j = 0; j < 5; ++j)
            reg[i + j] ^= gen[j];
    }
    for (std::size_t i = reg.size() - 4; i < reg.size(); ++i)
        if (reg[i])
            return false;
    return true;
}

std::span<const cplx> message(double x, const Codebook& cb, const Quantizer& q) {
    if (cb.size() != q.levels())
        throw std::invalid_argument("message: codebook size does not match quantizer levels");
    return cb.column(quantize(x, q).index);
}

AfMessage make_af_message(double theta_range, double sigma_s) {
    if (!(theta_range > 0.0) || !(sigma_s >= 0.0))
        throw std::invalid_argument("make_af_message: invalid range or noise level");
    return {1.0 / std::sqrt(theta_range * theta_range / 3.0 + sigma_s * sigma_s)};
}

std::vector<PhaseAmbiguity> detect_phase_ambiguity(const Codebook& cb) {
    std::vector<PhaseAmbiguity> out;
    for (int m = 0; m < cb.size(); ++m) {
        const auto cm = cb.column(m);
        const double nm = std::sqrt(norm2(cm));
        for (int n = m + 1; n < cb.size(); ++n) {
            const auto cn = cb.column(n);
            const cplx r = inner(cn, cm); // c_n^H c_m = e^{j phi} when c_m = c_n e^{j phi}
            if (std::abs(r) >= (1.0 - 1e-9) * nm * std::sqrt(norm2(cn))) {
                double phi = std::arg(r);
                if (phi < 0.0)
                    phi += 2.0 * std::numbers::pi;
                if (phi >= 2.0 * std::numbers::pi - 1e-12)
                    phi = 0.0;
                out.push_back({m, n, phi});
            }
        }
    }
    return out;
}

void write_codebook(std::ostream& os, const Codebook& cb) {
    os << "# codebook " << to_string(cb.kind()) << " L " << cb.length() << " M " << cb.size() << "\n";
    os << "# training_len " << cb.training_len() << "\n";
    os << std::setprecision(17);
    for (int r = 0; r < cb.length(); ++r) {
        for (int m = 0; m < cb.size(); ++m) {
            const cplx v = cb.column(m)[static_cast<std::size_t>(r)];
            if (m)
                os << ' ';
            os << v.real() << ',' << v.imag();
        }
        os << '\n';
    }
}

Codebook read_codebook(std::istream& is) {
    std::vector<std::vector<cplx>> rows;
    int training_len = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty())
            continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string key;
            hs >> key;
            if (key == "training_len" && !(hs >> training_len))
                throw std::invalid_argument("read_codebook: bad training_len comment on line " +
                                            std::to_string(line_no));
            continue;
        }
        std::istringstream ls(line);
        std::string tok;
        std::vector<cplx> row;
        while (ls >> tok) {
            const auto comma = tok.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("read_codebook: expected re,im on line " + std::to_string(line_no));
            try {
                std::size_t used = 0;
                const double re = std::stod(tok.substr(0, comma), &used);
                const std::string im_s = tok.substr(comma + 1);
                const double im = std::stod(im_s, &used);
                if (used != im_s.size())
                    throw std::invalid_argument("trailing characters");
                row.emplace_back(re, im);
            } catch (const std::exception&) {
                throw std::invalid_argument("read_codebook: malformed entry '" + tok + "' on line " +
                                            std::to_string(line_no));
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument("read_codebook: ragged row on line " + std::to_string(line_no));
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.front().empty())
        throw std::invalid_argument("read_codebook: no symbols");
    std::vector<CVector> cols(rows.front().size(), CVector(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t m = 0; m < cols.size(); ++m)
            cols[m][r] = rows[r][m];
    return Codebook(std::move(cols), training_len, CodebookKind::Custom);
}

std::string to_string(CodebookKind kind) {
    switch (kind) {
    case CodebookKind::NaturalBinary: return "natural-binary";
    case CodebookKind::CrcCoded: return "crc";
    case CodebookKind::TrainingPrefixed: return "training";
    case CodebookKind::Custom: return "custom";
    }
    return "unknown";
}

} // namespace decest
