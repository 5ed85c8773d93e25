// Copyright 2026 The Shadow Distill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shadow/randmeas/records.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

namespace shadow {

namespace {

double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int base3_digit(Pauli p) { return static_cast<int>(p) - 1; }

BasisSetting setting_from_index(uint64_t index, int n) {
    BasisSetting s;
    s.bases.assign(n, Pauli::X);
    for (int k = n - 1; k >= 0; k--) {
        s.bases[k] = static_cast<Pauli>(index % 3 + 1);
        index /= 3;
    }
    return s;
}

[[noreturn]] void fail_at(int line, const std::string &msg) {
    throw DataError("line " + std::to_string(line) + ": " + msg);
}

}  // namespace

std::string BasisSetting::to_string() const {
    std::string s;
    for (Pauli p : bases) {
        s += pauli_char(p);
    }
    return s;
}

BasisSetting BasisSetting::parse(std::string_view text) {
    BasisSetting s;
    for (char c : text) {
        Pauli p = pauli_from_char(c);
        if (p == Pauli::I) {
            throw std::invalid_argument("Basis letter 'I' is not a measurement basis.");
        }
        s.bases.push_back(p);
    }
    if (s.bases.empty()) {
        throw std::invalid_argument("Empty basis setting.");
    }
    return s;
}

uint64_t BasisSetting::index() const {
    uint64_t idx = 0;
    for (Pauli p : bases) {
        idx = idx * 3 + base3_digit(p);
    }
    return idx;
}

std::vector<BasisSetting> sample_settings(int n_qubits, int n_settings, uint64_t seed) {
    if (n_settings < 2) {
        throw std::invalid_argument("sample_settings: N_U must be >= 2, got " + std::to_string(n_settings) + ".");
    }
    if (n_qubits < 1) {
        throw std::invalid_argument("sample_settings: n_qubits must be >= 1.");
    }
    std::mt19937_64 rng(seed);
    std::vector<BasisSetting> out(n_settings);
    for (auto &s : out) {
        s.bases.resize(n_qubits);
        for (auto &b : s.bases) {
            // 2^64 mod 3 == 1, so reject the single top value to stay uniform.
            uint64_t r;
            do {
                r = rng();
            } while (r == UINT64_MAX);
            b = static_cast<Pauli>(r % 3 + 1);
        }
    }
    return out;
}

OutcomeSampler::OutcomeSampler(const DensityMatrix &rho, double p_det, bool cache)
    : n_qubits_(rho.n_qubits()), p_det_(p_det), rho_(rho.matrix()) {
    if (!(p_det >= 0.0 && p_det < 0.5)) {
        throw std::invalid_argument("p_det must be in [0, 1/2).");
    }
    if (n_qubits_ > kMaxRecordQubits) {
        throw std::length_error("Records support at most 32 qubits.");
    }
    if (cache && n_qubits_ <= kCachedSamplerQubits) {
        uint64_t count = 1;
        for (int k = 0; k < n_qubits_; k++) {
            count *= 3;
        }
        cdfs_.resize(count);
        for (uint64_t i = 0; i < count; i++) {
            cdfs_[i] = cdf_for(setting_from_index(i, n_qubits_));
        }
    }
}

std::vector<double> OutcomeSampler::distribution(const BasisSetting &setting) const {
    if (setting.n_qubits() != n_qubits_) {
        throw std::invalid_argument("Setting has " + std::to_string(setting.n_qubits()) +
                                    " letters for a " + std::to_string(n_qubits_) + "-qubit state.");
    }
    auto probs = measurement_distribution(rho_, setting.bases);
    double total = 0;
    for (double p : probs) {
        total += p;
    }
    for (double &p : probs) {
        p /= total;
    }
    return probs;
}

std::vector<double> OutcomeSampler::cdf_for(const BasisSetting &setting) const {
    auto cdf = distribution(setting);
    for (size_t i = 1; i < cdf.size(); i++) {
        cdf[i] += cdf[i - 1];
    }
    cdf.back() = 1.0;
    return cdf;
}

MeasurementRecord OutcomeSampler::sample(const BasisSetting &setting, int n_shots, uint64_t seed) const {
    if (n_shots < 1) {
        throw std::invalid_argument("N_S must be >= 1.");
    }
    if (setting.n_qubits() != n_qubits_) {
        throw std::invalid_argument("Setting length does not match the state.");
    }
    std::vector<double> local;
    const std::vector<double> *cdf;
    if (!cdfs_.empty()) {
        cdf = &cdfs_[setting.index()];
    } else {
        local = cdf_for(setting);
        cdf = &local;
    }
    std::mt19937_64 rng(seed);
    MeasurementRecord rec;
    rec.setting = setting;
    rec.source = RecordSource::Simulated;
    rec.seed = seed;
    rec.outcomes.resize(n_shots);
    for (auto &o : rec.outcomes) {
        double u = uniform01(rng);
        auto it = std::upper_bound(cdf->begin(), cdf->end(), u);
        o = static_cast<uint32_t>(std::min<ptrdiff_t>(it - cdf->begin(), cdf->size() - 1));
        if (p_det_ > 0) {
            for (int k = 0; k < n_qubits_; k++) {
                if (uniform01(rng) < p_det_) {
                    o ^= uint32_t{1} << (n_qubits_ - 1 - k);
                }
            }
        }
    }
    return rec;
}

MeasurementRecord sample_outcomes(const DensityMatrix &rho, const BasisSetting &setting, int n_shots,
                                  double p_det, uint64_t seed) {
    if (!(p_det >= 0.0 && p_det < 0.5)) {
        throw std::invalid_argument("p_det must be in [0, 1/2).");
    }
    OutcomeSampler sampler(rho, p_det, false);
    return sampler.sample(setting, n_shots, seed);
}

std::vector<MeasurementRecord> sample_records(const OutcomeSampler &sampler, std::span<const BasisSetting> settings,
                                              int n_shots, uint64_t seed) {
    std::vector<MeasurementRecord> out(settings.size());
    const int64_t count = static_cast<int64_t>(settings.size());
#pragma omp parallel for schedule(static)
    for (int64_t j = 0; j < count; j++) {
        out[j] = sampler.sample(settings[j], n_shots, derive_seed(seed, static_cast<uint64_t>(j)));
    }
    return out;
}

std::vector<double> empirical_distribution(const MeasurementRecord &record) {
    std::vector<double> dist(size_t{1} << record.n_qubits(), 0.0);
    for (uint32_t o : record.outcomes) {
        dist[o] += 1.0;
    }
    for (double &d : dist) {
        d /= record.n_shots();
    }
    return dist;
}

void write_records(std::ostream &out, std::span<const MeasurementRecord> records) {
    if (records.empty()) {
        throw std::invalid_argument("write_records: no records.");
    }
    const int n = records[0].n_qubits();
    const int ns = records[0].n_shots();
    out << "# shadowrec v1 n=" << n << " NU=" << records.size() << " NS=" << ns << "\n";
    std::string bits(n, '0');
    for (size_t r = 0; r < records.size(); r++) {
        const auto &rec = records[r];
        if (rec.n_qubits() != n || rec.n_shots() != ns) {
            throw std::invalid_argument("write_records: record " + std::to_string(r) +
                                        " does not match the first record's n or N_S.");
        }
        if (rec.seed.has_value()) {
            out << "# rec seed=" << *rec.seed
                << " source=" << (rec.source == RecordSource::Simulated ? "simulated" : "external") << "\n";
        }
        out << "B " << rec.setting.to_string() << "\n";
        for (uint32_t o : rec.outcomes) {
            for (int k = 0; k < n; k++) {
                bits[k] = (o >> (n - 1 - k)) & 1 ? '1' : '0';
            }
            out << bits << "\n";
        }
    }
}

void write_records(const std::string &path, std::span<const MeasurementRecord> records) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw DataError("Cannot open " + path + " for writing.");
    }
    write_records(f, records);
}

std::vector<MeasurementRecord> read_records(std::istream &in) {
    std::string line;
    int line_no = 0;
    int n = -1;
    long nu = -1;
    long ns = -1;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line.rfind("# shadowrec v1 ", 0) != 0) {
            fail_at(line_no, "expected header '# shadowrec v1 n=<n> NU=<NU> NS=<NS>'.");
        }
        if (std::sscanf(line.c_str(), "# shadowrec v1 n=%d NU=%ld NS=%ld", &n, &nu, &ns) != 3) {
            fail_at(line_no, "malformed header '" + line + "'.");
        }
        break;
    }
    if (n < 0) {
        throw DataError("Record file is empty.");
    }
    if (n < 1 || n > kMaxRecordQubits || nu < 1 || ns < 1) {
        fail_at(line_no, "header values out of range.");
    }

    std::vector<MeasurementRecord> records;
    records.reserve(nu);
    std::optional<uint64_t> pending_seed;
    RecordSource pending_source = RecordSource::External;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            unsigned long long s;
            char src[32] = {0};
            if (std::sscanf(line.c_str(), "# rec seed=%llu source=%31s", &s, src) == 2) {
                pending_seed = s;
                pending_source = std::string(src) == "simulated" ? RecordSource::Simulated : RecordSource::External;
            }
            continue;
        }
        if (line.rfind("B ", 0) == 0) {
            if (!records.empty() && records.back().n_shots() != ns) {
                fail_at(line_no, "record " + std::to_string(records.size() - 1) + " has " +
                                     std::to_string(records.back().n_shots()) + " shots, expected " +
                                     std::to_string(ns) + ".");
            }
            MeasurementRecord rec;
            try {
                rec.setting = BasisSetting::parse(std::string_view(line).substr(2));
            } catch (const std::invalid_argument &e) {
                fail_at(line_no, "record " + std::to_string(records.size()) + ": " + e.what());
            }
            if (rec.setting.n_qubits() != n) {
                fail_at(line_no, "record " + std::to_string(records.size()) + ": basis has " +
                                     std::to_string(rec.setting.n_qubits()) + " letters, expected " +
                                     std::to_string(n) + ".");
            }
            rec.seed = pending_seed;
            rec.source = pending_seed ? pending_source : RecordSource::External;
            pending_seed.reset();
            pending_source = RecordSource::External;
            rec.outcomes.reserve(ns);
            records.push_back(std::move(rec));
            continue;
        }
        if (records.empty()) {
            fail_at(line_no, "bitstring before the first 'B' line.");
        }
        if (static_cast<int>(line.size()) != n) {
            fail_at(line_no, "record " + std::to_string(records.size() - 1) + ": bitstring of length " +
                                 std::to_string(line.size()) + ", expected " + std::to_string(n) + ".");
        }
        uint32_t o = 0;
        for (char c : line) {
            if (c != '0' && c != '1') {
                fail_at(line_no, "record " + std::to_string(records.size() - 1) + ": invalid bit '" +
                                     std::string(1, c) + "'.");
            }
            o = (o << 1) | static_cast<uint32_t>(c - '0');
        }
        records.back().outcomes.push_back(o);
    }
    if (!records.empty() && records.back().n_shots() != ns) {
        fail_at(line_no, "record " + std::to_string(records.size() - 1) + " has " +
                             std::to_string(records.back().n_shots()) + " shots, expected " + std::to_string(ns) +
                             ".");
    }
    if (static_cast<long>(records.size()) != nu) {
        fail_at(line_no, "found " + std::to_string(records.size()) + " records, header says " + std::to_string(nu) +
                             ".");
    }
    return records;
}

std::vector<MeasurementRecord> read_records(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw DataError("Cannot open record file " + path + ".");
    }
    try {
        return read_records(f);
    } catch (const DataError &e) {
        throw DataError(path + ": " + e.what());
    }
}

CalibrationMatrix CalibrationMatrix::symmetric(int n_qubits, double p) {
    CalibrationMatrix c;
    c.p0.assign(n_qubits, p);
    c.p1.assign(n_qubits, p);
    return c;
}

void CalibrationMatrix::validate() const {
    if (p0.size() != p1.size() || p0.empty()) {
        throw std::invalid_argument("Calibration needs one (p0, p1) pair per qubit.");
    }
    for (size_t i = 0; i < p0.size(); i++) {
        if (!(p0[i] >= 0 && p0[i] <= 1 && p1[i] >= 0 && p1[i] <= 1)) {
            throw std::invalid_argument("Calibration probabilities of qubit " + std::to_string(i) +
                                        " are outside [0, 1].");
        }
        if (std::abs(1.0 - p0[i] - p1[i]) < 1e-12) {
            throw std::domain_error("Calibration matrix of qubit " + std::to_string(i) + " is singular.");
        }
    }
}

CorrectedDistribution calibrate_correct(std::span<const double> dist, const CalibrationMatrix &cal) {
    cal.validate();
    const int n = cal.n_qubits();
    const size_t dim = size_t{1} << n;
    if (dist.size() != dim) {
        throw std::invalid_argument("calibrate_correct: distribution length " + std::to_string(dist.size()) +
                                    " does not match " + std::to_string(n) + " qubits.");
    }
    double total = 0;
    for (double d : dist) {
        total += d;
    }
    if (std::abs(total - 1.0) > kExactTol) {
        throw std::invalid_argument("calibrate_correct: distribution sums to " + std::to_string(total) + ".");
    }
    CorrectedDistribution out;
    out.probs.assign(dist.begin(), dist.end());
    for (int k = 0; k < n; k++) {
        const double a = 1 - cal.p0[k];
        const double b = cal.p1[k];
        const double c = cal.p0[k];
        const double d = 1 - cal.p1[k];
        const double det = a * d - b * c;
        const size_t bit = size_t{1} << (n - 1 - k);
        for (size_t i = 0; i < dim; i++) {
            if (i & bit) {
                continue;
            }
            double x = out.probs[i];
            double y = out.probs[i | bit];
            out.probs[i] = (d * x - b * y) / det;
            out.probs[i | bit] = (-c * x + a * y) / det;
        }
    }
    out.min_value = *std::min_element(out.probs.begin(), out.probs.end());
    return out;
}

void write_calibration(const std::string &path, const CalibrationMatrix &cal) {
    cal.validate();
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw DataError("Cannot open " + path + " for writing.");
    }
    f << std::setprecision(17);
    for (int i = 0; i < cal.n_qubits(); i++) {
        f << "q " << i << " p0 " << cal.p0[i] << " p1 " << cal.p1[i] << "\n";
    }
}

CalibrationMatrix read_calibration(std::istream &in) {
    CalibrationMatrix cal;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ss(line);
        std::string q, k0, k1;
        int idx;
        double p0, p1;
        if (!(ss >> q >> idx >> k0 >> p0 >> k1 >> p1) || q != "q" || k0 != "p0" || k1 != "p1") {
            fail_at(line_no, "expected 'q <i> p0 <val> p1 <val>'.");
        }
        if (idx != cal.n_qubits()) {
            fail_at(line_no, "qubit index " + std::to_string(idx) + " out of order.");
        }
        cal.p0.push_back(p0);
        cal.p1.push_back(p1);
    }
    if (cal.p0.empty()) {
        throw DataError("Calibration file has no qubit rows.");
    }
    try {
        cal.validate();
    } catch (const std::exception &e) {
        throw DataError(e.what());
    }
    return cal;
}

CalibrationMatrix read_calibration(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw DataError("Cannot open calibration file " + path + ".");
    }
    return read_calibration(f);
}

double signed_expectation(std::span<const double> dist, uint64_t mask) {
    double e = 0;
    for (size_t b = 0; b < dist.size(); b++) {
        e += (std::popcount(b & mask) & 1 ? -1.0 : 1.0) * dist[b];
    }
    return e;
}

uint64_t support_mask(const PauliString &p) {
    uint64_t m = 0;
    const int n = p.n_qubits();
    for (int k : p.support()) {
        m |= uint64_t{1} << (n - 1 - k);
    }
    return m;
}

}  // namespace shadow
