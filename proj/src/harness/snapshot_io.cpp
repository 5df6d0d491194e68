// SPDX-License-Identifier: Apache-2.0

#include "prom/harness/snapshot_io.hpp"

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace prom {

namespace {

constexpr char kMagic[8] = {'P', 'R', 'O', 'M', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
T to_little(T value) {
    if constexpr (std::endian::native == std::endian::little) {
        return value;
    } else {
        T out;
        auto* src = reinterpret_cast<const std::uint8_t*>(&value);
        auto* dst = reinterpret_cast<std::uint8_t*>(&out);
        for (size_t i = 0; i < sizeof(T); ++i) dst[i] = src[sizeof(T) - 1 - i];
        return out;
    }
}

template <typename T>
void write_scalar(std::ostream& out, T value) {
    T le = to_little(value);
    out.write(reinterpret_cast<const char*>(&le), sizeof(T));
}

template <typename T>
T read_scalar(std::istream& in) {
    T le;
    in.read(reinterpret_cast<char*>(&le), sizeof(T));
    if (!in) throw FormatError("snapshot file truncated");
    return to_little(le);
}

void write_doubles(std::ostream& out, const double* data, Index count) {
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(data),
                  static_cast<std::streamsize>(sizeof(double)) * count);
    } else {
        for (Index i = 0; i < count; ++i) write_scalar(out, data[i]);
    }
}

void read_doubles(std::istream& in, double* data, Index count) {
    in.read(reinterpret_cast<char*>(data),
            static_cast<std::streamsize>(sizeof(double)) * count);
    if (!in) throw FormatError("snapshot file truncated");
    if constexpr (std::endian::native == std::endian::big) {
        for (Index i = 0; i < count; ++i) data[i] = to_little(data[i]);
    }
}

void write_container(const std::string& path, const Matrix& columns, const Vector& stamps) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("snapshot io: cannot open '" + path + "' for writing");
    out.write(kMagic, sizeof(kMagic));
    write_scalar<std::uint32_t>(out, kVersion);
    const std::uint8_t little = 0;
    out.write(reinterpret_cast<const char*>(&little), 1);
    write_scalar<std::uint64_t>(out, static_cast<std::uint64_t>(columns.rows()));
    write_scalar<std::uint64_t>(out, static_cast<std::uint64_t>(columns.cols()));
    write_doubles(out, stamps.data(), stamps.size());
    write_doubles(out, columns.data(), columns.size());
    if (!out) throw FormatError("snapshot io: write to '" + path + "' failed");
}

void read_container(const std::string& path, Matrix& columns, Vector& stamps) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("snapshot io: cannot open '" + path + "'");
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw FormatError("snapshot io: bad magic in '" + path + "'");
    }
    const auto version = read_scalar<std::uint32_t>(in);
    if (version != kVersion) {
        throw FormatError("snapshot io: unsupported version " + std::to_string(version));
    }
    std::uint8_t endian_flag;
    in.read(reinterpret_cast<char*>(&endian_flag), 1);
    if (!in) throw FormatError("snapshot file truncated");
    if (endian_flag != 0) {
        throw FormatError("snapshot io: file does not declare little-endian data");
    }
    const auto n = static_cast<Index>(read_scalar<std::uint64_t>(in));
    const auto count = static_cast<Index>(read_scalar<std::uint64_t>(in));
    if (n < 0 || count < 0) throw FormatError("snapshot io: corrupt dimensions");
    stamps = Vector(count);
    read_doubles(in, stamps.data(), count);
    columns = Matrix(n, count);
    read_doubles(in, columns.data(), columns.size());
}

}  // namespace

void write_snapshots(const std::string& path, const SnapshotSet& set) {
    write_container(path, set.states, set.times);
    nlohmann::json meta;
    meta["sample_interval"] = set.sample_interval;
    meta["window_start"] = set.window_start;
    meta["window_end"] = set.window_end;
    meta["provenance"] = set.provenance;
    std::ofstream side(path + ".json");
    if (!side) throw FormatError("snapshot io: cannot write sidecar for '" + path + "'");
    side << meta.dump(2) << "\n";
}

SnapshotSet read_snapshots(const std::string& path) {
    SnapshotSet set;
    read_container(path, set.states, set.times);
    std::ifstream side(path + ".json");
    if (side) {
        nlohmann::json meta;
        try {
            side >> meta;
            set.sample_interval = meta.value("sample_interval", 0.0);
            set.window_start = meta.value("window_start", 0.0);
            set.window_end = meta.value("window_end", 0.0);
            set.provenance = meta.value("provenance", "");
        } catch (const nlohmann::json::exception&) {
            throw FormatError("snapshot io: malformed sidecar for '" + path + "'");
        }
    }
    return set;
}

void write_basis(const std::string& path, const ReducedBasis& basis) {
    Matrix columns(basis.full_dim(), basis.n() + 1);
    columns.col(0) = basis.u0;
    columns.rightCols(basis.n()) = basis.v;
    Vector stamps(basis.n() + 1);
    stamps(0) = 0.0;
    stamps.tail(basis.n()) = basis.sigma.head(basis.n());
    write_container(path, columns, stamps);

    nlohmann::json meta;
    meta["energy_criterion"] = basis.energy_criterion;
    meta["normalized"] = basis.normalized;
    std::vector<double> scales(basis.block_scales.data(),
                               basis.block_scales.data() + basis.block_scales.size());
    meta["block_scales"] = scales;
    std::vector<double> sigma(basis.sigma.data(), basis.sigma.data() + basis.sigma.size());
    meta["sigma"] = sigma;
    meta["provenance"] = basis.provenance;
    std::ofstream side(path + ".json");
    if (!side) throw FormatError("snapshot io: cannot write sidecar for '" + path + "'");
    side << meta.dump(2) << "\n";
}

ReducedBasis read_basis(const std::string& path) {
    Matrix columns;
    Vector stamps;
    read_container(path, columns, stamps);
    if (columns.cols() < 1) {
        throw FormatError("snapshot io: basis container has no columns");
    }
    ReducedBasis basis;
    basis.u0 = columns.col(0);
    basis.v = columns.rightCols(columns.cols() - 1);
    basis.sigma = stamps.tail(stamps.size() - 1);
    std::ifstream side(path + ".json");
    if (side) {
        nlohmann::json meta;
        try {
            side >> meta;
            basis.energy_criterion = meta.value("energy_criterion", 0.0);
            basis.normalized = meta.value("normalized", false);
            if (meta.contains("block_scales")) {
                std::vector<double> scales = meta["block_scales"].get<std::vector<double>>();
                basis.block_scales =
                    Eigen::Map<Vector>(scales.data(), static_cast<Index>(scales.size()));
            }
            if (meta.contains("sigma")) {
                std::vector<double> sigma = meta["sigma"].get<std::vector<double>>();
                basis.sigma = Eigen::Map<Vector>(sigma.data(), static_cast<Index>(sigma.size()));
            }
            basis.provenance = meta.value("provenance", "");
        } catch (const nlohmann::json::exception&) {
            throw FormatError("snapshot io: malformed sidecar for '" + path + "'");
        }
    }
    return basis;
}

}  // namespace prom
