#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <type_traits>

#include "dualmeissner/digest.hpp"
#include "dualmeissner/errors.hpp"
#include "dualmeissner/lattice_mc.hpp"

namespace dm {

// Lattice snapshot, version 1. Fixed little-endian layout:
//   bytes 0..7    magic "SU2LAT\0\0"
//   8..11         u32 format version (1)
//   12..27        u32 dims[4]
//   28..35        f64 beta
//   36..43        u64 sweep counter
//   44..51        u64 FNV-1a64 of the link payload
//   52..          link payload: per site (x fastest), per direction, 4 f64
static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; byte-swapping is not implemented");
static_assert(sizeof(Su2) == 4 * sizeof(double) && std::is_trivially_copyable_v<Su2>,
              "link payload is written as raw Su2 quadruples");

inline constexpr char kSnapshotMagic[8] = {'S', 'U', '2', 'L', 'A', 'T', '\0', '\0'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct SnapshotHeader {
    char magic[8];
    std::uint32_t version;
    std::uint32_t dims[4];
    double beta;
    std::uint64_t sweep;
    std::uint64_t payload_digest;
};
static_assert(sizeof(SnapshotHeader) == 52 || sizeof(SnapshotHeader) == 56,
              "header layout drifted");

namespace detail {

// The struct may carry tail padding; serialize the 52 meaningful bytes only.
inline constexpr std::size_t kHeaderBytes = 52;

inline void pack_header(const SnapshotHeader& h, char* out) {
    std::memcpy(out, h.magic, 8);
    std::memcpy(out + 8, &h.version, 4);
    std::memcpy(out + 12, h.dims, 16);
    std::memcpy(out + 28, &h.beta, 8);
    std::memcpy(out + 36, &h.sweep, 8);
    std::memcpy(out + 44, &h.payload_digest, 8);
}

inline SnapshotHeader unpack_header(const char* in) {
    SnapshotHeader h;
    std::memcpy(h.magic, in, 8);
    std::memcpy(&h.version, in + 8, 4);
    std::memcpy(h.dims, in + 12, 16);
    std::memcpy(&h.beta, in + 28, 8);
    std::memcpy(&h.sweep, in + 36, 8);
    std::memcpy(&h.payload_digest, in + 44, 8);
    return h;
}

}  // namespace detail

struct Snapshot {
    GaugeField field;
    double beta = 0.0;
    std::uint64_t sweep = 0;
};

inline void write_snapshot(const std::string& path, const GaugeField& f, double beta,
                           std::uint64_t sweep) {
    const char* payload = reinterpret_cast<const char*>(f.u.data());
    const std::size_t payload_bytes = f.u.size() * sizeof(Su2);

    SnapshotHeader h{};
    std::memcpy(h.magic, kSnapshotMagic, 8);
    h.version = kSnapshotVersion;
    for (int mu = 0; mu < 4; ++mu) h.dims[mu] = static_cast<std::uint32_t>(f.lat.dims()[mu]);
    h.beta = beta;
    h.sweep = sweep;
    h.payload_digest = fnv1a64(payload, payload_bytes);

    char hbuf[detail::kHeaderBytes];
    detail::pack_header(h, hbuf);

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out.write(hbuf, sizeof hbuf);
        out.write(payload, static_cast<std::streamsize>(payload_bytes));
        out.flush();
        if (!out) throw IoError("write failure on '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

inline Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open snapshot '" + path + "'");

    char hbuf[detail::kHeaderBytes];
    in.read(hbuf, sizeof hbuf);
    if (in.gcount() != static_cast<std::streamsize>(sizeof hbuf))
        throw IoError("snapshot '" + path + "' is shorter than its header");
    SnapshotHeader h = detail::unpack_header(hbuf);

    if (std::memcmp(h.magic, kSnapshotMagic, 8) != 0)
        throw IoError("snapshot '" + path + "' has bad magic");
    if (h.version != kSnapshotVersion)
        throw IoError("snapshot '" + path + "' has unsupported version " +
                      std::to_string(h.version));
    std::array<int, 4> dims;
    for (int mu = 0; mu < 4; ++mu) {
        if (h.dims[mu] < 2 || h.dims[mu] > 4096 || h.dims[mu] % 2 != 0)
            throw IoError("snapshot '" + path + "' has invalid extent " +
                          std::to_string(h.dims[mu]));
        dims[mu] = static_cast<int>(h.dims[mu]);
    }

    Snapshot snap;
    snap.field.lat = Lattice(dims);
    snap.field.u.resize(static_cast<std::size_t>(snap.field.lat.volume()) * 4);
    snap.beta = h.beta;
    snap.sweep = h.sweep;

    const std::size_t payload_bytes = snap.field.u.size() * sizeof(Su2);
    char* payload = reinterpret_cast<char*>(snap.field.u.data());
    in.read(payload, static_cast<std::streamsize>(payload_bytes));
    if (in.gcount() != static_cast<std::streamsize>(payload_bytes))
        throw IoError("snapshot '" + path + "' payload is truncated");
    char extra;
    if (in.read(&extra, 1); in.gcount() != 0)
        throw IoError("snapshot '" + path + "' has trailing bytes");

    if (fnv1a64(payload, payload_bytes) != h.payload_digest)
        throw IoError("snapshot '" + path + "' failed its digest check");
    return snap;
}

}  // namespace dm
