// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "prom/rom/pod.hpp"
#include "prom/rom/snapshots.hpp"

namespace prom {

/// Snapshot container: magic "PROMSNAP", u32 version = 1, u8 endianness flag
/// (0 = little), u64 N, u64 snapshot count, f64 timestamps, then column-major
/// f64 state columns. All multi-byte fields little-endian. Sampling metadata
/// travels in a JSON sidecar at `<path>.json`.
void write_snapshots(const std::string& path, const SnapshotSet& set);
SnapshotSet read_snapshots(const std::string& path);

/// Basis persistence reuses the snapshot container: column 0 is the affine
/// offset, columns 1..n the basis, and the "timestamp" array carries
/// [0, sigma_1 .. sigma_n]. Normalization metadata and the full singular
/// value history go to the JSON sidecar.
void write_basis(const std::string& path, const ReducedBasis& basis);
ReducedBasis read_basis(const std::string& path);

}  // namespace prom
