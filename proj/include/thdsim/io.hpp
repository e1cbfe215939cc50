#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "thdsim/analysis.hpp"
#include "thdsim/homodyne.hpp"
#include "thdsim/phase_space.hpp"
#include "thdsim/temporal_mode.hpp"

namespace thdsim {

// All text output uses "%.17g" so floating-point values round-trip exactly
// and files are byte-stable across runs and worker counts.
std::string format_double(double v);

// Marginal CSV: comment header with theta and description, then q,pdf,cdf.
void write_marginal_csv(const MarginalDistribution& m, const std::string& description,
                        const std::filesystem::path& path);

// Temporal mode CSV (t, amplitude) and basis matrix CSV.
void write_mode_csv(const TemporalMode& mode, const std::filesystem::path& path);
TemporalMode read_mode_csv(const std::filesystem::path& path);
void write_basis_csv(const ModeBasis& basis, const std::filesystem::path& path);

// Quadrature records CSV: theta,q.
void write_records_csv(const std::vector<QuadratureRecord>& records,
                       const std::filesystem::path& path);
std::vector<QuadratureRecord> read_records_csv(const std::filesystem::path& path);

// Ensemble export. CSV: one trace per row. Binary: 16-byte header (8-byte
// magic "THDSIM01", uint32 trace count, uint32 bins, little endian) followed
// by row-major float64 samples. Both come with a JSON sidecar carrying
// t_grid, theta_per_trace, gain, seed and provenance.
void write_ensemble_csv(const TraceEnsemble& e, const std::filesystem::path& path);
void write_ensemble_binary(const TraceEnsemble& e, const std::filesystem::path& path);
void write_ensemble_sidecar(const TraceEnsemble& e, const std::filesystem::path& path);
Eigen::MatrixXd read_ensemble_csv(const std::filesystem::path& path);
Eigen::MatrixXd read_ensemble_binary(const std::filesystem::path& path);

// SHA-256 (hex digits) of a byte buffer or a file on disk.
std::string sha256_hex(const void* data, size_t len);
std::string sha256_hex(const std::string& s);
std::string sha256_file_hex(const std::filesystem::path& path);

struct ManifestEntry {
  std::string path;  // relative to the output directory
  uint64_t bytes = 0;
  std::string sha256;
};

// manifest.json: every output file with its content hash, sorted by path.
void write_manifest(const std::vector<ManifestEntry>& entries, const std::string& status,
                    const std::string& config_sha256, const std::filesystem::path& path);

}  // namespace thdsim
