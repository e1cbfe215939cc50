#include "thdsim/io.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "thdsim/errors.hpp"

namespace thdsim {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, mode);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ifstream in(path, mode);
  if (!in) throw ConfigError("cannot open for reading: " + path.string());
  return in;
}

}  // namespace

void write_marginal_csv(const MarginalDistribution& m, const std::string& description,
                        const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "# theta=" << format_double(m.theta) << " state=" << description << "\n";
  out << "q,pdf,cdf\n";
  for (int i = 0; i < m.q.size(); ++i) {
    out << format_double(m.q[i]) << ',' << format_double(m.pdf[i]) << ','
        << (m.has_cdf() ? format_double(m.cdf[i]) : std::string{}) << "\n";
  }
}

void write_mode_csv(const TemporalMode& mode, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "t,amplitude\n";
  for (int k = 0; k < mode.bins(); ++k) {
    out << format_double(mode.t()[k]) << ',' << format_double(mode.amplitude()[k]) << "\n";
  }
}

TemporalMode read_mode_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  std::vector<double> t, amp;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    double a = 0, b = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf", &a, &b) != 2) {
      throw ConfigError("read_mode_csv: malformed line in " + path.string());
    }
    t.push_back(a);
    amp.push_back(b);
  }
  if (t.size() < 2) throw ConfigError("read_mode_csv: too few rows in " + path.string());
  return TemporalMode(Eigen::Map<Eigen::VectorXd>(t.data(), t.size()),
                      Eigen::Map<Eigen::VectorXd>(amp.data(), amp.size()));
}

void write_basis_csv(const ModeBasis& basis, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (int k = 0; k < basis.modes.rows(); ++k) {
    for (int j = 0; j < basis.modes.cols(); ++j) {
      out << (j ? "," : "") << format_double(basis.modes(k, j));
    }
    out << "\n";
  }
}

void write_records_csv(const std::vector<QuadratureRecord>& records,
                       const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "theta,q\n";
  for (const auto& r : records) {
    out << format_double(r.theta) << ',' << format_double(r.q) << "\n";
  }
}

std::vector<QuadratureRecord> read_records_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  std::vector<QuadratureRecord> records;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    QuadratureRecord r;
    if (std::sscanf(line.c_str(), "%lf,%lf", &r.theta, &r.q) != 2) {
      throw ConfigError("read_records_csv: malformed line in " + path.string());
    }
    records.push_back(r);
  }
  return records;
}

void write_ensemble_csv(const TraceEnsemble& e, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (int m = 0; m < e.trace_count(); ++m) {
    for (int k = 0; k < e.bins(); ++k) {
      out << (k ? "," : "") << format_double(e.traces(m, k));
    }
    out << "\n";
  }
}

namespace {
constexpr char kMagic[8] = {'T', 'H', 'D', 'S', 'I', 'M', '0', '1'};
}

void write_ensemble_binary(const TraceEnsemble& e, const std::filesystem::path& path) {
  auto out = open_out(path, std::ios::binary);
  out.write(kMagic, 8);
  const uint32_t m = static_cast<uint32_t>(e.trace_count());
  const uint32_t n = static_cast<uint32_t>(e.bins());
  out.write(reinterpret_cast<const char*>(&m), 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  for (int r = 0; r < e.trace_count(); ++r) {
    Eigen::RowVectorXd row = e.traces.row(r);
    out.write(reinterpret_cast<const char*>(row.data()), sizeof(double) * n);
  }
}

Eigen::MatrixXd read_ensemble_binary(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::binary);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) {
    throw ConfigError("read_ensemble_binary: bad magic in " + path.string());
  }
  uint32_t m = 0, n = 0;
  in.read(reinterpret_cast<char*>(&m), 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  if (!in || m == 0 || n == 0) throw ConfigError("read_ensemble_binary: bad dimensions");
  Eigen::MatrixXd traces(m, n);
  std::vector<double> row(n);
  for (uint32_t r = 0; r < m; ++r) {
    in.read(reinterpret_cast<char*>(row.data()), sizeof(double) * n);
    if (!in) throw ConfigError("read_ensemble_binary: truncated payload");
    for (uint32_t k = 0; k < n; ++k) traces(r, k) = row[k];
  }
  return traces;
}

Eigen::MatrixXd read_ensemble_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ConfigError("read_ensemble_csv: ragged rows in " + path.string());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("read_ensemble_csv: empty file " + path.string());
  Eigen::MatrixXd traces(rows.size(), rows.front().size());
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) traces(r, c) = rows[r][c];
  }
  return traces;
}

void write_ensemble_sidecar(const TraceEnsemble& e, const std::filesystem::path& path) {
  nlohmann::json j;
  j["t_grid"] = std::vector<double>(e.t.data(), e.t.data() + e.t.size());
  j["theta_per_trace"] = std::vector<double>(e.theta.data(), e.theta.data() + e.theta.size());
  j["sampled_x0"] =
      std::vector<double>(e.sampled_x0.data(), e.sampled_x0.data() + e.sampled_x0.size());
  j["gain"] = e.gain;
  j["seed"] = e.seed;
  j["background_variance"] = e.background_variance;
  j["provenance"] = {{"state", e.provenance.state},
                     {"mode", e.provenance.mode},
                     {"background", e.provenance.background},
                     {"error_model", e.provenance.error_model},
                     {"off_window_traces", e.provenance.off_window_traces}};
  open_out(path) << j.dump(2) << "\n";
}

// ---- SHA-256 -----------------------------------------------------------------

namespace {

struct Sha256 {
  uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                   0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  uint64_t total = 0;
  unsigned char buf[64];
  size_t fill = 0;

  static uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

  void block(const unsigned char* p) {
    static const uint32_t k[64] = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
        0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
        0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
        0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
        0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
        0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
        0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
        0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
        0xc67178f2};
    uint32_t w[64];
    for (int i = 0; i < 16; ++i) {
      w[i] = (uint32_t(p[4 * i]) << 24) | (uint32_t(p[4 * i + 1]) << 16) |
             (uint32_t(p[4 * i + 2]) << 8) | uint32_t(p[4 * i + 3]);
    }
    for (int i = 16; i < 64; ++i) {
      const uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      const uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5], g = h[6], hh = h[7];
    for (int i = 0; i < 64; ++i) {
      const uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      const uint32_t ch = (e & f) ^ (~e & g);
      const uint32_t t1 = hh + s1 + ch + k[i] + w[i];
      const uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      const uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      const uint32_t t2 = s0 + maj;
      hh = g; g = f; f = e; e = d + t1; d = c; c = b; b = a; a = t1 + t2;
    }
    h[0] += a; h[1] += b; h[2] += c; h[3] += d;
    h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
  }

  void update(const void* data, size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    total += len;
    while (len > 0) {
      const size_t take = std::min(len, 64 - fill);
      std::memcpy(buf + fill, p, take);
      fill += take;
      p += take;
      len -= take;
      if (fill == 64) {
        block(buf);
        fill = 0;
      }
    }
  }

  std::string hex() {
    const uint64_t bits = total * 8;
    unsigned char pad = 0x80;
    update(&pad, 1);
    const unsigned char zero = 0;
    while (fill != 56) update(&zero, 1);
    unsigned char len_be[8];
    for (int i = 0; i < 8; ++i) len_be[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
    update(len_be, 8);
    std::string out(64, '0');
    static const char* digits = "0123456789abcdef";
    for (int i = 0; i < 8; ++i) {
      for (int b = 0; b < 4; ++b) {
        const unsigned char byte = static_cast<unsigned char>(h[i] >> (24 - 8 * b));
        out[8 * i + 2 * b] = digits[byte >> 4];
        out[8 * i + 2 * b + 1] = digits[byte & 0xF];
      }
    }
    return out;
  }
};

}  // namespace

std::string sha256_hex(const void* data, size_t len) {
  Sha256 s;
  s.update(data, len);
  return s.hex();
}

std::string sha256_hex(const std::string& str) { return sha256_hex(str.data(), str.size()); }

std::string sha256_file_hex(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::binary);
  Sha256 s;
  std::array<char, 65536> chunk;
  while (in) {
    in.read(chunk.data(), chunk.size());
    const std::streamsize got = in.gcount();
    if (got > 0) s.update(chunk.data(), static_cast<size_t>(got));
  }
  return s.hex();
}

void write_manifest(const std::vector<ManifestEntry>& entries, const std::string& status,
                    const std::string& config_sha256, const std::filesystem::path& path) {
  std::vector<ManifestEntry> sorted = entries;
  std::sort(sorted.begin(), sorted.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
  nlohmann::json j;
  j["status"] = status;
  j["config_sha256"] = config_sha256;
  j["files"] = nlohmann::json::array();
  for (const auto& e : sorted) {
    j["files"].push_back({{"path", e.path}, {"bytes", e.bytes}, {"sha256", e.sha256}});
  }
  open_out(path) << j.dump(2) << "\n";
}

}  // namespace thdsim
