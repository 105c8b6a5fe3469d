#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsae/field.hpp"
#include "fsae/nn.hpp"
#include "fsae/preprocess.hpp"

namespace fsae::io {

enum class Error {
  kOk = 0,
  kOpenFailed = 10,
  kBadMagic = 11,
  kBadVersion = 12,
  kTruncated = 13,
  kBadHeader = 14,
  kConfigInvalid = 15,
  kNonFinite = 16,
};

class IoException : public std::runtime_error {
 public:
  IoException(Error code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Error code() const { return code_; }

 private:
  Error code_;
};

// Binary field container "FSF1": version u16, level u8, ordering u8
// (0 = nested), length-prefixed variable name, timestamp i64 (days since
// 1940-01-01), payload little-endian f32, length npix(level).
void write_field(const std::string& path, const Field& f);
Field read_field(const std::string& path);

// Flat key-value run configuration with dotted keys ("levels.z_c = 3").
class RunConfig {
 public:
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);
  std::string serialize() const;
  void save(const std::string& path) const;

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
  double get_real(const std::string& key) const;
  double get_real_or(const std::string& key, double fallback) const;
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  void set_int(const std::string& key, std::int64_t v) { kv_[key] = std::to_string(v); }

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

// Versioned checkpoint "FSCK": config echo plus named tensors as
// little-endian f32.
void write_checkpoint(const std::string& path, const nn::ParamStore& params,
                      const RunConfig& config);
RunConfig read_checkpoint(const std::string& path, nn::ParamStore& params);

// Normalization stats as run-config entries (norm.<var>.p01 / .p99).
void norm_to_config(const preprocess::NormStats& s, RunConfig& cfg);
preprocess::NormStats norm_from_config(const RunConfig& cfg, const std::string& variable);

// CSV helpers for metric and spectrum tables.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace fsae::io
