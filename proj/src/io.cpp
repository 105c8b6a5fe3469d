#include "fsae/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace fsae::io {

namespace {

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; big-endian hosts unsupported");

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw IoException(Error::kTruncated, "unexpected end of file");
  return v;
}

constexpr char kFieldMagic[4] = {'F', 'S', 'F', '1'};
constexpr char kCkptMagic[4] = {'F', 'S', 'C', 'K'};
constexpr std::uint16_t kFieldVersion = 1;
constexpr std::uint16_t kCkptVersion = 1;

}  // namespace

void write_field(const std::string& path, const Field& f) {
  f.check_shape();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoException(Error::kOpenFailed, "cannot open for writing: " + path);
  os.write(kFieldMagic, 4);
  put<std::uint16_t>(os, kFieldVersion);
  put<std::uint8_t>(os, std::uint8_t(f.z));
  put<std::uint8_t>(os, 0);  // nested
  put<std::uint16_t>(os, std::uint16_t(f.variable.size()));
  os.write(f.variable.data(), std::streamsize(f.variable.size()));
  put<std::int64_t>(os, f.timestamp);
  for (double v : f.values) put<float>(os, float(v));
  if (!os) throw IoException(Error::kOpenFailed, "write failed: " + path);
}

Field read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoException(Error::kOpenFailed, "cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kFieldMagic, 4) != 0)
    throw IoException(Error::kBadMagic, "not a field file: " + path);
  const auto version = take<std::uint16_t>(is);
  if (version != kFieldVersion)
    throw IoException(Error::kBadVersion, "unsupported field file version");
  Field f;
  f.z = take<std::uint8_t>(is);
  const auto ordering = take<std::uint8_t>(is);
  if (ordering != 0) throw IoException(Error::kBadHeader, "only nested ordering supported");
  const auto name_len = take<std::uint16_t>(is);
  f.variable.resize(name_len);
  is.read(f.variable.data(), name_len);
  if (!is) throw IoException(Error::kTruncated, "truncated variable name");
  f.timestamp = take<std::int64_t>(is);
  const std::int64_t n = healpix::npix(f.z);
  f.values.resize(size_t(n));
  for (std::int64_t i = 0; i < n; ++i) f.values[size_t(i)] = double(take<float>(is));
  char extra;
  if (is.read(&extra, 1))
    throw IoException(Error::kBadHeader, "trailing bytes after payload: " + path);
  return f;
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw IoException(Error::kConfigInvalid,
                        "config line " + std::to_string(lineno) + ": missing '='");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw IoException(Error::kConfigInvalid,
                        "config line " + std::to_string(lineno) + ": empty key");
    cfg.kv_[key] = val;
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoException(Error::kOpenFailed, "cannot open config: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::serialize() const {
  std::ostringstream ss;
  for (const auto& [k, v] : kv_) ss << k << " = " << v << "\n";
  return ss.str();
}

void RunConfig::save(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw IoException(Error::kOpenFailed, "cannot open config for writing: " + path);
  os << serialize();
}

std::string RunConfig::get(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw IoException(Error::kConfigInvalid, "missing config key: " + key);
  return it->second;
}

std::string RunConfig::get_or(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

std::int64_t RunConfig::get_int(const std::string& key) const {
  try {
    return std::stoll(get(key));
  } catch (const std::invalid_argument&) {
    throw IoException(Error::kConfigInvalid, "config key is not an integer: " + key);
  }
}

std::int64_t RunConfig::get_int_or(const std::string& key, std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

double RunConfig::get_real(const std::string& key) const {
  try {
    return std::stod(get(key));
  } catch (const std::invalid_argument&) {
    throw IoException(Error::kConfigInvalid, "config key is not a number: " + key);
  }
}

double RunConfig::get_real_or(const std::string& key, double fallback) const {
  return has(key) ? get_real(key) : fallback;
}

void write_checkpoint(const std::string& path, const nn::ParamStore& params,
                      const RunConfig& config) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoException(Error::kOpenFailed, "cannot open for writing: " + path);
  os.write(kCkptMagic, 4);
  put<std::uint16_t>(os, kCkptVersion);
  const std::string cfg = config.serialize();
  put<std::uint32_t>(os, std::uint32_t(cfg.size()));
  os.write(cfg.data(), std::streamsize(cfg.size()));
  put<std::uint32_t>(os, std::uint32_t(params.all().size()));
  for (const auto& [name, p] : params.all()) {
    put<std::uint16_t>(os, std::uint16_t(name.size()));
    os.write(name.data(), std::streamsize(name.size()));
    put<std::uint32_t>(os, std::uint32_t(p.value.rows));
    put<std::uint32_t>(os, std::uint32_t(p.value.cols));
    for (double v : p.value.v) put<float>(os, float(v));
  }
  if (!os) throw IoException(Error::kOpenFailed, "write failed: " + path);
}

RunConfig read_checkpoint(const std::string& path, nn::ParamStore& params) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoException(Error::kOpenFailed, "cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kCkptMagic, 4) != 0)
    throw IoException(Error::kBadMagic, "not a checkpoint file: " + path);
  if (take<std::uint16_t>(is) != kCkptVersion)
    throw IoException(Error::kBadVersion, "unsupported checkpoint version");
  const auto cfg_len = take<std::uint32_t>(is);
  std::string cfg_text(cfg_len, '\0');
  is.read(cfg_text.data(), cfg_len);
  if (!is) throw IoException(Error::kTruncated, "truncated config echo");
  const auto count = take<std::uint32_t>(is);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto name_len = take<std::uint16_t>(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    if (!is) throw IoException(Error::kTruncated, "truncated tensor name");
    const auto rows = take<std::uint32_t>(is);
    const auto cols = take<std::uint32_t>(is);
    nn::Param& p = params.get(name, rows, cols, nn::Init::kZero);
    for (std::int64_t j = 0; j < p.value.size(); ++j)
      p.value.v[size_t(j)] = double(take<float>(is));
  }
  return RunConfig::parse(cfg_text);
}

void norm_to_config(const preprocess::NormStats& s, RunConfig& cfg) {
  std::ostringstream a, b;
  a.precision(17);
  b.precision(17);
  a << s.p01;
  b << s.p99;
  cfg.set("norm." + s.variable + ".p01", a.str());
  cfg.set("norm." + s.variable + ".p99", b.str());
}

preprocess::NormStats norm_from_config(const RunConfig& cfg, const std::string& variable) {
  preprocess::NormStats s;
  s.variable = variable;
  s.p01 = cfg.get_real("norm." + variable + ".p01");
  s.p99 = cfg.get_real("norm." + variable + ".p99");
  return s;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream os(path);
  if (!os) throw IoException(Error::kOpenFailed, "cannot open for writing: " + path);
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
}

}  // namespace fsae::io
