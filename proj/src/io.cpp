#include "sphframe/io.hpp"

#include "sphframe/errors.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace sphframe::io {

namespace {

constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kDtypeFloat64 = 1;

class Writer {
 public:
  explicit Writer(std::string_view magic) { out_.append(magic); }

  void u32(std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out_.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out_.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
  }
  template <typename Range>
  void f64s(const Range& values) {
    for (double v : values) f64(v);
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(std::string_view bytes, std::string_view magic) : bytes_(bytes) {
    if (bytes_.substr(0, 4) != magic)
      throw Error(ErrorKind::format, "bad magic, expected " + std::string(magic));
    pos_ = 4;
    if (u32() != kVersion) throw Error(ErrorKind::format, "unsupported container version");
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b);
    pos_ += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b);
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }
  std::vector<double> f64s(std::size_t count) {
    need(count * 8);
    std::vector<double> v(count);
    for (double& x : v) x = f64();
    return v;
  }
  void finish() const {
    if (pos_ != bytes_.size()) throw Error(ErrorKind::format, "trailing bytes after payload");
  }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw Error(ErrorKind::format, "container is truncated");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t checked_level(std::uint32_t level) {
  if (level > static_cast<std::uint32_t>(kMaxDepth))
    throw Error(ErrorKind::depth_limit, "level in container exceeds supported depth");
  return level;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const double* data, std::size_t count) {
  std::string s;
  for (std::size_t k = 0; k < count; ++k) {
    if (k) s.push_back(' ');
    s += format_number(data[k]);
  }
  return s;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& key) {
  std::vector<double> out;
  const char* cur = text.c_str();
  while (true) {
    while (*cur == ' ' || *cur == '\t') ++cur;
    if (*cur == '\0') break;
    char* end = nullptr;
    const double v = std::strtod(cur, &end);
    if (end == cur) throw Error(ErrorKind::format, "bad number in field '" + key + "'");
    out.push_back(v);
    cur = end;
  }
  return out;
}

constexpr std::string_view kBankHeader = "# sphframe filter bank, version 1\n";

}  // namespace

std::string encode_partition(const PartitionTree& tree) {
  Writer w("SPHP");
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(tree.depth()));
  for (const auto& level : tree.levels())
    for (const ParamRect& r : level) {
      w.f64(r.x_l);
      w.f64(r.x_r);
      w.f64(r.y_b);
      w.f64(r.y_t);
    }
  return w.take();
}

PartitionTree decode_partition(std::string_view bytes) {
  Reader r(bytes, "SPHP");
  const auto depth = checked_level(r.u32());
  std::vector<std::vector<ParamRect>> levels(depth + 1);
  for (std::uint32_t j = 0; j <= depth; ++j) {
    levels[j].resize(face_size(static_cast<int>(j)));
    for (ParamRect& rect : levels[j]) {
      rect.x_l = r.f64();
      rect.x_r = r.f64();
      rect.y_b = r.f64();
      rect.y_t = r.f64();
    }
  }
  r.finish();
  return PartitionTree::from_levels(std::move(levels));
}

std::string encode_signal(const SphericalSignal& signal) {
  Writer w("SPHS");
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(signal.level()));
  w.u32(kFaceCount);
  w.u32(kDtypeFloat64);
  w.f64(signal.f_max());
  w.f64s(signal.values());
  return w.take();
}

SphericalSignal decode_signal(std::string_view bytes) {
  Reader r(bytes, "SPHS");
  const auto level = checked_level(r.u32());
  if (r.u32() != kFaceCount) throw Error(ErrorKind::format, "signal must have six faces");
  if (r.u32() != kDtypeFloat64) throw Error(ErrorKind::format, "unsupported dtype");
  const double f_max = r.f64();
  auto values = r.f64s(sphere_size(static_cast<int>(level)));
  r.finish();
  return SphericalSignal(static_cast<int>(level), std::move(values), f_max);
}

std::string encode_coefficients(const FrameletCoefficients& coeffs) {
  coeffs.validate();
  if (coeffs.ell != 4 || coeffs.faces != kFaceCount)
    throw Error(ErrorKind::dimension, "SPHC holds spherical coefficients only");
  Writer w("SPHC");
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(coeffs.coarse_level));
  w.u32(static_cast<std::uint32_t>(coeffs.fine_level));
  w.u32(static_cast<std::uint32_t>(coeffs.n));
  w.f64s(coeffs.lowpass);
  for (const auto& level : coeffs.highpass) w.f64s(level);
  return w.take();
}

FrameletCoefficients decode_coefficients(std::string_view bytes) {
  Reader r(bytes, "SPHC");
  FrameletCoefficients c;
  c.coarse_level = static_cast<int>(checked_level(r.u32()));
  c.fine_level = static_cast<int>(checked_level(r.u32()));
  c.n = static_cast<int>(r.u32());
  c.ell = 4;
  c.faces = kFaceCount;
  if (c.coarse_level >= c.fine_level) throw Error(ErrorKind::format, "SPHC requires L < J");
  if (c.n > 64) throw Error(ErrorKind::format, "implausible framelet count");
  c.lowpass = r.f64s(c.blocks(c.coarse_level));
  for (int j = c.coarse_level; j < c.fine_level; ++j)
    c.highpass.push_back(r.f64s(static_cast<std::size_t>(c.n) * c.blocks(j)));
  r.finish();
  return c;
}

std::string encode_filter_bank(const FilterBank& fb) {
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> A = fb.A();
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> Q = fb.Q();
  std::string s(kBankHeader);
  s += "ell = " + std::to_string(fb.ell()) + "\n";
  s += "n = " + std::to_string(fb.n()) + "\n";
  s += "c = " + format_number(fb.c()) + "\n";
  s += "A = " + join(A.data(), static_cast<std::size_t>(A.size())) + "\n";
  s += "p = " + join(fb.p().data(), static_cast<std::size_t>(fb.p().size())) + "\n";
  s += "Q = " + join(Q.data(), static_cast<std::size_t>(Q.size())) + "\n";
  return s;
}

FilterBank decode_filter_bank(std::string_view text) {
  std::map<std::string, std::string> fields;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::format, "line without '=': " + line);
    auto trim = [](std::string v) {
      const auto b = v.find_first_not_of(" \t");
      const auto e = v.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{} : v.substr(b, e - b + 1);
    };
    fields[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  for (const char* key : {"ell", "n", "c", "A", "p", "Q"})
    if (!fields.count(key)) throw Error(ErrorKind::format, std::string("missing field '") + key + "'");

  const auto ell_v = parse_numbers(fields["ell"], "ell");
  const auto n_v = parse_numbers(fields["n"], "n");
  const auto c_v = parse_numbers(fields["c"], "c");
  if (ell_v.size() != 1 || n_v.size() != 1 || c_v.size() != 1)
    throw Error(ErrorKind::format, "ell, n and c must be scalars");
  const auto ell = static_cast<Eigen::Index>(ell_v[0]);
  const auto n = static_cast<Eigen::Index>(n_v[0]);
  if (ell < 1 || n < 0 || ell_v[0] != double(ell) || n_v[0] != double(n))
    throw Error(ErrorKind::format, "ell and n must be nonnegative integers");

  const auto a = parse_numbers(fields["A"], "A");
  const auto p = parse_numbers(fields["p"], "p");
  const auto q = parse_numbers(fields["Q"], "Q");
  if (a.size() != static_cast<std::size_t>(n * ell) || p.size() != static_cast<std::size_t>(ell) ||
      q.size() != static_cast<std::size_t>(ell * (n + 1)))
    throw Error(ErrorKind::format, "matrix entry counts do not match ell and n");

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::MatrixXd A = Eigen::Map<const RowMajor>(a.data(), n, ell);
  Eigen::VectorXd pv = Eigen::Map<const Eigen::VectorXd>(p.data(), ell);
  Eigen::MatrixXd Q = Eigen::Map<const RowMajor>(q.data(), ell, n + 1);
  return FilterBank::make(std::move(A), std::move(pv), std::move(Q), c_v[0]);
}

std::string encode_report(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["dataset"] = report.dataset;
  j["seed"] = report.seed;
  j["levels"] = report.levels;
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : report.cells) {
    nlohmann::ordered_json cell;
    cell["rate"] = c.rate;
    cell["method"] = to_string(c.method);
    cell["psnr_before_mean"] = c.psnr_before_mean;
    cell["psnr_after_mean"] = c.psnr_after_mean;
    cell["improvement"] = c.improvement;
    cell["variance"] = c.variance;
    cell["psnr_before"] = c.psnr_before;
    cell["psnr_after"] = c.psnr_after;
    j["cells"].push_back(std::move(cell));
  }
  return j.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

}  // namespace sphframe::io
