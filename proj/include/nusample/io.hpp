#pragma once

#include <bit>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nusample/balayage.hpp"
#include "nusample/frames.hpp"
#include "nusample/geometry.hpp"
#include "nusample/psido.hpp"
#include "nusample/sampling.hpp"
#include "nusample/spectral.hpp"
#include "nusample/stft.hpp"

namespace nusample::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little, "binary dumps assume a little-endian host");

/// Malformed or incomplete input files and configs.
class FormatError : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// small helpers

inline json point_json(const Point& p, int dim) {
  json a = json::array();
  for (int i = 0; i < dim; ++i) a.push_back(p[i]);
  return a;
}

inline Point point_from(const json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) throw FormatError("point must be an array of length " + std::to_string(dim));
  Point p{};
  for (int i = 0; i < dim; ++i) p[i] = j[static_cast<std::size_t>(i)].get<double>();
  return p;
}

inline json box_json(const Box& b) { return {{"lo", point_json(b.lo, b.dim)}, {"hi", point_json(b.hi, b.dim)}}; }

/// Accepts {"lo": [...], "hi": [...]} or a 1D pair [lo, hi].
inline Box box_from(const json& j, int dim) {
  if (j.is_array() && dim == 1 && j.size() == 2) return Box::interval(j[0].get<double>(), j[1].get<double>());
  if (!j.is_object() || !j.contains("lo") || !j.contains("hi")) throw FormatError("box needs lo and hi");
  Box b{dim, point_from(j.at("lo"), dim), point_from(j.at("hi"), dim)};
  for (int i = 0; i < dim; ++i)
    if (b.hi[i] < b.lo[i]) throw FormatError("box has hi < lo");
  return b;
}

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw FormatError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

/// Shortest round-trip decimal form.
inline std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

/// CSV table with a header row.
class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header) : cols_(header.size()) { row_strings(header); }

  template <class... Ts>
  CsvWriter& row(const Ts&... v) {
    static_assert(sizeof...(Ts) > 0);
    std::vector<std::string> cells{cell(v)...};
    require(cells.size() == cols_, "CSV row width differs from header");
    row_strings(cells);
    return *this;
  }

  const std::string& str() const { return text_; }
  void save(const fs::path& path) const { write_text(path, text_); }

private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
    text_ += "\n";
  }

  std::size_t cols_;
  std::string text_;
};

/// Rows of numbers; lines starting with a non-numeric token are skipped.
inline std::vector<std::vector<double>> read_numeric_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> vals;
    std::istringstream ls(line);
    std::string tok;
    bool numeric = true;
    while (std::getline(ls, tok, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(tok, &used));
        if (tok.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
      if (!numeric) break;
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header
      throw FormatError("non-numeric row in " + path.string() + ": " + line);
    }
    rows.push_back(std::move(vals));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// geometry and sampling

inline json to_json(const SpectrumSet& s) {
  json j{{"dim", s.dim()}, {"shape", to_string(s.shape())}};
  switch (s.shape()) {
    case Shape::box: j["half_widths"] = point_json(s.half_widths(), s.dim()); break;
    case Shape::ball: j["radius"] = s.radius(); break;
    case Shape::polytope: {
      json v = json::array();
      for (const auto& p : s.vertices()) v.push_back(point_json(p, s.dim()));
      j["vertices"] = v;
      break;
    }
  }
  return j;
}

inline SpectrumSet spectrum_from_json(const json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    if (dim != 1 && dim != 2) throw FormatError("spectrum dim must be 1 or 2");
    const std::string shape = j.at("shape").get<std::string>();
    if (shape == "box") return SpectrumSet::box(dim, point_from(j.at("half_widths"), dim));
    if (shape == "ball") return SpectrumSet::ball(dim, j.at("radius").get<double>());
    if (shape == "polytope") {
      std::vector<Point> v;
      for (const auto& p : j.at("vertices")) v.push_back(point_from(p, dim));
      return SpectrumSet::polytope(dim, std::move(v));
    }
    throw FormatError("unknown spectrum shape '" + shape + "'");
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad spectrum: ") + e.what());
  }
}

inline json to_json(const SamplingSet& E) {
  json pts = json::array();
  for (const auto& p : E.points()) pts.push_back(point_json(p, E.dim()));
  return {{"dim", E.dim()}, {"points", pts}, {"window", box_json(E.window())}};
}

inline SamplingSet sampling_from_json(const json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    std::vector<Point> pts;
    for (const auto& p : j.at("points")) pts.push_back(point_from(p, dim));
    if (j.contains("window")) return SamplingSet(dim, std::move(pts), box_from(j.at("window"), dim));
    return SamplingSet::from_points(dim, std::move(pts));
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad sampling set: ") + e.what());
  }
}

/// One point per row (d columns); an optional header row is skipped.
inline SamplingSet read_sampling_csv(const fs::path& path, int dim) {
  std::vector<Point> pts;
  for (const auto& r : read_numeric_csv(path)) {
    if (static_cast<int>(r.size()) != dim) throw FormatError("sampling CSV row must have " + std::to_string(dim) + " columns");
    pts.push_back({r[0], dim == 2 ? r[1] : 0.0});
  }
  return SamplingSet::from_points(dim, std::move(pts));
}

inline std::string sampling_csv(const SamplingSet& E) {
  CsvWriter w(E.dim() == 2 ? std::vector<std::string>{"x", "y"} : std::vector<std::string>{"x"});
  for (const auto& p : E.points()) {
    if (E.dim() == 2) w.row(p[0], p[1]);
    else w.row(p[0]);
  }
  return w.str();
}

// ---------------------------------------------------------------------------
// signals

inline json to_json(const BandlimitedSignal& f) {
  const auto& g = f.grid();
  json nodes = json::array(), re = json::array(), im = json::array();
  for (std::size_t k = 0; k < g.size(); ++k) {
    nodes.push_back(point_json(g.nodes[k], g.dim));
    re.push_back(f.coeffs()[static_cast<Eigen::Index>(k)].real());
    im.push_back(f.coeffs()[static_cast<Eigen::Index>(k)].imag());
  }
  return {{"dim", g.dim}, {"nodes", nodes}, {"weights", g.weights}, {"re", re}, {"im", im}};
}

inline std::string signal_csv(const BandlimitedSignal& f) {
  const auto& g = f.grid();
  std::vector<std::string> h = g.dim == 2 ? std::vector<std::string>{"gamma1", "gamma2", "weight", "re", "im"}
                                          : std::vector<std::string>{"gamma", "weight", "re", "im"};
  CsvWriter w(h);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const cplx c = f.coeffs()[static_cast<Eigen::Index>(k)];
    if (g.dim == 2) w.row(g.nodes[k][0], g.nodes[k][1], g.weights[k], c.real(), c.imag());
    else w.row(g.nodes[k][0], g.weights[k], c.real(), c.imag());
  }
  return w.str();
}

// ---------------------------------------------------------------------------
// balayage

inline json to_json(const BalayageSolution& s, int dim) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < s.coeffs.size(); ++i) {
    re.push_back(s.coeffs[i].real());
    im.push_back(s.coeffs[i].imag());
  }
  return {{"y", point_json(s.y, dim)},     {"re", re},
          {"im", im},                      {"residual", s.fit_residual},
          {"l1_mass", s.l1_mass},          {"iterations", s.iterations},
          {"feasible", s.feasible}};
}

inline BalayageSolution balayage_from_json(const json& j) {
  BalayageSolution s;
  const auto& y = j.at("y");
  s.y = point_from(y, static_cast<int>(y.size()));
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != im.size()) throw FormatError("re and im arrays differ in length");
  s.coeffs.resize(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) s.coeffs[static_cast<Eigen::Index>(i)] = cplx(re[i].get<double>(), im[i].get<double>());
  s.fit_residual = j.at("residual").get<double>();
  s.l1_mass = j.at("l1_mass").get<double>();
  s.iterations = j.value("iterations", 0);
  s.feasible = j.value("feasible", true);
  return s;
}

/// Batch report: y, residual, l1_mass (1D y).
inline std::string balayage_batch_csv(const std::vector<BalayageSolution>& sols) {
  CsvWriter w({"y", "residual", "l1_mass"});
  for (const auto& s : sols) w.row(s.y[0], s.fit_residual, s.l1_mass);
  return w.str();
}

// ---------------------------------------------------------------------------
// frames

inline json to_json(const FrameReport& r) {
  json j{{"A", r.A},
         {"B", r.B},
         {"node_count", r.node_count},
         {"sample_count", r.sample_count},
         {"subspace_dim", r.subspace_dim},
         {"method", r.method},
         {"is_frame", r.A > 0.0}};
  j["condition"] = std::isfinite(r.condition) ? json(r.condition) : json("inf");
  return j;
}

inline std::string history_csv(const std::vector<double>& history) {
  CsvWriter w({"iteration", "residual"});
  for (std::size_t i = 0; i < history.size(); ++i) w.row(i + 1, history[i]);
  return w.str();
}

namespace detail {
inline void put_u64(std::string& buf, std::uint64_t v) {
  char b[8];
  std::memcpy(b, &v, 8);
  buf.append(b, 8);
}
inline void put_f64(std::string& buf, double v) {
  char b[8];
  std::memcpy(b, &v, 8);
  buf.append(b, 8);
}
inline std::uint64_t get_u64(const std::string& s, std::size_t& at) {
  if (at + 8 > s.size()) throw FormatError("truncated binary matrix");
  std::uint64_t v;
  std::memcpy(&v, s.data() + at, 8);
  at += 8;
  return v;
}
inline double get_f64(const std::string& s, std::size_t& at) {
  if (at + 8 > s.size()) throw FormatError("truncated binary matrix");
  double v;
  std::memcpy(&v, s.data() + at, 8);
  at += 8;
  return v;
}
}  // namespace detail

/// Layout: u64 rows, u64 cols, u64 components (1 real, 2 complex), then
/// row-major little-endian float64 (re, im interleaved for complex).
inline std::string dense_binary(const Eigen::MatrixXd& M) {
  std::string b;
  detail::put_u64(b, static_cast<std::uint64_t>(M.rows()));
  detail::put_u64(b, static_cast<std::uint64_t>(M.cols()));
  detail::put_u64(b, 1);
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) detail::put_f64(b, M(i, j));
  return b;
}

inline std::string dense_binary(const CMat& M) {
  std::string b;
  detail::put_u64(b, static_cast<std::uint64_t>(M.rows()));
  detail::put_u64(b, static_cast<std::uint64_t>(M.cols()));
  detail::put_u64(b, 2);
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      detail::put_f64(b, M(i, j).real());
      detail::put_f64(b, M(i, j).imag());
    }
  return b;
}

/// Reads either layout; real matrices come back with zero imaginary part.
inline CMat read_dense_binary(const std::string& bytes) {
  std::size_t at = 0;
  const auto rows = detail::get_u64(bytes, at);
  const auto cols = detail::get_u64(bytes, at);
  const auto comp = detail::get_u64(bytes, at);
  if (comp != 1 && comp != 2) throw FormatError("binary matrix component count must be 1 or 2");
  if (bytes.size() != 24 + rows * cols * comp * 8) throw FormatError("binary matrix size does not match its header");
  CMat M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      const double re = detail::get_f64(bytes, at);
      const double im = comp == 2 ? detail::get_f64(bytes, at) : 0.0;
      M(i, j) = cplx(re, im);
    }
  return M;
}

// ---------------------------------------------------------------------------
// STFT

inline std::string stft_csv(const CMat& V, const TimeFrequencyGrid& tf) {
  CsvWriter w({"x", "omega", "re", "im"});
  for (std::size_t m = 0; m < tf.nx(); ++m)
    for (std::size_t n = 0; n < tf.nw(); ++n) {
      const cplx v = V(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
      w.row(tf.x(m), tf.w(n), v.real(), v.imag());
    }
  return w.str();
}

inline std::string spectrogram_csv(const CMat& V, const TimeFrequencyGrid& tf) {
  CsvWriter w({"x", "omega", "magnitude"});
  for (std::size_t m = 0; m < tf.nx(); ++m)
    for (std::size_t n = 0; n < tf.nw(); ++n)
      w.row(tf.x(m), tf.w(n), std::abs(V(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n))));
  return w.str();
}

// ---------------------------------------------------------------------------
// symbols

/// Writes a_j on `y` and b_j on `gamma` as CSV files next to the JSON and
/// returns the JSON that references them.
inline json save_symbol(const KNSymbol& s, const fs::path& dir, const std::string& stem, const TimeGrid& y,
                        const FrequencyGrid& gamma) {
  json terms = json::array();
  for (std::size_t j = 0; j < s.terms.size(); ++j) {
    const auto& t = s.terms[j];
    const std::string a_file = stem + "_a" + std::to_string(j) + ".csv";
    const std::string b_file = stem + "_b" + std::to_string(j) + ".csv";
    CsvWriter a({"y", "re", "im"}), b({"gamma", "re", "im"});
    for (std::size_t i = 0; i < y.size(); ++i) {
      const cplx v = t.a(y.node(i));
      a.row(y.node(i), v.real(), v.imag());
    }
    for (std::size_t i = 0; i < gamma.size(); ++i) {
      const cplx v = t.b(gamma.node(i));
      b.row(gamma.node(i), v.real(), v.imag());
    }
    a.save(dir / a_file);
    b.save(dir / b_file);
    json tj{{"lambda", t.lambda},        {"eps", t.eps},   {"kind", t.kind},         {"center", t.center},
            {"amplitude", {t.amplitude.real(), t.amplitude.imag()}}, {"a_profile", a_file}, {"b_profile", b_file}};
    tj["beta"] = std::isfinite(t.beta) ? json(t.beta) : json("inf");
    terms.push_back(tj);
  }
  return {{"lambda", to_json(s.lambda)}, {"terms", terms}};
}

namespace detail {
/// Linear interpolation of a uniformly spaced complex profile, 0 outside.
inline std::function<cplx(double)> profile_function(const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 2) throw FormatError("profile needs at least two rows");
  for (const auto& r : rows)
    if (r.size() != 3) throw FormatError("profile rows must have 3 columns");
  const double lo = rows.front()[0];
  const double h = rows[1][0] - rows[0][0];
  if (!(h > 0.0)) throw FormatError("profile abscissae must increase");
  std::vector<cplx> v;
  for (const auto& r : rows) v.emplace_back(r[1], r[2]);
  return [lo, h, v](double x) {
    const double q = (x - lo) / h;
    if (q < 0.0 || q > static_cast<double>(v.size() - 1)) return cplx(0.0);
    const auto i = std::min(static_cast<std::size_t>(q), v.size() - 2);
    const double t = q - static_cast<double>(i);
    return (1.0 - t) * v[i] + t * v[i + 1];
  };
}
}  // namespace detail

/// Rebuilds a symbol. Ingham terms are reconstructed exactly from their
/// parameters; other kinds interpolate the stored profiles.
inline KNSymbol load_symbol(const json& j, const fs::path& dir) {
  try {
    KNSymbol s;
    s.lambda = spectrum_from_json(j.at("lambda"));
    for (const auto& tj : j.at("terms")) {
      const auto amp = tj.value("amplitude", std::vector<double>{1.0, 0.0});
      if (amp.size() != 2) throw FormatError("amplitude must be [re, im]");
      const std::string kind = tj.value("kind", std::string("custom"));
      const double beta = tj.at("beta").is_string() ? std::numeric_limits<double>::infinity() : tj.at("beta").get<double>();
      if (kind == "ingham") {
        s.terms.push_back(ingham_term(tj.at("lambda").get<double>(), tj.at("eps").get<double>(), beta,
                                      tj.value("center", 0.0), cplx(amp[0], amp[1])));
        continue;
      }
      SymbolTerm t;
      t.a = detail::profile_function(read_numeric_csv(dir / tj.at("a_profile").get<std::string>()));
      t.b = detail::profile_function(read_numeric_csv(dir / tj.at("b_profile").get<std::string>()));
      t.lambda = tj.at("lambda").get<double>();
      t.eps = tj.at("eps").get<double>();
      t.beta = beta;
      t.kind = kind;
      t.center = tj.value("center", 0.0);
      t.amplitude = cplx(amp[0], amp[1]);
      s.terms.push_back(std::move(t));
    }
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad symbol: ") + e.what());
  }
}

/// Check report: one (lhs, mid, rhs, holds) triple per trial.
template <class Check>
json chain_report(const std::vector<Check>& trials) {
  json arr = json::array();
  bool all = true;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    arr.push_back({{"trial", i}, {"lhs", trials[i].lhs}, {"mid", trials[i].mid}, {"rhs", trials[i].rhs}, {"holds", trials[i].holds}});
    all = all && trials[i].holds;
  }
  return {{"trials", arr}, {"all_hold", all}};
}

// ---------------------------------------------------------------------------
// provenance

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Hash of the compact canonical dump (object keys are sorted by json).
inline std::string config_hash(const json& config) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(config.dump());
  return os.str();
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

/// Run metadata kept out of the reports so they stay byte-identical.
inline void write_metadata(const fs::path& dir, const std::string& command, const std::string& hash,
                           const std::string& started, double seconds, int threads) {
  write_json(dir / "metadata.json", {{"command", command},
                                     {"config_hash", hash},
                                     {"started", started},
                                     {"finished", utc_timestamp()},
                                     {"seconds", seconds},
                                     {"threads", threads}});
}

}  // namespace nusample::io
