#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nusample/detail/parallel.hpp"
#include "nusample/io.hpp"

namespace nusample::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;
inline constexpr int exit_usage = 2;
inline constexpr int schema_version = 1;

class ConfigError : public Error {
public:
  using Error::Error;
};

struct RunOptions {
  fs::path out = "out";
  int threads = 0;                     // 0: NUSAMPLE_THREADS, else 1
  std::optional<std::uint64_t> seed;   // overrides the config seed
  std::ostream* log = &std::cerr;
};

struct Context {
  json cfg;
  fs::path base;  // directory of the config, for relative file references
  fs::path out;
  std::string hash;
  std::uint64_t seed = 0;
  std::ostream* log = &std::cerr;
};

// ---------------------------------------------------------------------------
// config access

template <class T>
T get(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError("missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("field '" + key + "': " + e.what());
  }
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get<T>(j, key);
}

inline const json& section(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError("missing field '" + key + "'");
  return j.at(key);
}

inline SpectrumSet parse_lambda(const json& j) {
  try {
    return io::spectrum_from_json(section(j, "lambda"));
  } catch (const io::FormatError& e) {
    throw ConfigError(e.what());
  }
}

inline Box parse_box(const json& j, const std::string& key, int dim) {
  try {
    return io::box_from(section(j, key), dim);
  } catch (const io::FormatError& e) {
    throw ConfigError("field '" + key + "': " + e.what());
  }
}

/// E from a generator description. Kinds: uniform, jittered, separated, points,
/// csv. Optional "exclude" box removes points strictly inside it; optional
/// "symmetric" adds -E.
inline SamplingSet parse_sampling(const json& j, int dim, std::uint64_t seed, const fs::path& base) {
  const std::string kind = get<std::string>(j, "kind");
  SamplingSet E;
  if (kind == "uniform") {
    E = uniform_grid(get<double>(j, "delta"), parse_box(j, "window", dim));
  } else if (kind == "jittered") {
    E = generate_jittered_grid(get<double>(j, "delta"), get<double>(j, "jitter"), parse_box(j, "window", dim),
                               get_or<std::uint64_t>(j, "seed", seed));
  } else if (kind == "separated") {
    if (dim != 1) throw ConfigError("separated sets are generated in 1D");
    E = random_separated_set(get<double>(j, "min_gap"), get<double>(j, "max_gap"), parse_box(j, "window", dim),
                             get_or<std::uint64_t>(j, "seed", seed));
  } else if (kind == "points") {
    json s{{"dim", dim}, {"points", section(j, "points")}};
    if (j.contains("window")) s["window"] = j.at("window");
    try {
      E = io::sampling_from_json(s);
    } catch (const io::FormatError& e) {
      throw ConfigError(e.what());
    }
  } else if (kind == "csv") {
    const fs::path file = base / get<std::string>(j, "file");
    if (!fs::exists(file)) throw ConfigError("referenced file does not exist: " + file.string());
    try {
      E = io::read_sampling_csv(file, dim);
    } catch (const io::FormatError& e) {
      throw ConfigError(e.what());
    }
  } else {
    throw ConfigError("unknown sampling kind '" + kind + "'");
  }
  if (j.contains("exclude")) {
    const Box hole = parse_box(j, "exclude", dim);
    std::vector<Point> kept;
    for (const auto& p : E.points()) {
      bool inside = true;
      for (int i = 0; i < dim; ++i) inside = inside && p[i] > hole.lo[i] && p[i] < hole.hi[i];
      if (!inside) kept.push_back(p);
    }
    E = SamplingSet(dim, std::move(kept), E.window());
  }
  if (get_or<bool>(j, "symmetric", false)) E = symmetrize(E);
  return E;
}

inline std::vector<Point> random_points(int count, const Box& window, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> ys;
  for (int i = 0; i < count; ++i) {
    Point p{};
    for (int d = 0; d < window.dim; ++d) p[d] = std::uniform_real_distribution<double>(window.lo[d], window.hi[d])(rng);
    ys.push_back(p);
  }
  return ys;
}

inline json json_or_inf(double v) { return std::isfinite(v) ? json(v) : json("inf"); }

inline void write_report(const Context& c, const std::string& name, json body) {
  body["config_hash"] = c.hash;
  io::write_json(c.out / name, body);
}

// ---------------------------------------------------------------------------
// commands

/// Covering of E + Lambda* and the frame bound for PW_{rho Lambda}, over one
/// or more generated sets (seed + trial).
inline int cmd_covering(const Context& c) {
  const auto& cfg = c.cfg;
  const SpectrumSet lambda = parse_lambda(cfg);
  const int dim = lambda.dim();
  const double rho = get<double>(cfg, "rho");
  const Box region = parse_box(cfg, "region", dim);
  const double resolution = get_or<double>(cfg, "resolution", 0.01);
  const int nodes = get_or<int>(cfg, "nodes", dim == 1 ? 256 : 32);
  const int trials = get_or<int>(cfg, "trials", 1);
  const double max_condition = get_or<double>(cfg, "max_condition", 1e6);
  FrameOptions fo;
  if (cfg.contains("interior")) fo.interior = parse_box(cfg, "interior", dim);
  fo.leak = get_or<double>(cfg, "leak", 1e-10);
  const json& sj = section(cfg, "sampling");
  if (trials < 1) throw ConfigError("trials must be at least 1");

  json out = json::array();
  io::CsvWriter csv({"trial", "covered", "witnesses", "A", "B", "condition", "predicted", "confirmed"});
  bool all_confirmed = true, all_covered = true;
  json first_witnesses = json::array();
  for (int t = 0; t < trials; ++t) {
    const SamplingSet E = parse_sampling(sj, dim, c.seed + static_cast<std::uint64_t>(t), c.base);
    const CoveringExperiment x = covering_frame_experiment(lambda, E, rho, region, resolution, nodes, fo);
    const bool ok = x.confirmed && (!x.predicted || x.report.condition < max_condition);
    all_confirmed = all_confirmed && ok;
    all_covered = all_covered && x.covering.covered;
    if (t == 0)
      for (std::size_t i = 0; i < std::min<std::size_t>(x.covering.witnesses.size(), 50); ++i)
        first_witnesses.push_back(io::point_json(x.covering.witnesses[i], dim));
    out.push_back({{"trial", t},
                   {"sample_count", E.size()},
                   {"covered", x.covering.covered},
                   {"witness_count", x.covering.witnesses.size()},
                   {"predicted", x.predicted},
                   {"confirmed", ok},
                   {"frame_report", io::to_json(x.report)}});
    csv.row(t, x.covering.covered, x.covering.witnesses.size(), x.report.A, x.report.B, x.report.condition,
            x.predicted, ok);
  }
  write_report(c, "covering.json", {{"command", "covering"},
                                    {"covered", all_covered},
                                    {"rho_ok", rho < 0.25},
                                    {"witnesses", first_witnesses},
                                    {"trials", out},
                                    {"confirmed", all_confirmed}});
  csv.save(c.out / "covering.csv");
  return all_confirmed ? exit_ok : exit_failed;
}

/// FrameReport plus a Rayleigh-quotient sample.
inline int cmd_frame_bounds(const Context& c) {
  const auto& cfg = c.cfg;
  const SpectrumSet lambda = parse_lambda(cfg);
  const int dim = lambda.dim();
  const int nodes = get_or<int>(cfg, "nodes", dim == 1 ? 512 : 64);
  const SamplingSet E = parse_sampling(section(cfg, "sampling"), dim, c.seed, c.base);
  FrameOptions fo;
  if (cfg.contains("interior")) fo.interior = parse_box(cfg, "interior", dim);
  fo.leak = get_or<double>(cfg, "leak", 1e-10);
  const SpectralGrid g = build_grid(lambda, nodes);
  const FrameReport r = frame_bounds(E, g, fo);
  const int trials = get_or<int>(cfg, "rayleigh_trials", 200);
  const auto q = rayleigh_quotients(E, g, trials, c.seed, fo);
  io::CsvWriter csv({"trial", "rayleigh"});
  for (std::size_t i = 0; i < q.size(); ++i) csv.row(i, q[i]);
  csv.save(c.out / "rayleigh.csv");
  if (get_or<bool>(cfg, "dump_matrix", false)) io::write_text(c.out / "frame_operator.bin", io::dense_binary(frame_operator_matrix(E, g)));
  const bool need_frame = get_or<bool>(cfg, "require_frame", false);
  write_report(c, "frame_report.json",
               {{"command", "frame-bounds"}, {"frame_report", io::to_json(r)}, {"is_frame", r.A > 0.0}});
  if (r.A == 0.0) *c.log << "flag: A = 0, E is not a frame at this scale\n";
  return need_frame && r.A == 0.0 ? exit_failed : exit_ok;
}

/// Samples a test signal at E and recovers it by CG.
inline int cmd_reconstruct(const Context& c) {
  const auto& cfg = c.cfg;
  const SpectrumSet lambda = parse_lambda(cfg);
  const int dim = lambda.dim();
  const int nodes = get_or<int>(cfg, "nodes", dim == 1 ? 64 : 16);
  const GridPtr grid = make_grid(build_grid(lambda, nodes));
  const SamplingSet E = parse_sampling(section(cfg, "sampling"), dim, c.seed, c.base);
  const double tol = get_or<double>(cfg, "tol", 1e-10);
  const int max_iter = get_or<int>(cfg, "max_iter", 200);
  const double max_error = get_or<double>(cfg, "max_error", 1e-5);
  const std::string signal = cfg.contains("signal") ? get_or<std::string>(section(cfg, "signal"), "kind", "random") : "random";
  if (signal != "zero" && signal != "random") throw ConfigError("unknown signal kind '" + signal + "'");
  const BandlimitedSignal f = signal == "zero" ? BandlimitedSignal::zero(grid) : random_pw_signal(grid, c.seed);
  const SampleVector v = analysis(f, E);
  const ReconstructionResult r = reconstruct(v, grid, tol, max_iter);
  const double err = relative_error(r.signal, f);
  io::write_text(c.out / "history.csv", io::history_csv(r.history));
  io::write_text(c.out / "signal.csv", io::signal_csv(r.signal));
  write_report(c, "reconstruct.json", {{"command", "reconstruct"},
                                       {"sample_count", E.size()},
                                       {"error", err},
                                       {"iterations", r.iterations},
                                       {"residual", r.residual},
                                       {"converged", r.converged},
                                       {"method", r.method}});
  if (!r.converged) {
    *c.log << "unconverged: residual " << r.residual << " after " << r.iterations << " iterations\n";
    return exit_failed;
  }
  return err <= max_error ? exit_ok : exit_failed;
}

/// Fundamental identity residuals for random trig polynomials, the measured
/// balayage constant and a batch report of the solutions.
inline int cmd_identity(const Context& c) {
  const auto& cfg = c.cfg;
  const SpectrumSet lambda = parse_lambda(cfg);
  const int dim = lambda.dim();
  const SamplingSet E = parse_sampling(section(cfg, "sampling"), dim, c.seed, c.base);
  const double eps = get_or<double>(cfg, "eps", default_epsilon(lambda));
  const int nodes = get_or<int>(cfg, "nodes", dim == 1 ? 256 : 32);
  BalayageOptions bo;
  if (cfg.contains("balayage")) {
    const json& b = cfg.at("balayage");
    bo.tolerance = get_or<double>(b, "tolerance", bo.tolerance);
    bo.reg = get_or<double>(b, "reg", bo.reg);
    bo.max_iter = get_or<int>(b, "max_iter", bo.max_iter);
  }
  const double tolerance = get_or<double>(cfg, "tolerance", 1e-2);
  const int trials = get_or<int>(cfg, "trials", 5);
  const int terms = get_or<int>(cfg, "terms", 5);
  const int y_count = get_or<int>(cfg, "y_count", 25);
  const Box y_window = parse_box(cfg, "y_window", dim);

  const BalayageProblem P(E, make_grid(build_enlarged_grid(lambda, eps, nodes)), bo);
  const InghamWindow h(eps, dim);
  const auto ys = random_points(y_count, y_window, c.seed);
  const BalayageConstant K = balayage_constant(P, ys);

  json per = json::array();
  io::CsvWriter csv({"trial", "residual"});
  bool ok = true;
  for (int t = 0; t < trials; ++t) {
    const TrigPolynomial f = random_trig_polynomial(lambda, terms, c.seed + 1000 + static_cast<std::uint64_t>(t));
    const double r = fundamental_identity_residual(f, P, h, ys);
    ok = ok && r <= tolerance;
    per.push_back({{"trial", t}, {"residual", r}});
    csv.row(t, r);
  }
  // At points of E the identity holds exactly.
  const std::vector<Point> members(E.points().begin(), E.points().begin() + std::min<std::size_t>(E.size(), 5));
  double member_residual = 0.0;
  for (int t = 0; t < trials; ++t) {
    const TrigPolynomial f = random_trig_polynomial(lambda, terms, c.seed + 1000 + static_cast<std::uint64_t>(t));
    member_residual = std::max(member_residual, fundamental_identity_residual(f, P, h, members));
  }
  ok = ok && member_residual <= 1e-12;

  std::vector<BalayageSolution> sols;
  json sj = json::array();
  for (const auto& y : ys) {
    sols.push_back(P.solve(y));
    sj.push_back(io::to_json(sols.back(), dim));
  }
  io::write_text(c.out / "balayage.csv", io::balayage_batch_csv(sols));
  io::write_json(c.out / "balayage_solutions.json", {{"config_hash", c.hash}, {"solutions", sj}});
  csv.save(c.out / "identity.csv");
  write_report(c, "identity.json", {{"command", "identity"},
                                    {"K", K.K},
                                    {"argmax", io::point_json(K.argmax, dim)},
                                    {"eps", eps},
                                    {"h_norm", h.norm_l2()},
                                    {"trials", per},
                                    {"member_residual", member_residual},
                                    {"tolerance", tolerance},
                                    {"all_hold", ok}});
  return ok ? exit_ok : exit_failed;
}

/// STFT identities on Gaussian packets at the configured grid and its
/// refinement, plus the explicit PW frame bound.
inline int cmd_stft(const Context& c) {
  const auto& cfg = c.cfg;
  const json sg = get_or<json>(cfg, "signal_grid", json::object());
  const TimeGrid grid = TimeGrid::covering(get_or<double>(sg, "step", 0.125), get_or<double>(sg, "extent", 8.0));
  const json tj = get_or<json>(cfg, "tf_grid", json::object());
  const TimeFrequencyGrid tf(get_or<double>(tj, "x_step", 0.5), get_or<int>(tj, "x_half", 8),
                             get_or<double>(tj, "w_step", 0.5), get_or<int>(tj, "w_half", 8));
  const double tolerance = get_or<double>(cfg, "tolerance", 1e-3);
  const double cf_tolerance = get_or<double>(cfg, "closed_form_tolerance", 1e-2);
  const double min_gain = get_or<double>(cfg, "min_improvement", 2.0);
  json fixtures = get_or<json>(cfg, "fixtures", json::array({json{{"shift", 0.0}, {"modulation", 0.0}}}));

  std::vector<double> slice;
  for (int i = -4; i <= 4; ++i) slice.push_back(i * grid.step);
  auto fixture = [&](const TimeGrid& G, const json& fj) {
    const double s = get_or<double>(fj, "shift", 0.0);
    const double m = get_or<double>(fj, "modulation", 0.0);
    return TimeSignal::sample(G, [s, m](double t) { return g0(t - s) * cis(m * t); });
  };
  auto measure = [&](const TimeGrid& G, const TimeFrequencyGrid& T, const json& fj) {
    const WindowFunction g = gaussian_window(G);
    const TimeSignal f = fixture(G, fj);
    const auto cf = stft_fourier_closed_form(f, g, T, slice, slice);
    return std::array<double, 4>{isometry_check(f, g, T), tf_identity_check(f, g, T), cf.deviation, cf.flipped_deviation};
  };
  auto improved = [&](double coarse, double fine) { return fine == 0.0 ? true : coarse / fine >= min_gain; };

  bool ok = true;
  json rows = json::array();
  io::CsvWriter csv({"fixture", "level", "isometry", "tf_identity", "closed_form", "flipped_closed_form"});
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const auto a = measure(grid, tf, fixtures[i]);
    const auto b = measure(grid.refined(), tf.refined(), fixtures[i]);
    const bool pass = a[0] <= tolerance && a[1] <= tolerance && a[2] <= cf_tolerance && improved(a[0], b[0]) &&
                      improved(a[1], b[1]) && improved(a[2], b[2]);
    ok = ok && pass;
    csv.row(i, "coarse", a[0], a[1], a[2], a[3]);
    csv.row(i, "refined", b[0], b[1], b[2], b[3]);
    rows.push_back({{"fixture", i},
                    {"coarse", {{"isometry", a[0]}, {"tf_identity", a[1]}, {"closed_form", a[2]}, {"flipped_closed_form", a[3]}}},
                    {"refined", {{"isometry", b[0]}, {"tf_identity", b[1]}, {"closed_form", b[2]}, {"flipped_closed_form", b[3]}}},
                    {"pass", pass}});
  }
  csv.save(c.out / "stft_checks.csv");

  {
    const WindowFunction g = gaussian_window(grid);
    const CMat V = stft(fixture(grid, fixtures.empty() ? json::object() : fixtures[0]), g, tf);
    io::write_text(c.out / "stft.csv", io::stft_csv(V, tf));
    io::write_text(c.out / "stft.bin", io::dense_binary(V));
    io::write_text(c.out / "spectrogram.csv", io::spectrogram_csv(V, tf));
  }

  json frame = nullptr;
  if (cfg.contains("frame_check")) {
    const json& fc = cfg.at("frame_check");
    const SpectrumSet lambda = parse_lambda(fc);
    const GridPtr pg = make_grid(build_grid(lambda, get_or<int>(fc, "nodes", 64)));
    const SamplingSet E = parse_sampling(section(fc, "sampling"), 1, c.seed, c.base);
    const Box centers = fc.contains("centers") ? parse_box(fc, "centers", 1) : Box::interval(-5, 5);
    const int trials = get_or<int>(fc, "trials", 10);
    io::CsvWriter fcsv({"trial", "energy", "norm_sq", "bound", "holds"});
    json tr = json::array();
    StftFrameCheck last;
    for (int t = 0; t < trials; ++t) {
      const auto f = random_localized_pw_signal(pg, lambda, centers, get_or<int>(fc, "atoms", 4), c.seed + static_cast<std::uint64_t>(t));
      last = pw_stft_frame_check(f, E);
      ok = ok && last.holds;
      fcsv.row(t, last.energy, last.norm_sq, last.B_formula * last.norm_sq, last.holds);
      tr.push_back({{"trial", t}, {"energy", last.energy}, {"norm_sq", last.norm_sq}, {"holds", last.holds}});
    }
    fcsv.save(c.out / "stft_frame.csv");
    frame = {{"C", last.C}, {"feichtinger", last.feichtinger}, {"B_formula", last.B_formula}, {"trials", tr}};
  }
  write_report(c, "stft.json", {{"command", "stft"}, {"fixtures", rows}, {"frame_check", frame}, {"all_hold", ok}});
  return ok ? exit_ok : exit_failed;
}

/// Gabor frame bounds and reconstruction for each configured lattice.
inline int cmd_gabor(const Context& c) {
  const auto& cfg = c.cfg;
  const json sg = get_or<json>(cfg, "grid", json::object());
  const TimeGrid grid(get_or<double>(sg, "step", 0.125), get_or<int>(sg, "half", 64));
  const WindowFunction g = gaussian_window(grid);
  const double tolerance = get_or<double>(cfg, "tolerance", 1e-3);
  const double threshold = get_or<double>(cfg, "condition_threshold", 1e6);
  const json sj = get_or<json>(cfg, "signal", json::object());
  const TimeSignal f = random_packet_signal(grid, get_or<int>(sj, "atoms", 3), get_or<double>(sj, "spread", 4.0), c.seed);
  const json& lattices = section(cfg, "lattices");
  if (!lattices.is_array() || lattices.empty()) throw ConfigError("lattices must be a nonempty array");

  bool ok = true;
  json rows = json::array();
  io::CsvWriter csv({"lattice", "a", "b", "jitter", "atoms", "A", "B", "condition", "error", "ok"});
  for (std::size_t i = 0; i < lattices.size(); ++i) {
    const json& l = lattices[i];
    const double a = get<double>(l, "a"), b = get<double>(l, "b");
    const double jitter = get_or<double>(l, "jitter", 0.0);
    const std::string expect = get_or<std::string>(l, "expect", "frame");
    if (expect != "frame" && expect != "not-frame") throw ConfigError("expect must be 'frame' or 'not-frame'");
    PhaseSpaceSamples P = gabor_lattice(a, b, get_or<double>(l, "s_max", 8.0), get_or<double>(l, "sigma_max", 4.0));
    if (jitter > 0.0) P = jittered(P, jitter, get_or<std::uint64_t>(l, "seed", c.seed));
    const GaborBounds bounds = gabor_frame_bounds(grid, g, P);
    double err = std::numeric_limits<double>::quiet_NaN();
    bool pass;
    if (expect == "frame") {
      const GaborReconstruction r = gabor_reconstruct(f, g, P);
      err = r.error;
      pass = r.error <= tolerance && bounds.condition < threshold;
    } else {
      pass = !(bounds.condition <= threshold);
    }
    ok = ok && pass;
    csv.row(i, a, b, jitter, P.points.size(), bounds.A, bounds.B, bounds.condition, err, pass);
    json row{{"lattice", i}, {"a", a}, {"b", b}, {"jitter", jitter}, {"atoms", P.points.size()}, {"expect", expect},
             {"A", bounds.A}, {"B", bounds.B}, {"condition", json_or_inf(bounds.condition)}, {"pass", pass}};
    row["error"] = std::isnan(err) ? json(nullptr) : json(err);
    rows.push_back(row);
  }
  csv.save(c.out / "gabor.csv");
  write_report(c, "gabor.json", {{"command", "gabor"}, {"lattices", rows}, {"all_hold", ok}});
  return ok ? exit_ok : exit_failed;
}

/// Symbol-class validation and the sampling chain for a pseudo-differential
/// operator with constants from the balayage and Plancherel-Polya modules.
inline int cmd_psido(const Context& c) {
  const auto& cfg = c.cfg;
  const SpectrumSet lambda = parse_lambda(cfg);
  if (lambda.dim() != 1) throw ConfigError("psido runs in d = 1");
  KNSymbol s;
  s.lambda = lambda;
  const json& terms = section(cfg, "terms");
  if (!terms.is_array() || terms.empty()) throw ConfigError("terms must be a nonempty array");
  for (const auto& t : terms) {
    const auto amp = get_or<std::vector<double>>(t, "amplitude", {1.0, 0.0});
    if (amp.size() != 2) throw ConfigError("amplitude must be [re, im]");
    s.terms.push_back(ingham_term(get<double>(t, "lambda"), get<double>(t, "eps"), get<double>(t, "beta"),
                                  get_or<double>(t, "center", 0.0), cplx(amp[0], amp[1])));
  }
  SymbolValidationOptions vo;
  vo.leakage_tol = get_or<double>(cfg, "tolerance", vo.leakage_tol);
  const SymbolClassReport rep = validate_symbol_class(s, vo);

  const SamplingSet E = parse_sampling(section(cfg, "sampling"), 1, c.seed, c.base);
  const double eps = get_or<double>(cfg, "eps", default_epsilon(lambda));
  const BalayageProblem P(E, make_grid(build_enlarged_grid(lambda, eps, get_or<int>(cfg, "nodes", 256))));
  const InghamWindow h(eps, 1);
  const auto ys = random_points(get_or<int>(cfg, "y_count", 25), parse_box(cfg, "y_window", 1), c.seed);
  const BalayageConstant K = balayage_constant(P, ys);
  const double B = plancherel_polya_bound(E, build_grid(lambda, get_or<int>(cfg, "pp_nodes", 128)));
  const PsidoConstants pc = psido_constants(K.K, h.norm_l2(), B);

  const json sj = get_or<json>(cfg, "signal", json::object());
  const TimeGrid tg(get_or<double>(sj, "step", 0.125), get_or<int>(sj, "half", 320));
  const PsidoChecker checker(s, E, pc);
  std::vector<PsidoCheck> checks;
  io::CsvWriter csv({"trial", "lhs", "mid", "rhs", "holds"});
  for (int t = 0; t < get_or<int>(cfg, "trials", 10); ++t) {
    const TimeSignal f = random_packet_signal(tg, get_or<int>(sj, "atoms", 3), get_or<double>(sj, "spread", 5.0),
                                              c.seed + static_cast<std::uint64_t>(t));
    checks.push_back(checker.check(f));
    csv.row(t, checks.back().lhs, checks.back().mid, checks.back().rhs, checks.back().holds);
  }
  csv.save(c.out / "psido.csv");
  json sym = io::save_symbol(s, c.out, "symbol", TimeGrid(0.25, 80), FrequencyGrid(1e-3, 200));
  io::write_json(c.out / "symbol.json", sym);

  json chain = io::chain_report(checks);
  json violations = rep.violations;
  const bool ok = rep.ok && chain.at("all_hold").get<bool>();
  write_report(c, "psido.json", {{"command", "psido"},
                                 {"symbol_ok", rep.ok},
                                 {"violations", violations},
                                 {"constants", {{"K", pc.K}, {"h_norm", pc.h_norm}, {"A", pc.A}, {"B", pc.B}}},
                                 {"s_norm", checker.s_norm()},
                                 {"chain", chain},
                                 {"all_hold", ok}});
  return ok ? exit_ok : exit_failed;
}

// ---------------------------------------------------------------------------
// dispatch

using Command = std::function<int(const Context&)>;

inline const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"covering", cmd_covering}, {"frame-bounds", cmd_frame_bounds}, {"reconstruct", cmd_reconstruct},
      {"identity", cmd_identity}, {"stft", cmd_stft},                 {"gabor", cmd_gabor},
      {"psido", cmd_psido}};
  return table;
}

inline std::string usage() {
  std::string s = "usage: nusample <command> --config <file.json> --out <dir> [--threads N] [--seed S]\ncommands:";
  for (const auto& [name, fn] : commands()) s += " " + name;
  return s + "\n";
}

/// Loads the config, runs the command and maps failures onto the exit-code
/// contract (0 confirmed, 1 numerical failure, 2 usage or config error).
inline int run(const std::string& command, const fs::path& config, const RunOptions& opts) {
  std::ostream& log = *opts.log;
  const auto it = commands().find(command);
  if (it == commands().end()) {
    log << "unknown command '" << command << "'\n" << usage();
    return exit_usage;
  }
  const std::string started = io::utc_timestamp();
  const auto t0 = std::chrono::steady_clock::now();
  Context c;
  c.log = opts.log;
  try {
    if (!fs::exists(config)) throw ConfigError("config file not found: " + config.string());
    c.cfg = io::read_json(config);
    if (!c.cfg.is_object()) throw ConfigError("config must be a JSON object");
    if (get_or<int>(c.cfg, "schema", 0) != schema_version) throw ConfigError("config needs \"schema\": 1");
    if (c.cfg.contains("command") && get<std::string>(c.cfg, "command") != command)
      throw ConfigError("config is for command '" + get<std::string>(c.cfg, "command") + "'");
    c.base = config.has_parent_path() ? config.parent_path() : fs::path(".");
    c.seed = opts.seed ? *opts.seed : get_or<std::uint64_t>(c.cfg, "seed", 0);
    json hashed = c.cfg;
    hashed["seed"] = c.seed;
    c.hash = io::config_hash(hashed);
    c.out = opts.out;
    fs::create_directories(c.out);
  } catch (const io::FormatError& e) {
    log << "config error: " << e.what() << "\n";
    return exit_usage;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return exit_usage;
  }
  set_threads(opts.threads);
  int code = exit_failed;
  try {
    code = it->second(c);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return exit_usage;
  } catch (const io::FormatError& e) {
    log << "config error: " << e.what() << "\n";
    return exit_usage;
  } catch (const json::exception& e) {
    log << "config error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    code = exit_failed;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  io::write_metadata(c.out, command, c.hash, started, secs, thread_count());
  log << command << ": " << (code == exit_ok ? "confirmed" : "FAILED") << " (" << secs << " s)\n";
  return code;
}

}  // namespace nusample::cli
