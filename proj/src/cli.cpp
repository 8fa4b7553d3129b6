#include "syslab/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "CLI11.hpp"
#include "json.hpp"

#include "syslab/cones.hpp"
#include "syslab/curves.hpp"
#include "syslab/errors.hpp"
#include "syslab/hyp.hpp"
#include "syslab/lengths.hpp"
#include "syslab/optimize.hpp"
#include "syslab/surface.hpp"
#include "syslab/testbed.hpp"
#include "syslab/types.hpp"

namespace syslab {
namespace {

using ordered_json = nlohmann::ordered_json;

// Shortest round-trip decimal form, the same convention the JSON emitter
// uses, so the config digest and the report agree on every number.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fnv1a_hex(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view v, std::string_view what) {
  const std::string s(v);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + std::string(what));
  }
  if (used != s.size() || !std::isfinite(out))
    throw ConfigError("bad numeric value for " + std::string(what));
  return out;
}

void apply_config_entry(Config& cfg, std::string_view key,
                        std::string_view val) {
  if (key == "systole_rel") cfg.systole_rel = parse_number(val, key);
  else if (key == "lp_margin") cfg.lp_margin = parse_number(val, key);
  else if (key == "grad_tol") cfg.grad_tol = parse_number(val, key);
  else if (key == "fd_step") cfg.fd_step = parse_number(val, key);
  else if (key == "box_length_lo") cfg.box_length_lo = parse_number(val, key);
  else if (key == "box_length_hi") cfg.box_length_hi = parse_number(val, key);
  else if (key == "box_twist_lo") cfg.box_twist_lo = parse_number(val, key);
  else if (key == "box_twist_hi") cfg.box_twist_hi = parse_number(val, key);
  else if (key == "bers_bound") cfg.bers_bound = parse_number(val, key);
  else if (key == "seed") {
    std::uint64_t seed = 0;
    const auto res = std::from_chars(val.data(), val.data() + val.size(), seed);
    if (res.ec != std::errc{} || res.ptr != val.data() + val.size())
      throw ConfigError("bad seed value");
    cfg.seed = seed;
  } else if (key == "catalog") {
    cfg.catalog = std::string(val);
  } else {
    throw ConfigError("unknown config key: " + std::string(key));
  }
}

void load_config_file(Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    const std::string_view key = trim(sv.substr(0, eq));
    const std::string_view val = trim(sv.substr(eq + 1));
    if (key.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    apply_config_entry(cfg, key, val);
  }
}

std::vector<double> parse_csv(const std::string& s, std::string_view what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_number(trim(tok), what));
  if (out.empty())
    throw ConfigError("empty value for " + std::string(what));
  return out;
}

FNPoint parse_point(const std::string& s) {
  const auto v = parse_csv(s, "--point");
  if (v.size() != 6)
    throw ConfigError("--point needs six values: l1,l2,l3,t1,t2,t3");
  if (!(v[0] > 0.0 && v[1] > 0.0 && v[2] > 0.0))
    throw ConfigError("cuff lengths must be positive");
  FNPoint x;
  x.cuff_lengths << v[0], v[1], v[2];
  x.twists << v[3], v[4], v[5];
  return x;
}

std::vector<int> parse_curves(const std::string& s, const CurveSystem& sys) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const std::string_view sv = trim(tok);
    if (sv.empty()) throw ConfigError("empty entry in --curves");
    const bool digits = std::all_of(sv.begin(), sv.end(), [](char c) {
      return std::isdigit(static_cast<unsigned char>(c));
    });
    int idx = 0;
    if (digits) {
      idx = static_cast<int>(parse_number(sv, "--curves"));
      if (idx < 0 || idx >= static_cast<int>(sys.curves.size()))
        throw ConfigError("curve index out of range: " + std::string(sv));
    } else {
      idx = sys.index_of(sv);
    }
    out.push_back(idx);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw ConfigError("--curves selects no curves");
  return out;
}

std::vector<int> all_curves(const CurveSystem& sys) {
  std::vector<int> out(sys.curves.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>(i);
  return out;
}

ordered_json vec_json(const VecX& v) {
  ordered_json arr = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

ordered_json point_json(const FNPoint& x) {
  ordered_json j;
  j["cuff_lengths"] = vec_json(x.cuff_lengths);
  j["twists"] = vec_json(x.twists);
  return j;
}

ordered_json ids_json(const CurveSystem& sys, const std::vector<int>& idx) {
  ordered_json arr = ordered_json::array();
  for (const int i : idx) arr.push_back(sys.curves[i].id);
  return arr;
}

ordered_json families_json(const CurveSystem& sys,
                           std::vector<std::vector<int>> families) {
  for (auto& f : families) std::sort(f.begin(), f.end());
  std::sort(families.begin(), families.end());
  ordered_json arr = ordered_json::array();
  for (const auto& f : families) arr.push_back(ids_json(sys, f));
  return arr;
}

const char* kind_name(ConeCertificate::Kind k) {
  switch (k) {
    case ConeCertificate::Kind::FullCone: return "full_cone";
    case ConeCertificate::Kind::MixedCone: return "mixed_cone";
    case ConeCertificate::Kind::Eutactic: return "eutactic";
    case ConeCertificate::Kind::VEutactic: return "v_eutactic";
    case ConeCertificate::Kind::Balanced: return "balanced";
  }
  return "unknown";
}

// One subcommand's contribution to the report: a results object plus the
// certificates it computed, each re-verified against the rows it was issued
// for before emission.
struct Report {
  ordered_json results = ordered_json::object();
  ordered_json certificates = ordered_json::array();
  bool indeterminate = false;
  int exit_override = -1;

  void add_certificate(const char* label, const ConeCertificate& c,
                       const MatX& rows) {
    ordered_json j;
    j["label"] = label;
    j["kind"] = kind_name(c.kind);
    j["verdict"] = to_string(c.verdict);
    j["margin"] = c.margin;
    j["tol"] = c.tol;
    if (c.decrease_row >= 0) j["decrease_row"] = c.decrease_row;
    if (c.lambda.size() > 0) j["lambda"] = vec_json(c.lambda);
    if (c.direction.size() > 0) j["direction"] = vec_json(c.direction);
    j["verified"] = c.verify(rows);
    certificates.push_back(std::move(j));
    if (c.verdict == Verdict::Indeterminate) indeterminate = true;
  }
};

// Flag values gathered by the parser; presence decides whether a flag
// overrides the settings file.
struct Flags {
  std::string config_path;
  std::string point;
  std::string curves;
  std::string weights;
  std::string offsets;
  std::uint64_t seed = 0;
  double tol_systole = 0.0;
  int samples = 200;
  std::vector<double> alternate;

  bool has_point = false;
  bool has_curves = false;
  bool has_weights = false;
  bool has_offsets = false;
};

FNPoint require_point(const Flags& f, std::string_view sub) {
  if (!f.has_point)
    throw ConfigError(std::string(sub) + " needs --point l1,l2,l3,t1,t2,t3");
  return parse_point(f.point);
}

std::vector<int> curves_or_all(const Flags& f, const CurveSystem& sys) {
  return f.has_curves ? parse_curves(f.curves, sys) : all_curves(sys);
}

void check_box(const Config& cfg, const FNPoint& x) {
  for (int i = 0; i < 3; ++i) {
    if (x.cuff_lengths[i] < cfg.box_length_lo ||
        x.cuff_lengths[i] > cfg.box_length_hi ||
        x.twists[i] < cfg.box_twist_lo || x.twists[i] > cfg.box_twist_hi)
      throw ConfigError("start point lies outside the search box");
  }
}

void warn_bers(const Config& cfg, const CurveSystem& sys, const FNPoint& x,
               std::ostream& err) {
  const double v = systole(sys, x, cfg.systole_rel).value;
  if (v > cfg.bers_bound)
    err << "syslab: warning: systole " << v << " exceeds bers_bound "
        << cfg.bers_bound << "; the catalog is likely missing a curve\n";
}

// Tangent space of the equal-length locus at x: the kernel of the
// difference rows g_i - g_0 of the finite-difference gradients.
MatX locus_tangent(const MatX& rows) {
  MatX diff(rows.rows() - 1, rows.cols());
  for (int i = 1; i < rows.rows(); ++i)
    diff.row(i - 1) = rows.row(i) - rows.row(0);
  Eigen::FullPivLU<MatX> lu(diff);
  return lu.kernel();
}

ClassifyOptions classify_options(const Config& cfg) {
  ClassifyOptions opts;
  opts.systole_rel = cfg.systole_rel;
  opts.resid_tol = cfg.lp_margin;
  opts.fd_step = cfg.fd_step;
  return opts;
}

// Tolerances for points located by this run's own descent rather than given
// exactly: the localization error scales with grad_tol, and certificates
// want the step near the central-difference sweet spot.
ClassifyOptions located_options(const Config& cfg) {
  ClassifyOptions opts = classify_options(cfg);
  opts.systole_rel = std::min(1e-3, std::max(cfg.systole_rel, 100.0 * cfg.grad_tol));
  opts.fd_step = std::min(1e-3, std::max(cfg.fd_step, 1e-4));
  return opts;
}

void run_lengths(const Config& cfg, const CurveSystem& sys, const Flags& f,
                 Report& rep, std::ostream& err) {
  const FNPoint x = require_point(f, "lengths");
  const auto curves = curves_or_all(f, sys);
  ordered_json arr = ordered_json::array();
  for (const int i : curves) {
    ordered_json row;
    row["curve"] = sys.curves[i].id;
    row["length"] = length(sys.curves[i], x);
    arr.push_back(std::move(row));
  }
  rep.results["point"] = point_json(x);
  rep.results["lengths"] = std::move(arr);
  err << "syslab: lengths of " << curves.size() << " curves\n";
  (void)cfg;
}

void run_systole(const Config& cfg, const CurveSystem& sys, const Flags& f,
                 Report& rep, std::ostream& err) {
  const FNPoint x = require_point(f, "systole");
  const SystoleResult r = systole(sys, x, cfg.systole_rel);
  rep.results["point"] = point_json(x);
  rep.results["value"] = r.value;
  rep.results["systoles"] = ids_json(sys, r.systoles);
  rep.results["tol_rel"] = r.tol_rel;
  err << "syslab: systole " << r.value << " attained by " << r.systoles.size()
      << " curves\n";
}

void run_gradients(const Config& cfg, const CurveSystem& sys, const Flags& f,
                   Report& rep, std::ostream& err) {
  const FNPoint x = require_point(f, "gradients");
  const auto curves = curves_or_all(f, sys);
  const GradientSet gs = gradients(sys, curves, x, cfg.fd_step);
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < curves.size(); ++i) {
    ordered_json row;
    row["curve"] = sys.curves[curves[i]].id;
    row["gradient"] = vec_json(gs.rows.row(static_cast<int>(i)).transpose());
    arr.push_back(std::move(row));
  }
  rep.results["point"] = point_json(x);
  rep.results["step"] = gs.step;
  rep.results["rows"] = std::move(arr);
  err << "syslab: " << curves.size() << " gradient rows at step " << gs.step
      << "\n";
}

void run_eutactic(const Config& cfg, const CurveSystem& sys, const Flags& f,
                  Report& rep, std::ostream& err) {
  const FNPoint x = require_point(f, "eutactic");
  const auto curves = curves_or_all(f, sys);
  const GradientSet gs = gradients(sys, curves, x, cfg.fd_step);
  const ConeCertificate cert = is_eutactic(gs.rows, cfg.lp_margin);
  rep.results["point"] = point_json(x);
  rep.results["curves"] = ids_json(sys, curves);
  rep.results["verdict"] = to_string(cert.verdict);
  rep.results["margin"] = cert.margin;
  rep.add_certificate("eutactic", cert, gs.rows);
  err << "syslab: eutactic verdict " << to_string(cert.verdict) << "\n";
}

void run_balanced(const Config& cfg, const CurveSystem& sys, const Flags& f,
                  Report& rep, std::ostream& err) {
  const FNPoint x = require_point(f, "balanced");
  const auto curves = curves_or_all(f, sys);
  if (curves.size() < 2)
    throw ConfigError("balanced needs at least two curves");
  const GradientSet gs = gradients(sys, curves, x, cfg.fd_step);
  const MatX tangent = locus_tangent(gs.rows);
  const ConeCertificate cert = is_balanced(gs.rows, tangent, cfg.lp_margin);
  rep.results["point"] = point_json(x);
  rep.results["curves"] = ids_json(sys, curves);
  rep.results["tangent_dim"] = static_cast<int>(tangent.cols());
  rep.results["verdict"] = to_string(cert.verdict);
  rep.results["margin"] = cert.margin;
  rep.add_certificate("balanced", cert, gs.rows);
  err << "syslab: balanced verdict " << to_string(cert.verdict) << "\n";
}

void run_min(const Config& cfg, const CurveSystem& sys, const Flags& f,
             Report& rep, std::ostream& err) {
  const auto curves = curves_or_all(f, sys);
  WeightVector A;
  A.weights = VecX::Ones(static_cast<int>(curves.size()));
  if (f.has_weights) {
    const auto w = parse_csv(f.weights, "--weights");
    if (w.size() != curves.size())
      throw ConfigError("--weights must match the curve subset size");
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] <= 0.0) throw ConfigError("weights must be positive");
      A.weights[static_cast<int>(i)] = w[i];
    }
  }
  const MinimizeResult r =
      minimize_multistart(A, sys, curves, cfg.seed, 8, cfg.grad_tol);
  rep.results["curves"] = ids_json(sys, curves);
  rep.results["weights"] = vec_json(A.weights);
  rep.results["value"] = r.value;
  rep.results["point"] = point_json(r.point);
  rep.results["gradient_norm"] = r.gradient_norm;
  rep.results["iterations"] = r.iterations;
  rep.results["converged"] = r.converged;
  warn_bers(cfg, sys, r.point, err);
  err << "syslab: minimum " << r.value << " after " << r.iterations
      << " iterations\n";
}

void run_restricted_min(const Config& cfg, const CurveSystem& sys,
                        const Flags& f, Report& rep, std::ostream& err) {
  if (!f.has_curves)
    throw ConfigError("restricted-min needs --curves with at least two curves");
  const auto curves = parse_curves(f.curves, sys);
  if (curves.size() < 2)
    throw ConfigError("restricted-min needs at least two curves");
  LocusSpec spec = LocusSpec::zero_offsets(curves);
  if (f.has_offsets) {
    const auto d = parse_csv(f.offsets, "--offsets");
    if (d.size() != curves.size())
      throw ConfigError("--offsets must match the curve subset size");
    for (std::size_t i = 0; i < d.size(); ++i)
      spec.offsets[static_cast<int>(i)] = d[i];
  }
  FNPoint x0;
  if (f.has_point) {
    x0 = parse_point(f.point);
  } else {
    x0.cuff_lengths << 2.0, 2.0, 2.0;
    x0.twists << 0.0, 0.0, 0.0;
  }
  check_box(cfg, x0);
  const MinimizeResult r = restricted_minimize(spec, sys, x0, cfg.grad_tol);
  rep.results["curves"] = ids_json(sys, curves);
  rep.results["offsets"] = vec_json(spec.offsets);
  rep.results["start"] = point_json(x0);
  rep.results["point"] = point_json(r.point);
  rep.results["common_length"] = r.value;
  rep.results["gradient_norm"] = r.gradient_norm;
  rep.results["iterations"] = r.iterations;
  rep.results["converged"] = r.converged;
  warn_bers(cfg, sys, r.point, err);
  err << "syslab: constrained minimum " << r.value << " after " << r.iterations
      << " iterations\n";
}

void add_classification(const Config& cfg, const CurveSystem& sys,
                        const FNPoint& x, const ClassifyOptions& opts,
                        Report& rep) {
  const CriticalReport cr = classify_point(sys, x, opts);
  rep.results["kind"] = to_string(cr.kind);
  rep.results["systoles"] = ids_json(sys, cr.systoles);
  rep.results["rank"] = cr.rank.rank;
  rep.results["index"] = cr.index;
  const GradientSet gs = gradients(sys, cr.systoles, x, opts.fd_step);
  const int gap = dominant_gap_rank(gs.rows);
  rep.results["gap_rank"] = gap;
  rep.results["kernel_dim"] = 6 - gap;
  rep.add_certificate("eutactic", cr.eutactic, gs.rows);
  if (cr.kind == PointKind::Boundary) {
    rep.results["boundary_subset"] = ids_json(sys, cr.boundary_subset);
    const GradientSet bs = gradients(sys, cr.boundary_subset, x, opts.fd_step);
    rep.add_certificate("boundary_eutactic", cr.boundary_eutactic, bs.rows);
  }
  if (cr.kind == PointKind::Regular ||
      (cr.kind == PointKind::Indeterminate &&
       cr.eutactic.verdict == Verdict::False)) {
    rep.add_certificate("full_cone", cr.full_cone, gs.rows);
  }
  (void)cfg;
}

void run_classify(const Config& cfg, const CurveSystem& sys, const Flags& f,
                  Report& rep, std::ostream& err) {
  const FNPoint x = require_point(f, "classify");
  rep.results["point"] = point_json(x);
  add_classification(cfg, sys, x, classify_options(cfg), rep);
  err << "syslab: point kind " << rep.results["kind"].get<std::string>()
      << "\n";
}

void run_locus_class(const Config& cfg, const CurveSystem& sys, const Flags& f,
                     Report& rep, std::ostream& err) {
  if (!f.has_curves)
    throw ConfigError("locus-class needs --curves with at least two curves");
  const auto curves = parse_curves(f.curves, sys);
  if (curves.size() < 2)
    throw ConfigError("locus-class needs at least two curves");
  LocusSpec spec = LocusSpec::zero_offsets(curves);
  if (f.has_offsets) {
    const auto d = parse_csv(f.offsets, "--offsets");
    if (d.size() != curves.size())
      throw ConfigError("--offsets must match the curve subset size");
    for (std::size_t i = 0; i < d.size(); ++i)
      spec.offsets[static_cast<int>(i)] = d[i];
  }
  FNPoint x0;
  if (f.has_point) {
    x0 = parse_point(f.point);
  } else {
    x0.cuff_lengths << 2.0, 2.0, 2.0;
    x0.twists << 0.0, 0.0, 0.0;
  }
  check_box(cfg, x0);
  const ClassifyOptions opts = located_options(cfg);
  const LocusReport lr = classify_locus(spec, sys, x0, opts);
  rep.results["curves"] = ids_json(sys, curves);
  rep.results["offsets"] = vec_json(spec.offsets);
  rep.results["class"] = to_string(lr.cls);
  rep.results["common_length"] = lr.minimum.value;
  rep.results["point"] = point_json(lr.minimum.point);
  rep.results["converged"] = lr.minimum.converged;
  const GradientSet gs =
      gradients(sys, curves, lr.minimum.point, opts.fd_step);
  if (lr.cls == LocusClass::Inner) {
    rep.add_certificate("eutactic", lr.eutactic, gs.rows);
  } else if (lr.cls == LocusClass::Outer) {
    rep.add_certificate("decrease_cone", lr.decrease_cone, gs.rows);
  } else {
    rep.add_certificate("eutactic", lr.eutactic, gs.rows);
    rep.add_certificate("decrease_cone", lr.decrease_cone, gs.rows);
  }
  err << "syslab: locus class " << to_string(lr.cls) << "\n";
}

void add_descendents(const CurveSystem& sys, const FNPoint& x,
                     const ClassifyOptions& opts, Report& rep) {
  const DescendentReport dr = descendents_at(sys, x, opts);
  rep.results["systoles"] = ids_json(sys, dr.systoles);
  rep.results["rank"] = dr.at.rank.rank;
  rep.results["index"] = dr.at.index;
  const GradientSet gs = gradients(sys, dr.systoles, x, opts.fd_step);
  const int gap = dominant_gap_rank(gs.rows);
  rep.results["gap_rank"] = gap;
  rep.results["kernel_dim"] = 6 - gap;
  rep.results["descendents"] = families_json(sys, dr.families.descendents);
  rep.results["subdescendents"] =
      families_json(sys, dr.families.subdescendents);
  rep.add_certificate("eutactic", dr.at.eutactic, gs.rows);
}

void run_descendents(const Config& cfg, const CurveSystem& sys, const Flags& f,
                     Report& rep, std::ostream& err) {
  const FNPoint x = require_point(f, "descendents");
  rep.results["point"] = point_json(x);
  add_descendents(sys, x, classify_options(cfg), rep);
  err << "syslab: " << rep.results["descendents"].size() << " descendents, "
      << rep.results["subdescendents"].size() << " subdescendents\n";
}

void run_schmutz(const Config& cfg, const CurveSystem& sys, const Flags& f,
                 Report& rep, std::ostream& err) {
  const MinimizeResult located = schmutz_point(sys, cfg.seed);
  rep.results["converged"] = located.converged;
  rep.results["iterations"] = located.iterations;
  rep.results["point"] = point_json(located.point);
  ordered_json lens = ordered_json::array();
  for (const auto& c : sys.curves) {
    ordered_json row;
    row["curve"] = c.id;
    row["length"] = length(c, located.point);
    lens.push_back(std::move(row));
  }
  rep.results["lengths"] = std::move(lens);
  const ClassifyOptions opts = located_options(cfg);
  const SystoleResult sr = systole(sys, located.point, opts.systole_rel);
  rep.results["systole"] = sr.value;
  add_descendents(sys, located.point, opts, rep);
  warn_bers(cfg, sys, located.point, err);
  err << "syslab: located systole " << sr.value << " with "
      << rep.results["descendents"].size() << " descendent families\n";
  (void)f;
}

void run_testbed(const Config& cfg, const Flags& f, Report& rep,
                 std::ostream& err) {
  if (f.samples <= 0) throw ConfigError("--samples must be positive");
  const TestbedReport r = testbed_verify(f.samples, cfg.seed);
  rep.results["samples"] = r.samples;
  rep.results["seed"] = r.seed;
  rep.results["rank_ok"] = r.rank_ok;
  rep.results["full_cone_ok"] = r.full_cone_ok;
  rep.results["mixed_ok"] = r.mixed_ok;
  rep.results["claim_iv_ok"] = r.claim_iv_ok;
  rep.results["fd_ok"] = r.fd_ok;
  rep.results["fd_checked"] = r.fd_checked;
  rep.results["on_plane"] = r.on_plane;
  rep.results["all_ok"] = r.all_ok;
  rep.exit_override = r.all_ok ? 0 : 1;
  err << "syslab: testbed " << (r.all_ok ? "passed" : "FAILED") << " at "
      << r.samples << " samples\n";
}

void run_hexagon(const Flags& f, Report& rep, std::ostream& err) {
  if (f.alternate.size() != 3)
    throw ConfigError("hexagon needs --alternate a b c");
  const HexagonSides h =
      hexagon_solve(f.alternate[0], f.alternate[1], f.alternate[2]);
  rep.results["alternate"] = vec_json(h.alternate);
  rep.results["opposite"] = vec_json(h.opposite);
  rep.results["residual"] = hexagon_residual(h);
  err << "syslab: hexagon residual " << hexagon_residual(h) << "\n";
}

}  // namespace

void Config::validate() const {
  if (!(systole_rel > 0.0) || !(lp_margin > 0.0) || !(grad_tol > 0.0) ||
      !(fd_step > 0.0))
    throw ConfigError("tolerances must be positive");
  if (systole_rel > 1e-3)
    throw ConfigError("systole_rel must lie in (0, 1e-3]");
  if (fd_step < 1e-7 || fd_step > 1e-3)
    throw ConfigError("fd_step must lie in [1e-7, 1e-3]");
  if (!(box_length_lo > 0.0) || !(box_length_lo < box_length_hi) ||
      !(box_twist_lo < box_twist_hi))
    throw ConfigError("search box must be well ordered with positive lengths");
  if (!(bers_bound > 0.0)) throw ConfigError("bers_bound must be positive");
}

std::string Config::digest() const {
  std::string s;
  const auto add = [&s](std::string_view k, const std::string& v) {
    s += k;
    s += '=';
    s += v;
    s += '\n';
  };
  add("bers_bound", format_double(bers_bound));
  add("box_length_hi", format_double(box_length_hi));
  add("box_length_lo", format_double(box_length_lo));
  add("box_twist_hi", format_double(box_twist_hi));
  add("box_twist_lo", format_double(box_twist_lo));
  add("catalog", catalog);
  add("fd_step", format_double(fd_step));
  add("grad_tol", format_double(grad_tol));
  add("lp_margin", format_double(lp_margin));
  add("seed", std::to_string(seed));
  add("systole_rel", format_double(systole_rel));
  return fnv1a_hex(s);
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"genus-2 systole laboratory"};
  app.require_subcommand(1);

  Flags f;
  const auto* opt_config =
      app.add_option("--config", f.config_path, "flat key = value settings file");
  const auto* opt_seed = app.add_option("--seed", f.seed, "RNG seed");
  const auto* opt_tol = app.add_option("--tol-systole", f.tol_systole,
                                       "relative systole tolerance");
  const auto* opt_point =
      app.add_option("--point", f.point, "surface point l1,l2,l3,t1,t2,t3");
  const auto* opt_curves =
      app.add_option("--curves", f.curves, "comma-separated curve ids");
  const auto* opt_weights = app.add_option(
      "--weights", f.weights, "comma-separated positive weights");
  const auto* opt_offsets = app.add_option(
      "--offsets", f.offsets, "comma-separated length offsets");
  app.add_option("--samples", f.samples, "sample count");

  const char* const subs[] = {"lengths",    "systole",        "gradients",
                              "eutactic",   "balanced",       "min",
                              "restricted-min", "classify",   "locus-class",
                              "descendents", "schmutz",       "testbed",
                              "hexagon"};
  const char* const briefs[] = {
      "geodesic lengths of catalog curves at a point",
      "shortest catalog length and the curves attaining it",
      "central-difference length gradients",
      "eutacticity certificate for a curve subset",
      "balanced certificate on the equal-length locus",
      "weighted length minimization over a curve subset",
      "common-length minimization on an equal-length locus",
      "first-order type of a point with certificates",
      "inner / outer trichotomy of an equal-length locus",
      "minimal eutactic families at a critical point",
      "locate and certify the all-lengths-equal critical point",
      "analytic four-function validation suite",
      "solve a right-angled hexagon from alternating sides"};
  CLI::App* hex = nullptr;
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    CLI::App* sub = app.add_subcommand(subs[i], briefs[i]);
    sub->fallthrough();
    if (std::string_view(subs[i]) == "hexagon") hex = sub;
  }
  hex->add_option("--alternate", f.alternate, "alternating side triple")
      ->expected(3);

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "syslab: " << e.what() << "\n";
    return 1;
  }

  try {
    Config cfg;
    if (opt_config->count() > 0) load_config_file(cfg, f.config_path);
    if (opt_seed->count() > 0) cfg.seed = f.seed;
    if (opt_tol->count() > 0) cfg.systole_rel = f.tol_systole;
    cfg.validate();
    f.has_point = opt_point->count() > 0;
    f.has_curves = opt_curves->count() > 0;
    f.has_weights = opt_weights->count() > 0;
    f.has_offsets = opt_offsets->count() > 0;

    const CurveSystem* sys = &builtin_catalog();
    CurveSystem file_sys;
    if (!cfg.catalog.empty()) {
      std::ifstream in(cfg.catalog);
      if (!in) throw ConfigError("cannot open catalog file: " + cfg.catalog);
      std::stringstream buf;
      buf << in.rdbuf();
      file_sys = parse_catalog(buf.str());
      sys = &file_sys;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    Report rep;
    if (name == "lengths") run_lengths(cfg, *sys, f, rep, err);
    else if (name == "systole") run_systole(cfg, *sys, f, rep, err);
    else if (name == "gradients") run_gradients(cfg, *sys, f, rep, err);
    else if (name == "eutactic") run_eutactic(cfg, *sys, f, rep, err);
    else if (name == "balanced") run_balanced(cfg, *sys, f, rep, err);
    else if (name == "min") run_min(cfg, *sys, f, rep, err);
    else if (name == "restricted-min") run_restricted_min(cfg, *sys, f, rep, err);
    else if (name == "classify") run_classify(cfg, *sys, f, rep, err);
    else if (name == "locus-class") run_locus_class(cfg, *sys, f, rep, err);
    else if (name == "descendents") run_descendents(cfg, *sys, f, rep, err);
    else if (name == "schmutz") run_schmutz(cfg, *sys, f, rep, err);
    else if (name == "testbed") run_testbed(cfg, f, rep, err);
    else run_hexagon(f, rep, err);

    ordered_json doc;
    doc["command"] = name;
    doc["config_digest"] = cfg.digest();
    doc["results"] = std::move(rep.results);
    doc["certificates"] = std::move(rep.certificates);
    out << doc.dump(2) << "\n";
    if (rep.exit_override >= 0) return rep.exit_override;
    return rep.indeterminate ? 2 : 0;
  } catch (const Error& e) {
    err << "syslab: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "syslab: error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace syslab
