#include "harperlab/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "harperlab/cache.hpp"
#include "harperlab/contfrac.hpp"
#include "harperlab/dynamics.hpp"
#include "harperlab/errors.hpp"
#include "harperlab/fractal.hpp"
#include "harperlab/gauge.hpp"
#include "harperlab/io_util.hpp"
#include "harperlab/model.hpp"
#include "harperlab/spectral.hpp"

namespace harperlab {

namespace {

struct GlobalOpts {
  std::string out_dir = "out";
  std::string cache_dir;
  bool no_cache = false;
  int workers = 1;
  std::uint64_t seed = 12345;
};

// Serialized run configuration, embedded verbatim in every output header so
// a result file identifies the run that produced it. No timestamps: the
// same configuration must yield byte-identical files.
class ConfigLine {
 public:
  ConfigLine(const std::string& cmd, const GlobalOpts& g) {
    // workers is deliberately absent: it schedules the run but cannot
    // change the result, and files must be byte-identical across counts.
    add("cmd", cmd);
    add("seed", std::to_string(g.seed));
    add("cache", g.no_cache ? "off" : "on");
    add("version", "1");
  }
  void add(const std::string& k, const std::string& v) { kv_.emplace_back(k, v); }
  void add(const std::string& k, double v) { kv_.emplace_back(k, fmt_double(v)); }
  void add(const std::string& k, long long v) { kv_.emplace_back(k, std::to_string(v)); }

  std::string csv_comment() const {
    std::string s = "# config:";
    for (const auto& [k, v] : kv_) s += " " + k + "=" + v;
    return s + "\n";
  }
  std::string json_object() const {
    std::string s = "{\"config\":{";
    bool first = true;
    for (const auto& [k, v] : kv_) {
      if (!first) s += ",";
      first = false;
      s += "\"" + k + "\":\"" + v + "\"";
    }
    return s + "}}";
  }

 private:
  std::vector<std::pair<std::string, std::string>> kv_;
};

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '/' || c == ':' || c == ' ')
      out += '_';
    else if (c == '.')
      out += 'p';
    else
      out += c;
  }
  return out;
}

std::string write_out(const GlobalOpts& g, const std::string& subdir,
                      const std::string& name, const std::string& content) {
  std::string dir = join_path(g.out_dir, subdir);
  ensure_dir(dir);
  std::string path = join_path(dir, name);
  atomic_write_file(path, content);
  return path;
}

CFExpansion parse_alpha_cf(const std::string& s) {
  if (s == "golden") return CFExpansion::golden();
  if (s == "silver") return CFExpansion::silver();
  if (s.find('/') != std::string::npos) {
    Frac f = parse_frac(s);
    return CFExpansion::from_value(BigRat(BigInt(f.p)) / BigInt(f.q), BigRat(0));
  }
  try {
    return CFExpansion::from_decimal(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bad --alpha value '") + s + "': " + e.what());
  }
}

double parse_alpha_value(const std::string& s) {
  if (s == "golden") return (std::sqrt(5.0) - 1.0) / 2.0;
  if (s == "silver") return std::sqrt(2.0) - 1.0;
  if (s.find('/') != std::string::npos) {
    Frac f = parse_frac(s);
    return double(f.p) / double(f.q);
  }
  try {
    return to_double(parse_decimal(s));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bad --alpha value '") + s + "': " + e.what());
  }
}

std::string frac_str(const Frac& f) {
  return std::to_string(f.p) + "/" + std::to_string(f.q);
}

// ---------------------------------------------------------------- cf ----

struct CfOpts {
  std::string alpha = "golden";
  int depth = 12;
};

int run_cf(const GlobalOpts& g, const CfOpts& o) {
  CFExpansion cf = parse_alpha_cf(o.alpha);
  // depth caps the table; rational inputs terminate wherever they terminate
  std::vector<Convergent> conv =
      convergents_from_coeffs(cf.coefficients_up_to(std::size_t(o.depth)));
  ConfigLine cl("cf", g);
  cl.add("alpha", o.alpha);
  cl.add("depth", (long long)o.depth);
  std::ostringstream os;
  os << cl.csv_comment() << "n,a_n,p_n,q_n,omega_n\n";
  for (const auto& c : conv) {
    os << c.n << "," << c.a << "," << c.p << "," << c.q << ",";
    if (c.has_omega) os << fmt_double(c.omega);
    os << "\n";
  }
  std::string path = write_out(g, "tables",
                               "cf_" + sanitize(o.alpha) + "_d" +
                                   std::to_string(o.depth) + ".csv",
                               os.str());
  std::cout << os.str();
  std::cout << "wrote " << path << "\n";
  return 0;
}

// ---------------------------------------------------------- spectrum ----

struct SpectrumOpts {
  std::string model = "amo:1";
  std::string frac;
  double tol = 1e-6;
  double edge_tol = 0.0;
  bool best_effort = false;
};

int run_spectrum(const GlobalOpts& g, const SpectrumOpts& o) {
  CoefficientFamily fam = parse_model_spec(o.model);
  Frac f = parse_frac(o.frac);
  Cache cache(g.cache_dir);
  Cache* cp = g.no_cache ? nullptr : &cache;

  bool cache_hit = false;
  UnionReport rep;
  if (cp && o.edge_tol == 0.0 && !o.best_effort) {
    auto hit = cp->get(CacheKey{family_token(fam), fam.lambda, f.p, f.q, o.tol});
    if (hit) {
      rep.bands = *hit;
      rep.certified = true;
      cache_hit = true;
    }
  }
  if (!cache_hit) {
    UnionOptions opt;
    opt.edge_tol = o.edge_tol;
    opt.best_effort = o.best_effort;
    rep = union_spectrum_report(fam, f, o.tol, opt);
    if (cp && rep.certified && o.edge_tol == 0.0 && !o.best_effort)
      cp->put(CacheKey{family_token(fam), fam.lambda, f.p, f.q, o.tol}, rep.bands);
  }

  ConfigLine cl("spectrum", g);
  cl.add("model", family_token(fam));
  cl.add("frac", frac_str(f));
  cl.add("tol", o.tol);
  if (o.edge_tol > 0.0) cl.add("edge_tol", o.edge_tol);

  std::ostringstream os;
  os << cl.json_object() << "\n";
  for (const auto& iv : rep.bands.intervals())
    os << "{\"band\":[" << fmt_double(iv.lo) << "," << fmt_double(iv.hi) << "]}\n";
  // Volatile diagnostics (cache hit, defects) go to stderr so the file is
  // byte-identical between cold and warm cache runs.
  os << "{\"summary\":{\"count\":" << rep.bands.count()
     << ",\"measure\":" << fmt_double(rep.bands.measure())
     << ",\"certified\":" << (rep.certified ? "true" : "false") << "}}\n";
  std::cerr << "cache: " << (cache_hit ? "hit" : "miss")
            << "  edge_defect: " << fmt_double(rep.edge_defect) << "\n";

  std::string path = write_out(g, "bands",
                               "spectrum_" + sanitize(family_token(fam)) + "_" +
                                   std::to_string(f.p) + "_" +
                                   std::to_string(f.q) + ".jsonl",
                               os.str());
  std::cout << os.str() << "wrote " << path << "\n";
  return 0;
}

// --------------------------------------------------------- butterfly ----

struct ButterflyOpts {
  std::string model = "amo:1";
  int qmax = 30;
  double tol = 1e-6;
  bool svg = false;
};

std::string butterfly_svg(const std::vector<ButterflyEntry>& entries,
                          const ConfigLine& cl) {
  double emin = 0.0, emax = 0.0;
  bool first = true;
  for (const auto& e : entries) {
    if (e.bands.empty()) continue;
    if (first || e.bands.min() < emin) emin = e.bands.min();
    if (first || e.bands.max() > emax) emax = e.bands.max();
    first = false;
  }
  if (first) throw InsufficientData("butterfly_svg: no bands to draw");
  const double W = 1000, H = 1000, M = 40;
  auto X = [&](double E) { return M + (E - emin) / (emax - emin) * (W - 2 * M); };
  auto Y = [&](double a) { return H - M - a * (H - 2 * M); };
  char buf[160];
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\">\n";
  s += "<!-- " + cl.csv_comment().substr(2) + " -->\n";
  s += "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
  for (const auto& e : entries) {
    double a = double(e.frac.p) / double(e.frac.q);
    for (const auto& iv : e.bands.intervals()) {
      std::snprintf(buf, sizeof buf,
                    "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                    "stroke=\"#14406e\" stroke-width=\"0.7\"/>\n",
                    X(iv.lo), Y(a), X(std::max(iv.hi, iv.lo + 4e-3)), Y(a));
      s += buf;
    }
  }
  s += "</svg>\n";
  return s;
}

int run_butterfly(const GlobalOpts& g, const ButterflyOpts& o) {
  CoefficientFamily fam = parse_model_spec(o.model);
  Cache cache(g.cache_dir);
  Cache* cp = g.no_cache ? nullptr : &cache;
  auto entries = butterfly(fam, o.qmax, o.tol, cp, g.workers);

  ConfigLine cl("butterfly", g);
  cl.add("model", family_token(fam));
  cl.add("qmax", (long long)o.qmax);
  cl.add("tol", o.tol);

  std::ostringstream os;
  os << cl.json_object() << "\n";
  int flagged = 0;
  for (const auto& e : entries) {
    os << "{\"p\":" << e.frac.p << ",\"q\":" << e.frac.q << ",\"bands\":[";
    for (std::size_t i = 0; i < e.bands.count(); ++i) {
      if (i) os << ",";
      const auto& iv = e.bands.intervals()[i];
      os << "[" << fmt_double(iv.lo) << "," << fmt_double(iv.hi) << "]";
    }
    os << "],\"budget_exceeded\":" << (e.budget_exceeded ? "true" : "false")
       << "}\n";
    if (e.budget_exceeded) ++flagged;
  }
  std::string tag = sanitize(family_token(fam)) + "_q" + std::to_string(o.qmax);
  std::string path = write_out(g, "bands", "butterfly_" + tag + ".jsonl", os.str());
  std::cout << "entries: " << entries.size() << ", budget flags: " << flagged
            << "\nwrote " << path << "\n";
  if (o.svg) {
    std::string sp =
        write_out(g, "plots", "butterfly_" + tag + ".svg", butterfly_svg(entries, cl));
    std::cout << "wrote " << sp << "\n";
  }
  return 0;
}

// --------------------------------------------------------------- ids ----

struct IdsOpts {
  std::string model = "amo:1";
  std::string frac;
  int points = 400;
  int thetas = 256;
  int ksamples = 0;
  double tol = 1e-6;  // for the hull sweep when no range is given
  double emin = 0.0, emax = 0.0;
  bool has_range = false;
};

int run_ids(const GlobalOpts& g, const IdsOpts& o) {
  CoefficientFamily fam = parse_model_spec(o.model);
  Frac f = parse_frac(o.frac);
  double lo = o.emin, hi = o.emax;
  if (!o.has_range) {
    BandSet u = union_spectrum(fam, f, o.tol);
    lo = u.min() - 0.5;
    hi = u.max() + 0.5;
  }
  if (!(hi > lo)) throw UsageError("ids: empty energy range");
  std::vector<double> grid(o.points);
  for (int i = 0; i < o.points; ++i)
    grid[i] = lo + (hi - lo) * double(i) / double(o.points - 1);
  IDSample s = ids(fam, f, grid, o.thetas, o.ksamples);

  ConfigLine cl("ids", g);
  cl.add("model", family_token(fam));
  cl.add("frac", frac_str(f));
  cl.add("points", (long long)o.points);
  cl.add("thetas", (long long)o.thetas);
  cl.add("ksamples", (long long)o.ksamples);

  std::ostringstream os;
  os << cl.csv_comment() << "E,N\n";
  for (std::size_t i = 0; i < s.grid.size(); ++i)
    os << fmt_double(s.grid[i]) << "," << fmt_double(s.N[i]) << "\n";
  std::string path = write_out(g, "tables",
                               "ids_" + sanitize(family_token(fam)) + "_" +
                                   std::to_string(f.p) + "_" +
                                   std::to_string(f.q) + ".csv",
                               os.str());
  std::cout << "grid: [" << fmt_double(lo) << ", " << fmt_double(hi)
            << "], N(top) = " << fmt_double(s.N.back()) << "\nwrote " << path
            << "\n";
  return 0;
}

// ---------------------------------------------------------- lyapunov ----

struct LyapunovOpts {
  std::string model = "amo:1";
  std::string alpha = "golden";
  std::vector<double> energies;
  long steps = 10000;
  int thetas = 50;
};

int run_lyapunov(const GlobalOpts& g, const LyapunovOpts& o) {
  CoefficientFamily fam = parse_model_spec(o.model);
  double a = parse_alpha_value(o.alpha);
  if (o.energies.empty()) throw UsageError("lyapunov: give at least one --energy");

  ConfigLine cl("lyapunov", g);
  cl.add("model", family_token(fam));
  cl.add("alpha", o.alpha);
  cl.add("steps", (long long)o.steps);
  cl.add("thetas", (long long)o.thetas);

  std::ostringstream os;
  os << cl.csv_comment() << "E,L,stderr,n\n";
  for (std::size_t i = 0; i < o.energies.size(); ++i) {
    LyapunovEstimate est = lyapunov_numeric(fam, a, o.energies[i], o.steps,
                                            o.thetas, g.seed + i);
    os << fmt_double(est.E) << "," << fmt_double(est.L) << ","
       << fmt_double(est.stderr_est) << "," << est.n << "\n";
  }
  std::string path = write_out(
      g, "tables", "lyapunov_" + sanitize(family_token(fam)) + "_" +
                       sanitize(o.alpha) + ".csv",
      os.str());
  std::cout << os.str() << "wrote " << path << "\n";
  return 0;
}

// ------------------------------------------------------- gauge-verify ----

struct GaugeOpts {
  long kmax = 20;
  long mmax = 20;
  std::vector<std::string> alphas = {"symbolic"};
};

int run_gauge(const GlobalOpts& g, const GaugeOpts& o) {
  std::vector<AlphaSpec> specs;
  for (const auto& s : o.alphas) {
    if (s == "symbolic")
      specs.push_back(AlphaSpec::sym());
    else
      specs.push_back(AlphaSpec::rational(parse_frac(s)));
  }

  ConfigLine cl("gauge-verify", g);
  cl.add("kmax", (long long)o.kmax);
  cl.add("mmax", (long long)o.mmax);

  std::ostringstream os;
  os << cl.csv_comment() << "relation,alpha,pass,fail,skipped,status\n";
  long total_fail = 0;
  auto emit = [&](const RelationReport& rep) {
    os << "\"" << rep.name << "\"," << rep.alpha << "," << rep.pass << ","
       << rep.fail << "," << rep.skipped << ","
       << (rep.ok() ? "ok" : "FAIL") << "\n";
    total_fail += rep.fail;
    for (const auto& w : rep.witnesses) os << "#   witness: " << w << "\n";
  };
  for (const auto& spec : specs) {
    for (const auto& rel : relation_table())
      emit(verify_relation(rel, {-o.kmax, o.kmax}, {-o.mmax, o.mmax}, spec));
    emit(verify_conjugation({-o.kmax, o.kmax}, {-o.mmax, o.mmax}, spec));
  }
  std::string path = write_out(g, "reports", "gauge_verify.csv", os.str());
  std::cout << os.str() << "wrote " << path << "\n";
  if (total_fail > 0) {
    std::cerr << "gauge-verify: " << total_fail << " failing cases\n";
    return 1;
  }
  return 0;
}

// ------------------------------------------------------- chiral-check ----

struct ChiralOpts {
  std::string frac;
  double tol = 1e-6;
  int ids_points = 0;
};

int run_chiral(const GlobalOpts& g, const ChiralOpts& o) {
  Frac f = parse_frac(o.frac);
  IsospectralReport rep = isospectral_check(f, o.tol);

  ConfigLine cl("chiral-check", g);
  cl.add("frac", frac_str(f));
  cl.add("tol", o.tol);

  std::ostringstream os;
  os << cl.csv_comment();
  os << "chiral frequency:        " << frac_str(rep.input) << "\n";
  os << "doubled frequency:       " << frac_str(rep.doubled) << "\n";
  os << "hausdorff distance:      " << fmt_double(rep.distance) << "\n";
  os << "threshold (2 tol):       " << fmt_double(2.0 * rep.tol) << "\n";
  os << "amo bands / edge err:    " << rep.amo_bands.count() << " / "
     << fmt_double(rep.amo_edge_defect) << "\n";
  os << "chiral bands / edge err: " << rep.chiral_bands.count() << " / "
     << fmt_double(rep.chiral_edge_defect) << "\n";
  if (o.ids_points > 0) {
    double lo = rep.amo_bands.min() - 0.5, hi = rep.amo_bands.max() + 0.5;
    std::vector<double> grid(o.ids_points);
    for (int i = 0; i < o.ids_points; ++i)
      grid[i] = lo + (hi - lo) * double(i) / double(o.ids_points - 1);
    double d = ids_equality_check(f, grid, 256);
    os << "ids sup-difference:      " << fmt_double(d) << "\n";
  }
  os << "verdict:                 " << (rep.pass ? "isospectral" : "MISMATCH")
     << "\n";
  std::string path = write_out(g, "reports",
                               "chiral_check_" + std::to_string(f.p) + "_" +
                                   std::to_string(f.q) + ".txt",
                               os.str());
  std::cout << os.str() << "wrote " << path << "\n";
  return rep.pass ? 0 : 1;
}

// ------------------------------------------------------------ scaling ----

struct ScalingOpts {
  std::string alpha = "golden";
  int nmax = 10;
  double tol = 1e-6;
};

int run_scaling(const GlobalOpts& g, const ScalingOpts& o) {
  CFExpansion cf = parse_alpha_cf(o.alpha);
  Cache cache(g.cache_dir);
  Cache* cp = g.no_cache ? nullptr : &cache;
  ScalingTable table = thouless_scaling_table(cf, o.nmax, o.tol, cp);

  ConfigLine cl("scaling", g);
  cl.add("alpha", o.alpha);
  cl.add("nmax", (long long)o.nmax);
  cl.add("tol", o.tol);

  std::ostringstream os;
  os << cl.csv_comment();
  os << "# reference_c=" << fmt_double(table.reference_c) << "\n";
  os << "n,p,q,measure,q_measure\n";
  for (const auto& r : table.rows)
    os << r.n << "," << r.p << "," << r.q << "," << fmt_double(r.measure) << ","
       << fmt_double(r.q_measure) << "\n";
  std::string path =
      write_out(g, "tables", "scaling_" + sanitize(o.alpha) + ".csv", os.str());
  std::cout << os.str() << "wrote " << path << "\n";
  return 0;
}

// ---------------------------------------------------------- dimension ----

struct DimensionOpts {
  std::string model = "amo:1";
  std::string alpha = "golden";
  int nmin = 2;
  int nmax = 14;
  double C = 2.0;
  double tmin = 0.5, tmax = 0.8, tstep = 0.05;
  double tol = 1e-6;
  bool svg = false;
};

std::string dimension_svg(const DimEstimate& est, const ConfigLine& cl) {
  const double W = 800, H = 600, M = 60;
  double xmin = est.box_log_invdelta.front(), xmax = est.box_log_invdelta.back();
  double ymin = est.box_logN.front(), ymax = est.box_logN.back();
  for (std::size_t i = 0; i < est.box_logN.size(); ++i) {
    xmin = std::min(xmin, est.box_log_invdelta[i]);
    xmax = std::max(xmax, est.box_log_invdelta[i]);
    ymin = std::min(ymin, est.box_logN[i]);
    ymax = std::max(ymax, est.box_logN[i]);
  }
  auto X = [&](double x) { return M + (x - xmin) / (xmax - xmin) * (W - 2 * M); };
  auto Y = [&](double y) { return H - M - (y - ymin) / (ymax - ymin) * (H - 2 * M); };
  char buf[200];
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\">\n";
  s += "<!-- " + cl.csv_comment().substr(2) + " -->\n";
  s += "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  // least-squares line across the x range
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < est.box_logN.size(); ++i) {
    mx += est.box_log_invdelta[i];
    my += est.box_logN[i];
  }
  mx /= double(est.box_logN.size());
  my /= double(est.box_logN.size());
  double y0 = my + est.box_slope * (xmin - mx), y1 = my + est.box_slope * (xmax - mx);
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                "stroke=\"#999\" stroke-width=\"1\"/>\n",
                X(xmin), Y(y0), X(xmax), Y(y1));
  s += buf;
  for (std::size_t i = 0; i < est.box_logN.size(); ++i) {
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"#14406e\"/>\n",
                  X(est.box_log_invdelta[i]), Y(est.box_logN[i]));
    s += buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.0f\" y=\"%.0f\" font-size=\"14\">log N(delta) vs "
                "log 1/delta, slope %.4f</text>\n",
                M, M - 20, est.box_slope);
  s += buf;
  s += "</svg>\n";
  return s;
}

int run_dimension(const GlobalOpts& g, const DimensionOpts& o) {
  CoefficientFamily fam = parse_model_spec(o.model);
  CFExpansion cf = parse_alpha_cf(o.alpha);
  Cache cache(g.cache_dir);
  Cache* cp = g.no_cache ? nullptr : &cache;

  std::vector<Convergent> conv = convergents(cf, std::size_t(o.nmax));
  std::vector<Frac> alphas;
  for (const auto& c : conv) {
    if (c.n < o.nmin) continue;
    Frac f = to_frac(c);
    if (f.q < 2) continue;  // covers need q >= 2
    alphas.push_back(f);
  }
  std::vector<double> t_grid;
  for (double t = o.tmin; t <= o.tmax + 1e-12; t += o.tstep) t_grid.push_back(t);

  DimEstimate est = dim_upper_estimate(fam, alphas, t_grid, o.C, o.tol, cp);

  ConfigLine cl("dimension", g);
  cl.add("model", family_token(fam));
  cl.add("alpha", o.alpha);
  cl.add("nmin", (long long)o.nmin);
  cl.add("nmax", (long long)o.nmax);
  cl.add("C", o.C);
  cl.add("tol", o.tol);

  std::ostringstream os;
  os << cl.csv_comment();
  os << "q";
  for (double t : t_grid) os << ",sum_t" << fmt_double(t);
  os << ",log_invdelta,logN\n";
  for (std::size_t qi = 0; qi < est.qs.size(); ++qi) {
    os << est.qs[qi];
    for (std::size_t ti = 0; ti < t_grid.size(); ++ti)
      os << "," << fmt_double(est.sums[ti][qi]);
    os << "," << fmt_double(est.box_log_invdelta[qi]) << ","
       << fmt_double(est.box_logN[qi]) << "\n";
  }
  os << "# t_star=" << fmt_double(est.t_star) << "\n";
  os << "# box_slope=" << fmt_double(est.box_slope) << "\n";
  std::string tag = sanitize(family_token(fam)) + "_" + sanitize(o.alpha);
  std::string path = write_out(g, "tables", "dimension_" + tag + ".csv", os.str());
  std::cout << "t_star = " << fmt_double(est.t_star)
            << ", box_slope = " << fmt_double(est.box_slope) << "\nwrote "
            << path << "\n";
  if (o.svg) {
    std::string sp =
        write_out(g, "plots", "dimension_" + tag + ".svg", dimension_svg(est, cl));
    std::cout << "wrote " << sp << "\n";
  }
  return 0;
}

// --------------------------------------------------------- continuity ----

struct ContinuityOpts {
  std::string model = "chiral";
  std::string alpha = "golden";
  int nlo = 6;
  int nhi = 12;
  double tol = 1e-6;
};

int run_continuity(const GlobalOpts& g, const ContinuityOpts& o) {
  CoefficientFamily fam = parse_model_spec(o.model);
  CFExpansion cf = parse_alpha_cf(o.alpha);
  Cache cache(g.cache_dir);
  Cache* cp = g.no_cache ? nullptr : &cache;
  ContinuityFit fit = continuity_fit(fam, cf, o.nlo, o.nhi, o.tol, cp);

  ConfigLine cl("continuity", g);
  cl.add("model", family_token(fam));
  cl.add("alpha", o.alpha);
  cl.add("nlo", (long long)o.nlo);
  cl.add("nhi", (long long)o.nhi);
  cl.add("tol", o.tol);

  std::ostringstream os;
  os << cl.csv_comment() << "n,q1,q2,dalpha,d,edge_err,in_fit\n";
  for (const auto& r : fit.rows)
    os << r.n << "," << r.q1 << "," << r.q2 << "," << fmt_double(r.dalpha)
       << "," << fmt_double(r.d) << "," << fmt_double(r.edge_err) << ","
       << (r.in_fit ? 1 : 0) << "\n";
  os << "# gamma=" << fmt_double(fit.gamma) << "\n";
  os << "# K=" << fmt_double(fit.K) << "\n";
  os << "# note=" << fit.note << "\n";
  std::string tag = sanitize(family_token(fam)) + "_" + sanitize(o.alpha);
  std::string path = write_out(g, "tables", "continuity_" + tag + ".csv", os.str());
  std::cout << os.str() << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"spectral toolkit for quasiperiodic Jacobi operators"};
  app.require_subcommand(1);

  GlobalOpts g;
  g.cache_dir = default_cache_dir();
  app.add_option("--out", g.out_dir, "output directory root")->capture_default_str();
  app.add_option("--cache-dir", g.cache_dir, "band cache directory")
      ->capture_default_str();
  app.add_flag("--no-cache", g.no_cache, "disable the band cache");
  app.add_option("--workers", g.workers, "worker threads")
      ->check(CLI::Range(1, 256));
  app.add_option("--seed", g.seed, "seed for randomized estimators")
      ->capture_default_str();

  CfOpts cf_o;
  auto* cf = app.add_subcommand("cf", "continued-fraction coefficients and approximants");
  cf->add_option("--alpha", cf_o.alpha, "golden | silver | p/q | decimal in (0,1)")
      ->capture_default_str();
  cf->add_option("--depth", cf_o.depth, "number of coefficients")
      ->check(CLI::Range(1, 1000))->capture_default_str();

  SpectrumOpts sp_o;
  auto* sp = app.add_subcommand("spectrum", "phase-union band spectrum at one frequency");
  sp->add_option("--model", sp_o.model)->capture_default_str();
  sp->add_option("--frac", sp_o.frac, "frequency p/q")->required();
  sp->add_option("--tol", sp_o.tol)->capture_default_str();
  sp->add_option("--edge-tol", sp_o.edge_tol, "per-edge certificate instead of measure");
  sp->add_flag("--best-effort", sp_o.best_effort,
               "return defect-annotated bands instead of failing on budget");

  ButterflyOpts bf_o;
  auto* bf = app.add_subcommand("butterfly", "band spectra over all reduced p/q");
  bf->add_option("--model", bf_o.model)->capture_default_str();
  bf->add_option("--qmax", bf_o.qmax)->check(CLI::Range(2, 500))->capture_default_str();
  bf->add_option("--tol", bf_o.tol)->capture_default_str();
  bf->add_flag("--svg", bf_o.svg, "also draw the spectra");

  IdsOpts ids_o;
  auto* id = app.add_subcommand("ids", "integrated density of states on a grid");
  id->add_option("--model", ids_o.model)->capture_default_str();
  id->add_option("--frac", ids_o.frac, "frequency p/q")->required();
  id->add_option("--points", ids_o.points)->check(CLI::Range(3, 100000))
      ->capture_default_str();
  id->add_option("--thetas", ids_o.thetas)->check(CLI::Range(1, 100000))
      ->capture_default_str();
  id->add_option("--ksamples", ids_o.ksamples, "0 = exact momentum integral")
      ->check(CLI::Range(0, 100000))->capture_default_str();
  id->add_option("--tol", ids_o.tol, "tolerance for the default-range sweep")
      ->capture_default_str();
  auto* emin_opt = id->add_option("--emin", ids_o.emin);
  auto* emax_opt = id->add_option("--emax", ids_o.emax);
  emin_opt->needs(emax_opt);
  emax_opt->needs(emin_opt);

  LyapunovOpts ly_o;
  auto* ly = app.add_subcommand("lyapunov", "transfer-matrix Lyapunov exponent");
  ly->add_option("--model", ly_o.model)->capture_default_str();
  ly->add_option("--alpha", ly_o.alpha, "golden | silver | p/q | decimal")
      ->capture_default_str();
  ly->add_option("--energy", ly_o.energies, "energy (repeatable)");
  ly->add_option("--steps", ly_o.steps)->check(CLI::Range(100, 100000000))
      ->capture_default_str();
  ly->add_option("--thetas", ly_o.thetas)->check(CLI::Range(2, 100000))
      ->capture_default_str();

  GaugeOpts ga_o;
  auto* ga = app.add_subcommand("gauge-verify", "exact operator-algebra relations");
  ga->add_option("--kmax", ga_o.kmax)->check(CLI::Range(1, 1000))->capture_default_str();
  ga->add_option("--mmax", ga_o.mmax)->check(CLI::Range(1, 1000))->capture_default_str();
  ga->add_option("--alpha", ga_o.alphas, "symbolic or p/q (repeatable)")
      ->capture_default_str();

  ChiralOpts ch_o;
  auto* ch = app.add_subcommand("chiral-check",
                                "isospectrality of the doubled-frequency pair");
  ch->add_option("--frac", ch_o.frac, "chiral frequency p/q")->required();
  ch->add_option("--tol", ch_o.tol)->capture_default_str();
  ch->add_option("--ids-points", ch_o.ids_points,
                 "also compare the two IDS on this many grid points");

  ScalingOpts sc_o;
  auto* sc = app.add_subcommand("scaling", "q |sigma| along convergents at critical coupling");
  sc->add_option("--alpha", sc_o.alpha)->capture_default_str();
  sc->add_option("--nmax", sc_o.nmax)->check(CLI::Range(1, 60))->capture_default_str();
  sc->add_option("--tol", sc_o.tol)->capture_default_str();

  DimensionOpts di_o;
  auto* di = app.add_subcommand("dimension", "cover sums and box-counting slope");
  di->add_option("--model", di_o.model)->capture_default_str();
  di->add_option("--alpha", di_o.alpha)->capture_default_str();
  di->add_option("--nmin", di_o.nmin)->check(CLI::Range(1, 60))->capture_default_str();
  di->add_option("--nmax", di_o.nmax)->check(CLI::Range(3, 60))->capture_default_str();
  di->add_option("--C", di_o.C)->capture_default_str();
  di->add_option("--tmin", di_o.tmin)->capture_default_str();
  di->add_option("--tmax", di_o.tmax)->capture_default_str();
  di->add_option("--tstep", di_o.tstep)->capture_default_str();
  di->add_option("--tol", di_o.tol)->capture_default_str();
  di->add_flag("--svg", di_o.svg, "also draw the box-counting fit");

  ContinuityOpts co_o;
  auto* co = app.add_subcommand("continuity", "spectral distance between consecutive convergents");
  co->add_option("--model", co_o.model)->capture_default_str();
  co->add_option("--alpha", co_o.alpha)->capture_default_str();
  co->add_option("--nlo", co_o.nlo)->check(CLI::Range(1, 60))->capture_default_str();
  co->add_option("--nhi", co_o.nhi)->check(CLI::Range(1, 60))->capture_default_str();
  co->add_option("--tol", co_o.tol)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*cf) return run_cf(g, cf_o);
    if (*sp) return run_spectrum(g, sp_o);
    if (*bf) return run_butterfly(g, bf_o);
    if (*id) {
      ids_o.has_range = emin_opt->count() > 0;
      return run_ids(g, ids_o);
    }
    if (*ly) return run_lyapunov(g, ly_o);
    if (*ga) return run_gauge(g, ga_o);
    if (*ch) return run_chiral(g, ch_o);
    if (*sc) return run_scaling(g, sc_o);
    if (*di) return run_dimension(g, di_o);
    if (*co) return run_continuity(g, co_o);
    throw UsageError("no subcommand selected");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace harperlab
