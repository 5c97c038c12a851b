#include "harperlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace harperlab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fold_unit(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f -= 1.0;  // guard against floor rounding at the boundary
  return f;
}
}  // namespace

double TrigPoly::eval(double x) const {
  double s = c0;
  for (const auto& h : terms) {
    double a = kTwoPi * h.j * x;
    s += h.cos_c * std::cos(a) + h.sin_c * std::sin(a);
  }
  return s;
}

double TrigPoly::deriv(double x) const {
  double s = 0.0;
  for (const auto& h : terms) {
    double a = kTwoPi * h.j * x;
    s += kTwoPi * h.j * (-h.cos_c * std::sin(a) + h.sin_c * std::cos(a));
  }
  return s;
}

double TrigPoly::deriv_sup() const {
  double s = 0.0;
  for (const auto& h : terms) s += kTwoPi * h.j * (std::abs(h.cos_c) + std::abs(h.sin_c));
  return s;
}

TrigPoly TrigPoly::shifted(double offset) const {
  TrigPoly out;
  out.c0 = c0;
  out.terms.reserve(terms.size());
  for (const auto& h : terms) {
    double phi = kTwoPi * h.j * offset;
    double c = std::cos(phi), s = std::sin(phi);
    Harmonic nh;
    nh.j = h.j;
    nh.cos_c = h.cos_c * c + h.sin_c * s;
    nh.sin_c = -h.cos_c * s + h.sin_c * c;
    out.terms.push_back(nh);
  }
  return out;
}

CoefficientFamily make_amo(double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("make_amo: lambda must be > 0");
  CoefficientFamily fam;
  fam.kind = FamilyKind::Amo;
  fam.name = "amo";
  fam.v.terms.push_back({1, 2.0 * lambda, 0.0});
  fam.b.c0 = 1.0;
  fam.v_deriv_max = 2.0 * kTwoPi * lambda;  // 4 pi lambda, exact
  fam.b_deriv_max = 0.0;
  fam.lambda = lambda;
  return fam;
}

CoefficientFamily make_chiral() {
  CoefficientFamily fam;
  fam.kind = FamilyKind::Chiral;
  fam.name = "chiral";
  fam.b.terms.push_back({1, 0.0, 2.0});
  fam.v_deriv_max = 0.0;
  fam.b_deriv_max = 2.0 * kTwoPi;  // 4 pi, exact
  fam.b_zeros = {0.0, 0.5};
  return fam;
}

CoefficientFamily make_shifted_chiral(double alpha) {
  double offset = 0.25 + 0.5 * alpha;
  CoefficientFamily fam = make_chiral();
  fam.kind = FamilyKind::ShiftedChiral;
  fam.name = "shifted_chiral";
  fam.b = fam.b.shifted(offset);
  fam.b_zeros.clear();
  for (double z : {0.0, 0.5}) fam.b_zeros.push_back(fold_unit(z - offset));
  std::sort(fam.b_zeros.begin(), fam.b_zeros.end());
  return fam;
}

CoefficientFamily make_shifted_chiral(const Frac& alpha) {
  return make_shifted_chiral(alpha.value());
}

namespace {

// Falsification pass for user-stated family metadata.
void validate_family(const CoefficientFamily& fam) {
  const int kSamples = 4096;
  for (double z : fam.b_zeros) {
    if (z < 0.0 || z >= 1.0)
      throw std::invalid_argument("family: b zero outside [0,1)");
    if (std::abs(fam.b_at(z)) >= 1e-12)
      throw std::invalid_argument("family: listed b zero is not a zero");
  }
  const double eps = 1e-3;
  for (int i = 0; i < kSamples; ++i) {
    double x = (i + 0.5) / kSamples;
    double near_zero_dist = 1.0;
    for (double z : fam.b_zeros)
      for (int sh = -1; sh <= 1; ++sh)
        near_zero_dist = std::min(near_zero_dist, std::abs(x - z - sh));
    if (near_zero_dist > eps && std::abs(fam.b_at(x)) < 1e-12)
      throw std::invalid_argument("family: b vanishes away from the listed zeros");
    // finite differences must stay under the stated sup bounds
    const double h = 1e-6;
    double dv = std::abs(fam.v_at(x + h) - fam.v_at(x - h)) / (2 * h);
    double db = std::abs(fam.b_at(x + h) - fam.b_at(x - h)) / (2 * h);
    if (dv > fam.v_deriv_max * (1 + 1e-6) + 1e-9)
      throw std::invalid_argument("family: stated sup|v'| falsified");
    if (db > fam.b_deriv_max * (1 + 1e-6) + 1e-9)
      throw std::invalid_argument("family: stated sup|b'| falsified");
  }
}

}  // namespace

CoefficientFamily make_custom(std::string name, TrigPoly v, TrigPoly b,
                              double v_deriv_max, double b_deriv_max,
                              std::vector<double> b_zeros) {
  CoefficientFamily fam;
  fam.kind = FamilyKind::Custom;
  fam.name = std::move(name);
  fam.v = std::move(v);
  fam.b = std::move(b);
  fam.v_deriv_max = v_deriv_max;
  fam.b_deriv_max = b_deriv_max;
  fam.b_zeros = std::move(b_zeros);
  std::sort(fam.b_zeros.begin(), fam.b_zeros.end());
  validate_family(fam);
  return fam;
}

namespace {

double json_number(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    // rational coefficients as "p/q" strings
    const std::string s = j.get<std::string>();
    auto slash = s.find('/');
    if (slash == std::string::npos) return std::stod(s);
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
  }
  throw std::invalid_argument("custom family: coefficient must be number or \"p/q\"");
}

TrigPoly trig_from_json(const nlohmann::json& j) {
  TrigPoly t;
  if (j.contains("const")) t.c0 = json_number(j["const"]);
  auto read = [&](const char* key, bool is_cos) {
    if (!j.contains(key)) return;
    for (const auto& pair : j[key]) {
      if (!pair.is_array() || pair.size() != 2)
        throw std::invalid_argument("custom family: harmonic entries are [j, coef]");
      int harm = pair[0].get<int>();
      if (harm < 1) throw std::invalid_argument("custom family: harmonic index must be >= 1");
      double c = json_number(pair[1]);
      auto it = std::find_if(t.terms.begin(), t.terms.end(),
                             [&](const TrigPoly::Harmonic& h) { return h.j == harm; });
      if (it == t.terms.end()) {
        t.terms.push_back({harm, 0.0, 0.0});
        it = std::prev(t.terms.end());
      }
      (is_cos ? it->cos_c : it->sin_c) = c;
    }
  };
  read("cos", true);
  read("sin", false);
  return t;
}

}  // namespace

CoefficientFamily family_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("v") || !j.contains("b"))
    throw std::invalid_argument("custom family: need v and b");
  std::vector<double> zeros;
  if (j.contains("b_zeros"))
    for (const auto& z : j["b_zeros"]) zeros.push_back(json_number(z));
  return make_custom(j.value("name", std::string("custom")),
                     trig_from_json(j["v"]), trig_from_json(j["b"]),
                     json_number(j.at("v_deriv_max")), json_number(j.at("b_deriv_max")),
                     std::move(zeros));
}

CoefficientFamily parse_model_spec(const std::string& spec) {
  if (spec == "chiral") return make_chiral();
  if (spec.rfind("amo:", 0) == 0) {
    try {
      return make_amo(std::stod(spec.substr(4)));
    } catch (const std::logic_error&) {
      throw UsageError("bad coupling in model spec: " + spec);
    }
  }
  if (spec.rfind("custom:", 0) == 0) {
    std::ifstream in(spec.substr(7));
    if (!in) throw UsageError("cannot open custom model file: " + spec.substr(7));
    std::ostringstream ss;
    ss << in.rdbuf();
    return family_from_json_text(ss.str());
  }
  throw UsageError("unknown model spec: " + spec + " (expected amo:<lambda>|chiral|custom:<file>)");
}

std::string family_token(const CoefficientFamily& fam) {
  switch (fam.kind) {
    case FamilyKind::Amo: {
      std::ostringstream ss;
      ss << "amo:" << fam.lambda;
      return ss.str();
    }
    case FamilyKind::Chiral:
      return "chiral";
    case FamilyKind::ShiftedChiral:
      return "shifted_chiral";
    default:
      return "custom:" + fam.name;
  }
}

double SampledOperator::phase(std::int64_t n) const {
  if (rational) {
    std::int64_t q = alpha_frac.q;
    std::int64_t r = (n % q) * (alpha_frac.p % q) % q;
    r %= q;
    if (r < 0) r += q;
    return theta + static_cast<double>(r) / static_cast<double>(q);
  }
  double f = n * alpha;
  return theta + (f - std::floor(f));
}

SampledOperator make_op(CoefficientFamily fam, const Frac& alpha, double theta) {
  SampledOperator op;
  op.family = std::move(fam);
  op.rational = true;
  op.alpha_frac = alpha;
  op.alpha = alpha.value();
  op.theta = fold_unit(theta);
  return op;
}

SampledOperator make_op(CoefficientFamily fam, double alpha, double theta) {
  SampledOperator op;
  op.family = std::move(fam);
  op.rational = false;
  op.alpha = alpha;
  op.theta = fold_unit(theta);
  return op;
}

std::pair<std::vector<double>, std::vector<double>>
sample_coeffs(const SampledOperator& op, std::int64_t n0, std::int64_t n1) {
  if (n1 < n0) throw std::invalid_argument("sample_coeffs: empty range");
  std::vector<double> vs, bs;
  vs.reserve(n1 - n0 + 1);
  bs.reserve(n1 - n0 + 1);
  for (std::int64_t n = n0; n <= n1; ++n) {
    vs.push_back(op.v_n(n));
    bs.push_back(op.b_n(n));
  }
  return {std::move(vs), std::move(bs)};
}

}  // namespace harperlab
