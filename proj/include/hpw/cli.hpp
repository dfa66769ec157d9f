#ifndef HPW_CLI_HPP
#define HPW_CLI_HPP

/// \file
/// Command-line driver. One subcommand per analysis; the report is JSON on
/// stdout (or --out), curves go inline or to CSV files under --curves.
///
/// Exit codes: 0 definitive verdict / success, 1 inconclusive (or a
/// hypothesis that does not hold), 2 usage or evaluation error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hpw/bloch.hpp"
#include "hpw/expr.hpp"
#include "hpw/halfnorm.hpp"
#include "hpw/linemax.hpp"
#include "hpw/theorems.hpp"
#include "hpw/weights.hpp"

namespace hpw::cli {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0";

enum ExitCode : int { kDefinitive = 0, kInconclusive = 1, kError = 2 };

/// Finite numbers as numbers, otherwise the "+inf" / "-inf" / "unknown" markers.
inline json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "unknown";
  return v > 0 ? "+inf" : "-inf";
}

inline json complex_json(Complex z) { return json{{"re", num(z.real())}, {"im", num(z.imag())}}; }

inline std::string format_csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct RunConfig {
  std::string subcommand;
  std::string f_text;
  std::string fprime_text;
  std::string p_text;
  std::optional<std::string> out_path;
  std::optional<std::string> curves_dir;

  // weights
  double tail_drop = 10.0;
  double head_drop = 50.0;
  double slope_backoff = 0.01;
  double tol_zero = 1e-9;
  // line maxima
  double x_cap = 1073741824.0;
  double decay_factor = 1e-6;
  // norm
  double y_min_exp = -20.0;
  double y_max_exp = 20.0;
  // mline
  double t_min = 1.0 / 16.0;
  double t_max = 16.0;
  std::size_t points = 64;
  double tol_convexity = 1e-6;
  // membership
  int c_max_exp = 24;
  double eps_member = 1e-6;
  // theorem3
  double t3_max = 1024.0;
  double d_floor = -20.0;
  // bloch
  double tol_gap = 1e-4;
  bool skip_little = false;
  // witness
  std::string kind = "big";
  std::optional<double> a;
  double b = 0.0;
  bool literal = false;
};

class Session {
 public:
  Session(const RunConfig& cfg, std::ostream& err) : cfg_(cfg), err_(err) {}

  LineMaxOptions line_opts() const {
    LineMaxOptions o;
    o.x_cap = cfg_.x_cap;
    o.decay_factor = cfg_.decay_factor;
    return o;
  }

  MinorantOptions minorant_opts() const {
    MinorantOptions o;
    o.tail_drop = cfg_.tail_drop;
    o.head_drop = cfg_.head_drop;
    o.slope_backoff = cfg_.slope_backoff;
    return o;
  }

  std::vector<double> schedule() const {
    std::vector<double> s;
    for (int k = 1; k <= cfg_.c_max_exp; ++k) s.push_back(std::exp2(k));
    return s;
  }

  MembershipOptions membership_opts() const {
    MembershipOptions o;
    o.eps_member = cfg_.eps_member;
    o.tail.line = line_opts();
    o.tail.x_cap = cfg_.x_cap;
    return o;
  }

  Theorem3Options theorem3_opts() const {
    Theorem3Options o;
    o.t_max = cfg_.t3_max;
    o.d_floor = cfg_.d_floor;
    o.line = line_opts();
    o.schedule = schedule();
    o.membership = membership_opts();
    return o;
  }

  json curve(const SampledCurve& c, const std::string& name) {
    if (cfg_.curves_dir) {
      std::filesystem::create_directories(*cfg_.curves_dir);
      const std::filesystem::path path = std::filesystem::path(*cfg_.curves_dir) / (name + ".csv");
      std::ofstream os(path, std::ios::binary);
      if (!os) throw std::runtime_error("cannot write " + path.string());
      os << "t,value\n";
      for (std::size_t i = 0; i < c.size(); ++i) os << format_csv_double(c.t(i)) << ',' << format_csv_double(c.v(i)) << '\n';
      return path.string();
    }
    json t = json::array(), v = json::array();
    for (std::size_t i = 0; i < c.size(); ++i) {
      t.push_back(num(c.t(i)));
      v.push_back(num(c.v(i)));
    }
    return json{{"label", c.label()}, {"t", t}, {"value", v}};
  }

  static json verdict_json(const ClassificationVerdict& v) {
    json j{{"verdict", to_string(v.kind)}, {"evidence", v.evidence}};
    if (v.witness) j["witness"] = json{{"a", num(v.witness->a)}, {"b", num(v.witness->b)}};
    json s = json::array();
    for (const auto& [t, val] : v.samples) s.push_back(json{{"t", num(t)}, {"value", num(val)}});
    j["samples"] = s;
    return j;
  }

  static json membership_json(const MembershipReport& m) {
    json tail = json::array();
    for (const auto& [c, v] : m.tail) tail.push_back(json{{"c", num(c)}, {"sup", num(v)}});
    return json{{"in_small_space", to_string(m.in_small_space)}, {"tail", tail}, {"diagnostics", m.diagnostics}};
  }

  int classify_weight(json& inputs, json& result, json& curves) {
    inputs["p"] = cfg_.p_text;
    const Weight w = make_weight(parse(cfg_.p_text, "t"));
    const ClassificationVerdict big = classify_big_space(w, minorant_opts());
    const ClassificationVerdict small = classify_small_space(w, minorant_opts(), cfg_.tol_zero);
    const LimitEstimate lim = limit_at_zero(w, cfg_.tol_zero);
    result["condition_one"] = w.condition_one();
    result["big_space"] = verdict_json(big);
    result["small_space"] = verdict_json(small);
    result["limit_at_zero"] = json{{"value", num(lim.value)}, {"trend", to_string(lim.trend)}};
    if (big.witness) result["big_space"]["witness_expression"] = to_string(witness_big(big.witness->a, big.witness->b));
    if (small.witness) result["small_space"]["witness_expression"] = to_string(witness_small(small.witness->a));
    curves["neglog_p"] = curve(neglog_curve(w), "neglog_p");
    const bool definitive = big.kind != Verdict::Inconclusive && small.kind != Verdict::Inconclusive;
    return definitive ? kDefinitive : kInconclusive;
  }

  int norm(json& inputs, json& result, json&) {
    inputs["f"] = cfg_.f_text;
    inputs["p"] = cfg_.p_text;
    const Expr f = parse(cfg_.f_text, "z");
    const Weight w = make_weight(parse(cfg_.p_text, "t"));
    NormOptions o;
    o.y_lo_exp = cfg_.y_min_exp;
    o.y_hi_exp = cfg_.y_max_exp;
    o.line = line_opts();
    const NormEstimate ne = weighted_norm(f, w, o);
    result["value"] = num(ne.value);
    result["log_value"] = num(ne.log_value);
    result["argmax"] = ne.argmax ? complex_json(*ne.argmax) : json(nullptr);
    result["status"] = to_string(ne.status);
    result["y_grid"] = json{{"min", num(ne.y_min)}, {"max", num(ne.y_max)}, {"points", ne.y_points}};
    return kDefinitive;
  }

  int mline(json& inputs, json& result, json& curves) {
    inputs["f"] = cfg_.f_text;
    const Expr f = parse(cfg_.f_text, "z");
    const std::vector<double> grid = geometric_grid(cfg_.t_min, cfg_.t_max, cfg_.points);
    const SampledCurve c = mf_curve(f, grid, line_opts());
    const ConvexityReport conv = check_log_convexity(c, cfg_.tol_convexity);
    result["convexity"] = json{{"passed", conv.passed},
                               {"worst_defect", num(conv.worst_defect)},
                               {"worst_at", num(conv.worst_at)},
                               {"tol", num(conv.tol)}};
    if (conv.passed) {
      const AffineWitness m = affine_minorant_of_curve(c, cfg_.tol_convexity);
      result["minorant"] = json{{"a", num(m.a)}, {"b", num(m.b)}};
    } else {
      result["minorant"] = nullptr;
      warnings_.push_back("curve is not log-convex; no affine minorant computed");
    }
    curves["ln_Mf"] = curve(c, "ln_Mf");
    return kDefinitive;
  }

  int membership(json& inputs, json& result, json&) {
    inputs["f"] = cfg_.f_text;
    inputs["p"] = cfg_.p_text;
    const Expr f = parse(cfg_.f_text, "z");
    const Weight w = make_weight(parse(cfg_.p_text, "t"));
    const MembershipReport m = is_in_small_space(f, w, schedule(), membership_opts());
    result = membership_json(m);
    return m.in_small_space == Membership::Inconclusive ? kInconclusive : kDefinitive;
  }

  int theorem3(json& inputs, json& result, json& curves) {
    inputs["f"] = cfg_.f_text;
    inputs["p"] = cfg_.p_text;
    const Expr f = parse(cfg_.f_text, "z");
    const Weight w = make_weight(parse(cfg_.p_text, "t"));
    try {
      const Theorem3Report r = theorem3_check(f, w, theorem3_opts());
      result["status"] = "checked";
      result["a_hat"] = num(r.a_hat);
      result["running_min_slope"] = num(r.slope.running_min);
      result["tail_monotone"] = r.tail_monotone;
      result["diverges_to_minus_inf"] = r.diverges_to_minus_inf;
      result["hypothesis_met"] = r.hypothesis_met;
      result["minorant_slope"] = num(r.minorant_slope);
      result["log_trend_slope"] = num(r.log_trend_slope);
      result["d_final"] = num(r.d_curve.values().back());
      result["membership"] = membership_json(r.membership);
      curves["ln_Mf"] = curve(r.log_mf, "ln_Mf");
      curves["D"] = curve(r.d_curve, "D");
      return r.hypothesis_met && r.diverges_to_minus_inf ? kDefinitive : kInconclusive;
    } catch (const HypothesisNotMetError& e) {
      result["status"] = "hypothesis-not-met";
      result["reason"] = e.what();
      if (e.membership()) result["membership"] = membership_json(*e.membership());
      return kInconclusive;
    }
  }

  int f_properties(json& inputs, json& result, json& curves) {
    inputs["f"] = cfg_.f_text;
    inputs["p"] = cfg_.p_text;
    const Expr f = parse(cfg_.f_text, "z");
    const Weight w = make_weight(parse(cfg_.p_text, "t"));
    FPropertyOptions o;
    o.theorem3 = theorem3_opts();
    try {
      const FPropertyReport r = verify_F_properties(f, w, o);
      result["status"] = "checked";
      result["a_hat"] = num(r.a_hat);
      result["A"] = num(r.A);
      json checks = json::array();
      for (const auto& c : r.checks) {
        checks.push_back(json{{"name", c.name}, {"passed", c.passed}, {"evidence", num(c.defect)}, {"detail", c.detail}});
      }
      result["checks"] = checks;
      result["all_passed"] = r.all_passed();
      curves["ln_MF"] = curve(r.log_mF, "ln_MF");
      return r.all_passed() ? kDefinitive : kInconclusive;
    } catch (const HypothesisNotMetError& e) {
      result["status"] = "hypothesis-not-met";
      result["reason"] = e.what();
      if (e.membership()) result["membership"] = membership_json(*e.membership());
      return kInconclusive;
    }
  }

  int bloch_compare(json& inputs, json& result, json&) {
    if (cfg_.f_text.empty() == cfg_.fprime_text.empty()) {
      throw CLI::ValidationError("bloch-compare", "give exactly one of --f or --fprime");
    }
    std::optional<DiskFunction> df;
    if (!cfg_.f_text.empty()) {
      inputs["f"] = cfg_.f_text;
      df = DiskFunction::from_function(parse(cfg_.f_text, "w"));
    } else {
      inputs["fprime"] = cfg_.fprime_text;
      df = DiskFunction::from_derivative(parse(cfg_.fprime_text, "w"));
    }
    const NormComparison cmp = compare_norms(*df, cfg_.tol_gap);
    result["g_f"] = to_string(g_transform(*df));
    result["bloch_seminorm"] = num(cmp.bloch);
    result["weighted_norm"] = num(cmp.half_plane);
    result["gap"] = num(cmp.gap);
    result["passed"] = cmp.passed;
    bool ok = cmp.passed;
    if (!cfg_.skip_little) {
      LittleBlochOptions lo;
      lo.schedule = schedule();
      lo.membership = membership_opts();
      const LittleBlochReport lb = little_bloch_check(*df, lo);
      json rings = json::array();
      for (const auto& [gap, v] : lb.ring_max) rings.push_back(json{{"one_minus_r", num(gap)}, {"max", num(v)}});
      result["little_bloch"] = json{{"disk_side", to_string(lb.disk_side)},
                                    {"ring_max", rings},
                                    {"half_plane", membership_json(lb.half_plane)},
                                    {"agree", lb.agree}};
      ok = ok && lb.agree;
      if (!lb.agree) warnings_.push_back("disk and half-plane little-Bloch assessments disagree");
    }
    return ok ? kDefinitive : kInconclusive;
  }

  int witness(json& inputs, json& result, json&) {
    inputs["kind"] = cfg_.kind;
    if (cfg_.kind != "big" && cfg_.kind != "small") throw CLI::ValidationError("--kind", "must be big or small");
    double a = 0.0, b = cfg_.b;
    if (cfg_.a) {
      a = *cfg_.a;
    } else if (!cfg_.p_text.empty()) {
      inputs["p"] = cfg_.p_text;
      const Weight w = make_weight(parse(cfg_.p_text, "t"));
      const ClassificationVerdict v =
          cfg_.kind == "big" ? classify_big_space(w, minorant_opts()) : classify_small_space(w, minorant_opts(), cfg_.tol_zero);
      result["verdict"] = verdict_json(v);
      if (!v.witness) {
        result["expression"] = nullptr;
        return v.kind == Verdict::Trivial ? kDefinitive : kInconclusive;
      }
      a = v.witness->a;
      b = v.witness->b;
    } else {
      throw CLI::ValidationError("witness", "give --a (and --b) or --p");
    }
    inputs["a"] = num(a);
    inputs["b"] = num(b);
    inputs["literal"] = cfg_.literal;
    const Expr e = cfg_.kind == "big"
                       ? witness_big(a, b)
                       : witness_small(a, cfg_.literal ? SmallWitnessForm::Literal : SmallWitnessForm::Corrected);
    result["expression"] = to_string(e);
    return kDefinitive;
  }

  std::vector<std::string>& warnings() { return warnings_; }

 private:
  const RunConfig& cfg_;
  std::ostream& err_;
  std::vector<std::string> warnings_;
};

/// Parses argv, runs one subcommand, writes the report. Returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Weighted spaces of holomorphic functions on the upper half plane"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", cfg.out_path, "Write the JSON report here instead of stdout");
  app.add_option("--curves", cfg.curves_dir, "Write curves as CSV files into this directory");

  auto line_flags = [&](CLI::App* s) {
    s->add_option("--x-cap", cfg.x_cap, "Largest half-width of a line scan")->check(CLI::PositiveNumber);
    s->add_option("--decay-factor", cfg.decay_factor, "Edge/peak ratio that stops a line scan")->check(CLI::PositiveNumber);
  };
  auto f_flag = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--f", cfg.f_text, "Holomorphic function of z");
    if (required) o->required();
  };
  auto p_flag = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--p", cfg.p_text, "Weight function of t");
    if (required) o->required();
  };
  auto membership_flags = [&](CLI::App* s) {
    s->add_option("--c-max-exp", cfg.c_max_exp, "Schedule c = 2..2^k")->check(CLI::Range(4, 40));
    s->add_option("--eps-member", cfg.eps_member, "Tail level that counts as vanished")->check(CLI::PositiveNumber);
  };

  auto* cw = app.add_subcommand("classify-weight", "Triviality of Lambda(p) and lambda(p)");
  p_flag(cw, true);
  cw->add_option("--tail-drop", cfg.tail_drop)->check(CLI::PositiveNumber);
  cw->add_option("--head-drop", cfg.head_drop)->check(CLI::PositiveNumber);
  cw->add_option("--slope-backoff", cfg.slope_backoff)->check(CLI::PositiveNumber);
  cw->add_option("--tol-zero", cfg.tol_zero)->check(CLI::PositiveNumber);

  auto* nm = app.add_subcommand("norm", "Weighted sup-norm of f");
  f_flag(nm, true);
  p_flag(nm, true);
  line_flags(nm);
  nm->add_option("--y-min-exp", cfg.y_min_exp, "y grid starts at 2^this");
  nm->add_option("--y-max-exp", cfg.y_max_exp, "y grid ends at 2^this");

  auto* ml = app.add_subcommand("mline", "ln Mf curve and log-convexity");
  f_flag(ml, true);
  line_flags(ml);
  ml->add_option("--t-min", cfg.t_min)->check(CLI::PositiveNumber);
  ml->add_option("--t-max", cfg.t_max)->check(CLI::PositiveNumber);
  ml->add_option("--points", cfg.points)->check(CLI::Range(3, 100000));
  ml->add_option("--tol-convexity", cfg.tol_convexity)->check(CLI::PositiveNumber);

  auto* mb = app.add_subcommand("membership", "lambda(p) membership through tails outside K_c");
  f_flag(mb, true);
  p_flag(mb, true);
  line_flags(mb);
  membership_flags(mb);

  auto* t3 = app.add_subcommand("theorem3", "Asymptotic check ln Mf(t) - a t -> -inf");
  f_flag(t3, true);
  p_flag(t3, true);
  line_flags(t3);
  membership_flags(t3);
  t3->add_option("--t-max", cfg.t3_max)->check(CLI::PositiveNumber);
  t3->add_option("--d-floor", cfg.d_floor);

  auto* fp = app.add_subcommand("f-properties", "Properties of F(z) = e^{iaz} f(z)");
  f_flag(fp, true);
  p_flag(fp, true);
  line_flags(fp);
  membership_flags(fp);
  fp->add_option("--t-max", cfg.t3_max)->check(CLI::PositiveNumber);

  auto* bc = app.add_subcommand("bloch-compare", "Bloch seminorm against the weighted norm of g_f");
  bc->add_option("--f", cfg.f_text, "Disk function of w");
  bc->add_option("--fprime", cfg.fprime_text, "Derivative of the disk function, in w");
  bc->add_option("--tol", cfg.tol_gap)->check(CLI::PositiveNumber);
  bc->add_flag("--skip-little", cfg.skip_little, "Skip the little-Bloch (B0) check");
  membership_flags(bc);

  auto* wt = app.add_subcommand("witness", "Emit a witness function");
  wt->add_option("--kind", cfg.kind, "big or small");
  wt->add_option("--a", cfg.a);
  wt->add_option("--b", cfg.b);
  p_flag(wt, false);
  wt->add_flag("--literal", cfg.literal, "Use the printed exponent i(a+1)z for the small witness");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kError;
  }
  for (auto* s : app.get_subcommands()) cfg.subcommand = s->get_name();

  const auto start = std::chrono::steady_clock::now();
  Session session(cfg, err);
  json inputs = json::object(), result = json::object(), curves = json::object();
  int code = kError;
  try {
    if (cfg.subcommand == "classify-weight") code = session.classify_weight(inputs, result, curves);
    else if (cfg.subcommand == "norm") code = session.norm(inputs, result, curves);
    else if (cfg.subcommand == "mline") code = session.mline(inputs, result, curves);
    else if (cfg.subcommand == "membership") code = session.membership(inputs, result, curves);
    else if (cfg.subcommand == "theorem3") code = session.theorem3(inputs, result, curves);
    else if (cfg.subcommand == "f-properties") code = session.f_properties(inputs, result, curves);
    else if (cfg.subcommand == "bloch-compare") code = session.bloch_compare(inputs, result, curves);
    else if (cfg.subcommand == "witness") code = session.witness(inputs, result, curves);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json report{{"schema_version", kSchemaVersion},
              {"subcommand", cfg.subcommand},
              {"inputs", inputs},
              {"result", result},
              {"curves", curves},
              {"warnings", session.warnings()},
              {"timing", json{{"elapsed_seconds", elapsed}}}};
  const std::string text = report.dump(2) + "\n";
  if (cfg.out_path) {
    std::ofstream os(*cfg.out_path, std::ios::binary);
    if (!os) {
      err << "error: cannot write " << *cfg.out_path << '\n';
      return kError;
    }
    os << text;
  } else {
    out << text;
  }
  return code;
}

}  // namespace hpw::cli

#endif  // HPW_CLI_HPP
