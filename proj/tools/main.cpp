#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "uecomp/ball.hpp"
#include "uecomp/bounds.hpp"
#include "uecomp/combine.hpp"
#include "uecomp/config.hpp"
#include "uecomp/hypvec.hpp"
#include "uecomp/kernel.hpp"
#include "uecomp/polyvec.hpp"
#include "uecomp/report.hpp"

namespace {

using namespace uecomp;

// exit codes by error category
constexpr int kConfigError = 2;
constexpr int kResourceError = 3;
constexpr int kNumericError = 4;
constexpr int kIoError = 5;

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "key=value config file");
  cmd->add_option("--set", opts.overrides,
                  "config override key=value (repeatable)");
  cmd->add_option("-o,--out", opts.out_path, "output path (default stdout)");
}

RunConfig load_config(const CommonOpts& opts) {
  RunConfig cfg = opts.config_path.empty()
                      ? RunConfig{}
                      : RunConfig::from_file(opts.config_path);
  for (const std::string& kv : opts.overrides) {
    size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw InvalidSpecError("--set wants key=value, got: " + kv);
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

CsvMetadata metadata(const RunConfig& cfg) {
  CsvMetadata meta;
  meta.tool_version = tool_version();
  meta.config_hash = cfg.hash();
  meta.seed = static_cast<uint64_t>(cfg.get_int("seed", 0));
  return meta;
}

void emit(const CommonOpts& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) throw IoError("cannot open output path: " + opts.out_path);
  out << text;
}

void trailer(std::ostream& os, const CsvMetadata& meta) {
  os << "# tool_version=" << meta.tool_version << '\n';
  os << "# config_hash=" << meta.config_hash << '\n';
  os << "# seed=" << meta.seed << '\n';
}

BallBudget budget_from(const RunConfig& cfg) {
  BallBudget b;
  b.max_bytes = static_cast<uint64_t>(
      cfg.get_int("budget_bytes", static_cast<int64_t>(b.max_bytes)));
  b.max_elements = static_cast<uint64_t>(
      cfg.get_int("budget_elements", static_cast<int64_t>(b.max_elements)));
  return b;
}

int cmd_ball(const CommonOpts& opts) {
  RunConfig cfg = load_config(opts);
  auto model = make_any_group(cfg.require_string("group"));
  int64_t radius = cfg.get_int("radius", 8);
  BallCountCache counts(*model, budget_from(cfg));
  std::ostringstream os;
  os << "r,count\n";
  for (int64_t r = 0; r <= radius; ++r)
    os << r << ',' << counts.count(static_cast<double>(r)) << '\n';
  trailer(os, metadata(cfg));
  emit(opts, os.str());
  return 0;
}

int cmd_verify(const CommonOpts& opts, const std::string& selector) {
  RunConfig cfg = load_config(opts);
  BallBudget budget = budget_from(cfg);
  VerificationReport report;
  if (selector == "poly") {
    auto model = make_any_group(cfg.require_string("group"));
    report = verify_poly_lemma(model, cfg.get_int("n", 4),
                               cfg.get_double("p", 0.05), budget);
  } else if (selector == "hyp") {
    auto model = make_any_group(cfg.get_string("group", "F2"));
    HypParams params;
    params.n = cfg.get_int("n", 2);
    params.p = cfg.get_double("p", 0.05);
    params.q = cfg.has("q") ? cfg.get_double("q", 0.0)
                            : HypParams::q_midpoint(params.p);
    params.a = BoundaryPoint::parse(cfg.get_string("preperiod", ""),
                                    cfg.get_string("period", "b"), *model);
    report = verify_hyp_lemma(*model, params, cfg.get_int("radius", 3), budget);
  } else if (selector == "kernel") {
    auto model = make_any_group(cfg.require_string("group"));
    double radius = cfg.get_double("radius", 6.0);
    double eps = cfg.get_double("eps", 0.1);
    Ball ball = enumerate_ball(*model, radius, budget);
    EmbeddingFn embed = [](const Element& x) {
      Eigen::VectorXd v(x.w.size());
      for (size_t i = 0; i < x.w.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = static_cast<double>(x.w[i]);
      return v;
    };
    double t = schoenberg_t(eps, radius);
    ScaleFamily family = schoenberg_family(ball, embed, t);
    report = verify_family(family, *model, radius, eps,
                           cfg.get_double("far", 1e18));
  } else if (selector == "combine") {
    std::string kind = cfg.get_string("extension", "trivial");
    int64_t n = cfg.get_int("n", 2);
    double p = cfg.get_double("p", 0.05);
    std::shared_ptr<const ExtensionModel> ext;
    std::shared_ptr<const GroupModel> quotient;
    if (kind == "heisenberg") {
      ext = make_heisenberg_extension(cfg.get_int("section_radius", 24),
                                      budget);
      quotient = make_any_group("Z^2");
    } else {
      auto q = make_any_group(cfg.get_string("group", "Z"));
      auto k = make_any_group(cfg.get_string("group2", "dsum:1,2,2"));
      ext = make_trivial_extension(q, k);
      quotient = q;
    }
    auto gfam = std::make_shared<PolyFamily>(
        poly_family(quotient, n, p, budget));
    gfam->materialize_support(budget);
    const ExtensionModel& e = *ext;
    EmbeddingFn kernel_embed = [&e](const Element& h) {
      Eigen::VectorXd v(1);
      double sign = h.w.empty() || h.w[0] >= 0 ? 1.0 : -1.0;
      v(0) = sign * e.kernel_induced_length(h);
      return v;
    };
    CombineBuild build = build_combined(
        ext, quotient_family_poly(gfam), gfam->support_radius(), n, p,
        cfg.get_double("delta", 1.0), false, kernel_embed,
        cfg.get_double("radius", 2.0), budget);
    report = verify_combined(*build.f, *build.gamma_ball);
  } else {
    throw InvalidSpecError("unknown verify selector: " + selector);
  }
  std::ostringstream os;
  write_report_csv(os, report, metadata(cfg));
  emit(opts, os.str());
  return report.all_pass() ? 0 : 1;
}

int cmd_bound(const CommonOpts& opts, const std::string& formula) {
  RunConfig cfg = load_config(opts);
  double delta = cfg.get_double("delta", 1.0);
  BoundReport report;
  if (formula == "extension_poly") {
    report = extension_bound_poly(delta);
  } else if (formula == "extension_hyp") {
    report = extension_bound_hyp(delta);
  } else if (formula == "wreath") {
    report = wreath_bound(cfg.get_double("alpha", 1.0), cfg.get_int("d", 1));
  } else if (formula == "limit") {
    LimitSystem sys;
    sys.delta = delta;
    sys.C = {cfg.get_double("C", 1.0), cfg.get_double("C_exp", 0.0)};
    sys.Ctilde = {cfg.get_double("Ct", 1.0), cfg.get_double("Ct_exp", 0.0)};
    sys.D = {cfg.get_double("D", 0.0), cfg.get_double("D_exp", 0.0)};
    sys.Dtilde = {cfg.get_double("Dt", 0.0), cfg.get_double("Dt_exp", 0.0)};
    sys.g = {cfg.get_double("g", 1.0), cfg.get_double("g_exp", 0.0)};
    LimitVariant variant = cfg.get_string("variant", "standard") == "quasi"
                               ? LimitVariant::QuasiGeodesic
                               : LimitVariant::Standard;
    report = limit_bound(sys, cfg.get_int("n_max", 1000000), variant);
  } else {
    throw InvalidSpecError("unknown bound formula: " + formula);
  }
  std::ostringstream os;
  os << "formula,value,numeric_proxy,symbolic_limit,symbolic_at_nmax,trace\n";
  os << report.formula << ',' << format_double(report.value) << ','
     << format_double(report.numeric_proxy) << ','
     << (report.symbolic_limit ? format_double(*report.symbolic_limit) : "")
     << ','
     << (report.symbolic_at_nmax ? format_double(*report.symbolic_at_nmax)
                                 : "")
     << ',' << report.trace << '\n';
  trailer(os, metadata(cfg));
  emit(opts, os.str() + bound_to_text(report));
  return 0;
}

int cmd_estimate(const CommonOpts& opts) {
  RunConfig cfg = load_config(opts);
  auto model = make_any_group(cfg.require_string("group"));
  double radius = cfg.get_double("radius", 64.0);
  std::string mode = cfg.get_string("embedding", "identity");
  Ball ball = enumerate_ball(*model, radius, budget_from(cfg));
  auto embed = [&](const Element& x) {
    Eigen::VectorXd v(x.w.size());
    for (size_t i = 0; i < x.w.size(); ++i) {
      double c = static_cast<double>(x.w[i]);
      v(static_cast<Eigen::Index>(i)) =
          mode == "sqrt" ? (c < 0 ? -std::sqrt(-c) : std::sqrt(c)) : c;
    }
    return v;
  };
  Element origin = model->identity();
  Eigen::VectorXd f0 = embed(origin);
  std::vector<std::pair<double, double>> pairs;
  std::ostringstream pts;
  pts << "log_d,log_df\n";
  for (const BallEntry& e : ball.entries()) {
    if (e.len <= 0) continue;
    double df = (embed(e.x) - f0).norm();
    pairs.push_back({e.len, df});
    if (df > 0)
      pts << format_double(std::log(e.len)) << ','
          << format_double(std::log(df)) << '\n';
  }
  CompressionEstimate est =
      empirical_compression(pairs, cfg.get_double("d_min", 1.0));
  std::ostringstream os;
  os << "exponent,intercept,residual,bins,pairs_used,degenerate\n";
  os << format_double(est.exponent) << ',' << format_double(est.intercept)
     << ',' << format_double(est.residual) << ',' << est.bins << ','
     << est.pairs_used << ',' << (est.degenerate ? 1 : 0) << '\n';
  trailer(os, metadata(cfg));
  emit(opts, os.str());
  std::string pts_path = cfg.get_string("points_out", "");
  if (!pts_path.empty()) {
    std::ofstream pf(pts_path, std::ios::binary);
    if (!pf) throw IoError("cannot open points path: " + pts_path);
    pf << pts.str();
  }
  return 0;
}

int cmd_cache(const CommonOpts& opts, bool load) {
  RunConfig cfg = load_config(opts);
  auto model = make_any_group(cfg.require_string("group"));
  const char* env = std::getenv("UECOMP_CACHE_DIR");
  std::string dir = cfg.get_string("cache_dir", env ? env : ".");
  std::string path = dir + "/" + cfg.get_string("cache_file", "ball.uecb");
  std::ostringstream os;
  if (load) {
    Ball ball = cache_load(*model, path);
    os << "spec,radius,count\n";
    os << ball.spec().canonical() << ',' << format_double(ball.radius()) << ','
       << ball.size() << '\n';
  } else {
    Ball ball = enumerate_ball(*model, cfg.get_double("radius", 8.0),
                               budget_from(cfg));
    cache_save(ball, path);
    os << "spec,radius,count,path\n";
    os << ball.spec().canonical() << ',' << format_double(ball.radius()) << ','
       << ball.size() << ',' << path << '\n';
  }
  trailer(os, metadata(cfg));
  emit(opts, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"explicit uniform-embedding constructions and compression "
               "bounds for finitely generated groups"};
  app.require_subcommand(1);

  CommonOpts ball_opts, verify_opts, bound_opts, est_opts, cache_opts;
  std::string selector = "poly", formula = "extension_poly";
  bool cache_load_flag = false;

  CLI::App* ball = app.add_subcommand("ball", "ball sizes for a group");
  add_common(ball, ball_opts);

  CLI::App* verify = app.add_subcommand("verify", "verification reports");
  add_common(verify, verify_opts);
  verify->add_option("--selector", selector,
                     "kernel | poly | hyp | combine");

  CLI::App* bound = app.add_subcommand("bound", "compression lower bounds");
  add_common(bound, bound_opts);
  bound->add_option("--formula", formula,
                    "extension_poly | extension_hyp | wreath | limit");

  CLI::App* est = app.add_subcommand("estimate", "empirical exponent");
  add_common(est, est_opts);

  CLI::App* cache = app.add_subcommand("cache", "ball cache save/load");
  add_common(cache, cache_opts);
  cache->add_flag("--load", cache_load_flag, "load and summarize");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ball->parsed()) return cmd_ball(ball_opts);
    if (verify->parsed()) return cmd_verify(verify_opts, selector);
    if (bound->parsed()) return cmd_bound(bound_opts, formula);
    if (est->parsed()) return cmd_estimate(est_opts);
    if (cache->parsed()) return cmd_cache(cache_opts, cache_load_flag);
  } catch (const InvalidSpecError& e) {
    std::cerr << "error(config): " << e.what() << '\n';
    return kConfigError;
  } catch (const UnsupportedModelError& e) {
    std::cerr << "error(config): " << e.what() << '\n';
    return kConfigError;
  } catch (const ResourceError& e) {
    std::cerr << "error(resource): " << e.what() << '\n';
    return kResourceError;
  } catch (const NumericError& e) {
    std::cerr << "error(numeric): " << e.what() << '\n';
    return kNumericError;
  } catch (const IoError& e) {
    std::cerr << "error(io): " << e.what() << '\n';
    return kIoError;
  }
  return 0;
}
