#include "qeq/cli.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qeq/bump.hpp"
#include "qeq/cf.hpp"
#include "qeq/config.hpp"
#include "qeq/counting.hpp"
#include "qeq/errors.hpp"
#include "qeq/expsums.hpp"
#include "qeq/frac.hpp"
#include "qeq/parallel.hpp"
#include "qeq/sieve.hpp"

namespace qeq {

namespace {

constexpr const char* kVersion = "0.1.0";

using json = nlohmann::ordered_json;

json complex_json(const cdouble& z) { return json::array({z.real(), z.imag()}); }

// Round-trippable doubles: the default dtoa in the JSON library is already
// shortest-exact, so no extra formatting is needed; this is just a hook to
// keep all double emission in one place.
double num(double v) { return v; }

struct GlobalOpts {
  int precision = kFracBits;
  int threads = 1;
  std::uint64_t seed = 0;
  std::string sieve_cache;
  std::string config_path;
};

json manifest(const std::string& subcommand, json params, const GlobalOpts& g) {
  json m;
  m["subcommand"] = subcommand;
  m["params"] = std::move(params);
  m["precision_bits"] = g.precision;
  m["partitions"] = kPartitions;
  m["seed"] = g.seed;
  m["version"] = kVersion;
  return m;
}

// Splices config-file and environment values into argv with precedence
// flag > env > config.  A key is injected only when its flag is absent.
std::vector<std::string> effective_args(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  auto has_flag = [&](const std::string& key) {
    const std::string flag = "--" + key;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  auto inject = [&](const std::string& key, const std::string& value) {
    if (!has_flag(key)) {
      args.push_back("--" + key);
      args.push_back(value);
    }
  };
  if (const char* p = std::getenv("QEQ_PRECISION")) inject("precision", p);
  if (const char* t = std::getenv("QEQ_THREADS")) inject("threads", t);
  std::string config_path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") config_path = args[i + 1];
  for (const auto& a : args)
    if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
  if (!config_path.empty())
    for (const auto& [key, value] : load_config(config_path)) inject(key, value);
  return args;
}

Alpha make_alpha(const std::string& spec_text, const GlobalOpts& g) {
  return Alpha(IrrationalSpec::parse(spec_text), g.precision);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"quadratic-sequence exponential-sum toolkit"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  GlobalOpts g;
  app.add_option("--precision", g.precision, "certified fractional bits (default 128)");
  app.add_option("--threads", g.threads, "worker threads (results are thread-count independent)");
  app.add_option("--seed", g.seed, "seed recorded in the run manifest");
  app.add_option("--sieve-cache", g.sieve_cache, "primality cache file (built if absent)");
  app.add_option("--config", g.config_path, "key = value parameter file");

  // convergents --------------------------------------------------------
  auto* sc_conv = app.add_subcommand("convergents", "continued-fraction convergents of alpha");
  std::string conv_alpha;
  std::uint64_t conv_qmax = 0;
  sc_conv->add_option("--alpha", conv_alpha, "irrational spec")->required();
  sc_conv->add_option("--qmax", conv_qmax, "largest denominator")->required();

  // bump ---------------------------------------------------------------
  auto* sc_bump = app.add_subcommand("bump", "smoothed indicator of (-delta, delta)");
  double bump_delta = 0.0, bump_x = 0.0;
  bool bump_check_tail = false;
  sc_bump->add_option("--delta", bump_delta, "half-width delta")->required();
  sc_bump->add_option("--x", bump_x, "scale fixing K and the tail target")->required();
  sc_bump->add_flag("--check-tail", bump_check_tail, "sum |c(k)| over K<|k|<=10K numerically");

  // expsum -------------------------------------------------------------
  auto* sc_exp = app.add_subcommand("expsum", "min-sum over m^power j against its envelope");
  MinSumParams ep;
  std::string exp_alpha;
  long exp_qindex = -1;
  sc_exp->add_option("--power", ep.power, "2 or 4")->required();
  sc_exp->add_option("--x", ep.x)->required();
  sc_exp->add_option("--M", ep.M)->required();
  sc_exp->add_option("--J", ep.J)->required();
  sc_exp->add_option("--mu", ep.mu, "divisor order on m");
  sc_exp->add_option("--zeta", ep.zeta, "divisor order on j");
  sc_exp->add_option("--alpha", exp_alpha)->required();
  sc_exp->add_option("--q-index", exp_qindex, "convergent index (default: largest q <= sqrt(x))");

  // vaughan ------------------------------------------------------------
  auto* sc_vau = app.add_subcommand("vaughan", "decomposition of sum Lambda(n) e(alpha n)");
  std::uint64_t vau_x = 0;
  std::string vau_alpha;
  sc_vau->add_option("--x", vau_x)->required();
  sc_vau->add_option("--alpha", vau_alpha)->required();

  // gamma --------------------------------------------------------------
  auto* sc_gam = app.add_subcommand("gamma", "counts over primes p ~ x of the target type");
  std::uint64_t gam_x = 0, gam_y = 0;
  double gam_theta = 0.0, gam_eta = 0.0, gam_beta = 0.0;
  std::string gam_alpha;
  bool gam_y_set = false;
  sc_gam->add_option("--x", gam_x)->required();
  sc_gam->add_option("--theta", gam_theta)->required();
  sc_gam->add_option("--eta", gam_eta, "slack exponent (default 8*(1/216 - theta/2))");
  sc_gam->add_option("--alpha", gam_alpha)->required();
  sc_gam->add_option("--beta", gam_beta);
  sc_gam->add_option("--y", gam_y, "moduli range r ~ y: adds the Gamma_1/2/3 identity sections")
      ->each([&](const std::string&) { gam_y_set = true; });

  // hl -----------------------------------------------------------------
  auto* sc_hl = app.add_subcommand("hl", "prime density of a quadratic form vs its predicted constant");
  QuadraticForm form;
  std::uint64_t hl_x = 0, hl_pcut = 0;
  sc_hl->add_option("--a", form.a)->required();
  sc_hl->add_option("--b", form.b);
  sc_hl->add_option("--c", form.c)->required();
  sc_hl->add_option("--x", hl_x)->required();
  sc_hl->add_option("--pcut", hl_pcut, "Euler product truncation")->required();

  // equidist -----------------------------------------------------------
  auto* sc_eq = app.add_subcommand("equidist", "histogram of {alpha p + beta} over p <= x");
  std::uint64_t eq_x = 0;
  int eq_bins = 0;
  double eq_beta = 0.0;
  std::string eq_alpha;
  sc_eq->add_option("--x", eq_x)->required();
  sc_eq->add_option("--alpha", eq_alpha)->required();
  sc_eq->add_option("--beta", eq_beta);
  sc_eq->add_option("--bins", eq_bins)->required();

  try {
    const std::vector<std::string> args = effective_args(argc, argv);
    std::vector<const char*> ptrs;
    ptrs.reserve(args.size());
    for (const auto& a : args) ptrs.push_back(a.c_str());
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidSpecError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (g.precision < 16) throw InvalidSpecError("precision must be >= 16 bits");
    if (g.threads < 1) throw InvalidSpecError("threads must be >= 1");
    thread_count() = g.threads;
    std::ostringstream body;  // emitted only on success

    if (sc_conv->parsed()) {
      const Alpha alpha = make_alpha(conv_alpha, g);
      body << "a,q,quality\n";
      for (const auto& c : convergents(alpha, mpz_class(static_cast<unsigned long>(conv_qmax)))) {
        body << c.a.get_str() << "," << c.q.get_str() << ","
             << std::setprecision(17) << c.quality << "\n";
      }
    } else if (sc_bump->parsed()) {
      const BumpFunction chi = BumpFunction::build(bump_delta, bump_x);
      double max_abs = chi.coeff(0);
      for (long k = 1; k <= 10 * chi.cutoff(); ++k)
        max_abs = std::max(max_abs, std::abs(chi.coeff(k)));
      json j;
      j["manifest"] = manifest("bump",
                               {{"delta", bump_delta}, {"x", bump_x}, {"check_tail", bump_check_tail}},
                               g);
      j["delta"] = num(chi.delta());
      j["r"] = chi.order();
      j["Delta"] = num(chi.mollifier_width());
      j["K"] = chi.cutoff();
      j["tail_bound"] = num(chi.tail_bound(chi.cutoff()));
      j["max_abs_coeff"] = num(max_abs);
      if (bump_check_tail) {
        double tail = 0.0;
        for (long k = chi.cutoff() + 1; k <= 10 * chi.cutoff(); ++k)
          tail += 2.0 * std::abs(chi.coeff(k));
        j["numeric_tail"] = num(tail);
        j["tail_ok"] = tail <= chi.tail_bound(chi.cutoff());
      }
      body << j.dump(2) << "\n";
    } else if (sc_exp->parsed()) {
      if (ep.power != 2 && ep.power != 4) throw InvalidSpecError("expsum: power must be 2 or 4");
      const Alpha alpha = make_alpha(exp_alpha, g);
      const mpz_class qmax(std::max<long>(1, static_cast<long>(std::sqrt(ep.x))));
      const auto convs = convergents(alpha, qmax);
      if (convs.empty()) throw InvalidSpecError("expsum: no convergent with q <= sqrt(x)");
      std::size_t idx = convs.size() - 1;
      if (exp_qindex >= 0) {
        if (static_cast<std::size_t>(exp_qindex) >= convs.size())
          throw InvalidSpecError("expsum: q-index out of range (have " +
                                 std::to_string(convs.size()) + " convergents)");
        idx = static_cast<std::size_t>(exp_qindex);
      }
      const EnvelopeReport rep = min_sum_G(ep, alpha, convs[idx]);
      json j;
      j["manifest"] = manifest("expsum",
                               {{"power", ep.power},
                                {"x", ep.x},
                                {"M", ep.M},
                                {"J", ep.J},
                                {"mu", ep.mu},
                                {"zeta", ep.zeta},
                                {"alpha", exp_alpha},
                                {"q_index", static_cast<long>(idx)}},
                               g);
      j["lhs"] = num(rep.lhs);
      j["rhs"] = num(rep.rhs);
      j["ratio"] = num(rep.ratio);
      j["q_used"] = num(rep.q_used);
      body << j.dump(2) << "\n";
    } else if (sc_vau->parsed()) {
      const Alpha alpha = make_alpha(vau_alpha, g);
      const auto U = static_cast<std::uint64_t>(
          std::ceil(std::cbrt(static_cast<double>(vau_x))));
      const FixedFrac af = alpha.frac();
      auto weight = [&](std::uint64_t n) { return e_unit(mul_mod1(af, n)); };
      const VaughanParts parts = vaughan_decompose(vau_x, U, U, weight);
      cdouble direct = 0.0;
      {
        const std::uint64_t chunk = std::uint64_t(1) << 22;
        for (std::uint64_t lo = 1; lo <= vau_x; lo += chunk) {
          const std::uint64_t hi = std::min(vau_x, lo + chunk - 1);
          ArithTables t(lo, std::max(hi, lo + 1));
          for (std::uint64_t n = lo; n <= hi; ++n) {
            const double lam = t.mangoldt(n);
            if (lam != 0.0) direct += lam * weight(n);
          }
        }
      }
      json j;
      j["manifest"] =
          manifest("vaughan", {{"x", vau_x}, {"alpha", vau_alpha}, {"U", U}, {"V", U}}, g);
      j["smalls"] = complex_json(parts.smalls);
      j["type1"] = complex_json(parts.type1);
      j["type1_log"] = complex_json(parts.type1_log);
      j["type2"] = complex_json(parts.type2);
      j["total"] = complex_json(parts.total);
      j["direct"] = complex_json(direct);
      j["residual"] = num(std::abs(parts.total - direct));
      body << j.dump(2) << "\n";
    } else if (sc_gam->parsed()) {
      if (gam_eta <= 0.0) gam_eta = 8.0 * (1.0 / 216.0 - gam_theta / 2.0);
      const ExperimentParams d =
          derive_params(static_cast<double>(gam_x), gam_theta, gam_eta);
      err << "derived: delta=" << d.delta << " K=" << d.K << " y=" << d.y << "\n";
      const Alpha alpha = make_alpha(gam_alpha, g);
      const GammaCountReport rep = gamma_count(gam_x, alpha, gam_beta, gam_theta, gam_eta);
      json j;
      j["manifest"] = manifest("gamma",
                               {{"x", gam_x},
                                {"theta", gam_theta},
                                {"eta", gam_eta},
                                {"alpha", gam_alpha},
                                {"beta", gam_beta},
                                {"delta", d.delta},
                                {"K", d.K},
                                {"y", gam_y_set ? static_cast<double>(gam_y) : d.y}},
                               g);
      j["gamma"] = rep.gamma;
      json ws = json::array();
      for (const auto& w : rep.witnesses) ws.push_back({{"p", w.p}, {"a", w.a}, {"r", w.r}});
      j["witnesses"] = std::move(ws);
      if (gam_y_set) {
        if (gam_y < 1) throw InvalidSpecError("gamma: y must be >= 1");
        const Gamma2Report g2 = gamma2(gam_x, gam_y);
        const Gamma13Report g13 = gamma1_gamma3(gam_x, gam_y, gam_theta, alpha, gam_beta);
        j["gamma2"] = {{"value", num(g2.gamma2)},
                       {"main_term", num(g2.main_term)},
                       {"phi_prediction", num(g2.phi_prediction)},
                       {"ratio_main", num(g2.ratio_main)},
                       {"ratio_phi", num(g2.ratio_phi)}};
        j["identity"] = {{"gamma1", num(g13.gamma1)},
                         {"gamma3", num(g13.gamma3)},
                         {"delta_used", num(g13.delta)},
                         {"delta_requested", num(g13.delta_requested)},
                         {"K", g13.K},
                         {"tail_bound", num(g13.tail)},
                         {"T", num(g13.T)},
                         {"residual", num(g13.identity_residual)}};
      }
      body << j.dump(2) << "\n";
    } else if (sc_hl->parsed()) {
      form.validate();
      const HlReport rep = hl_density(form, hl_x, hl_pcut);
      json j;
      j["manifest"] = manifest(
          "hl",
          {{"a", form.a}, {"b", form.b}, {"c", form.c}, {"x", hl_x}, {"pcut", hl_pcut}}, g);
      j["discriminant"] = form.discriminant();
      j["empirical"] = rep.empirical;
      j["predicted"] = num(rep.predicted);
      j["sigma"] = num(rep.sigma);
      j["ratio"] = num(rep.ratio);
      body << j.dump(2) << "\n";
    } else if (sc_eq->parsed()) {
      const Alpha alpha = make_alpha(eq_alpha, g);
      PrimalityCache cache;
      const PrimalityCache* cache_ptr = nullptr;
      if (!g.sieve_cache.empty()) {
        if (std::filesystem::exists(g.sieve_cache)) {
          cache = PrimalityCache::load(g.sieve_cache);
        } else {
          cache = PrimalityCache::build(2, eq_x);
          cache.save(g.sieve_cache);
        }
        cache_ptr = &cache;
      }
      const Histogram h = equidist_histogram(eq_x, alpha, eq_beta, eq_bins, cache_ptr);
      body << "bin,count\n";
      for (int i = 0; i < eq_bins; ++i) body << i << "," << h.counts[i] << "\n";
      err << "total=" << h.total << " discrepancy=" << std::setprecision(17) << h.discrepancy
          << "\n";
    } else {
      out << app.help();
      return 0;
    }
    out << body.str();
  } catch (const InvalidSpecError& e) {
    err << "error: " << e.what() << "\n";
    code = 1;
  } catch (const PrecisionError& e) {
    err << "error: " << e.what() << "\n";
    code = 2;
  } catch (const ScaleGuardError& e) {
    err << "error: " << e.what() << "\n";
    code = 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    code = 1;
  }
  const auto t1 = std::chrono::steady_clock::now();
  err << "wall_time_s=" << std::chrono::duration<double>(t1 - t0).count() << "\n";
  return code;
}

}  // namespace qeq
