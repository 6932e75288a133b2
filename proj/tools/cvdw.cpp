#include "CLI11.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "cvdw/analysis.hpp"
#include "cvdw/extremal.hpp"
#include "cvdw/oscillation.hpp"
#include "cvdw/parallel.hpp"
#include "cvdw/widths.hpp"
#include "report.hpp"

using namespace cvdw;
using namespace cvdw::cli;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string family = "sobolev";
  int r = 1;
  double beta = 0.0;
  std::string n_list = "1";
  std::string q_list;
  std::size_t N = default_grid_size;
  std::optional<std::uint64_t> seed;
  int trials = 100;
  double tolerance = -1.0;
  std::string format;
  std::string file;
  std::size_t threads = 0;

  // eval
  std::string kernel_kind = "D";
  std::string source = "cos";
};

std::vector<int> parse_n(const std::string& text) {
  std::vector<int> out;
  try {
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(text.substr(0, dots));
      const int hi = std::stoi(text.substr(dots + 2));
      if (hi < lo) throw UsageError("empty n range '" + text + "'");
      for (int n = lo; n <= hi; ++n) out.push_back(n);
    } else {
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    }
  } catch (const std::logic_error&) {
    throw UsageError("cannot parse n '" + text + "'");
  }
  if (out.empty()) throw UsageError("no n given");
  for (int n : out)
    if (n < 1) throw UsageError("n must be >= 1");
  return out;
}

std::vector<double> parse_q(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf") {
      out.push_back(INFINITY);
      continue;
    }
    try {
      std::size_t used = 0;
      const double q = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(q);
    } catch (const std::logic_error&) {
      throw UsageError("cannot parse q '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("no q given");
  for (double q : out)
    if (!(q >= 1.0)) throw UsageError("q must be >= 1 or inf");
  return out;
}

ClassTag class_tag(const RunConfig& rc) {
  ClassFamily family;
  try {
    family = parse_family(rc.family);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (family == ClassFamily::sobolev && rc.beta != 0.0) throw UsageError("sobolev class rejects beta != 0");
  if (family != ClassFamily::sobolev && !(rc.beta > 0.0))
    throw UsageError(rc.family + " class requires beta > 0");
  const ClassTag tag{family, rc.r, rc.beta};
  try {
    (void)tag.config();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return tag;
}

void validate(const RunConfig& rc) {
  if (!is_power_of_two(rc.N) || rc.N < 256) throw UsageError("N must be a power of two >= 256");
  if (rc.trials < 1) throw UsageError("trials must be >= 1");
}

nlohmann::ordered_json config_json(const RunConfig& rc) {
  nlohmann::ordered_json c;
  c["class"] = rc.family;
  c["r"] = rc.r;
  c["beta"] = rc.beta;
  c["n"] = rc.n_list;
  c["q"] = rc.q_list;
  c["N"] = rc.N;
  if (rc.seed) c["seed"] = *rc.seed;
  c["trials"] = rc.trials;
  if (rc.tolerance > 0.0) c["tolerance"] = rc.tolerance;
  return c;
}

int emit(const RunConfig& rc, const std::string& command, const Table& table, bool passed, Format fallback) {
  const Format format = rc.format.empty() ? fallback : parse_format(rc.format);
  if (rc.file.empty()) {
    write(std::cout, format, command, config_json(rc), table, passed);
  } else {
    std::ofstream out(rc.file, std::ios::binary);
    if (!out) throw UsageError("cannot open " + rc.file);
    write(out, format, command, config_json(rc), table, passed);
  }
  return passed ? 0 : 1;
}

double tolerance_or(const RunConfig& rc, double fallback) { return rc.tolerance > 0.0 ? rc.tolerance : fallback; }

// widths

int cmd_widths(RunConfig rc) {
  validate(rc);
  if (rc.q_list.empty()) rc.q_list = "inf";
  const ClassTag tag = class_tag(rc);
  const auto ns = parse_n(rc.n_list);
  const auto qs = parse_q(rc.q_list);
  WidthReport rep;
  try {
    rep = width_table({tag}, ns, qs, rc.N, tolerance_or(rc, 1e-8));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Table t;
  t.columns = {"class", "kind", "n", "index", "q", "value", "bound", "conjectured_exact", "method",
               "check_method", "defect", "tolerance", "statement"};
  for (const auto& row : rep.rows)
    t.add({row.tag.describe(), to_string(row.kind), static_cast<long long>(row.n), static_cast<long long>(row.index),
           q_cell(row.q), row.value, std::string(row.exact ? "exact" : "lower"), row.conjectured_exact, row.method,
           row.check_method, row.defect, row.tolerance, row.statement});
  return emit(rc, "widths", t, rep.passed(), Format::csv);
}

// verify

Table suite_table() {
  Table t;
  t.columns = {"suite", "class", "n", "q", "trials", "violations", "value", "reference", "defect", "tolerance",
               "method", "statement", "witness", "passed"};
  return t;
}

std::uint64_t require_seed(const RunConfig& rc, const std::string& suite) {
  if (!rc.seed) throw UsageError("suite '" + suite + "' is randomized and needs --seed");
  return *rc.seed;
}

std::string trial_witness(const SuiteReport& rep, std::uint64_t seed) {
  if (rep.worst_trial < 0) return "";
  return fmt::format("seed={} trial={}", seed, rep.worst_trial);
}

void add_suite_row(Table& t, const std::string& suite, const ClassTag& tag, int n, const Cell& q, const SuiteReport& rep,
                   bool margin, const std::string& method, const std::string& statement, std::uint64_t seed) {
  const double defect = std::max(0.0, margin ? -rep.worst : rep.worst);
  t.add({suite, tag.describe(), static_cast<long long>(n), q, static_cast<long long>(rep.trials),
         static_cast<long long>(rep.violations), rep.worst, rep.reference, defect, rep.tolerance, method, statement,
         rep.passed() ? std::string() : trial_witness(rep, seed), rep.passed()});
}

SuiteOptions suite_options(const RunConfig& rc, std::uint64_t seed) {
  SuiteOptions o;
  o.trials = rc.trials;
  o.seed = seed;
  o.tolerance = tolerance_or(rc, 1e-6);
  o.N = rc.N;
  return o;
}

int cmd_verify(RunConfig rc, const std::string& suite) {
  validate(rc);
  const ClassTag tag = class_tag(rc);
  const ClassConfig cfg = tag.config();
  const auto ns = parse_n(rc.n_list);
  Table t = suite_table();
  bool passed = true;
  auto record = [&](bool ok) { passed = passed && ok; };
  const Cell no_q = std::string();

  try {
    if (suite == "comparison" || suite == "landau" || suite == "theorem22" || suite == "rearrangement") {
      const auto seed = require_seed(rc, suite);
      const auto opt = suite_options(rc, seed);
      for (int n : ns) {
        if (suite == "comparison") {
          const auto rep = comparison_search(cfg, n, opt);
          add_suite_row(t, suite, tag, n, no_q, rep, true, "random members, branch matching", "Thm 2.1", seed);
          record(rep.passed());
        } else if (suite == "landau") {
          const auto rep = landau_kolmogorov_check(cfg, n, opt);
          add_suite_row(t, suite, tag, n, no_q, rep, false, "random members, sup of derivative", "Cor 2.1", seed);
          record(rep.passed());
        } else if (suite == "theorem22") {
          const auto rep = theorem22_check(cfg, n, opt);
          add_suite_row(t, suite, tag, n, no_q, rep, false, "random members, sup norm", "Thm 2.2", seed);
          record(rep.passed());
        } else {
          const auto rep = rearrangement_theorem_check(cfg, n, opt);
          add_suite_row(t, suite, tag, n, no_q, rep, false, "random members, cumulative rearrangement", "Thm 3.1",
                        seed);
          record(rep.passed());
        }
      }
    } else if (suite == "taikov") {
      const auto seed = require_seed(rc, suite);
      if (rc.q_list.empty()) rc.q_list = "1,2,5";
      const auto qs = parse_q(rc.q_list);
      const auto opt = suite_options(rc, seed);
      for (int n : ns)
        for (double q : qs) {
          if (std::isinf(q)) throw UsageError("taikov suite needs finite q");
          const auto rep = taikov_check(cfg, n, q, opt);
          add_suite_row(t, suite, tag, n, q_cell(q), rep, false, "candidates orthogonal to low frequencies", "Thm 3.2",
                        seed);
          // the candidate sup must be attained
          const double gap = std::abs(rep.extra - rep.reference);
          t.add({suite + ":attained", tag.describe(), static_cast<long long>(n), q_cell(q),
                 static_cast<long long>(rep.trials), static_cast<long long>(gap > opt.tolerance), rep.extra,
                 rep.reference, gap, opt.tolerance, std::string("candidate sup"), std::string("Cor 3.1"),
                 std::string(), gap <= opt.tolerance});
          record(rep.passed() && gap <= opt.tolerance);
        }
    } else if (suite == "cvd") {
      const auto seed = require_seed(rc, suite);
      auto add_cvd = [&](const std::string& name, const CvdReport& rep, const std::string& statement) {
        const bool ok = rep.violations == 0;
        t.add({name, tag.describe(), 0LL, no_q, static_cast<long long>(rep.trials),
               static_cast<long long>(rep.violations), static_cast<double>(rep.max_output_count),
               static_cast<double>(rep.input_count_at_max), static_cast<double>(rep.violations), 0.0,
               std::string("sampled cyclic sign changes"), statement,
               ok ? std::string() : fmt::format("seed={} trial={}", seed, rep.worst_trial), ok});
        record(ok);
      };
      if (cfg.beta > 0.0) add_cvd("cvd:analytic", check_cvd(KernelSpec::analytic(cfg.beta), rc.trials, seed), "Def 3");
      if (cfg.G.kind() == KernelKind::bernoulli)
        add_cvd("cvd:property-b", check_property_b(cfg.G.order(), rc.trials, seed), "Def 2");
      if (t.rows.empty()) throw UsageError("cvd suite has nothing to check for " + tag.describe());
    } else if (suite == "lemma31") {
      if (cfg.G.kind() != KernelKind::bernoulli)
        throw UsageError("lemma31 needs a Bernoulli kernel (r >= 1)");
      const double tol = tolerance_or(rc, 1e-6);
      for (int n : ns) {
        const auto id = l1_sup_identity(cfg, n, rc.N);
        const bool ok = id.defect < tol;
        t.add({suite, tag.describe(), static_cast<long long>(n), q_cell(1.0), 1LL, static_cast<long long>(!ok), id.l1,
               id.scaled_sup, id.defect, tol, std::string("L1 norm against 4n sup of the integrated-kernel function"),
               std::string("Lem 3.1"), std::string(), ok});
        record(ok);
      }
    } else if (suite == "knots") {
      if (rc.q_list.empty()) rc.q_list = "2,inf";
      const auto qs = parse_q(rc.q_list);
      const auto seed = rc.seed.value_or(1);
      const double tol = tolerance_or(rc, 1e-4);
      for (int n : ns)
        for (double q : qs) {
          KnotSearchOptions ko;
          ko.N = rc.N;
          const auto opt = minimize_knot_norm(cfg, n, q, seed, ko);
          const double ref = knot_norm(cfg, KnotVector::uniform(n), q, rc.N).first;
          const auto lag = lagrange_residual_fitted(cfg, opt.knots, opt.a, std::isinf(q) ? 64.0 : q, rc.N);
          const double gap = std::abs(opt.value - ref);
          const bool ok = gap < tol && opt.gap_spread < 1e-3 && lag.max_abs() < tol;
          std::string knots;
          for (double k : opt.knots.knots()) knots += fmt::format("{}{:.12g}", knots.empty() ? "" : " ", k);
          t.add({suite, tag.describe(), static_cast<long long>(n), q_cell(q), static_cast<long long>(opt.starts),
                 static_cast<long long>(!ok), opt.value, ref, gap, tol,
                 fmt::format("nelder-mead over gaps; spread={:.3g} lagrange={:.3g}", opt.gap_spread, lag.max_abs()),
                 std::string(std::isinf(q) ? "Lem 4.1" : "Lem 4.2"), ok ? std::string() : "knots=" + knots, ok});
          record(ok);
        }
    } else if (suite == "regularity") {
      for (int n : ns) {
        const ClassFunction phi_n = class_standard_function(cfg, n, rc.N);
        const bool regular = check_regular(phi_n, n);
        const auto eq = equioscillation(phi_n, n);
        const bool ok = regular && eq.holds(n);
        t.add({suite, tag.describe(), static_cast<long long>(n), no_q, 1LL, static_cast<long long>(!ok),
               static_cast<double>(eq.extrema), static_cast<double>(2 * n), std::max(eq.gap_error, eq.antiperiodicity),
               1e-6, fmt::format("regular={} alternating={} antiperiodicity={:.3g}", regular, eq.alternating,
                                 eq.antiperiodicity),
               std::string("Cor 2.2"), std::string(), ok});
        record(ok);
      }
    } else {
      throw UsageError("unknown suite '" + suite + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return emit(rc, "verify " + suite, t, passed, Format::csv);
}

// eval

int cmd_eval(RunConfig rc, const std::string& what) {
  validate(rc);
  Table t;
  t.columns = {"t", "value"};
  const std::size_t N = rc.N;
  auto grid_t = [N](std::size_t j) { return two_pi * static_cast<double>(j) / static_cast<double>(N); };
  try {
    if (what == "kernel") {
      KernelSpec G = KernelSpec::identity();
      if (rc.kernel_kind == "D") {
        G = KernelSpec::bernoulli(rc.r);
      } else if (rc.kernel_kind == "K") {
        if (!(rc.beta > 0.0)) throw UsageError("kernel K needs beta > 0");
        G = KernelSpec::analytic(rc.beta);
      } else {
        throw UsageError("unknown kernel kind '" + rc.kernel_kind + "' (D or K)");
      }
      for (std::size_t j = 0; j < N; ++j) t.add({grid_t(j), eval_kernel(G, grid_t(j))});
    } else if (what == "standard-function") {
      const auto ns = parse_n(rc.n_list);
      if (ns.size() != 1) throw UsageError("standard-function takes a single n");
      const ClassFunction f = class_standard_function(class_tag(rc).config(), ns.front(), N);
      const PeriodicGrid g = f.sample(N);
      for (std::size_t j = 0; j < N; ++j) t.add({g.t(j), g[j]});
    } else if (what == "rearrangement") {
      PeriodicGrid g(std::vector<double>(N, 0.0));
      if (rc.source == "cos") {
        for (std::size_t j = 0; j < N; ++j) g[j] = std::cos(g.t(j));
      } else if (rc.source == "standard-function") {
        const auto ns = parse_n(rc.n_list);
        if (ns.size() != 1) throw UsageError("rearrangement of a standard function takes a single n");
        g = class_standard_function(class_tag(rc).config(), ns.front(), N).sample(N);
      } else {
        throw UsageError("unknown rearrangement source '" + rc.source + "'");
      }
      const Rearrangement r = rearrangement(g);
      for (std::size_t j = 0; j < r.size(); ++j) t.add({r.t(j), r.values[j]});
    } else {
      throw UsageError("unknown expression '" + what + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return emit(rc, "eval " + what, t, true, Format::tsv);
}

void add_class_options(CLI::App* app, RunConfig& rc) {
  app->add_option("--class", rc.family, "sobolev, achieser or hardy")->capture_default_str();
  app->add_option("--r", rc.r, "smoothness order")->capture_default_str();
  app->add_option("--beta", rc.beta, "analyticity parameter (0 for sobolev)")->capture_default_str();
  app->add_option("--n", rc.n_list, "n, a list 1,3 or a range 1..4")->capture_default_str();
  app->add_option("-N,--grid", rc.N, "grid size (power of two >= 256)")->capture_default_str();
}

void add_output_options(CLI::App* app, RunConfig& rc) {
  app->add_option("--output", rc.format, "json, csv or tsv");
  app->add_option("--file", rc.file, "write the report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremal standard functions, widths and verification suites"};
  app.require_subcommand(1);
  RunConfig rc;
  rc.threads = thread_count();
  app.add_option("--threads", rc.threads, "worker threads (default CVDW_THREADS or hardware)");

  std::string suite;
  std::string expression;

  auto* widths = app.add_subcommand("widths", "width table of a class");
  add_class_options(widths, rc);
  widths->add_option("--q", rc.q_list, "q list, e.g. 1,2,inf (default inf)");
  widths->add_option("--tolerance", rc.tolerance, "cross-check tolerance (default 1e-8)");
  add_output_options(widths, rc);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite,
                     "comparison, landau, theorem22, rearrangement, taikov, cvd, lemma31, knots or regularity")
      ->required();
  add_class_options(verify, rc);
  verify->add_option("--q", rc.q_list, "q list (taikov default 1,2,5; knots default 2,inf)");
  verify->add_option("--seed", rc.seed, "seed for randomized suites");
  verify->add_option("--trials", rc.trials, "trials per configuration")->capture_default_str();
  verify->add_option("--tolerance", rc.tolerance, "violation tolerance");
  add_output_options(verify, rc);

  auto* eval = app.add_subcommand("eval", "sample a kernel, standard function or rearrangement");
  eval->add_option("expression", expression, "kernel, standard-function or rearrangement")->required();
  add_class_options(eval, rc);
  eval->add_option("--kind", rc.kernel_kind, "kernel kind: D or K")->capture_default_str();
  eval->add_option("--of", rc.source, "rearrangement source: cos or standard-function")->capture_default_str();
  add_output_options(eval, rc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (rc.threads < 1) throw UsageError("threads must be >= 1");
    set_thread_count(rc.threads);
    if (*widths) return cmd_widths(rc);
    if (*verify) return cmd_verify(rc, suite);
    return cmd_eval(rc, expression);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
