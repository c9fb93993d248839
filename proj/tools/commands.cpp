#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "gammadisc/gammadisc.hpp"
#include "gammadisc/io.hpp"
#include "gammadisc/suites.hpp"

namespace gammadisc::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kAllSuites{"thm1", "thm2", "lift", "decay", "fo", "choi"};

struct Globals {
  std::optional<double> tol;
  std::uint64_t seed = 0;
  int max_doublings = kMaxDoublings;
  double rank_tol = -1.0;
  bool json = false;
  std::string out;
};

// Default tolerance per suite, overridden by --tol and then by --suite-tol.
double suite_tol(const std::string& suite, const Globals& g, const std::map<std::string, double>& overrides) {
  if (auto it = overrides.find(suite); it != overrides.end()) return it->second;
  if (g.tol) return *g.tol;
  if (suite == "thm2") return 1e-7;
  return 1e-8;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

void print_report(const VerificationReport& rep, std::ostream& out) {
  for (const auto& c : rep.checks) {
    out << "[" << to_string(c.status) << "] " << c.name;
    if (c.value) out << " = " << (*c.value ? "true" : "false");
    if (c.residual != 0.0) out << "  residual " << fmt(c.residual);
    if (!c.details.empty()) out << "  (" << c.details << ")";
    out << "\n";
  }
  out << "status: " << (rep.passed() ? "pass" : "fail") << "\n";
}

VerificationReport run_suites(const GammaTuple& t, const std::set<std::string>& suites, const Globals& g,
                              const std::map<std::string, double>& overrides) {
  VerificationReport rep;
  rep.instance_digest = instance_digest(t);
  if (suites.count("thm1")) rep.append(verify_theorem1(t, suite_tol("thm1", g, overrides)), "thm1");
  if (suites.count("thm2"))
    rep.append(verify_theorem2(t, suite_tol("thm2", g, overrides), 1e-6, g.seed), "thm2");
  if (suites.count("lift")) {
    LiftingOptions lo;
    lo.seed = g.seed;
    if (overrides.count("lift") || g.tol) lo.intertwine_tol = lo.theta_tol = suite_tol("lift", g, overrides);
    rep.append(verify_lifting(t, lo), "lift");
  }
  if (suites.count("decay")) {
    DecayOptions dopt;
    dopt.seed = g.seed;
    rep.append(verify_decay(t, dopt), "decay");
  }
  if (suites.count("fo")) rep.append(verify_fundamental(t, suite_tol("fo", g, overrides)), "fo");
  if (suites.count("choi")) rep.append(verify_projection(t, suite_tol("choi", g, overrides), 50, g.seed), "choi");
  return rep;
}

ExtensionOptions extension_options(const Globals& g) {
  ExtensionOptions opt;
  opt.rank_tol = g.rank_tol;
  opt.max_doublings = g.max_doublings;
  return opt;
}

int cmd_gen(int d, int n, const std::string& kind, const Globals& g, std::ostream& out) {
  const auto k = parse_generator_kind(kind);
  InstanceFile f{random_gamma_tuple(d, n, k, g.seed), g.seed, kind};
  if (g.out.empty()) throw Error(ErrorKind::IoError, "gen needs --out <path>");
  save_instance(f, g.out);
  const auto digest = instance_digest(f.tuple);
  if (g.json)
    out << json{{"schema", kReportSchema}, {"path", g.out}, {"digest", digest}}.dump() << "\n";
  else
    out << "wrote " << g.out << "\ndigest " << digest << "\n";
  return kPass;
}

int cmd_verify(const std::string& path, const std::vector<std::string>& suite_list,
               const std::vector<std::string>& suite_tols, const Globals& g, std::ostream& out) {
  std::set<std::string> suites;
  for (const auto& s : suite_list) {
    if (std::find(kAllSuites.begin(), kAllSuites.end(), s) == kAllSuites.end())
      throw Error(ErrorKind::InvalidArgument, "unknown suite '" + s + "'");
    suites.insert(s);
  }
  if (suites.empty()) suites.insert(kAllSuites.begin(), kAllSuites.end());
  std::map<std::string, double> overrides;
  for (const auto& st : suite_tols) {
    const auto eq = st.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "--suite-tol expects name=value");
    try {
      overrides[st.substr(0, eq)] = std::stod(st.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "bad tolerance in '" + st + "'");
    }
  }
  const auto f = load_instance(path);
  const auto rep = run_suites(f.tuple, suites, g, overrides);
  if (g.json)
    out << report_to_json(rep).dump() << "\n";
  else
    print_report(rep, out);
  return rep.passed() ? kPass : kCheckFailure;
}

int cmd_q(const std::string& path, const Globals& g, std::ostream& out) {
  const auto f = load_instance(path);
  const auto lim = compute_q(f.tuple, kConvTol, g.max_doublings);
  const double rank_tol = g.rank_tol < 0 ? default_q_rank_tol(f.tuple.n) : g.rank_tol;
  Eigen::VectorXd ev;
  const auto basis = dominant_eigenbasis(lim.Q, rank_tol, &ev);
  const double lmax = max_eigenvalue(lim.Q);
  const bool pure = lmax <= kPurityTol;
  if (g.json) {
    out << json{{"schema", kReportSchema},
                {"instance_digest", instance_digest(f.tuple)},
                {"iterations", lim.iterations},
                {"residual", lim.residual},
                {"lambda_max", lmax},
                {"rank", pure ? 0 : basis.cols()},
                {"pure", pure},
                {"fixed_point_residual", fro(f.tuple.P.adjoint() * lim.Q * f.tuple.P - lim.Q)},
                {"Q", matrix_to_json(lim.Q)}}
               .dump()
        << "\n";
  } else {
    out << "iterations " << lim.iterations << "\nresidual " << fmt(lim.residual) << "\nlambda_max " << lmax
        << "\nrank " << (pure ? 0 : basis.cols()) << "\npure " << (pure ? "yes" : "no") << "\n";
  }
  return kPass;
}

int cmd_fo(const std::string& path, const Globals& g, std::ostream& out) {
  const auto f = load_instance(path);
  const auto fs = fundamental_operators(f.tuple);
  if (g.json) {
    json j{{"schema", kReportSchema}, {"instance_digest", instance_digest(f.tuple)},
           {"defect_rank", fs.defect_basis.cols()}, {"residuals", fs.residuals}};
    j["F"] = json::array();
    for (int i = 1; i < f.tuple.d; ++i) j["F"].push_back(matrix_to_json(fs.ambient(i)));
    out << j.dump() << "\n";
  } else {
    out << "defect rank " << fs.defect_basis.cols() << "\n";
    for (std::size_t i = 0; i < fs.residuals.size(); ++i)
      out << "F_" << i + 1 << "  norm " << fmt(op_norm(fs.ambient(static_cast<int>(i) + 1))) << "  residual "
          << fmt(fs.residuals[i]) << "\n";
  }
  return kPass;
}

int cmd_extend(const std::string& path, const Globals& g, std::ostream& out) {
  const auto f = load_instance(path);
  const auto e = canonical_extension(f.tuple, extension_options(g));
  const auto r = extension_residuals(e);
  const bool ok = extension_invariants_hold(r, 1e-8);
  if (g.json) {
    json j{{"schema", kReportSchema},
           {"instance_digest", instance_digest(f.tuple)},
           {"rank", e.r},
           {"residuals",
            {{"jj_q", r.jj_q},
             {"intertwine_r", r.intertwine_r},
             {"intertwine_u", r.intertwine_u},
             {"unitary", r.unitary},
             {"relation", r.relation},
             {"normality", r.normality}}},
           {"boundary_spectrum", r.boundary},
           {"status", ok ? "pass" : "fail"},
           {"J", matrix_to_json(e.J)},
           {"U", matrix_to_json(e.U)}};
    j["R"] = json::array();
    for (const auto& ri : e.R) j["R"].push_back(matrix_to_json(ri));
    out << j.dump() << "\n";
  } else {
    out << "rank " << e.r << "\n"
        << "J*J - Q      " << fmt(r.jj_q) << "\nR_i J - J S_i " << fmt(r.intertwine_r) << "\nU J - J P    "
        << fmt(r.intertwine_u) << "\nU unitary    " << fmt(r.unitary) << "\nR_i relation " << fmt(r.relation)
        << "\nR_i normal   " << fmt(r.normality) << "\nboundary     " << (r.boundary ? "yes" : "no")
        << "\nstatus: " << (ok ? "pass" : "fail") << "\n";
  }
  return ok ? kPass : kCheckFailure;
}

struct Dims {
  Eigen::Index rank = 0;
  std::size_t toeplitz = 0;
  std::size_t commutant = 0;
};

Dims dimensions(const GammaTuple& t, const Globals& g) {
  Dims d;
  d.toeplitz = toeplitz_space(t).dim();
  try {
    const auto e = canonical_extension(t, extension_options(g));
    d.rank = e.r;
    d.commutant = extension_commutant(e).dim();
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::PureTuple) throw;
  }
  return d;
}

int cmd_toeplitz(const std::string& path, const Globals& g, std::ostream& out) {
  const auto f = load_instance(path);
  const auto tb = toeplitz_space(f.tuple);
  const auto tp = toeplitz_space_p_only(f.tuple.P);
  const auto dims = dimensions(f.tuple, g);
  const double adj = adjoint_closure_residual(tb);
  if (g.json) {
    json j{{"schema", kReportSchema},  {"instance_digest", instance_digest(f.tuple)},
           {"dim_toeplitz", tb.dim()}, {"dim_toeplitz_p", tp.dim()},
           {"dim_commutant", dims.commutant}, {"adjoint_closure_residual", adj}};
    j["basis"] = json::array();
    for (const auto& b : tb.basis) j["basis"].push_back(matrix_to_json(b));
    out << j.dump() << "\n";
  } else {
    out << "dim T(S) " << tb.dim() << "\ndim T(P) " << tp.dim() << "\ndim {R,U}' " << dims.commutant
        << "\nadjoint closure residual " << fmt(adj) << "\n";
  }
  return kPass;
}

int cmd_lift(const std::string& path, const Globals& g, std::ostream& out) {
  const auto f = load_instance(path);
  LiftingOptions lo;
  lo.seed = g.seed;
  auto rep = verify_lifting(f.tuple, lo);
  rep.instance_digest = instance_digest(f.tuple);
  if (g.json)
    out << report_to_json(rep).dump() << "\n";
  else
    print_report(rep, out);
  return rep.passed() ? kPass : kCheckFailure;
}

int cmd_report(const std::string& dir, const Globals& g, std::ostream& out) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::IoError, dir + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  int pass = 0, fail = 0, bad = 0;
  json rows = json::array();
  std::ostringstream table;
  table << std::left << std::setw(28) << "file" << std::setw(4) << "d" << std::setw(4) << "n" << std::setw(8)
        << "rankQ" << std::setw(8) << "dimT" << std::setw(8) << "dimC" << "status\n";
  for (const auto& p : files) {
    const auto name = p.filename().string();
    std::string status;
    json row{{"file", name}};
    try {
      const auto f = load_instance(p.string());
      const auto dims = dimensions(f.tuple, g);
      const std::map<std::string, double> none;
      const auto rep = run_suites(f.tuple, {"thm1", "thm2"}, g, none);
      status = rep.passed() ? "pass" : "fail";
      (rep.passed() ? pass : fail)++;
      row.update(json{{"d", f.tuple.d}, {"n", f.tuple.n}, {"rank_q", dims.rank}, {"dim_toeplitz", dims.toeplitz},
                      {"dim_commutant", dims.commutant}, {"status", status}});
      table << std::setw(28) << name << std::setw(4) << f.tuple.d << std::setw(4) << f.tuple.n << std::setw(8)
            << dims.rank << std::setw(8) << dims.toeplitz << std::setw(8) << dims.commutant << status << "\n";
    } catch (const Error& e) {
      ++bad;
      status = "parse-error";
      row.update(json{{"status", status}, {"error", e.what()}});
      table << std::setw(28) << name << std::setw(4) << "-" << std::setw(4) << "-" << std::setw(8) << "-"
            << std::setw(8) << "-" << std::setw(8) << "-" << status << "\n";
    }
    rows.push_back(std::move(row));
  }
  if (g.json)
    out << json{{"schema", kReportSchema}, {"rows", rows},
                {"summary", {{"total", files.size()}, {"pass", pass}, {"fail", fail}, {"parse_error", bad}}}}
               .dump()
        << "\n";
  else
    out << table.str() << "total " << files.size() << "  pass " << pass << "  fail " << fail << "  parse-error "
        << bad << "\n";
  if (bad > 0) return kInputError;
  return fail > 0 ? kCheckFailure : kPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Γ_d-contractions: asymptotic limit, canonical extension, Toeplitz space and lifting", "gammadisc"};
  app.require_subcommand(1);
  Globals g;
  double tol_value = 0.0;
  auto* tol_opt = app.add_option("--tol", tol_value, "global tolerance (overrides suite defaults)");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--max-doublings", g.max_doublings, "power-doubling cap for Q");
  app.add_option("--rank-tol", g.rank_tol, "relative rank threshold for Q");
  app.add_flag("--json", g.json, "emit JSON");
  app.add_option("--out", g.out, "output path");

  int d = 2, n = 2;
  std::string kind = "NormalBoundary";
  auto* gen = app.add_subcommand("gen", "write a seeded instance file");
  gen->add_option("--d", d)->required();
  gen->add_option("--n", n)->required();
  gen->add_option("--kind", kind, "NormalBoundary | NormalInterior | MixedPurity | Ando2")->required();

  std::string path;
  std::vector<std::string> suites, suite_tols;
  auto* verify = app.add_subcommand("verify", "run verification suites on an instance");
  verify->add_option("path", path)->required();
  verify->add_option("--suites", suites, "thm1,thm2,lift,decay,fo,choi (default: all)")->delimiter(',');
  verify->add_option("--suite-tol", suite_tols, "per-suite override, name=value");

  std::map<std::string, CLI::App*> single;
  for (const char* name : {"q", "fo", "extend", "toeplitz", "lift"}) {
    auto* sc = app.add_subcommand(name);
    sc->add_option("path", path)->required();
    single[name] = sc;
  }
  single["q"]->description("asymptotic limit Q");
  single["fo"]->description("fundamental operators");
  single["extend"]->description("canonical unitary extension");
  single["toeplitz"]->description("Toeplitz space and commutant dimensions");
  single["lift"]->description("commutant lifting on random commutant elements");

  std::string dir;
  auto* report = app.add_subcommand("report", "one-line summary per instance file in a directory");
  report->add_option("dir", dir)->required();

  for (auto* sc : app.get_subcommands({})) sc->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInputError;
  }
  if (tol_opt->count() > 0) g.tol = tol_value;

  try {
    if (gen->parsed()) return cmd_gen(d, n, kind, g, out);
    if (verify->parsed()) return cmd_verify(path, suites, suite_tols, g, out);
    if (single["q"]->parsed()) return cmd_q(path, g, out);
    if (single["fo"]->parsed()) return cmd_fo(path, g, out);
    if (single["extend"]->parsed()) return cmd_extend(path, g, out);
    if (single["toeplitz"]->parsed()) return cmd_toeplitz(path, g, out);
    if (single["lift"]->parsed()) return cmd_lift(path, g, out);
    if (report->parsed()) return cmd_report(dir, g, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::ParseError:
      case ErrorKind::IoError:
      case ErrorKind::UnsupportedKind:
      case ErrorKind::InvalidArgument:
        return kInputError;
      default:
        return kCheckFailure;
    }
  }
  return kInputError;
}

}  // namespace gammadisc::cli
