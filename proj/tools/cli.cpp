#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gkrs/families.hpp"
#include "gkrs/holodata.hpp"
#include "gkrs/report_io.hpp"
#include "gkrs/toric.hpp"
#include "gkrs/verify.hpp"

namespace gkrs::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::vector<double> parse_reals(const std::string& s, const char* flag) {
  std::vector<double> out;
  for (const auto& tok : split(s)) {
    try {
      out.push_back(boost::rational_cast<double>(parse_rational(tok)));
    } catch (const Error&) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw UsageError(std::string("cannot parse ") + flag + " value '" + tok + "'");
      }
      out.push_back(v);
    }
  }
  return out;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Flags shared by gen and verify that pick the soliton.
struct FamilyArgs {
  std::string family;
  std::string c;
  std::string h;
  int n = 2;
  std::string series;
  double trust = 0.5;

  void attach(CLI::App* app) {
    app->add_option("--family", family, "cigar, product or cao");
    app->add_option("--c", c, "c parameter(s), comma separated");
    app->add_option("--h", h, "eigenvalue(s) of Z, comma separated");
    app->add_option("--n", n, "dimension for cao");
    app->add_option("--series", series, "toric series file instead of a family");
    app->add_option("--trust", trust, "trust radius in each |z^i|^2 for series");
  }

  bool is_series() const { return !series.empty(); }

  AnalyticFamily build() const {
    if (is_series() == !family.empty()) throw UsageError("give exactly one of --family or --series");
    const auto hv = parse_reals(h, "--h");
    if (is_series()) {
      if (hv.empty()) throw UsageError("--series needs --h");
      return ToricModel(load_series(series), hv, trust).as_family();
    }
    if (family == "cigar") {
      const auto cv = c.empty() ? std::vector<double>{2.0} : parse_reals(c, "--c");
      const auto hh = hv.empty() ? std::vector<double>{1.0} : hv;
      if (cv.size() != 1 || hh.size() != 1) throw UsageError("cigar takes a single --c and --h");
      return make_cigar(cv[0], hh[0]);
    }
    if (family == "product") {
      if (hv.empty()) throw UsageError("product needs --h");
      const auto cv = c.empty() ? std::vector<double>(hv.size(), 2.0) : parse_reals(c, "--c");
      if (cv.size() != hv.size()) throw UsageError("--c and --h differ in length");
      return make_product(cv, hv);
    }
    if (family == "cao") {
      const auto hh = hv.empty() ? std::vector<double>{1.0} : hv;
      if (hh.size() != 1) throw UsageError("cao takes a single --h (the per-axis eigenvalue)");
      return make_cao(n, hh[0]);
    }
    throw UsageError("unknown family '" + family + "'");
  }
};

std::vector<ComplexPoint> table_points(int dim, int count, double rmax) {
  GridSpec g = GridSpec::box(dim, 0.0, rmax, count);
  return g.samples();
}

GridSpec check_grid(int dim, int count, double rmax) {
  if (dim == 1) return GridSpec::square(rmax, count);
  return GridSpec::box(dim, -rmax, rmax, count, 0.1 * rmax);
}

int cmd_gen(const FamilyArgs& fa, int grid, double rmax, const std::string& outdir, std::ostream& out) {
  const AnalyticFamily fam = fa.build();
  if (grid < 1) throw UsageError("--grid must be >= 1");
  if (!(rmax > 0.0)) throw UsageError("--rmax must be positive");
  const auto pts = table_points(fam.dim, grid, rmax);
  for (const auto& z : pts) fam.require_in_domain(z);
  const FDScheme scheme = scheme_from_env();

  struct Row {
    double phi, f, det, R, znorm;
  };
  const auto rows = parallel_map<Row>(pts.size(), [&](std::size_t i) {
    const auto& z = pts[i];
    const HermitianMatrix g = fam.metric(z);
    return Row{fam.potential(z), fam.ricci_potential(z), g.determinant().real(),
               ricci_from_metric(fam.metric, z, scheme, fam.in_domain).scalar,
               metric_norm_sq(g, fam.vector_field(z))};
  });

  fs::create_directories(outdir);
  const std::string table = (fs::path(outdir) / "table.csv").string();
  std::ofstream os(table);
  if (!os) throw Error(Errc::ParseError, "cannot write " + table);
  for (int i = 0; i < fam.dim; ++i) os << "re_z" << i + 1 << ",im_z" << i + 1 << ",";
  os << "phi,f,det_g,R,Z_norm_sq\n";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    for (const auto& c : pts[k]) os << fmt17(c.real()) << ',' << fmt17(c.imag()) << ',';
    const Row& r = rows[k];
    os << fmt17(r.phi) << ',' << fmt17(r.f) << ',' << fmt17(r.det) << ',' << fmt17(r.R) << ',' << fmt17(r.znorm)
       << '\n';
  }
  nlohmann::json meta = family_metadata(fam);
  meta["grid"] = grid;
  meta["rmax"] = rmax;
  meta["rows"] = pts.size();
  meta["fd_rel_step"] = scheme.rel_step;
  meta["table"] = "table.csv";
  write_json((fs::path(outdir) / "metadata.json").string(), meta);
  out << "wrote " << pts.size() << " rows to " << table << "\n";
  return kOk;
}

double tol_or(const std::map<std::string, double>& tols, const std::string& name, double fallback) {
  auto it = tols.find(name);
  return it == tols.end() ? fallback : it->second;
}

std::vector<std::vector<cplx>> growth_directions(int n) {
  std::vector<std::vector<cplx>> dirs;
  for (int i = 0; i < n; ++i) {
    std::vector<cplx> d(n, 0.0);
    d[i] = 1.0;
    dirs.push_back(d);
  }
  if (n > 1) {
    dirs.emplace_back(n, cplx(1.0, 0.0));
    std::vector<cplx> generic;
    for (int i = 0; i < n; ++i) generic.emplace_back(1.0 + i, 0.5 - 0.3 * i);
    dirs.push_back(generic);
  }
  return dirs;
}

int cmd_verify(const FamilyArgs& fa, const std::string& checks_arg, int grid, std::optional<double> rmax_arg,
               const std::vector<std::string>& tol_args, const std::string& report_path, std::ostream& out) {
  const AnalyticFamily fam = fa.build();
  // Series grids stay well inside the trust region |z^i|² ≤ trust.
  const double rmax = rmax_arg.value_or(fa.is_series() ? 0.5 * std::sqrt(fa.trust) : 1.0);
  if (grid < 2) throw UsageError("--grid must be >= 2");
  if (!(rmax > 0.0)) throw UsageError("--rmax must be positive");
  std::map<std::string, double> tols;
  for (const auto& t : tol_args) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects name=value, got '" + t + "'");
    const auto v = parse_reals(t.substr(eq + 1), "--tol");
    if (v.size() != 1) throw UsageError("--tol expects a single value");
    tols[t.substr(0, eq)] = v[0];
  }
  static const std::vector<std::string> known = {"conservation", "residual", "growth", "orbits",
                                                 "lie",          "rho",      "affine"};
  const auto checks = split(checks_arg);
  if (checks.empty()) throw UsageError("--checks is empty");
  for (const auto& c : checks) {
    if (std::find(known.begin(), known.end(), c) == known.end()) throw UsageError("unknown check '" + c + "'");
  }
  for (const auto& [name, _] : tols) {
    if (std::find(known.begin(), known.end(), name) == known.end() && name != "residual.y") {
      throw UsageError("--tol names an unknown check '" + name + "'");
    }
  }

  const FDScheme scheme = scheme_from_env();
  const GridSpec g = check_grid(fam.dim, grid, rmax);
  const bool series = fa.is_series();
  nlohmann::json results = nlohmann::json::array();
  bool all_pass = true;
  const auto record = [&](const nlohmann::json& j, bool pass, const std::string& label) {
    results.push_back(j);
    all_pass = all_pass && pass;
    out << (pass ? "PASS " : "FAIL ") << label << "\n";
  };
  const auto rho_graph_for = [&] {
    if (!fam.toric) throw UsageError("family has no toric description");
    const double hi = series ? std::log(0.25 * fa.trust) : 2.0;
    return rho_graph(fam.toric, fam.dim, rho_grid(fam.dim, hi - 4.0, hi, fam.dim == 1 ? 41 : 11));
  };

  for (const auto& c : checks) {
    if (c == "conservation") {
      const auto r = check_conservation(fam, g, scheme, tol_or(tols, c, series ? 1e-5 : 1e-6));
      record(to_json(r), r.pass, c + " max_dev=" + fmt17(r.max_dev));
    } else if (c == "residual") {
      const auto r = check_soliton_residual(fam, g, scheme, tol_or(tols, c, series ? 1e-6 : 1e-8),
                                            tol_or(tols, "residual.y", series ? 1e-6 : 1e-8));
      record(to_json(r), r.pass(), c + " max_dev=" + fmt17(r.monge_ampere.max_dev) + " dY=" + fmt17(r.y_invariance.max_dev));
    } else if (c == "growth") {
      if (series) throw UsageError("growth checks need a closed-form family; series are only trusted near 0");
      const auto r = check_growth(fam, growth_directions(fam.dim), default_growth_radii(), tol_or(tols, c, 0.1));
      std::string ratios;
      for (double mu : r.asymptotic_ratio) ratios += (ratios.empty() ? "" : ",") + fmt17(mu);
      record(to_json(r), r.pass, c + " ratios=" + ratios);
    } else if (c == "orbits") {
      for (int axis = 0; axis < fam.dim; ++axis) {
        if (fam.z_eigen[axis] == 0.0) continue;
        const auto r = check_periodic_orbit(fam, axis, cplx(0.5 * rmax, 0.0), 0.0, 10000, scheme, tol_or(tols, c, 1e-6));
        record(to_json(r), r.pass, c + " axis=" + std::to_string(axis + 1) + " err=" + fmt17(r.max_dev));
      }
    } else if (c == "lie") {
      const auto r = check_lie_derivative(fam, check_grid(fam.dim, std::max(3, grid / 2), rmax), 1e-4, scheme,
                                          tol_or(tols, c, 1e-5));
      record(to_json(r), r.pass, c + " max_dev=" + fmt17(r.max_dev));
    } else if (c == "rho") {
      const auto r = rho_residual(rho_graph_for(), fam.z_eigen, tol_or(tols, c, series ? 1e-6 : 1e-9),
                                  fam.gauge_constant);
      record(to_json(r), r.pass, c + " max_dev=" + fmt17(r.max_dev));
    } else if (c == "affine") {
      // Translations a_i = 2 log 2 with b_i chosen to balance the volume constraint.
      const int n = fam.dim;
      AffineSymmetry sym = AffineSymmetry::identity(n);
      double hsum = 0.0;
      for (double hi : fam.z_eigen) hsum += hi;
      sym.a.setConstant(2.0 * std::log(2.0));
      sym.b.setConstant(std::log(2.0) * hsum / n);
      sym.c = 1.0;
      nlohmann::json j{{"check", "affine"}};
      bool ok = true;
      auto cons = nlohmann::json::array();
      for (const auto& k : check_affine_constraints(sym, fam.z_eigen)) {
        cons.push_back({{"name", k.name}, {"deviation", k.deviation}, {"pass", k.pass}});
        ok = ok && k.pass;
      }
      j["constraints"] = cons;
      if (ok) {
        const auto r = rho_residual(apply_affine_symmetry(sym, rho_graph_for(), fam.z_eigen), fam.z_eigen,
                                    tol_or(tols, c, series ? 1e-6 : 1e-9), fam.gauge_constant);
        j["transformed"] = to_json(r);
        ok = r.pass;
      }
      j["pass"] = ok;
      record(j, ok, c);
    }
  }
  nlohmann::json doc{{"family", family_metadata(fam)}, {"checks", results}, {"pass", all_pass}};
  if (series) doc["series"] = fa.series;
  write_json(report_path, doc);
  out << (all_pass ? "all checks passed" : "some checks failed") << "; report written to " << report_path << "\n";
  return all_pass ? kOk : kCheckFailed;
}

int cmd_toric(const std::string& init, const std::string& h_arg, int degree, const std::string& out_path,
              std::ostream& out) {
  const auto h = parse_reals(h_arg, "--h");
  if (h.empty()) throw UsageError("--h is required");
  const int n = static_cast<int>(h.size());
  ToricInitialData data;
  data.h = h;
  if (init == "zero" || init == "flat") {
    data.v = TruncatedSeries(n - 1, degree);
    if (init == "flat") {
      for (int i = 0; i < n - 1; ++i) data.v += TruncatedSeries::variable(n - 1, degree, i);
    }
  } else {
    data.v = load_series(init);
  }
  SolveDiagnostics diag;
  const TruncatedSeries u = solve_singular_ivp(data, degree, &diag);
  save_series(out_path, u);
  out << "residual_max_coeff " << fmt17(ma_residual(u, h).max_abs()) << "\n";
  out << "max_coeff " << fmt17(diag.max_coeff) << (diag.growth_warning ? " (coefficient growth above 1e12)" : "")
      << "\n";
  out << "wrote " << out_path << "\n";
  return kOk;
}

int cmd_resonance(const std::string& h_arg, bool json, std::ostream& out) {
  const EigenData h = EigenData::parse(h_arg);
  const LatticeResult lat = lattice_basis(h);
  const ResonanceResult res = resonances(h);
  const auto vec = [](const IntVector& k) {
    std::string s = "(";
    for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
    return s + ")";
  };
  if (json) {
    nlohmann::json j;
    j["d_h"] = res.d_h;
    j["q_rank"] = lat.q_rank;
    j["lattice_rank"] = lat.rank;
    j["lattice_basis"] = lat.basis;
    auto pairs = nlohmann::json::array();
    for (const auto& p : res.pairs) pairs.push_back({{"i", p.i + 1}, {"k", p.k}});
    j["pairs"] = pairs;
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "d_h = " << res.d_h << "\n";
  out << "q_rank = " << lat.q_rank << "\n";
  out << "lattice_basis =";
  if (lat.basis.empty()) out << " (none)";
  for (const auto& k : lat.basis) out << " " << vec(k);
  out << "\n";
  for (const auto& p : res.pairs) out << "pair i=" << p.i + 1 << " k=" << vec(p.k) << "\n";
  return kOk;
}

int exit_for(Errc code) {
  switch (code) {
    case Errc::ParseError:
    case Errc::InvalidParam:
    case Errc::ShapeMismatch:
    case Errc::DimensionTooLarge:
    case Errc::IrrationalInput:
      return kUsage;
    default:
      return kDomain;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gradient Kähler Ricci soliton construction and verification"};
  app.require_subcommand(1);
  // -h is taken by the soliton vector field eigenvalues.
  app.set_help_flag("--help", "print help");
  app.name("gkrs-cli");

  FamilyArgs gen_fam, ver_fam;
  int gen_grid = 21, ver_grid = 11, degree = 8;
  double gen_rmax = 1.0, ver_rmax = 0.0;
  std::string gen_out = ".", checks = "conservation,residual", report = "report.json";
  std::string init = "zero", toric_h, toric_out = "u.series", res_h;
  std::vector<std::string> tol_args;
  bool res_json = false;

  auto* gen = app.add_subcommand("gen", "tabulate a family on a grid");
  gen_fam.attach(gen);
  gen->add_option("--grid", gen_grid, "samples per axis");
  gen->add_option("--rmax", gen_rmax, "largest |z^i| sampled");
  gen->add_option("-o,--out", gen_out, "output directory");

  auto* ver = app.add_subcommand("verify", "run verification checks");
  ver_fam.attach(ver);
  ver->add_option("--checks", checks, "conservation,residual,growth,orbits,lie,rho,affine");
  ver->add_option("--grid", ver_grid, "samples per axis");
  auto* rmax_opt = ver->add_option("--rmax", ver_rmax, "grid half-width");
  ver->add_option("--tol", tol_args, "tolerance override name=value")->take_all();
  ver->add_option("-o,--report", report, "report path");

  auto* tor = app.add_subcommand("toric", "solve the singular initial value problem");
  tor->add_option("--init", init, "zero, flat, or an initial-data series file");
  tor->add_option("--h", toric_h, "eigenvalues, comma separated")->required();
  tor->add_option("--degree", degree, "total degree cap");
  tor->add_option("-o,--out", toric_out, "output series file");

  auto* res = app.add_subcommand("resonance", "resonance count and lattice of h");
  res->add_option("--h", res_h, "rational eigenvalues, comma separated")->required();
  res->add_flag("--json", res_json, "print JSON");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_fam, gen_grid, gen_rmax, gen_out, out);
    if (ver->parsed()) {
      std::optional<double> rm;
      if (rmax_opt->count() > 0) rm = ver_rmax;
      return cmd_verify(ver_fam, checks, ver_grid, rm, tol_args, report, out);
    }
    if (tor->parsed()) return cmd_toric(init, toric_h, degree, toric_out, out);
    if (res->parsed()) return cmd_resonance(res_h, res_json, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace gkrs::cli
