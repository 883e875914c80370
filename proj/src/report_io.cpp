#include "gkrs/report_io.hpp"

#include <cmath>
#include <fstream>

namespace gkrs {

namespace {

// JSON has no NaN or infinity; those become null.
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json complex_array(const std::vector<cplx>& v) {
  auto out = nlohmann::json::array();
  for (const auto& c : v) out.push_back({num(c.real()), num(c.imag())});
  return out;
}

nlohmann::json real_array(const std::vector<double>& v) {
  auto out = nlohmann::json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

}  // namespace

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["check"] = r.check_name;
  j["grid"] = r.grid;
  j["points"] = r.points;
  j["max_dev"] = num(r.max_dev);
  j["mean_dev"] = num(r.mean_dev);
  j["mean_value"] = num(r.mean_value);
  j["tolerance"] = num(r.tolerance);
  j["pass"] = r.pass;
  auto details = nlohmann::json::array();
  for (const auto& d : r.details) details.push_back({{"at", d.where}, {"value", num(d.value)}, {"deviation", num(d.deviation)}});
  j["details"] = details;
  return j;
}

nlohmann::json to_json(const ResidualReports& r) {
  return {{"check", "residual"},
          {"pass", r.pass()},
          {"monge_ampere", to_json(r.monge_ampere)},
          {"y_invariance", to_json(r.y_invariance)}};
}

nlohmann::json to_json(const GrowthReport& r) {
  nlohmann::json j;
  j["check"] = "growth";
  auto dirs = nlohmann::json::array();
  for (const auto& d : r.directions) dirs.push_back(complex_array(d));
  j["directions"] = dirs;
  j["radii"] = real_array(r.radii);
  auto ratios = nlohmann::json::array();
  for (const auto& row : r.ratios) ratios.push_back(real_array(row));
  j["ratios"] = ratios;
  j["asymptotic_ratio"] = real_array(r.asymptotic_ratio);
  auto grads = nlohmann::json::array();
  for (const auto& row : r.grad_f_sq) grads.push_back(real_array(row));
  j["grad_f_sq"] = grads;
  j["mu_min"] = num(r.mu_min);
  j["mu_max"] = num(r.mu_max);
  j["lambda_min"] = num(r.lambda_min);
  j["lambda_max"] = num(r.lambda_max);
  j["target"] = num(r.target);
  j["tolerance"] = num(r.tolerance);
  j["bracket_pass"] = r.bracket_pass;
  j["lambda_pass"] = r.lambda_pass;
  j["pass"] = r.pass;
  return j;
}

nlohmann::json family_metadata(const AnalyticFamily& fam) {
  nlohmann::json j;
  j["family"] = fam.name;
  j["dim"] = fam.dim;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [name, vals] : fam.params) params[name] = real_array(vals);
  j["params"] = params;
  j["z_eigen"] = real_array(fam.z_eigen);
  j["soliton_h"] = num(fam.soliton_h);
  j["gauge_constant"] = num(fam.gauge_constant);
  j["special_coordinates"] = fam.special_coordinates;
  return j;
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::ParseError, "cannot write " + path);
  os << doc.dump(2) << '\n';
}

}  // namespace gkrs
