#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gkrs/toric.hpp"

namespace gkrs {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_series(std::ostream& os, const TruncatedSeries& s) {
  os << "{\n  \"nvars\": " << s.nvars() << ",\n  \"degree\": " << s.degree() << ",\n  \"terms\": [";
  bool first = true;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] == 0.0) continue;
    if (!std::isfinite(s[k])) throw Error(Errc::NonFinite, "series has a non-finite coefficient");
    os << (first ? "\n" : ",\n") << "    {\"exponents\": [";
    const auto& e = s.exponents(k);
    for (std::size_t i = 0; i < e.size(); ++i) os << (i ? ", " : "") << e[i];
    os << "], \"coeff\": " << fmt17(s[k]) << "}";
    first = false;
  }
  os << (first ? "]\n}\n" : "\n  ]\n}\n");
}

TruncatedSeries read_series(std::istream& is) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("series file: ") + e.what());
  }
  try {
    const int nvars = doc.at("nvars").get<int>();
    const int degree = doc.at("degree").get<int>();
    TruncatedSeries s(nvars, degree);
    for (const auto& term : doc.at("terms")) {
      const auto e = term.at("exponents").get<std::vector<int>>();
      if (static_cast<int>(e.size()) != nvars) throw Error(Errc::ParseError, "term has the wrong exponent count");
      int total = 0;
      for (int x : e) {
        if (x < 0) throw Error(Errc::ParseError, "negative exponent");
        total += x;
      }
      if (total > degree) throw Error(Errc::ParseError, "term exceeds the degree cap");
      s.set_coeff(e, s.coeff(e) + term.at("coeff").get<double>());
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("series file: ") + e.what());
  }
}

void save_series(const std::string& path, const TruncatedSeries& s) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::ParseError, "cannot write " + path);
  write_series(os, s);
}

TruncatedSeries load_series(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::ParseError, "cannot read " + path);
  return read_series(is);
}

}  // namespace gkrs
