#pragma once

// CSV schemas for coincidence tables.
//
// Layout: optional '#' comment lines and `key=value` metadata lines, then a
// mandatory header row, then data rows. Decimal point is '.', text is UTF-8.
//
//   visibility  thetaA_deg,thetaB_deg,Rc_cps,dRc_cps
//   chsh        thetaA,thetaB,RA_cps,RB_cps,Rc_cps,dRc_cps
//   freedman    thetaA,thetaB,phi_deg,RA,RB,Rc            (+ n0c_cps=...)
//   tomo        nu,label,hA_deg,qA_deg,hB_deg,qB_deg,RA,dRA,RB,dRB,Rc,dRc
//
// Metadata keys: integration_s (all kinds), window_s (chsh, tomo),
// n0c_cps (freedman). Rates are counts per second.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include "qtomo/error.hpp"
#include "qtomo/nonlocality.hpp"
#include "qtomo/tomography.hpp"

namespace qtomo::io {

enum class TableKind { visibility, chsh, freedman, tomo };

inline std::string_view to_string(TableKind k) {
  switch (k) {
    case TableKind::visibility: return "visibility";
    case TableKind::chsh: return "chsh";
    case TableKind::freedman: return "freedman";
    case TableKind::tomo: return "tomo";
  }
  return "";
}

inline const std::vector<std::string>& expected_header(TableKind k) {
  static const std::vector<std::string> vis = {"thetaA_deg", "thetaB_deg", "Rc_cps", "dRc_cps"};
  static const std::vector<std::string> chsh = {"thetaA", "thetaB", "RA_cps", "RB_cps", "Rc_cps", "dRc_cps"};
  static const std::vector<std::string> fr = {"thetaA", "thetaB", "phi_deg", "RA", "RB", "Rc"};
  static const std::vector<std::string> tomo = {"nu", "label", "hA_deg", "qA_deg", "hB_deg", "qB_deg",
                                                "RA", "dRA", "RB", "dRB", "Rc", "dRc"};
  switch (k) {
    case TableKind::visibility: return vis;
    case TableKind::chsh: return chsh;
    case TableKind::freedman: return fr;
    case TableKind::tomo: return tomo;
  }
  return vis;
}

inline std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

struct CsvTable {
  std::map<std::string, std::string> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> lines;  // source line of each row
  std::string digest;      // sha256 of the raw bytes
};

namespace detail {
inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline Error schema_error(int line, const std::string& what) {
  return Error(ErrorKind::SchemaMismatch, "line " + std::to_string(line) + ": " + what);
}

inline double to_number(const std::string& s, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw schema_error(line, "not a number: '" + s + "'");
  return v;
}

inline double to_rate(const std::string& s, int line) {
  const double v = to_number(s, line);
  if (v < 0.0) throw Error(ErrorKind::NegativeRate, "line " + std::to_string(line) + ": negative rate " + s);
  return v;
}
}  // namespace detail

inline CsvTable read_csv(std::istream& in, TableKind kind) {
  std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CsvTable t;
  t.digest = sha256_hex(raw);
  std::istringstream ss(raw);
  std::string line;
  int lineno = 0;
  bool have_header = false;
  const auto& want = expected_header(kind);
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string_view v = detail::trim(line);
    if (v.empty() || v.front() == '#') continue;
    if (!have_header) {
      const auto eq = v.find('=');
      if (eq != std::string_view::npos && v.find(',') == std::string_view::npos) {
        t.meta[std::string(detail::trim(v.substr(0, eq)))] = std::string(detail::trim(v.substr(eq + 1)));
        continue;
      }
      t.header = detail::split(v);
      if (t.header != want) throw detail::schema_error(lineno, std::string("header does not match the ") +
                                                                   std::string(to_string(kind)) + " schema");
      have_header = true;
      continue;
    }
    auto cells = detail::split(v);
    if (cells.size() != want.size())
      throw detail::schema_error(lineno, "expected " + std::to_string(want.size()) + " columns, got " +
                                             std::to_string(cells.size()));
    t.rows.push_back(std::move(cells));
    t.lines.push_back(lineno);
  }
  if (!have_header) throw detail::schema_error(lineno, "missing header row");
  if (t.rows.empty()) throw detail::schema_error(lineno, "no data rows");
  return t;
}

inline double meta_number(const CsvTable& t, const std::string& key) {
  const auto it = t.meta.find(key);
  if (it == t.meta.end()) throw Error(ErrorKind::MissingHeaderKey, "metadata key '" + key + "' is required");
  double v = 0.0;
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorKind::SchemaMismatch, "metadata '" + key + "' is not a number");
  return v;
}

inline double meta_number_or(const CsvTable& t, const std::string& key, double fallback) {
  return t.meta.count(key) ? meta_number(t, key) : fallback;
}

template <class Dataset>
struct Parsed {
  Dataset data;
  std::size_t rows = 0;
  std::string digest;
};

inline Parsed<VisibilityDataset> parse_visibility(std::istream& in) {
  const CsvTable t = read_csv(in, TableKind::visibility);
  VisibilityDataset d;
  d.integration_s = meta_number(t, "integration_s");
  d.window_s = meta_number_or(t, "window_s", 0.0);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& c = t.rows[i];
    const int ln = t.lines[i];
    d.rows.push_back({detail::to_number(c[0], ln), detail::to_number(c[1], ln), detail::to_rate(c[2], ln),
                      detail::to_rate(c[3], ln)});
  }
  return {std::move(d), t.rows.size(), t.digest};
}

inline Parsed<AngleGrid16> parse_chsh(std::istream& in) {
  const CsvTable t = read_csv(in, TableKind::chsh);
  AngleGrid16 g;
  g.integration_s = meta_number(t, "integration_s");
  g.window_s = meta_number(t, "window_s");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& c = t.rows[i];
    const int ln = t.lines[i];
    g.rows.push_back({detail::to_number(c[0], ln), detail::to_number(c[1], ln), detail::to_rate(c[2], ln),
                      detail::to_rate(c[3], ln), detail::to_rate(c[4], ln), detail::to_rate(c[5], ln)});
  }
  return {std::move(g), t.rows.size(), t.digest};
}

inline Parsed<FreedmanDataset> parse_freedman(std::istream& in) {
  const CsvTable t = read_csv(in, TableKind::freedman);
  FreedmanDataset d;
  d.integration_s = meta_number(t, "integration_s");
  d.window_s = meta_number_or(t, "window_s", 0.0);
  d.n0c = meta_number(t, "n0c_cps");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& c = t.rows[i];
    const int ln = t.lines[i];
    FreedmanRow r{detail::to_number(c[0], ln), detail::to_number(c[1], ln), detail::to_number(c[2], ln),
                  detail::to_rate(c[3], ln),   detail::to_rate(c[4], ln),   detail::to_rate(c[5], ln)};
    if (r.phi < 0.0 || r.phi > 90.0) throw detail::schema_error(ln, "phi_deg must lie in [0, 90]");
    d.rows.push_back(r);
  }
  return {std::move(d), t.rows.size(), t.digest};
}

inline Parsed<TomographyDataset> parse_tomography(std::istream& in) {
  const CsvTable t = read_csv(in, TableKind::tomo);
  TomographyDataset d;
  d.integration_s = meta_number(t, "integration_s");
  d.window_s = meta_number(t, "window_s");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& c = t.rows[i];
    const int ln = t.lines[i];
    const double nu = detail::to_number(c[0], ln);
    if (nu != static_cast<int>(nu)) throw detail::schema_error(ln, "nu must be an integer");
    TomographyRow r;
    r.nu = static_cast<int>(nu);
    r.label = c[1];
    r.a = WaveplateSetting(detail::to_number(c[2], ln), detail::to_number(c[3], ln));
    r.b = WaveplateSetting(detail::to_number(c[4], ln), detail::to_number(c[5], ln));
    r.singles_a = detail::to_rate(c[6], ln);
    r.d_singles_a = detail::to_rate(c[7], ln);
    r.singles_b = detail::to_rate(c[8], ln);
    r.d_singles_b = detail::to_rate(c[9], ln);
    r.coincidences = detail::to_rate(c[10], ln);
    r.d_coincidences = detail::to_rate(c[11], ln);
    d.rows.push_back(std::move(r));
  }
  validate(d);
  return {std::move(d), t.rows.size(), t.digest};
}

template <class Parse>
auto parse_file(const std::string& path, Parse parse) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  return parse(f);
}

// Writers emit the same schemas; numbers use the shortest round-trip form.

namespace detail {
inline std::string num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}
}  // namespace detail

inline void write_visibility(std::ostream& os, const VisibilityDataset& d) {
  os << "integration_s=" << detail::num(d.integration_s) << '\n' << "window_s=" << detail::num(d.window_s) << '\n';
  os << "thetaA_deg,thetaB_deg,Rc_cps,dRc_cps\n";
  for (const auto& r : d.rows)
    os << detail::num(r.theta_a) << ',' << detail::num(r.theta_b) << ',' << detail::num(r.rate) << ','
       << detail::num(r.d_rate) << '\n';
}

inline void write_chsh(std::ostream& os, const AngleGrid16& g) {
  os << "integration_s=" << detail::num(g.integration_s) << '\n' << "window_s=" << detail::num(g.window_s) << '\n';
  os << "thetaA,thetaB,RA_cps,RB_cps,Rc_cps,dRc_cps\n";
  for (const auto& r : g.rows)
    os << detail::num(r.theta_a) << ',' << detail::num(r.theta_b) << ',' << detail::num(r.singles_a) << ','
       << detail::num(r.singles_b) << ',' << detail::num(r.rate) << ',' << detail::num(r.d_rate) << '\n';
}

inline void write_freedman(std::ostream& os, const FreedmanDataset& d) {
  os << "integration_s=" << detail::num(d.integration_s) << '\n'
     << "window_s=" << detail::num(d.window_s) << '\n'
     << "n0c_cps=" << detail::num(d.n0c) << '\n';
  os << "thetaA,thetaB,phi_deg,RA,RB,Rc\n";
  for (const auto& r : d.rows)
    os << detail::num(r.theta_a) << ',' << detail::num(r.theta_b) << ',' << detail::num(r.phi) << ','
       << detail::num(r.singles_a) << ',' << detail::num(r.singles_b) << ',' << detail::num(r.rate) << '\n';
}

inline void write_tomography(std::ostream& os, const TomographyDataset& d) {
  os << "integration_s=" << detail::num(d.integration_s) << '\n' << "window_s=" << detail::num(d.window_s) << '\n';
  os << "nu,label,hA_deg,qA_deg,hB_deg,qB_deg,RA,dRA,RB,dRB,Rc,dRc\n";
  for (const auto& r : d.rows)
    os << r.nu << ',' << r.label << ',' << detail::num(r.a.h_deg) << ',' << detail::num(r.a.q_deg) << ','
       << detail::num(r.b.h_deg) << ',' << detail::num(r.b.q_deg) << ',' << detail::num(r.singles_a) << ','
       << detail::num(r.d_singles_a) << ',' << detail::num(r.singles_b) << ',' << detail::num(r.d_singles_b) << ','
       << detail::num(r.coincidences) << ',' << detail::num(r.d_coincidences) << '\n';
}

}  // namespace qtomo::io
