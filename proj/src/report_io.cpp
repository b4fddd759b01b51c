#include "ptscat/report_io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "ptscat/errors.hpp"

namespace ptscat {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }
bool same(cplx a, cplx b) { return same(a.real(), b.real()) && same(a.imag(), b.imag()); }
bool same(const std::optional<double>& a, const std::optional<double>& b) {
  return a.has_value() == b.has_value() && (!a || same(*a, *b));
}

bool same(const ScatteringData& a, const ScatteringData& b) {
  return same(a.k, b.k) && same(a.t, b.t) && same(a.r_left, b.r_left) && same(a.r_right, b.r_right) &&
         same(a.d, b.d) && a.finite == b.finite && same(a.condition, b.condition);
}

std::string opt(const std::optional<double>& x) { return x ? format_double(*x) : std::string{}; }
std::string opt(const std::optional<int>& x) { return x ? std::to_string(*x) : std::string{}; }

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  for (auto& l : split(text, '\n')) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    if (!l.empty()) out.push_back(std::move(l));
  }
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan" || s == "-nan") return kNaN;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::logic_error&) {
    used = std::string::npos;
  }
  if (used != s.size()) throw Error(fmt::format("malformed number '{}'", s));
  return v;
}

std::optional<double> parse_opt_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

std::optional<int> parse_opt_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stoi(s);
}

Backend parse_backend(std::string_view s) {
  if (s == "stack") return Backend::stack;
  if (s == "ode") return Backend::ode;
  throw Error(fmt::format("unknown backend '{}'", s));
}

std::vector<std::string> data_columns() {
  return {"k",     "T_re",    "T_im",    "Rl_re",  "Rl_im", "Rr_re", "Rr_im", "T_abs2", "Rl_abs2",
          "Rr_abs2", "D_re", "D_im", "tau",    "lambda", "rho",   "m1",    "m2"};
}

void append_data(std::vector<std::string>& row, const ScatteringData& s, const PhaseRecord& ph) {
  for (double v : {s.k, s.t.real(), s.t.imag(), s.r_left.real(), s.r_left.imag(), s.r_right.real(),
                   s.r_right.imag(), std::norm(s.t), std::norm(s.r_left), std::norm(s.r_right), s.d.real(),
                   s.d.imag()})
    row.push_back(format_double(v));
  row.push_back(opt(ph.tau));
  row.push_back(opt(ph.lambda));
  row.push_back(opt(ph.rho));
  row.push_back(opt(ph.m1));
  row.push_back(opt(ph.m2));
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
double num_of(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }
json cjson(cplx z) { return json::array({num(z.real()), num(z.imag())}); }
cplx cplx_of(const json& j) { return {num_of(j.at(0)), num_of(j.at(1))}; }
template <class T>
json opt_json(const std::optional<T>& x) {
  return x ? json(*x) : json(nullptr);
}

json data_json(const ScatteringData& s) {
  return {{"k", num(s.k)},       {"t", cjson(s.t)}, {"r_left", cjson(s.r_left)}, {"r_right", cjson(s.r_right)},
          {"d", cjson(s.d)},     {"finite", s.finite}, {"condition", num(s.condition)}};
}

ScatteringData data_of(const json& j) {
  ScatteringData s;
  s.k = num_of(j.at("k"));
  s.t = cplx_of(j.at("t"));
  s.r_left = cplx_of(j.at("r_left"));
  s.r_right = cplx_of(j.at("r_right"));
  s.d = cplx_of(j.at("d"));
  s.finite = j.at("finite").get<bool>();
  s.condition = num_of(j.at("condition"));
  return s;
}

PhaseRecord phases_or_empty(const ScatteringData& s) { return s.finite ? phases(s) : PhaseRecord{}; }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // drop the sign of zero
  return fmt::format("{:.17g}", x);
}

std::vector<std::string> report_csv_header() {
  auto cols = data_columns();
  for (IdentityId id : kAllIdentities) cols.emplace_back(to_string(id));
  for (const char* c : {"pt_sign", "finite", "condition", "negk_T_re", "negk_T_im", "negk_Rl_re", "negk_Rl_im",
                        "negk_Rr_re", "negk_Rr_im", "negk_D_re", "negk_D_im", "negk_finite", "negk_condition",
                        "m1_residue", "m2_residue", "backend", "inapplicable"})
    cols.emplace_back(c);
  return cols;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  auto header = data_columns();
  header.emplace_back("finite");
  header.emplace_back("error");
  std::string out = join(header) + '\n';
  for (const auto& r : rows) {
    std::vector<std::string> cells;
    append_data(cells, r.data, r.ok() ? phases_or_empty(r.data) : PhaseRecord{});
    cells[0] = format_double(r.k);
    cells.push_back(r.data.finite ? "1" : "0");
    std::string err = r.error;
    for (char& c : err)
      if (c == ',' || c == '\n') c = ' ';
    cells.push_back(err);
    out += join(cells) + '\n';
  }
  return out;
}

json sweep_to_json(const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json row = data_json(r.data);
    row["k"] = r.k;
    row["t_abs2"] = num(std::norm(r.data.t));
    row["r_left_abs2"] = num(std::norm(r.data.r_left));
    row["r_right_abs2"] = num(std::norm(r.data.r_right));
    if (r.ok() && r.data.finite) {
      const PhaseRecord ph = phases(r.data);
      row["phases"] = {{"tau", opt_json(ph.tau)}, {"lambda", opt_json(ph.lambda)}, {"rho", opt_json(ph.rho)},
                       {"m1", opt_json(ph.m1)},   {"m2", opt_json(ph.m2)}};
    }
    row["error"] = r.error.empty() ? json(nullptr) : json(r.error);
    arr.push_back(std::move(row));
  }
  return {{"rows", std::move(arr)}};
}

std::string reports_to_csv(const std::vector<IdentityReport>& reports) {
  std::string out = join(report_csv_header()) + '\n';
  for (const auto& r : reports) {
    std::vector<std::string> cells;
    append_data(cells, r.at_k, r.phases);
    cells[0] = format_double(r.k);
    for (const auto& e : r.entries) cells.push_back(format_double(e.residual));
    cells.push_back(std::to_string(r.pt_sign));
    cells.push_back(r.at_k.finite ? "1" : "0");
    cells.push_back(format_double(r.at_k.condition));
    const auto& n = r.at_negk;
    for (double v : {n.t.real(), n.t.imag(), n.r_left.real(), n.r_left.imag(), n.r_right.real(), n.r_right.imag(),
                     n.d.real(), n.d.imag()})
      cells.push_back(format_double(v));
    cells.push_back(n.finite ? "1" : "0");
    cells.push_back(format_double(n.condition));
    cells.push_back(format_double(r.phases.m1_residue));
    cells.push_back(format_double(r.phases.m2_residue));
    cells.push_back(fmt::format("{}/{}", to_string(r.k_backend), to_string(r.negk_backend)));
    std::string inapplicable;
    for (const auto& e : r.entries) {
      if (e.applicable) continue;
      if (!inapplicable.empty()) inapplicable += ';';
      inapplicable += fmt::format("{}={}", to_string(e.id), to_string(e.reason));
    }
    cells.push_back(inapplicable);
    out += join(cells) + '\n';
  }
  return out;
}

std::vector<IdentityReport> reports_from_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw Error("report CSV: missing header");
  const auto header = report_csv_header();
  if (split(lines[0], ',') != header) throw Error("report CSV: unexpected header");

  std::vector<IdentityReport> out;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto c = split(lines[li], ',');
    if (c.size() != header.size()) throw Error(fmt::format("report CSV line {}: wrong column count", li + 1));
    std::size_t i = 0;
    auto next = [&]() -> const std::string& { return c[i++]; };
    auto next_d = [&] { return parse_double(next()); };
    auto next_c = [&] {
      const double re = next_d();
      return cplx{re, next_d()};
    };

    IdentityReport r;
    r.k = next_d();
    r.at_k.k = r.k;
    r.at_k.t = next_c();
    r.at_k.r_left = next_c();
    r.at_k.r_right = next_c();
    i += 3;  // moduli squared are derived
    r.at_k.d = next_c();
    r.phases.tau = parse_opt_double(next());
    r.phases.lambda = parse_opt_double(next());
    r.phases.rho = parse_opt_double(next());
    r.phases.m1 = parse_opt_int(next());
    r.phases.m2 = parse_opt_int(next());
    for (IdentityId id : kAllIdentities) r.entries.push_back({id, next_d(), true, Inapplicable::none});
    r.pt_sign = std::stoi(next());
    r.at_k.finite = next() == "1";
    r.at_k.condition = next_d();
    r.at_negk.k = -r.k;
    r.at_negk.t = next_c();
    r.at_negk.r_left = next_c();
    r.at_negk.r_right = next_c();
    r.at_negk.d = next_c();
    r.at_negk.finite = next() == "1";
    r.at_negk.condition = next_d();
    r.phases.m1_residue = next_d();
    r.phases.m2_residue = next_d();
    const auto backends = split(next(), '/');
    if (backends.size() != 2) throw Error(fmt::format("report CSV line {}: malformed backend", li + 1));
    r.k_backend = parse_backend(backends[0]);
    r.negk_backend = parse_backend(backends[1]);
    const std::string& inapplicable = next();
    if (!inapplicable.empty()) {
      for (const auto& item : split(inapplicable, ';')) {
        const auto kv = split(item, '=');
        const auto id = kv.size() == 2 ? identity_from_string(kv[0]) : std::nullopt;
        const auto reason = kv.size() == 2 ? inapplicable_from_string(kv[1]) : std::nullopt;
        if (!id || !reason) throw Error(fmt::format("report CSV line {}: malformed applicability '{}'", li + 1, item));
        for (auto& e : r.entries)
          if (e.id == *id) {
            e.applicable = false;
            e.reason = *reason;
          }
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

json reports_to_json(const std::vector<IdentityReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    json ids = json::array();
    for (const auto& e : r.entries)
      ids.push_back({{"id", to_string(e.id)},
                     {"residual", num(e.residual)},
                     {"applicable", e.applicable},
                     {"reason", to_string(e.reason)}});
    const auto& ph = r.phases;
    arr.push_back({{"k", r.k},
                   {"at_k", data_json(r.at_k)},
                   {"at_negk", data_json(r.at_negk)},
                   {"phases",
                    {{"tau", opt_json(ph.tau)},
                     {"lambda", opt_json(ph.lambda)},
                     {"rho", opt_json(ph.rho)},
                     {"m1", opt_json(ph.m1)},
                     {"m2", opt_json(ph.m2)},
                     {"m1_residue", ph.m1_residue},
                     {"m2_residue", ph.m2_residue}}},
                   {"pt_sign", r.pt_sign},
                   {"backend", {{"k", to_string(r.k_backend)}, {"negk", to_string(r.negk_backend)}}},
                   {"identities", std::move(ids)}});
  }
  return {{"reports", std::move(arr)}};
}

std::vector<IdentityReport> reports_from_json(const json& doc) {
  std::vector<IdentityReport> out;
  for (const auto& j : doc.at("reports")) {
    IdentityReport r;
    r.k = j.at("k").get<double>();
    r.at_k = data_of(j.at("at_k"));
    r.at_negk = data_of(j.at("at_negk"));
    const auto& ph = j.at("phases");
    auto od = [&](const char* key) -> std::optional<double> {
      return ph.at(key).is_null() ? std::nullopt : std::optional<double>(ph.at(key).get<double>());
    };
    auto oi = [&](const char* key) -> std::optional<int> {
      return ph.at(key).is_null() ? std::nullopt : std::optional<int>(ph.at(key).get<int>());
    };
    r.phases = {od("tau"), od("lambda"), od("rho"), oi("m1"), oi("m2"), ph.at("m1_residue").get<double>(),
                ph.at("m2_residue").get<double>()};
    r.pt_sign = j.at("pt_sign").get<int>();
    r.k_backend = parse_backend(j.at("backend").at("k").get<std::string>());
    r.negk_backend = parse_backend(j.at("backend").at("negk").get<std::string>());
    for (const auto& e : j.at("identities")) {
      const auto id = identity_from_string(e.at("id").get<std::string>());
      const auto reason = inapplicable_from_string(e.at("reason").get<std::string>());
      if (!id || !reason) throw Error("report JSON: unknown identity id or reason");
      r.entries.push_back({*id, num_of(e.at("residual")), e.at("applicable").get<bool>(), *reason});
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string scan_to_csv(const ScanResult& result) {
  std::string out =
      "kind,k_star,residual,bracket_lo,bracket_hi,near_boundary,abs_t,t_phase,opposite_reflection,dual_residual\n";
  for (const auto& f : result.features) {
    out += join({std::string(to_string(f.kind)), format_double(f.k_star), format_double(f.residual),
                 format_double(f.bracket_lo), format_double(f.bracket_hi), f.near_boundary ? "1" : "0",
                 format_double(f.abs_t), format_double(f.t_phase), format_double(f.opposite_reflection),
                 format_double(f.dual_residual)}) +
           '\n';
  }
  for (const auto& c : result.rejected)
    out += join({"rejected", format_double(c.k), format_double(c.value), "", "", "", "", "", "", ""}) + '\n';
  return out;
}

ScanResult scan_from_csv(std::string_view text, double k_min, double k_max, double grid_step) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw Error("scan CSV: missing header");
  ScanResult r{k_min, k_max, grid_step, {}, {}};
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto c = split(lines[li], ',');
    if (c.size() != 10) throw Error(fmt::format("scan CSV line {}: wrong column count", li + 1));
    if (c[0] == "rejected") {
      r.rejected.push_back({parse_double(c[1]), parse_double(c[2])});
      continue;
    }
    const auto kind = feature_kind_from_string(c[0]);
    if (!kind) throw Error(fmt::format("scan CSV line {}: unknown feature kind '{}'", li + 1, c[0]));
    r.features.push_back({*kind, parse_double(c[1]), parse_double(c[2]), parse_double(c[3]), parse_double(c[4]),
                          c[5] == "1", parse_double(c[6]), parse_double(c[7]), parse_double(c[8]),
                          parse_double(c[9])});
  }
  return r;
}

json scan_to_json(const ScanResult& result) {
  json features = json::array();
  for (const auto& f : result.features)
    features.push_back({{"kind", to_string(f.kind)},
                        {"k_star", f.k_star},
                        {"residual", num(f.residual)},
                        {"bracket", {f.bracket_lo, f.bracket_hi}},
                        {"near_boundary", f.near_boundary},
                        {"abs_t", num(f.abs_t)},
                        {"t_phase", num(f.t_phase)},
                        {"opposite_reflection", num(f.opposite_reflection)},
                        {"dual_residual", num(f.dual_residual)}});
  json rejected = json::array();
  for (const auto& c : result.rejected) rejected.push_back({{"k", c.k}, {"value", num(c.value)}});
  return {{"k_min", result.k_min},
          {"k_max", result.k_max},
          {"grid_step", result.grid_step},
          {"features", std::move(features)},
          {"rejected", std::move(rejected)}};
}

ScanResult scan_from_json(const json& doc) {
  ScanResult r{doc.at("k_min").get<double>(), doc.at("k_max").get<double>(), doc.at("grid_step").get<double>(), {}, {}};
  for (const auto& f : doc.at("features")) {
    const auto kind = feature_kind_from_string(f.at("kind").get<std::string>());
    if (!kind) throw Error("scan JSON: unknown feature kind");
    r.features.push_back({*kind, f.at("k_star").get<double>(), num_of(f.at("residual")),
                          f.at("bracket").at(0).get<double>(), f.at("bracket").at(1).get<double>(),
                          f.at("near_boundary").get<bool>(), num_of(f.at("abs_t")), num_of(f.at("t_phase")),
                          num_of(f.at("opposite_reflection")), num_of(f.at("dual_residual"))});
  }
  for (const auto& c : doc.at("rejected")) r.rejected.push_back({c.at("k").get<double>(), num_of(c.at("value"))});
  return r;
}

bool same_report(const IdentityReport& a, const IdentityReport& b) {
  if (!same(a.k, b.k) || !same(a.at_k, b.at_k) || !same(a.at_negk, b.at_negk)) return false;
  const auto& pa = a.phases;
  const auto& pb = b.phases;
  if (!same(pa.tau, pb.tau) || !same(pa.lambda, pb.lambda) || !same(pa.rho, pb.rho) || pa.m1 != pb.m1 ||
      pa.m2 != pb.m2 || !same(pa.m1_residue, pb.m1_residue) || !same(pa.m2_residue, pb.m2_residue))
    return false;
  if (a.pt_sign != b.pt_sign || a.k_backend != b.k_backend || a.negk_backend != b.negk_backend) return false;
  if (a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    const auto& x = a.entries[i];
    const auto& y = b.entries[i];
    if (x.id != y.id || !same(x.residual, y.residual) || x.applicable != y.applicable || x.reason != y.reason)
      return false;
  }
  return true;
}

}  // namespace ptscat
