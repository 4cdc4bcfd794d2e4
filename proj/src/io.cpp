#include "rsmv/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace rsmv {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Strict decimal parse: the whole field must be consumed.
bool parse_number(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

double require_number(const std::string& s, const std::string& what) {
  double v = 0.0;
  if (!parse_number(s, v)) throw std::invalid_argument(what + ": cannot parse '" + s + "' as a number");
  return v;
}

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_int(long long v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

ReturnsTable parse_returns_csv(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 0;
  ReturnsTable t;
  bool have_header = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (!have_header) {
      for (const auto& f : fields) {
        if (f.empty()) throw std::invalid_argument(source + ": line " + std::to_string(line_no) + ": empty asset id");
        t.asset_ids.push_back(f);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != t.asset_ids.size())
      throw std::invalid_argument(source + ": line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(t.asset_ids.size()) + " fields, found " +
                                  std::to_string(fields.size()));
    std::vector<double> row(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!parse_number(fields[j], row[j]) || !std::isfinite(row[j]))
        throw std::invalid_argument(source + ": line " + std::to_string(line_no) + ", column '" +
                                    t.asset_ids[j] + "': invalid number '" + fields[j] + "'");
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) throw std::invalid_argument(source + ": empty returns file");
  t.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.asset_ids.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      t.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  t.validate();
  return t;
}

ReturnsTable read_returns_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open returns file '" + path + "'");
  return parse_returns_csv(in, path);
}

MarketModel parse_market_json(const std::string& text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(source + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("mean") || !j.contains("cov"))
    throw std::invalid_argument(source + ": market JSON needs \"mean\" and \"cov\"");
  const Json& jm = j["mean"];
  const Json& jc = j["cov"];
  if (!jm.is_array() || jm.empty()) throw std::invalid_argument(source + ": \"mean\" must be a nonempty array");
  const auto n = static_cast<Eigen::Index>(jm.size());
  Vector mean(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!jm[i].is_number()) throw std::invalid_argument(source + ": mean[" + std::to_string(i) + "] is not a number");
    mean(i) = jm[i].get<double>();
  }
  if (!jc.is_array() || static_cast<Eigen::Index>(jc.size()) != n)
    throw std::invalid_argument(source + ": \"cov\" must have " + std::to_string(n) + " rows");
  Matrix cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = jc[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw std::invalid_argument(source + ": cov row " + std::to_string(i) + " must have " + std::to_string(n) +
                                  " entries");
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!row[k].is_number())
        throw std::invalid_argument(source + ": cov[" + std::to_string(i) + "][" + std::to_string(k) +
                                    "] is not a number");
      cov(i, k) = row[k].get<double>();
    }
  }
  return MarketModel::from_moments(std::move(mean), std::move(cov));
}

MarketModel read_market_json(const std::string& path) { return parse_market_json(read_text_file(path), path); }

Json market_to_json(const MarketModel& m) {
  Json j;
  j["mean"] = vector_json(m.mean());
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.n(); ++i) rows.push_back(vector_json(m.cov().row(i).transpose()));
  j["cov"] = rows;
  return j;
}

Vector read_vector_file(const std::string& path) {
  const std::string text = read_text_file(path);
  const std::string body = trim(text);
  std::vector<double> vals;
  if (!body.empty() && body.front() == '[') {
    Json j;
    try {
      j = Json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument(path + ": " + e.what());
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number()) throw std::invalid_argument(path + ": entry " + std::to_string(i) + " is not a number");
      vals.push_back(j[i].get<double>());
    }
  } else {
    std::string token;
    std::size_t idx = 0;
    for (char c : body + "\n") {
      if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        if (!token.empty()) vals.push_back(require_number(token, path + ": entry " + std::to_string(idx++)));
        token.clear();
      } else {
        token.push_back(c);
      }
    }
  }
  if (vals.empty()) throw std::invalid_argument(path + ": no values");
  return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::vector<double> parse_grid(const std::string& spec_in) {
  const std::string spec = trim(spec_in);
  if (spec.empty()) return {};
  std::vector<double> out;
  if (spec.rfind("log:", 0) == 0) {
    const auto parts = split(std::string_view(spec).substr(4), ':');
    if (parts.size() != 3) throw std::invalid_argument("log grid must be 'log:a:b:count', got '" + spec + "'");
    const double a = require_number(parts[0], "grid start");
    const double b = require_number(parts[1], "grid end");
    const double cnt = require_number(parts[2], "grid count");
    if (!(a > 0.0 && b > 0.0) || cnt < 1 || cnt != std::floor(cnt))
      throw std::invalid_argument("log grid needs positive bounds and an integer count");
    const int k = static_cast<int>(cnt);
    for (int i = 0; i < k; ++i) {
      const double f = k == 1 ? 0.0 : static_cast<double>(i) / (k - 1);
      out.push_back(std::pow(10.0, std::log10(a) + f * (std::log10(b) - std::log10(a))));
    }
    return out;
  }
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw std::invalid_argument("grid must be 'a:b:step', got '" + spec + "'");
    const double a = require_number(parts[0], "grid start");
    const double b = require_number(parts[1], "grid end");
    const double step = require_number(parts[2], "grid step");
    if (!std::isfinite(a) || !std::isfinite(b) || !(step > 0.0))
      throw std::invalid_argument("grid needs finite bounds and a positive step");
    const double span = (b - a) / step;
    if (span < -1e-9) throw std::invalid_argument("grid end must not precede its start");
    const auto count = static_cast<long long>(std::floor(span + 1e-9)) + 1;
    if (count > 10'000'000) throw std::invalid_argument("grid has too many points");
    for (long long i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
  }
  for (const auto& f : split(spec, ',')) {
    const double v = require_number(f, "grid value");
    if (!std::isfinite(v)) throw std::invalid_argument("grid values must be finite");
    out.push_back(v);
  }
  return out;
}

Json portfolio_to_json(const Portfolio& p) {
  Json j;
  j["label"] = std::string(to_string(p.label));
  j["weights"] = vector_json(p.weights);
  j["support"] = p.support();
  if (p.value) j["value"] = number_or_string(*p.value);
  return j;
}

Json report_to_json(const SolveReport& r, const DcProblem& p) {
  Json j;
  j["solver"] = r.solver;
  j["init"] = r.init;
  j["status"] = std::string(to_string(r.status));
  j["message"] = r.message;
  j["kappa"] = p.kappa;
  j["epsilon"] = p.epsilon;
  j["phi"] = vector_json(p.phi);
  j["t"] = r.t;
  j["objective"] = number_or_string(r.rsmv_objective);
  j["objective_unscaled"] = number_or_string(2.0 * p.kappa * r.rsmv_objective);
  j["dc_objective"] = number_or_string(r.dc_objective);
  j["cardinality"] = r.cardinality;
  j["outer_iterations"] = r.outer_iterations;
  j["newton_iterations"] = r.newton_iterations_total;
  j["cg_iterations"] = r.cg_iterations_total;
  j["wall_time"] = r.wall_time;
  j["descent_violations"] = r.descent_violations;
  j["cg_rule_misses"] = r.cg_rule_misses;
  j["tail_ratios"] = r.tail_ratios;
  j["portfolio"] = portfolio_to_json(r.portfolio);
  Json trace = Json::array();
  for (const auto& e : r.trace) {
    Json row;
    row["f"] = e.f;
    row["rel_step"] = e.rel_step;
    row["sigma"] = e.sigma;
    row["descent_margin"] = e.descent_margin;
    row["newton_iterations"] = e.newton_iterations;
    row["budget_error"] = e.budget_error;
    trace.push_back(row);
  }
  j["trace"] = trace;
  return j;
}

std::string report_csv_header() { return "solver,status,objective,cardinality,iterations,time\n"; }

std::string report_csv_row(const SolveReport& r) {
  return r.solver + "," + std::string(to_string(r.status)) + "," + format_double(r.rsmv_objective) + "," +
         format_int(r.cardinality) + "," + format_int(r.outer_iterations) + "," + format_double(r.wall_time) + "\n";
}

std::string frontier_csv_header() { return "kind,kappa,epsilon,variance,return\n"; }

std::string frontier_csv_row(std::string_view kind, double epsilon, const FrontierPoint& pt) {
  return std::string(kind) + "," + format_double(pt.kappa) + "," + format_double(epsilon) + "," +
         format_double(pt.variance) + "," + format_double(pt.expected_return) + "\n";
}

std::string surface_csv(const std::vector<SurfaceCell>& cells) {
  std::string out = "epsilon,phi,cardinality,objective\n";
  for (const auto& c : cells)
    out += format_double(c.epsilon) + "," + format_double(c.phi) + "," + format_int(c.cardinality) + "," +
           format_double(c.objective) + "\n";
  return out;
}

Json surface_to_json(const std::vector<SurfaceCell>& cells, const std::vector<double>& epsilon_grid,
                     const std::vector<double>& phi_grid, std::string_view backend) {
  Json j;
  j["backend"] = std::string(backend);
  j["epsilon"] = epsilon_grid;
  j["phi"] = phi_grid;
  Json card = Json::array();
  Json obj = Json::array();
  for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
    Json crow = Json::array();
    Json orow = Json::array();
    for (std::size_t k = 0; k < phi_grid.size(); ++k) {
      const SurfaceCell& c = cells.at(i * phi_grid.size() + k);
      crow.push_back(c.cardinality);
      orow.push_back(number_or_string(c.objective));
    }
    card.push_back(crow);
    obj.push_back(orow);
  }
  j["cardinality"] = card;
  j["objective"] = obj;
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace rsmv
